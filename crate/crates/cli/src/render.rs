//! Newton diagram output: JSON value, ASCII art and SVG.

use std::fmt::Write;

use germcore::algebra::rational::fmt_rational;
use germcore::newton::NewtonDiagram;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Svg,
    Ascii,
}

pub fn diagram_json(d: &NewtonDiagram) -> Value {
    json!({
        "vertices": d.vertices.iter().map(|&(i, j)| json!([i, j])).collect::<Vec<_>>(),
        "compact_edges": d.compact_edges.iter().map(|e| json!({
            "from": [e.from.0, e.from.1],
            "to": [e.to.0, e.to.1],
            "inclination": fmt_rational(&e.inclination),
        })).collect::<Vec<_>>(),
        "axis_exponents": {"u": d.axis_exponents.0, "v": d.axis_exponents.1},
    })
}

/// Vertex the vertical ray starts from and vertex the horizontal ray starts from. The unit
/// diagram has both rays at the origin.
fn ray_origins(d: &NewtonDiagram) -> ((u32, u32), (u32, u32)) {
    match (d.vertices.first(), d.vertices.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => ((0, 0), (0, 0)),
    }
}

/// Grid extent: one step beyond the largest vertex coordinate in each direction.
fn extent(d: &NewtonDiagram) -> (u32, u32) {
    let mi = d.vertices.iter().map(|v| v.0).max().unwrap_or(0);
    let mj = d.vertices.iter().map(|v| v.1).max().unwrap_or(0);
    (mi + 1, mj + 1)
}

pub fn render_diagram(d: &NewtonDiagram, format: Format) -> Vec<u8> {
    match format {
        Format::Ascii => ascii(d).into_bytes(),
        Format::Svg => svg(d).into_bytes(),
    }
}

/// `o` vertex, `*` lattice point inside a compact edge, `|` and `-` the unbounded rays.
fn ascii(d: &NewtonDiagram) -> String {
    let (w, h) = extent(d);
    let (top, right) = ray_origins(d);
    let width = w.to_string().len().max(h.to_string().len());
    let mut out = String::new();
    for j in (0..=h).rev() {
        let _ = write!(out, "{j:>width$} ");
        for i in 0..=w {
            let c = if d.vertices.contains(&(i, j)) || (d.is_empty() && (i, j) == (0, 0)) {
                'o'
            } else if d.compact_edges.iter().any(|e| e.contains((i, j))) {
                '*'
            } else if i == top.0 && j > top.1 {
                '|'
            } else if j == right.1 && i > right.0 {
                '-'
            } else {
                '.'
            };
            out.push(c);
            if i < w {
                out.push(' ');
            }
        }
        out.push('\n');
    }
    let _ = write!(out, "{:>width$} ", "");
    for i in 0..=w {
        let s = i.to_string();
        out.push_str(&s);
        if i < w {
            out.push_str(&" ".repeat(2usize.saturating_sub(s.len()).max(1)));
        }
    }
    out.push('\n');
    out
}

const CELL: f64 = 40.0;
const MARGIN: f64 = 30.0;

fn svg(d: &NewtonDiagram) -> String {
    let (w, h) = extent(d);
    let (top, right) = ray_origins(d);
    let width = MARGIN * 2.0 + CELL * w as f64;
    let height = MARGIN * 2.0 + CELL * h as f64;
    let px = |i: u32| MARGIN + CELL * i as f64;
    let py = |j: u32| height - MARGIN - CELL * j as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(s, r##"<g stroke="#ddd" stroke-width="1">"##
    );
    for i in 0..=w {
        let _ = writeln!(
            s,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"##,
            px(i),
            py(0),
            px(i),
            py(h)
        );
    }
    for j in 0..=h {
        let _ = writeln!(
            s,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"##,
            px(0),
            py(j),
            px(w),
            py(j)
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r##"<g font-family="monospace" font-size="11" fill="#555">"##
    );
    for i in 0..=w {
        let _ = writeln!(
            s,
            r##"<text x="{}" y="{}" text-anchor="middle">{i}</text>"##,
            px(i),
            py(0) + 16.0
        );
    }
    for j in 0..=h {
        let _ = writeln!(
            s,
            r##"<text x="{}" y="{}" text-anchor="end">{j}</text>"##,
            px(0) - 8.0,
            py(j) + 4.0
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r##"<g stroke="#1f4e9c" stroke-width="2" fill="none">"##);
    if !d.compact_edges.is_empty() {
        let pts: Vec<String> = d
            .vertices
            .iter()
            .map(|&(i, j)| format!("{},{}", px(i), py(j)))
            .collect();
        let _ = writeln!(
            s,
            r##"<polyline class="compact" points="{}"/>"##,
            pts.join(" ")
        );
    }
    let _ = writeln!(
        s,
        r##"<line class="ray" x1="{0}" y1="{1}" x2="{0}" y2="{2}"/>"##,
        px(top.0),
        py(top.1),
        py(h)
    );
    let _ = writeln!(
        s,
        r##"<line class="ray" x1="{0}" y1="{1}" x2="{2}" y2="{1}"/>"##,
        px(right.0),
        py(right.1),
        px(w)
    );
    let _ = writeln!(s, "</g>");
    let verts: Vec<(u32, u32)> = if d.is_empty() {
        vec![(0, 0)]
    } else {
        d.vertices.clone()
    };
    for (i, j) in verts {
        let _ = writeln!(
            s,
            r##"<circle class="vertex" cx="{}" cy="{}" r="4" fill="#1f4e9c"/>"##,
            px(i),
            py(j)
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use germcore::algebra::BiPoly;
    use germcore::newton::newton_diagram;

    #[test]
    fn cusp() {
        let d = newton_diagram(&BiPoly::from_int_terms(&[(0, 2, 1), (3, 0, -1)])).unwrap();
        let v = diagram_json(&d);
        assert_eq!(v["vertices"], json!([[0, 2], [3, 0]]));
        assert_eq!(v["compact_edges"][0]["inclination"], "3/2");
        let a = String::from_utf8(render_diagram(&d, Format::Ascii)).unwrap();
        let rows: Vec<&str> = a.lines().collect();
        // rows are j = 3, 2, 1, 0 then the axis labels
        assert_eq!(rows[0], "3 | . . . .");
        assert_eq!(rows[1], "2 o . . . .");
        assert_eq!(rows[3], "0 . . . o -");
        let svg = String::from_utf8(render_diagram(&d, Format::Svg)).unwrap();
        assert_eq!(svg.matches("class=\"vertex\"").count(), 2);
        assert!(svg.contains("polyline"));
    }

    #[test]
    fn unit_and_monomial() {
        let a = String::from_utf8(render_diagram(&NewtonDiagram::empty(), Format::Ascii)).unwrap();
        assert!(a.lines().nth(1).unwrap().starts_with("0 o -"));
        let d = newton_diagram(&BiPoly::from_int_terms(&[(1, 1, 1)])).unwrap();
        assert!(d.compact_edges.is_empty());
        let svg = String::from_utf8(render_diagram(&d, Format::Svg)).unwrap();
        assert!(!svg.contains("polyline"));
        assert_eq!(svg.matches("class=\"ray\"").count(), 2);
    }
}
