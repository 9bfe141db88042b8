use std::process::{Command, Output};

use germ_cli::ReportDocument;
use serde_json::Value;

fn germ(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_germ"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> ReportDocument {
    let mut a = vec!["--json"];
    a.extend_from_slice(args);
    let out = germ(&a);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: ReportDocument = serde_json::from_slice(&out.stdout).expect("report");
    let again: ReportDocument =
        serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(doc, again);
    doc
}

#[test]
fn diagram_schema() {
    let d = json(&["diagram", "y^2 - x^3"]);
    assert_eq!(d.command, "diagram");
    assert_eq!(d.result["vertices"], serde_json::json!([[0, 2], [3, 0]]));
    assert_eq!(
        d.result["compact_edges"][0]["from"],
        serde_json::json!([0, 2])
    );
    assert_eq!(d.result["compact_edges"][0]["inclination"], "3/2");
    assert_eq!(
        d.result["axis_exponents"],
        serde_json::json!({"u": 0, "v": 0})
    );
    let d = json(&["diagram", "x*y"]);
    assert_eq!(d.result["vertices"], serde_json::json!([[1, 1]]));
    assert_eq!(d.result["compact_edges"], serde_json::json!([]));
}

#[test]
fn svg_written() {
    let dir = std::env::temp_dir().join(format!("germ-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cusp.svg");
    let out = germ(&["diagram", "y^2 - x^3", "--svg", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("polyline"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    let out = germ(&["initial", "x^(-1)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1, column 3"));
    assert_eq!(germ(&["milnor", "x + w"]).status.code(), Some(2));
    assert_eq!(germ(&["milnor", "0"]).status.code(), Some(2));
    assert_eq!(germ(&["inw", "-w", "0,1", "x"]).status.code(), Some(2));
    let out = germ(&["--max-tower-degree", "1", "puiseux", "y^2 - 2*x^2"]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = germ(&["--json", "milnor", "x + w"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "parse");
}

#[test]
fn local_invariants() {
    assert_eq!(
        json(&["intersect", "y^2 - x^3", "y^2 + x^3"]).result["i0"],
        6
    );
    assert_eq!(
        json(&["--seed", "3", "intersect", "y^2 - x^3", "y"]).result["i0"],
        3
    );
    assert_eq!(json(&["milnor", "y^3 - x^4"]).result["mu"], 6);
    let s = json(&["semigroup", "y^3 - x^4"]);
    assert_eq!(
        s.result["branches"][0]["semigroup"],
        serde_json::json!([3, 4])
    );
    let c = json(&["casas-check", "x", "y^2 - x^3", "v^2 - u^3"]);
    assert_eq!(c.result["holds"], true);
    let e = json(&["equisingular", "y^2 - x^3; x", "y^2 - x^3 + x^2*y; x"]);
    assert_eq!(e.result["equisingular"], true);
}

#[test]
fn discriminants() {
    let d = json(&["discriminant", "x", "y^3 + x*y"]);
    assert_eq!(d.result["initial"], "v^2 + (4/27)*u^3");
    let d = json(&["discriminant", "x", "y^3 + x*y", "--trunc", "3"]);
    assert_eq!(d.result["equation"], "v^2");
    let j = json(&["jacobian", "x", "y^3 + x*y"]);
    assert_eq!(j.result["jacobian"], "x + 3*y^2");
    let h = json(&["hironaka", "y", "x", "y^2 - x^3"]);
    assert_eq!(h.result[0]["quotient"], "3");
    let jd = json(&["jacobian-diagram", "x", "y^2 - x^3"]);
    assert_eq!(jd.result["vertices"], serde_json::json!([[0, 1], [3, 0]]));
}

#[test]
fn pencils_and_theorems() {
    let a = json(&["atypical", "x", "y*(y - x)", "-w", "1,2"]);
    assert_eq!(a.result["values"][0]["t"]["exact"], "-1/4");
    assert_eq!(a.result["values"][0]["nu"], 1);
    assert_eq!(
        json(&["atypical", "x", "y", "-w", "1,2"]).result["values"],
        serde_json::json!([])
    );
    let n = json(&[
        "nu-from-milnor",
        "x",
        "y*(y - x)",
        "-w",
        "1,2",
        "-t",
        "-1/4",
    ]);
    assert_eq!(n.result["nu"], 1);
    let r = json(&[
        "verify-main",
        "x",
        "y^2 - x^3",
        "--u1",
        "1 + y",
        "--u2",
        "1 + x",
    ]);
    assert_ne!(r.result["verdict"], "fails");
    let r = json(&["key-lemma", "x", "y^2 - x^3", "-N", "3"]);
    assert_ne!(r.result["verdict"], "fails");
    let r = json(&[
        "rescaling-check",
        "x",
        "y^2 - x^3",
        "--u1",
        "2",
        "--u2",
        "3",
    ]);
    assert_ne!(r.result["verdict"], "fails");
    assert_eq!(
        germ(&["verify-main", "x", "y", "--u1", "2", "--u2", "1"])
            .status
            .code(),
        Some(2)
    );
    let r = json(&["tc3-check", "y^2 - x^3", "x", "x + y"]);
    assert_ne!(r.result["verdict"], "fails");
}

#[test]
fn newton_commands() {
    assert_eq!(
        json(&["initial", "y^2 - x^3 + x^2*y^2"]).result["initial"],
        "y^2 - x^3"
    );
    assert_eq!(
        json(&["inw", "-w", "2,3", "y^2 - x^3 + x^4"]).result["initial_form"],
        "y^2 - x^3"
    );
    let f = json(&["factor-edge", "-w", "1,2", "v^2 - 3*u^2*v + 2*u^4"]);
    assert_eq!(f.result["n"], 2);
    let r = json(&["rescale-equal", "v + u^3", "3*v + 8*u^3"]);
    assert_eq!(r.result["solvable"], true);
    let p = json(&["puiseux", "--terms", "4", "y^2 - x^3"]);
    assert_eq!(p.result["branch_count"], 1);
}
