//! Newton diagrams, initial Newton polynomials, weighted initial forms, edge factorisation
//! and rescaling equivalence.

mod rescale;

pub use rescale::{rescale_equal, LatticeRelation, RescaleWitness};

use serde::Serialize;

use crate::algebra::bipoly::{BiPoly, Exp};
use crate::algebra::factor::{factor, root_of};
use crate::algebra::field::{Fe, Field};
use crate::algebra::rational::{gcd_u64, Rational};
use crate::algebra::series::TruncSeries;
use crate::algebra::upoly::Poly;
use crate::error::{GermError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: Exp,
    pub to: Exp,
    /// Horizontal span over vertical span, in lowest terms.
    #[serde(serialize_with = "ser_rational")]
    pub inclination: Rational,
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::algebra::rational::fmt_rational(q))
}

impl Edge {
    /// Lattice points on the edge, endpoints included, left to right.
    pub fn lattice_points(&self) -> Vec<Exp> {
        let di = self.to.0 - self.from.0;
        let dj = self.from.1 - self.to.1;
        let g = gcd_u64(di as u64, dj as u64) as u32;
        (0..=g).map(|s| (self.from.0 + s * di / g, self.from.1 - s * dj / g)).collect()
    }

    pub fn contains(&self, e: Exp) -> bool {
        let (i1, j1) = self.from;
        let (i2, j2) = self.to;
        if e.0 < i1 || e.0 > i2 || e.1 < j2 || e.1 > j1 {
            return false;
        }
        // (e - from) parallel to (to - from)
        (e.0 - i1) as i64 * (j1 as i64 - j2 as i64) == (j1 as i64 - e.1 as i64) * (i2 - i1) as i64
    }

    /// Weight `(k, l)` whose level lines are parallel to this edge: `k / l` equals the inclination.
    pub fn weight(&self) -> (u32, u32) {
        let di = self.to.0 - self.from.0;
        let dj = self.from.1 - self.to.1;
        let g = gcd_u64(di as u64, dj as u64) as u32;
        // a k + b l constant along the edge: di k = dj l
        (dj / g, di / g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonDiagram {
    /// Vertices by increasing first coordinate.
    pub vertices: Vec<Exp>,
    pub compact_edges: Vec<Edge>,
    /// Exponents of the largest powers of `x` (first) and `y` (second) dividing the germ.
    pub axis_exponents: (u32, u32),
}

impl NewtonDiagram {
    /// Diagram of the unit germ: no vertex at all.
    pub fn empty() -> NewtonDiagram {
        NewtonDiagram { vertices: Vec::new(), compact_edges: Vec::new(), axis_exponents: (0, 0) }
    }

    pub fn from_support(points: &[Exp]) -> Option<NewtonDiagram> {
        let start = *points.iter().min_by_key(|(i, j)| (*i, *j))?;
        let mut vertices = vec![start];
        let mut edges = Vec::new();
        let mut cur = start;
        loop {
            // next vertex: smallest inclination, ties by furthest point
            let mut best: Option<(Rational, Exp)> = None;
            for &(i, j) in points {
                if j >= cur.1 || i < cur.0 {
                    continue;
                }
                let incl = Rational::new(((i - cur.0) as i64).into(), ((cur.1 - j) as i64).into());
                let better = match &best {
                    None => true,
                    Some((b, e)) => incl < *b || (incl == *b && j < e.1),
                };
                if better {
                    best = Some((incl, (i, j)));
                }
            }
            match best {
                None => break,
                Some((incl, e)) => {
                    edges.push(Edge { from: cur, to: e, inclination: incl });
                    vertices.push(e);
                    cur = e;
                }
            }
        }
        let a = points.iter().map(|e| e.0).min().unwrap_or(0);
        let b = points.iter().map(|e| e.1).min().unwrap_or(0);
        Some(NewtonDiagram { vertices, compact_edges: edges, axis_exponents: (a, b) })
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Whether `e` lies on the union of compact edges (or is the single vertex).
    pub fn on_boundary(&self, e: Exp) -> bool {
        if self.compact_edges.is_empty() {
            return self.vertices.first() == Some(&e);
        }
        self.compact_edges.iter().any(|ed| ed.contains(e))
    }

    /// Minkowski sum of two diagrams, by merging edges in order of inclination.
    pub fn minkowski(&self, o: &NewtonDiagram) -> NewtonDiagram {
        if self.is_empty() {
            return o.clone();
        }
        if o.is_empty() {
            return self.clone();
        }
        let s = (self.vertices[0].0 + o.vertices[0].0, self.vertices[0].1 + o.vertices[0].1);
        let mut steps: Vec<(Rational, u32, u32)> = self
            .compact_edges
            .iter()
            .chain(&o.compact_edges)
            .map(|e| (e.inclination.clone(), e.to.0 - e.from.0, e.from.1 - e.to.1))
            .collect();
        steps.sort();
        let mut pts = vec![s];
        let mut cur = s;
        for (_, di, dj) in steps {
            cur = (cur.0 + di, cur.1 - dj);
            pts.push(cur);
        }
        let mut d = NewtonDiagram::from_support(&pts).expect("nonempty");
        d.axis_exponents = (self.axis_exponents.0 + o.axis_exponents.0, self.axis_exponents.1 + o.axis_exponents.1);
        d
    }
}

pub fn newton_diagram(f: &BiPoly) -> Result<NewtonDiagram> {
    if f.is_zero() {
        return Err(GermError::ZeroInput("Newton diagram of the zero germ".into()));
    }
    Ok(NewtonDiagram::from_support(&f.support()).expect("nonzero"))
}

/// Diagram of a truncated series; every vertex and every lattice point of the compact edges
/// must have total degree below the precision.
pub fn newton_diagram_series(f: &TruncSeries) -> Result<NewtonDiagram> {
    let d = newton_diagram(f.body()).map_err(|_| {
        GermError::Precision(format!("series vanishes to precision {}", f.prec()))
    })?;
    certify(&d, f.prec())?;
    Ok(d)
}

fn certify(d: &NewtonDiagram, prec: u32) -> Result<()> {
    for v in &d.vertices {
        if v.0 + v.1 >= prec {
            return Err(GermError::Precision(format!("vertex {v:?} not below precision {prec}")));
        }
    }
    for e in &d.compact_edges {
        for p in e.lattice_points() {
            if p.0 + p.1 >= prec {
                return Err(GermError::Precision(format!("edge point {p:?} not below precision {prec}")));
            }
        }
    }
    Ok(())
}

/// Restriction of `f` to the union of compact edges of its diagram.
pub fn initial_newton_polynomial(f: &BiPoly) -> Result<BiPoly> {
    let d = newton_diagram(f)?;
    Ok(f.filter(|i, j| d.on_boundary((i, j))))
}

pub fn initial_newton_polynomial_series(f: &TruncSeries) -> Result<BiPoly> {
    let d = newton_diagram_series(f)?;
    Ok(f.body().filter(|i, j| d.on_boundary((i, j))))
}

pub fn w_degree(e: Exp, w: (u32, u32)) -> u64 {
    e.0 as u64 * w.0 as u64 + e.1 as u64 * w.1 as u64
}

/// Lowest `w`-degree part, `deg_w(u^a v^b) = a k + b l`.
pub fn weighted_initial_form(f: &BiPoly, w: (u32, u32)) -> Result<BiPoly> {
    check_weight(w)?;
    let m = f
        .support()
        .iter()
        .map(|e| w_degree(*e, w))
        .min()
        .ok_or_else(|| GermError::ZeroInput("weighted initial form of zero".into()))?;
    Ok(f.filter(|i, j| w_degree((i, j), w) == m))
}

/// Weighted initial form of a truncated series; the minimal degree must be certified, i.e.
/// smaller than the least `w`-degree any unknown term could have.
pub fn weighted_initial_form_series(f: &TruncSeries, w: (u32, u32)) -> Result<BiPoly> {
    let p = weighted_initial_form(f.body(), w)
        .map_err(|_| GermError::Precision(format!("series vanishes to precision {}", f.prec())))?;
    let m = w_degree(*p.support().first().expect("nonzero"), w);
    let unknown = f.prec() as u64 * w.0.min(w.1) as u64;
    if m >= unknown {
        return Err(GermError::Precision(format!(
            "minimal weighted degree {m} not certified below {unknown}"
        )));
    }
    Ok(p)
}

fn check_weight(w: (u32, u32)) -> Result<()> {
    if w.0 == 0 || w.1 == 0 || gcd_u64(w.0 as u64, w.1 as u64) != 1 {
        return Err(GermError::InvalidInput(format!("weight ({}, {}) must be coprime positive integers", w.0, w.1)));
    }
    Ok(())
}

/// One class of roots of the edge polynomial: the roots of the irreducible `minpoly`, with a
/// representative `t` in a field containing one of them.
#[derive(Clone, Debug)]
pub struct EdgeRoot {
    pub minpoly: Poly,
    pub t: Fe,
    pub nu: usize,
}

impl EdgeRoot {
    /// Number of distinct roots represented.
    pub fn count(&self) -> usize {
        self.minpoly.degree().unwrap_or(0)
    }
}

/// `P = C u^{nu0} v^{nu_last} prod_i (v^k - t_i u^l)^{nu_i}`; conjugate `t_i` are grouped
/// by their minimal polynomial over the coefficient field of `P`.
#[derive(Clone, Debug)]
pub struct QuasiHomogFactorization {
    pub constant: Fe,
    pub nu0: u32,
    pub nu_last: u32,
    pub roots: Vec<EdgeRoot>,
    pub weight: (u32, u32),
}

impl QuasiHomogFactorization {
    /// Multiplies the factorisation back out (over the coefficient field of the minimal
    /// polynomials, so the result is exact).
    pub fn reconstruct(&self) -> BiPoly {
        let (k, l) = self.weight;
        let mut acc = BiPoly::monomial(self.constant.clone(), self.nu0, self.nu_last);
        for r in &self.roots {
            // psi(v^k / u^l) u^{l deg psi}
            let d = r.count() as u32;
            let mut f = BiPoly::zero(r.minpoly.field());
            for (s, c) in r.minpoly.coeffs().iter().enumerate() {
                f.add_term((l * (d - s as u32), k * s as u32), c.clone());
            }
            acc = acc.mul(&f.pow(r.nu as u32));
        }
        acc
    }

    /// Total number of distinct roots.
    pub fn n(&self) -> usize {
        self.roots.iter().map(EdgeRoot::count).sum()
    }
}

/// Factorisation of a `w`-quasi-homogeneous polynomial into binomials `v^k - t u^l`.
pub fn factor_edge(p: &BiPoly, w: (u32, u32)) -> Result<QuasiHomogFactorization> {
    check_weight(w)?;
    if p.is_zero() {
        return Err(GermError::ZeroInput("factor_edge of zero".into()));
    }
    let k = w.0;
    let degs: Vec<u64> = p.support().iter().map(|e| w_degree(*e, w)).collect();
    if degs.iter().any(|d| *d != degs[0]) {
        return Err(GermError::InvalidInput("polynomial is not quasi-homogeneous for the weight".into()));
    }
    let a0 = p.x_valuation().unwrap();
    let b0 = p.y_valuation().unwrap();
    let q = p.div_monomial(a0, b0);
    // q = sum_s c_s u^{l (S - s)} v^{k s}
    let s_max = q.degree_y().unwrap() / k;
    let field = p.field().clone();
    let mut phi = vec![field.zero(); s_max as usize + 1];
    for ((_, j), c) in q.terms() {
        phi[(*j / k) as usize] = c.clone();
    }
    let phi = Poly::new(&field, phi)?;
    let constant = phi.lc();
    let mut roots = Vec::new();
    for (psi, nu) in factor(&phi)? {
        let (_, t) = root_of(&psi, None)?;
        roots.push(EdgeRoot { minpoly: psi, t, nu });
    }
    Ok(QuasiHomogFactorization { constant, nu0: a0, nu_last: b0, roots, weight: w })
}

/// `true` when the two fields allow comparing `a` and `b`.
pub fn same_field(a: &Field, b: &Field) -> bool {
    a.join(b).is_ok()
}
