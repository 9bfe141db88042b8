//! Jacobian curves, direct images under finite map germs, and discriminants.

mod hironaka;

pub use hironaka::{hironaka_factorization, HironakaFactor, Quotient};

use serde::Serialize;

use crate::algebra::bipoly::BiPoly;
use crate::algebra::rational::{gcd_u64, ratio};
use crate::algebra::series::{Series, TruncSeries};
use crate::error::{GermError, Result};
use crate::local::{intersection_multiplicity, IntersectionNumber};
use crate::newton::{newton_diagram_series, NewtonDiagram};
use crate::puiseux::{expand_until, implicitize, Branch, Expansion};

/// A finite map germ `(f, g)`.
#[derive(Clone, Debug)]
pub struct MapGerm {
    pub f: BiPoly,
    pub g: BiPoly,
}

impl MapGerm {
    /// Checks `f(0) = g(0) = 0` and that the zero at the origin is isolated.
    pub fn new(f: BiPoly, g: BiPoly) -> Result<MapGerm> {
        if f.is_zero() || g.is_zero() {
            return Err(GermError::ZeroInput("map components must be nonzero".into()));
        }
        if !f.constant_term().is_zero() || !g.constant_term().is_zero() {
            return Err(GermError::InvalidInput("map components must vanish at the origin".into()));
        }
        if intersection_multiplicity(&f, &g)? == IntersectionNumber::Infinite {
            return Err(GermError::InvalidInput(format!("{f} and {g} share a component: the zero is not isolated")));
        }
        Ok(MapGerm { f, g })
    }

    /// The map germ without the isolated-zero check.
    pub fn unchecked(f: BiPoly, g: BiPoly) -> MapGerm {
        MapGerm { f, g }
    }
}

/// `f_x g_y - f_y g_x`.
pub fn jacobian(phi: &MapGerm) -> Result<BiPoly> {
    let j = phi.f.dx().mul(&phi.g.dy()).sub(&phi.f.dy().mul(&phi.g.dx()));
    if j.is_zero() {
        return Err(GermError::InvalidInput("the Jacobian vanishes identically: f and g are dependent".into()));
    }
    Ok(j)
}

/// Where a source branch lands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ImageKind {
    Curve,
    /// Inside `u = 0`.
    UAxis,
    /// Inside `v = 0`.
    VAxis,
}

#[derive(Clone, Debug, Serialize)]
pub struct LedgerEntry {
    pub branch: String,
    pub multiplicity: u32,
    pub conjugacy: usize,
    /// `i_0(f, branch)` for one conjugate.
    pub i_f: IntersectionNumber,
    /// `i_0(g, branch)` for one conjugate.
    pub i_g: IntersectionNumber,
    /// Degree of the branch onto its image, read off the known terms of the image series.
    pub degree: u32,
    pub image: ImageKind,
}

impl LedgerEntry {
    fn weight(&self) -> u64 {
        self.multiplicity as u64 * self.conjugacy as u64
    }

    /// Contribution to the Newton diagram of the image: a segment, or an axis power.
    pub fn diagram(&self) -> NewtonDiagram {
        let w = self.weight() as u32;
        let pts = match (self.i_f, self.i_g) {
            (IntersectionNumber::Finite(m), IntersectionNumber::Finite(k)) => vec![(k as u32 * w, 0), (0, m as u32 * w)],
            (IntersectionNumber::Infinite, IntersectionNumber::Finite(k)) => vec![(k as u32 * w, 0)],
            (IntersectionNumber::Finite(m), IntersectionNumber::Infinite) => vec![(0, m as u32 * w)],
            _ => vec![(0, 0)],
        };
        NewtonDiagram::from_support(&pts).expect("nonempty")
    }
}

#[derive(Clone, Debug)]
pub struct DirectImage {
    /// Product of the monic-in-`v` branch factors and axis powers, in `(u, v)`.
    pub equation: TruncSeries,
    /// The equation scaled so that the coefficient at the first vertex of its diagram is 1.
    pub canonical: TruncSeries,
    pub ledger: Vec<LedgerEntry>,
    /// `true` when the image is empty (the germ does not pass through the origin).
    pub unit: bool,
}

impl DirectImage {
    /// Diagram assembled from the ledger, without looking at the equation.
    pub fn ledger_diagram(&self) -> NewtonDiagram {
        self.ledger.iter().fold(NewtonDiagram::empty(), |acc, e| acc.minkowski(&e.diagram()))
    }

    pub fn diagram(&self) -> Result<NewtonDiagram> {
        if self.unit {
            return Ok(NewtonDiagram::empty());
        }
        newton_diagram_series(&self.equation)
    }
}

/// `u(t) = c t^M w(t)` rewritten as `u = c s^M`, returning `(c, M, v(s))`.
fn reparametrize(u: &Series, v: &Series) -> Result<(crate::algebra::field::Fe, u32, Series)> {
    let m = u.valuation().expect("nonzero");
    let c = u.coeff(m);
    if m == 1 && u.coeffs().iter().skip(2).all(|a| a.is_zero()) && u.prec() >= v.prec() {
        return Ok((c, 1, v.clone()));
    }
    let unit = u.shift_down(m)?.scale(&c.inv()?);
    let s_of_t = unit.pow_rational(&ratio(1, m as i64))?.shift_up(1);
    let t_of_s = s_of_t.reverse()?;
    Ok((c, m as u32, v.compose(&t_of_s)?))
}

fn exponent_gcd(m: u32, s: &Series) -> u32 {
    s.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .fold(m as u64, |g, (k, _)| gcd_u64(g, k as u64)) as u32
}

enum Contribution {
    Factor(TruncSeries, LedgerEntry),
    NeedTerms,
}

fn push_branch(b: &Branch, e: &Expansion, phi: &MapGerm, prec: u32, bez: (usize, usize)) -> Result<Contribution> {
    let u = b.eval(&phi.f);
    let v = b.eval(&phi.g);
    let axis = |s: &Series, bound: usize| -> Option<bool> {
        match s.valuation() {
            Some(_) => Some(false),
            None if s.prec() > bound => Some(true),
            None => None,
        }
    };
    let (Some(u_axis), Some(v_axis)) = (axis(&u, bez.0), axis(&v, bez.1)) else {
        return Ok(Contribution::NeedTerms);
    };
    let field = e.base.clone();
    let weight = b.multiplicity * b.conjugacy as u32;
    let entry = |i_f, i_g, degree, image| LedgerEntry {
        branch: b.describe(),
        multiplicity: b.multiplicity,
        conjugacy: b.conjugacy,
        i_f,
        i_g,
        degree,
        image,
    };
    if u_axis && v_axis {
        return Err(GermError::InvalidInput("a branch lies on both f = 0 and g = 0".into()));
    }
    if u_axis || v_axis {
        let (s, kind) = if u_axis { (&v, ImageKind::UAxis) } else { (&u, ImageKind::VAxis) };
        let k = s.valuation().expect("nonzero") as u32;
        let d = exponent_gcd(k, s);
        let exps = if u_axis { (k * weight, 0) } else { (0, k * weight) };
        let body = BiPoly::monomial(field.one(), exps.0, exps.1);
        let (i_f, i_g) = if u_axis {
            (IntersectionNumber::Infinite, IntersectionNumber::Finite(k as u64))
        } else {
            (IntersectionNumber::Finite(k as u64), IntersectionNumber::Infinite)
        };
        return Ok(Contribution::Factor(TruncSeries::new(body, prec), entry(i_f, i_g, d, kind)));
    }
    let (c, m, vs) = reparametrize(&u, &v)?;
    let image = Branch {
        m,
        gamma: c,
        tail: vs,
        multiplicity: b.multiplicity,
        swapped: false,
        exact: false,
        field: b.field.clone(),
        conjugacy: b.conjugacy,
        separation: 0,
    };
    let imp = match implicitize(&image, &field, prec as usize) {
        Ok(i) => i,
        Err(GermError::Precision(_)) => return Ok(Contribution::NeedTerms),
        Err(err) => return Err(err),
    };
    let d = exponent_gcd(m, &image.tail);
    let factor = TruncSeries::new(imp.to_bipoly(), prec).pow(b.multiplicity);
    let i_f = IntersectionNumber::Finite(u.valuation().unwrap() as u64);
    let i_g = IntersectionNumber::Finite(v.valuation().unwrap() as u64);
    Ok(Contribution::Factor(TruncSeries::new(factor.body().clone(), prec), entry(i_f, i_g, d, ImageKind::Curve)))
}

/// Direct image of the curve `h = 0` under `phi`, as a series known to total degree `prec`.
pub fn direct_image(h: &BiPoly, phi: &MapGerm, prec: u32) -> Result<DirectImage> {
    if h.is_zero() {
        return Err(GermError::ZeroInput("direct image of the zero germ".into()));
    }
    let field = h.field().join(phi.f.field())?.join(phi.g.field())?;
    if !h.constant_term().is_zero() {
        let one = TruncSeries::new(BiPoly::one(&field), prec);
        return Ok(DirectImage { equation: one.clone(), canonical: one, ledger: Vec::new(), unit: true });
    }
    let dh = h.total_degree().unwrap_or(0) as usize;
    let bez = (dh * phi.f.total_degree().unwrap_or(0) as usize, dh * phi.g.total_degree().unwrap_or(0) as usize);
    let start = 2 * prec as usize + 8;
    let (equation, ledger) = expand_until(h, start, false, |e| {
        let mut eq = TruncSeries::new(BiPoly::one(&e.base), prec);
        let mut ledger = Vec::new();
        for b in &e.branches {
            match push_branch(b, e, phi, prec, bez)? {
                Contribution::Factor(f, entry) => {
                    eq = TruncSeries::new(eq.mul(&f).body().clone(), prec);
                    ledger.push(entry);
                }
                Contribution::NeedTerms => return Ok(None),
            }
        }
        Ok(Some((eq, ledger)))
    })?;
    let canonical = canonicalize(&equation)?;
    Ok(DirectImage { equation, canonical, ledger, unit: false })
}

/// Scales so that the coefficient at the first vertex of the diagram is 1.
pub fn canonicalize(d: &TruncSeries) -> Result<TruncSeries> {
    let diag = newton_diagram_series(d)?;
    let v = diag.vertices[0];
    let c = d.body().coeff(v.0, v.1);
    Ok(TruncSeries::new(d.body().scale(&c.inv()?), d.prec()))
}

/// Initial precision for the discriminant and the intersection numbers it is validated against.
fn anchors(phi: &MapGerm, j: &BiPoly) -> Result<(IntersectionNumber, IntersectionNumber)> {
    Ok((intersection_multiplicity(&phi.f, j)?, intersection_multiplicity(&phi.g, j)?))
}

/// Largest factor by which the discriminant precision is raised before giving up.
pub const PRECISION_GROWTH_CAP: u32 = 8;

/// The discriminant: the direct image of the Jacobian curve, checked against the projection
/// formula `i_0(u, D) = i_0(f, J)` and `i_0(v, D) = i_0(g, J)`.
pub fn discriminant(phi: &MapGerm) -> Result<DirectImage> {
    discriminant_at_least(phi, 0)
}

/// [`discriminant`] with the starting precision raised to at least `min_prec`.
pub fn discriminant_at_least(phi: &MapGerm, min_prec: u32) -> Result<DirectImage> {
    let j = jacobian(phi)?;
    if !j.constant_term().is_zero() {
        return direct_image(&j, phi, min_prec.max(1));
    }
    let (a, b) = anchors(phi, &j)?;
    let fin = |n: IntersectionNumber| n.finite().unwrap_or(0) as u32;
    let base = fin(a) + fin(b) + 2 + if a == IntersectionNumber::Infinite || b == IntersectionNumber::Infinite { 8 } else { 0 };
    let initial = base.max(min_prec);
    let mut prec = initial;
    loop {
        let d = direct_image(&j, phi, prec)?;
        if validate(&d, a, b) {
            return Ok(d);
        }
        prec *= 2;
        if prec > PRECISION_GROWTH_CAP * initial {
            return Err(GermError::Precision(format!(
                "discriminant failed the projection-formula check up to precision {}",
                prec / 2
            )));
        }
    }
}

/// `ord_v D(0, v)` and `ord_u D(u, 0)` against the anchors.
fn validate(d: &DirectImage, a: IntersectionNumber, b: IntersectionNumber) -> bool {
    let body = d.equation.body();
    let on_v = body.terms().keys().filter(|e| e.0 == 0).map(|e| e.1).min();
    let on_u = body.terms().keys().filter(|e| e.1 == 0).map(|e| e.0).min();
    let check = |ord: Option<u32>, want: IntersectionNumber| match want {
        IntersectionNumber::Finite(n) => ord == Some(n as u32),
        IntersectionNumber::Infinite => ord.is_none(),
    };
    check(on_v, a) && check(on_u, b)
}

/// `Delta(D)`, compared against the diagram assembled from the branch ledger.
pub fn jacobian_newton_diagram(phi: &MapGerm) -> Result<NewtonDiagram> {
    let d = discriminant(phi)?;
    let a = d.diagram()?;
    let b = d.ledger_diagram();
    if a != b {
        return Err(GermError::Inconsistency(format!(
            "diagram of the discriminant {:?} differs from the ledger diagram {:?}",
            a.vertices, b.vertices
        )));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::ratio;

    fn p(t: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_int_terms(t)
    }

    fn map(f: BiPoly, g: BiPoly) -> MapGerm {
        MapGerm::new(f, g).unwrap()
    }

    fn cusp() -> BiPoly {
        p(&[(0, 2, 1), (3, 0, -1)])
    }

    #[test]
    fn jacobian_goldens() {
        assert_eq!(jacobian(&map(BiPoly::x(), cusp())).unwrap(), p(&[(0, 1, 2)]));
        assert_eq!(jacobian(&map(BiPoly::y(), cusp())).unwrap(), p(&[(2, 0, 3)]));
        assert_eq!(jacobian(&map(BiPoly::x(), BiPoly::y())).unwrap(), p(&[(0, 0, 1)]));
    }

    #[test]
    fn direct_image_goldens() {
        let phi = map(BiPoly::x(), cusp());
        assert_eq!(direct_image(&BiPoly::y(), &phi, 6).unwrap().equation.body(), &p(&[(0, 1, 1), (3, 0, 1)]));
        let img = direct_image(&BiPoly::x(), &phi, 6).unwrap();
        assert_eq!(img.equation.body(), &p(&[(2, 0, 1)]));
        assert_eq!(img.ledger[0].degree, 2);
        let phi = map(BiPoly::x(), p(&[(0, 2, 1)]));
        assert_eq!(direct_image(&p(&[(2, 0, 1)]), &phi, 6).unwrap().equation.body(), &p(&[(4, 0, 1)]));
    }

    #[test]
    fn discriminant_goldens() {
        assert_eq!(discriminant(&map(BiPoly::x(), cusp())).unwrap().equation.body(), &p(&[(0, 1, 1), (3, 0, 1)]));
        let d = discriminant(&map(BiPoly::y(), cusp())).unwrap();
        assert_eq!(d.equation.body(), &p(&[(0, 1, 1), (2, 0, -1)]).pow(2).truncate(d.equation.prec()));
        assert_eq!(discriminant(&map(BiPoly::x(), p(&[(0, 2, 1)]))).unwrap().equation.body(), &p(&[(0, 1, 1)]));
        // (x, y(y - x)): D = v + u^2/4
        let d = discriminant(&map(BiPoly::x(), p(&[(0, 2, 1), (1, 1, -1)]))).unwrap();
        let want = BiPoly::from_rational_terms(&[(0, 1, ratio(1, 1)), (2, 0, ratio(1, 4))]);
        assert_eq!(d.equation.body(), &want);
        assert!(discriminant(&map(BiPoly::x(), BiPoly::y())).unwrap().unit);
    }

    #[test]
    fn jacobian_newton_diagram_goldens() {
        assert_eq!(jacobian_newton_diagram(&map(BiPoly::x(), cusp())).unwrap().vertices, vec![(0, 1), (3, 0)]);
        assert_eq!(jacobian_newton_diagram(&map(BiPoly::y(), cusp())).unwrap().vertices, vec![(0, 2), (4, 0)]);
        assert!(jacobian_newton_diagram(&map(BiPoly::x(), BiPoly::y())).unwrap().is_empty());
    }
}
