//! Pencils `g^k - t f^l`, the multiplicities `nu_j` of their special members, and the
//! atypical values `t_j`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::algebra::bipoly::BiPoly;
use crate::algebra::factor::root_of;
use crate::algebra::field::{Fe, Field};
use crate::algebra::rational::{fmt_rational, rat, Rational};
use crate::algebra::upoly::{eval_q_at, rational_coeffs_to_string, Poly};
use crate::discriminant::{discriminant, discriminant_at_least, jacobian, DirectImage, MapGerm};
use crate::error::{GermError, Result};
use crate::local::{i0_trunc, intersection_multiplicity, milnor_number, IntersectionNumber};
use crate::newton::{factor_edge, weighted_initial_form, weighted_initial_form_series, QuasiHomogFactorization};
use crate::puiseux::expand_until;

/// Largest `N` tried before a pencil computation gives up.
pub const MAX_PENCIL_N: u32 = 24;

/// Largest precision the discriminant is raised to inside pencil computations.
const MAX_D_PRECISION: u32 = 1024;

fn lift(p: &BiPoly, field: &Field) -> Result<BiPoly> {
    p.lift_to(&p.field().join(field)?)
}

/// `(a^k - t b^l)^N - b^{l (N + 1)}`.
fn pencil(a: &BiPoly, b: &BiPoly, w: (u32, u32), t: &Fe, n: u32) -> Result<BiPoly> {
    let field = a.field().join(b.field())?.join(t.field())?;
    let (a, b) = (lift(a, &field)?, lift(b, &field)?);
    let bl = b.pow(w.1);
    let base = a.pow(w.0).sub(&bl.scale(&t.lift_to(&field)?));
    Ok(base.pow(n).sub(&bl.pow(n + 1)))
}

/// `h_t = (g^k - t f^l)^N - f^{l (N + 1)}` in the source.
pub fn source_pencil(f: &BiPoly, g: &BiPoly, w: (u32, u32), t: &Fe, n: u32) -> Result<BiPoly> {
    pencil(g, f, w, t, n)
}

/// `H_t = (v^k - t u^l)^N - u^{l (N + 1)}` in the target, written in `(x, y) = (u, v)`.
pub fn target_pencil(w: (u32, u32), t: &Fe, n: u32) -> Result<BiPoly> {
    pencil(&BiPoly::y(), &BiPoly::x(), w, t, n)
}

/// An algebraic number up to conjugacy: its monic minimal polynomial over `Q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AlgebraicValue {
    pub minpoly: Vec<Rational>,
}

impl AlgebraicValue {
    pub fn of(t: &Fe) -> AlgebraicValue {
        AlgebraicValue { minpoly: t.minpoly_q() }
    }

    pub fn rational(q: Rational) -> AlgebraicValue {
        AlgebraicValue { minpoly: vec![-q, rat(1)] }
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn as_rational(&self) -> Option<Rational> {
        (self.degree() == 1).then(|| -self.minpoly[0].clone())
    }

    /// A root in a field generated by it over `Q`.
    pub fn representative(&self) -> Result<Fe> {
        Ok(root_of(&Poly::from_rationals(&self.minpoly), None)?.1)
    }

    pub fn has_root(&self, t: &Fe) -> bool {
        eval_q_at(&self.minpoly, t).is_zero()
    }
}

impl fmt::Display for AlgebraicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(q) => write!(f, "{}", fmt_rational(&q)),
            None => write!(f, "roots of {}", rational_coeffs_to_string(&self.minpoly, "t")),
        }
    }
}

impl Serialize for AlgebraicValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A class of conjugate atypical values sharing one `nu`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct AtypicalValue {
    pub t: AlgebraicValue,
    pub nu: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NuResult {
    pub nu: u64,
    /// The difference of intersection numbers or Milnor numbers, `nu k l`.
    pub delta: u64,
    pub n: u32,
    pub t_ref: i64,
    /// Precision of the discriminant used, when one was used.
    pub precision: Option<u32>,
}

/// Smallest positive integer that is neither `t` nor a root of any of `minpolys`.
pub fn reference_t(minpolys: &[AlgebraicValue], t: &Fe) -> i64 {
    reference_from(minpolys, t, 1)
}

fn reference_from(minpolys: &[AlgebraicValue], t: &Fe, start: i64) -> i64 {
    (start..)
        .find(|&n| {
            let q = Field::rationals().from_int(n);
            t.as_rational() != Some(rat(n)) && !minpolys.iter().any(|m| m.has_root(&q))
        })
        .expect("finitely many roots")
}

fn edge_classes(fac: &QuasiHomogFactorization) -> Vec<AtypicalValue> {
    let mut out: Vec<AtypicalValue> = fac
        .roots
        .iter()
        .map(|r| match r.minpoly.as_rationals() {
            Some(q) => {
                let lc = q.last().unwrap().clone();
                AtypicalValue { t: AlgebraicValue { minpoly: q.iter().map(|c| c / &lc).collect() }, nu: r.nu as u64 }
            }
            None => AtypicalValue { t: AlgebraicValue::of(&r.t), nu: r.nu as u64 },
        })
        .collect();
    out.sort();
    out
}

/// Upper bound for every `nu_j`: the number of binomial factors of the edge polynomial.
fn nu_bound(fac: &QuasiHomogFactorization) -> u64 {
    fac.roots.iter().map(|r| (r.nu * r.count()) as u64).sum()
}

/// The `w`-initial form of the discriminant, raising its precision until it is certified.
fn initial_form(phi: &MapGerm, d: &mut DirectImage, w: (u32, u32)) -> Result<BiPoly> {
    loop {
        match weighted_initial_form_series(&d.equation, w) {
            Ok(p) => return Ok(p),
            Err(GermError::Precision(_)) if d.equation.prec() < MAX_D_PRECISION => {
                *d = discriminant_at_least(phi, 2 * d.equation.prec())?
            }
            Err(e) => return Err(e),
        }
    }
}

/// `i_0(D, H)` with the precision of `D` raised until the order is certified.
fn i0_d(phi: &MapGerm, d: &mut DirectImage, h: &BiPoly) -> Result<u64> {
    loop {
        match i0_trunc(&d.equation, h) {
            Ok(n) => return Ok(n),
            Err(GermError::Precision(_)) if d.equation.prec() < MAX_D_PRECISION => {
                *d = discriminant_at_least(phi, 2 * d.equation.prec())?
            }
            Err(e) => return Err(e),
        }
    }
}

fn divide(delta: u64, w: (u32, u32)) -> Result<u64> {
    let kl = w.0 as u64 * w.1 as u64;
    if delta % kl != 0 {
        return Err(GermError::Inconsistency(format!("difference {delta} is not divisible by k l = {kl}")));
    }
    Ok(delta / kl)
}

fn check_t(t: &Fe) -> Result<()> {
    if t.is_zero() {
        return Err(GermError::InvalidInput("the pencil parameter t must be nonzero".into()));
    }
    Ok(())
}

/// `nu = (i_0(D, H_t) - i_0(D, H_{t_ref})) / (k l)` where `i0(H)` computes `i_0(D, H)`.
fn nu_from_intersections(
    w: (u32, u32),
    t: &Fe,
    n: Option<u32>,
    classes: &[AtypicalValue],
    bound: u64,
    mut i0: impl FnMut(&BiPoly) -> Result<u64>,
) -> Result<(u64, u64, u32, i64)> {
    check_t(t)?;
    let kl = w.0 as u64 * w.1 as u64;
    let t_ref = reference_t(&classes.iter().map(|c| c.t.clone()).collect::<Vec<_>>(), t);
    let tr = t.field().from_int(t_ref);
    let mut n = n.unwrap_or((kl * bound + 1) as u32);
    loop {
        let a = i0(&target_pencil(w, t, n)?)?;
        let b = i0(&target_pencil(w, &tr, n)?)?;
        if a < b {
            return Err(GermError::Inconsistency(format!("i0 at t is {a}, below the reference value {b}")));
        }
        let nu = divide(a - b, w)?;
        if n as u64 > nu * kl {
            return Ok((nu, a - b, n, t_ref));
        }
        n = (nu * kl + 1) as u32;
        if n > MAX_PENCIL_N {
            return Err(GermError::Capacity { what: "pencil exponent N".into(), cap: MAX_PENCIL_N as usize });
        }
    }
}

/// `nu` of `t` for the discriminant of `phi`, through `i_0(D, H_t)`. Without `n`, `N` starts at
/// `k l S + 1` where `S` bounds every `nu_j`; the final `N > nu k l` is always checked.
pub fn nu_via_intersection(phi: &MapGerm, w: (u32, u32), t: &Fe, n: Option<u32>) -> Result<NuResult> {
    let mut d = discriminant(phi)?;
    if d.unit {
        check_t(t)?;
        return Ok(NuResult { nu: 0, delta: 0, n: n.unwrap_or(1), t_ref: reference_t(&[], t), precision: None });
    }
    let fac = factor_edge(&initial_form(phi, &mut d, w)?, w)?;
    let classes = edge_classes(&fac);
    let (nu, delta, n, t_ref) = nu_from_intersections(w, t, n, &classes, nu_bound(&fac), |h| i0_d(phi, &mut d, h))?;
    Ok(NuResult { nu, delta, n, t_ref, precision: Some(d.equation.prec()) })
}

/// [`nu_via_intersection`] for a discriminant given as an exact polynomial in `(u, v)`.
pub fn nu_via_intersection_exact(d: &BiPoly, w: (u32, u32), t: &Fe, n: Option<u32>) -> Result<NuResult> {
    let fac = factor_edge(&weighted_initial_form(d, w)?, w)?;
    let classes = edge_classes(&fac);
    let (nu, delta, n, t_ref) = nu_from_intersections(w, t, n, &classes, nu_bound(&fac), |h| {
        match intersection_multiplicity(h, d)? {
            IntersectionNumber::Finite(v) => Ok(v),
            IntersectionNumber::Infinite => Err(GermError::Inconsistency("test curve shares a component with D".into())),
        }
    })?;
    Ok(NuResult { nu, delta, n, t_ref, precision: None })
}

/// Critical values of `g^k / f^l` along the branches of the Jacobian curve whose Hironaka
/// quotient is `l / k`: the limit `lc(g)^k / lc(f)^l` of each such branch.
fn polar_candidates(phi: &MapGerm, w: (u32, u32)) -> Result<Vec<AlgebraicValue>> {
    let j = jacobian(phi)?;
    if !j.constant_term().is_zero() {
        return Ok(Vec::new());
    }
    let (k, l) = w;
    let bezout = j.total_degree().unwrap_or(0) as usize
        * phi.f.total_degree().unwrap_or(0).max(phi.g.total_degree().unwrap_or(0)) as usize;
    expand_until(&j, 16, false, |e| {
        let mut out = Vec::new();
        for b in &e.branches {
            let (sf, sg) = (b.eval(&phi.f), b.eval(&phi.g));
            let (mf, mg) = match (sf.valuation(), sg.valuation()) {
                (Some(a), Some(c)) => (a, c),
                _ if b.prec() > bezout + 1 => continue, // inside f = 0 or g = 0
                _ => return Ok(None),
            };
            if mg as u64 * k as u64 != mf as u64 * l as u64 {
                continue;
            }
            let t = sg.coeff(mg).pow(k as u64).checked_div(&sf.coeff(mf).pow(l as u64))?;
            out.push(AlgebraicValue::of(&t));
        }
        out.sort();
        out.dedup();
        Ok(Some(out))
    })
}

/// `nu` through Milnor numbers of `h_t = (g^k - t f^l)^N - f^{l (N + 1)}`, with `N` chosen by
/// stabilization: the first `N` with `N > nu k l` giving the same `nu` as `N + 1`.
pub fn nu_via_milnor(phi: &MapGerm, w: (u32, u32), t: &Fe, n: Option<u32>) -> Result<NuResult> {
    check_t(t)?;
    let avoid = polar_candidates(phi, w)?;
    let mut t_ref = reference_t(&avoid, t);
    let kl = w.0 as u64 * w.1 as u64;
    let mut n = n.unwrap_or(2);
    let mut prev: Option<(u64, u64)> = None;
    loop {
        let tr = t.field().from_int(t_ref);
        let mu_t = milnor_number(&source_pencil(&phi.f, &phi.g, w, t, n)?)?;
        let mu_ref = match milnor_number(&source_pencil(&phi.f, &phi.g, w, &tr, n)?) {
            Ok(m) => m,
            Err(GermError::NonIsolated(_)) => {
                t_ref = reference_from(&avoid, t, t_ref + 1);
                prev = None;
                continue;
            }
            Err(e) => return Err(e),
        };
        if mu_t < mu_ref {
            return Err(GermError::Inconsistency(format!("mu at t is {mu_t}, below the reference value {mu_ref}")));
        }
        let delta = mu_t - mu_ref;
        let nu = divide(delta, w)?;
        if let Some((pn, pd)) = prev {
            if pn == nu && pd == delta && (n as u64 - 1) > nu * kl {
                return Ok(NuResult { nu, delta, n: n - 1, t_ref, precision: None });
            }
        }
        prev = Some((nu, delta));
        n += 1;
        if n > MAX_PENCIL_N {
            return Err(GermError::Capacity { what: "pencil exponent N".into(), cap: MAX_PENCIL_N as usize });
        }
    }
}

/// Method A: roots of the edge polynomial of the discriminant for the weight `w`, with their
/// multiplicities.
pub fn atypical_values_by_edges(phi: &MapGerm, w: (u32, u32)) -> Result<Vec<AtypicalValue>> {
    let mut d = discriminant(phi)?;
    if d.unit {
        return Ok(Vec::new());
    }
    let fac = factor_edge(&initial_form(phi, &mut d, w)?, w)?;
    Ok(edge_classes(&fac))
}

/// Method B: critical values of `g^k / f^l` on the Jacobian curve, kept where the Milnor
/// number of `h_t` jumps, with `nu` from the size of the jump.
pub fn atypical_values_by_milnor(phi: &MapGerm, w: (u32, u32)) -> Result<Vec<AtypicalValue>> {
    let mut out = Vec::new();
    for c in polar_candidates(phi, w)? {
        let t = c.representative()?;
        let r = nu_via_milnor(phi, w, &t, None)?;
        if r.nu > 0 {
            out.push(AtypicalValue { t: c, nu: r.nu });
        }
    }
    out.sort();
    Ok(out)
}

/// Atypical values by both methods; they must agree exactly.
pub fn atypical_values(phi: &MapGerm, w: (u32, u32)) -> Result<Vec<AtypicalValue>> {
    let a = atypical_values_by_edges(phi, w)?;
    let b = atypical_values_by_milnor(phi, w)?;
    if a != b {
        let show = |v: &[AtypicalValue]| v.iter().map(|x| format!("({}, {})", x.t, x.nu)).collect::<Vec<_>>().join(", ");
        return Err(GermError::Inconsistency(format!(
            "edge roots [{}] differ from Milnor jumps [{}]",
            show(&a),
            show(&b)
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

    fn q(x: Rational) -> Fe {
        Field::rationals().from_rational(x)
    }

    fn two_lines() -> MapGerm {
        MapGerm::new(BiPoly::x(), p(&[(0, 2, 1), (1, 1, -1)])).unwrap()
    }

    #[test]
    fn exact_discriminant_cusp() {
        let d = p(&[(0, 2, 1), (3, 0, -1)]);
        let r = nu_via_intersection_exact(&d, (2, 3), &q(rat(1)), Some(7)).unwrap();
        assert_eq!((r.nu, r.delta, r.n), (1, 6, 7));
        let r = nu_via_intersection_exact(&d, (2, 3), &q(rat(5)), Some(7)).unwrap();
        assert_eq!(r.nu, 0);
    }

    #[test]
    fn two_lines_pencil() {
        let phi = two_lines();
        let t = q(ratio(-1, 4));
        assert_eq!(nu_via_intersection(&phi, (1, 2), &t, None).unwrap().nu, 1);
        assert_eq!(nu_via_milnor(&phi, (1, 2), &t, None).unwrap().nu, 1);
        assert_eq!(nu_via_milnor(&phi, (1, 2), &q(rat(3)), None).unwrap().nu, 0);
        let a = atypical_values(&phi, (1, 2)).unwrap();
        assert_eq!(a, vec![AtypicalValue { t: AlgebraicValue::rational(ratio(-1, 4)), nu: 1 }]);
    }

    #[test]
    fn cusp_map_pencil() {
        let phi = MapGerm::new(BiPoly::x(), p(&[(0, 2, 1), (3, 0, -1)])).unwrap();
        assert_eq!(nu_via_milnor(&phi, (1, 3), &q(rat(-1)), None).unwrap().nu, 1);
        let a = atypical_values(&phi, (1, 3)).unwrap();
        assert_eq!(a, vec![AtypicalValue { t: AlgebraicValue::rational(rat(-1)), nu: 1 }]);
    }

    #[test]
    fn identity_has_no_atypical_values() {
        let phi = MapGerm::new(BiPoly::x(), BiPoly::y()).unwrap();
        assert!(atypical_values(&phi, (1, 2)).unwrap().is_empty());
    }
}
