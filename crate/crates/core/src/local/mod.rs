//! Intersection multiplicities, Milnor numbers and equisingularity of curve collections.

mod casas;
mod equising;

pub use casas::{casas_check, i0_discriminant, CasasReport};
pub use equising::{equisingular, equisingularity_type, BranchRecord, EquisingularityType, Matching};

use std::fmt;

use serde::{Serialize, Serializer};

use crate::algebra::bipoly::BiPoly;
use crate::algebra::resultant::resultant_y;
use crate::algebra::series::TruncSeries;
use crate::error::{GermError, Result};
use crate::puiseux::{expand_until, puiseux_expand, Expansion};

/// Number of shears tried before giving up.
pub const SHEAR_LIMIT: i64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IntersectionNumber {
    Finite(u64),
    Infinite,
}

impl IntersectionNumber {
    pub fn finite(self) -> Option<u64> {
        match self {
            IntersectionNumber::Finite(n) => Some(n),
            IntersectionNumber::Infinite => None,
        }
    }
}

impl fmt::Display for IntersectionNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntersectionNumber::Finite(n) => write!(f, "{n}"),
            IntersectionNumber::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for IntersectionNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            IntersectionNumber::Finite(n) => s.serialize_u64(*n),
            IntersectionNumber::Infinite => s.serialize_str("inf"),
        }
    }
}

fn vanishes_at_origin(f: &BiPoly) -> bool {
    f.constant_term().is_zero()
}

/// `i_0(f, g)` by both methods, which must agree.
pub fn intersection_multiplicity(f: &BiPoly, g: &BiPoly) -> Result<IntersectionNumber> {
    intersection_multiplicity_from(f, g, 0)
}

/// As [`intersection_multiplicity`] with the shear sequence starting at `x -> x + c y`, `c = shear_start`.
pub fn intersection_multiplicity_from(f: &BiPoly, g: &BiPoly, shear_start: i64) -> Result<IntersectionNumber> {
    let a = i0_resultant(f, g, shear_start)?;
    let b = i0_zeuthen(f, g)?;
    if a != b {
        return Err(GermError::Inconsistency(format!(
            "intersection multiplicity of {f} and {g}: resultant order {a}, Zeuthen {b}"
        )));
    }
    Ok(a)
}

/// Method A: `x`-order of `Res_y` after a shear making both curves `y`-general, with no other
/// common point on the line `x = 0` and no common point at infinity over `x = 0`.
pub fn i0_resultant(f: &BiPoly, g: &BiPoly, shear_start: i64) -> Result<IntersectionNumber> {
    if f.is_zero() || g.is_zero() {
        return Err(GermError::ZeroInput("intersection with the zero polynomial".into()));
    }
    if !vanishes_at_origin(f) || !vanishes_at_origin(g) {
        return Ok(IntersectionNumber::Finite(0));
    }
    let common = f.gcd(g)?;
    let (f, g) = if common.total_degree().unwrap_or(0) > 0 {
        if vanishes_at_origin(&common) {
            return Ok(IntersectionNumber::Infinite);
        }
        (f.div_exact(&common).expect("gcd divides"), g.div_exact(&common).expect("gcd divides"))
    } else {
        (f.clone(), g.clone())
    };
    let field = f.field().join(g.field())?;
    for c in shear_start..shear_start + SHEAR_LIMIT {
        let cf = field.from_int(c);
        let (fs, gs) = (f.shear(&cf), g.shear(&cf));
        let (f0, g0) = (fs.at_x_zero(), gs.at_x_zero());
        if f0.is_zero() || g0.is_zero() {
            continue;
        }
        let lcf = fs.y_coeffs().last().map(|p| p.coeff(0)).unwrap_or_else(|| field.zero());
        let lcg = gs.y_coeffs().last().map(|p| p.coeff(0)).unwrap_or_else(|| field.zero());
        if lcf.is_zero() && lcg.is_zero() {
            continue;
        }
        let h = f0.gcd(&g0)?;
        let k = h.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
        if h.degree() != Some(k) {
            continue;
        }
        let r = resultant_y(&fs, &gs)?;
        return match r.coeffs().iter().position(|c| !c.is_zero()) {
            Some(n) => Ok(IntersectionNumber::Finite(n as u64)),
            None => Err(GermError::Inconsistency("resultant vanishes after removing the common factor".into())),
        };
    }
    Err(GermError::Capacity { what: "shear sequence".into(), cap: SHEAR_LIMIT as usize })
}

/// Sum over branches of `g` (with multiplicity and conjugacy) of `ord_t f(param)`.
pub fn zeuthen_over(f: &BiPoly, e: &Expansion) -> Option<u64> {
    let mut total = 0u64;
    for b in &e.branches {
        let o = b.order_of(f)?;
        total += o as u64 * b.multiplicity as u64 * b.conjugacy as u64;
    }
    Some(total)
}

/// Method B: Zeuthen's rule over the Puiseux branches of `g`.
pub fn i0_zeuthen(f: &BiPoly, g: &BiPoly) -> Result<IntersectionNumber> {
    if f.is_zero() || g.is_zero() {
        return Err(GermError::ZeroInput("intersection with the zero polynomial".into()));
    }
    if !vanishes_at_origin(f) || !vanishes_at_origin(g) {
        return Ok(IntersectionNumber::Finite(0));
    }
    // a finite value is at most the Bezout number, so vanishing beyond it means a common branch
    let bezout = (f.total_degree().unwrap_or(0) as usize) * (g.total_degree().unwrap_or(0) as usize);
    expand_until(g, 16, false, |e| {
        let mut total = 0u64;
        for b in &e.branches {
            let s = b.eval(f);
            match s.valuation() {
                Some(o) => total += o as u64 * b.multiplicity as u64 * b.conjugacy as u64,
                None if b.exact && s.prec() > bezout => return Ok(Some(IntersectionNumber::Infinite)),
                None if b.prec() > bezout + 1 => return Ok(Some(IntersectionNumber::Infinite)),
                None => return Ok(None),
            }
        }
        Ok(Some(IntersectionNumber::Finite(total)))
    })
}

/// `i_0(D, h)` for a truncated series `D`, by Zeuthen's rule over the branches of `h`. The
/// result is certified only when every branch order stays below the truncation bound.
pub fn i0_trunc(d: &TruncSeries, h: &BiPoly) -> Result<u64> {
    if !vanishes_at_origin(h) || !d.body().constant_term().is_zero() {
        return Ok(0);
    }
    expand_until(h, 16, false, |e| {
        let mut total = 0u64;
        for b in &e.branches {
            let s = b.eval(d.body());
            let bound = (d.prec() as usize * b.curve_multiplicity() as usize).min(s.prec());
            match s.valuation() {
                Some(o) if o < bound => total += o as u64 * b.multiplicity as u64 * b.conjugacy as u64,
                _ if (d.prec() as usize * b.curve_multiplicity() as usize) <= s.prec() => {
                    return Err(GermError::Precision(format!(
                        "order along a branch reaches the truncation bound of a series known to degree {}",
                        d.prec()
                    )))
                }
                _ => return Ok(None),
            }
        }
        Ok(Some(total))
    })
}

/// `mu(h) = i_0(h_x, h_y)`.
pub fn milnor_number(h: &BiPoly) -> Result<u64> {
    if h.is_zero() {
        return Err(GermError::ZeroInput("Milnor number of zero".into()));
    }
    let hx = h.dx();
    let hy = h.dy();
    if !vanishes_at_origin(h) || !vanishes_at_origin(&hx) || !vanishes_at_origin(&hy) {
        return Ok(0);
    }
    if hx.is_zero() || hy.is_zero() {
        return Err(GermError::NonIsolated(if hx.is_zero() { hy.to_string() } else { hx.to_string() }));
    }
    if h.total_degree().unwrap_or(0) <= 10 && h.len() <= 12 {
        return match intersection_multiplicity(&hx, &hy)? {
            IntersectionNumber::Finite(n) => Ok(n),
            IntersectionNumber::Infinite => Err(non_isolated(h)),
        };
    }
    milnor_teissier(h)
}

fn non_isolated(h: &BiPoly) -> GermError {
    let c = h.dx().gcd(&h.dy()).map(|g| g.to_string()).unwrap_or_else(|_| "?".into());
    GermError::NonIsolated(c)
}

/// `mu(h) = i_0(h, h_y) - i_0(h, x) + 1` for reduced `h` with `x` not dividing `h`, after a
/// shear when needed. Only the branches of `h` are expanded.
pub fn milnor_teissier(h: &BiPoly) -> Result<u64> {
    if !vanishes_at_origin(h) {
        return Ok(0);
    }
    let field = h.field().clone();
    let mut c = 0;
    let h = loop {
        let hs = h.shear(&field.from_int(c));
        if !hs.at_x_zero().is_zero() {
            break hs;
        }
        c += 1;
        if c > SHEAR_LIMIT {
            return Err(GermError::Capacity { what: "shear sequence".into(), cap: SHEAR_LIMIT as usize });
        }
    };
    let hy = h.dy();
    let ix = h.at_x_zero().coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0) as u64;
    let e = puiseux_expand(&h, 8)?;
    if e.branches.iter().any(|b| b.multiplicity > 1) {
        return Err(non_isolated(&h));
    }
    let bound = (h.total_degree().unwrap_or(0) as usize).pow(2) + 1;
    let ihy = expand_until(&h, 16, false, |e| match zeuthen_over(&hy, e) {
        Some(n) => Ok(Some(n)),
        None if e.branches.iter().all(|b| b.prec() > bound) => Err(non_isolated(&h)),
        None => Ok(None),
    })?;
    Ok(ihy + 1 - ix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use IntersectionNumber::*;

    fn p(t: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_int_terms(t)
    }

    #[test]
    fn goldens() {
        let cusp = p(&[(0, 2, 1), (3, 0, -1)]);
        assert_eq!(intersection_multiplicity(&BiPoly::x(), &BiPoly::y()).unwrap(), Finite(1));
        assert_eq!(intersection_multiplicity(&cusp, &BiPoly::y()).unwrap(), Finite(3));
        assert_eq!(intersection_multiplicity(&cusp, &p(&[(0, 2, 1), (3, 0, 1)])).unwrap(), Finite(6));
        assert_eq!(intersection_multiplicity(&cusp, &cusp.mul(&BiPoly::x())).unwrap(), Infinite);
    }

    #[test]
    fn far_components_are_ignored() {
        // (x - 1) y and (x - 1)(y - x) share x = 1, which misses the origin
        let a = p(&[(1, 1, 1), (0, 1, -1)]);
        let b = p(&[(1, 1, 1), (0, 1, -1), (2, 0, -1), (1, 0, 1)]);
        assert_eq!(intersection_multiplicity(&a, &b).unwrap(), Finite(1));
        // y (y - 1) against x: the point (0, 1) must not count
        let c = p(&[(0, 2, 1), (0, 1, -1)]);
        assert_eq!(intersection_multiplicity(&c, &BiPoly::x()).unwrap(), Finite(1));
    }

    #[test]
    fn milnor_goldens() {
        assert_eq!(milnor_number(&p(&[(0, 2, 1), (3, 0, -1)])).unwrap(), 2);
        assert_eq!(milnor_number(&p(&[(1, 1, 1)])).unwrap(), 1);
        assert_eq!(milnor_number(&p(&[(0, 1, 1), (2, 0, -1)])).unwrap(), 0);
        assert!(matches!(milnor_number(&p(&[(0, 2, 1)])), Err(GermError::NonIsolated(_))));
    }

    #[test]
    fn teissier_agrees_with_partials() {
        for f in [
            p(&[(0, 2, 1), (3, 0, -1)]),
            p(&[(1, 1, 1)]),
            p(&[(0, 2, 1), (3, 0, -1)]).pow(2).sub(&p(&[(5, 1, 1)])),
            p(&[(1, 0, 1), (0, 2, -1)]),
            p(&[(1, 2, 1), (4, 0, 1), (0, 5, 1)]),
        ] {
            let a = match intersection_multiplicity(&f.dx(), &f.dy()).unwrap() {
                Finite(n) => n,
                Infinite => panic!(),
            };
            assert_eq!(milnor_teissier(&f).unwrap(), a, "{f}");
        }
    }

    #[test]
    fn truncated_argument() {
        let d = TruncSeries::new(p(&[(0, 2, 1), (3, 0, -1)]), 12);
        // cusp against v^2 - t u^3 with t != 1 has order 6
        assert_eq!(i0_trunc(&d, &p(&[(0, 2, 1), (3, 0, -2)])).unwrap(), 6);
        let short = TruncSeries::new(p(&[(0, 2, 1), (3, 0, -1)]), 4);
        assert!(i0_trunc(&short, &p(&[(0, 2, 1), (3, 0, -1), (7, 0, 1)])).is_err());
    }
}
