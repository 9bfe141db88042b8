//! Casas' formula `mu(h) - 1 = i_0(f, g) [mu(H) - 1] + i_0(D, H)` for `h = H(f, g)`.

use serde::Serialize;

use super::{i0_trunc, intersection_multiplicity, milnor_number, IntersectionNumber};
use crate::algebra::bipoly::BiPoly;
use crate::discriminant::{discriminant_at_least, MapGerm};
use crate::error::{GermError, Result};

#[derive(Clone, Debug, Serialize)]
pub struct CasasReport {
    pub mu_h: u64,
    pub mu_big_h: u64,
    pub i0_fg: u64,
    pub i0_d_big_h: u64,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

/// `i_0(D, H)` with `D` recomputed at higher precision until the order is certified.
pub fn i0_discriminant(phi: &MapGerm, big_h: &BiPoly) -> Result<u64> {
    let mut min_prec = 0;
    loop {
        let d = discriminant_at_least(phi, min_prec)?;
        match i0_trunc(&d.equation, big_h) {
            Ok(n) => return Ok(n),
            Err(GermError::Precision(_)) if d.equation.prec() < 512 => min_prec = 2 * d.equation.prec(),
            Err(e) => return Err(e),
        }
    }
}

/// Both sides of Casas' formula, each computed from its own ingredients.
pub fn casas_check(phi: &MapGerm, big_h: &BiPoly) -> Result<CasasReport> {
    if big_h.is_zero() {
        return Err(GermError::ZeroInput("H must be nonzero".into()));
    }
    if !big_h.constant_term().is_zero() {
        return Err(GermError::InvalidInput("H must vanish at the origin".into()));
    }
    let i0_fg = match intersection_multiplicity(&phi.f, &phi.g)? {
        IntersectionNumber::Finite(n) => n,
        IntersectionNumber::Infinite => {
            return Err(GermError::InvalidInput("the map does not have an isolated zero".into()))
        }
    };
    let h = big_h.substitute(&phi.f, &phi.g);
    let mu_h = milnor_number(&h)?;
    let mu_big_h = milnor_number(big_h)?;
    let i0_d_big_h = i0_discriminant(phi, big_h)?;
    let lhs = mu_h as i64 - 1;
    let rhs = i0_fg as i64 * (mu_big_h as i64 - 1) + i0_d_big_h as i64;
    Ok(CasasReport { mu_h, mu_big_h, i0_fg, i0_d_big_h, lhs, rhs, holds: lhs == rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_int_terms(t)
    }

    #[test]
    fn cusp_map_goldens() {
        let phi = MapGerm::new(BiPoly::x(), p(&[(0, 2, 1), (3, 0, -1)])).unwrap();
        let r = casas_check(&phi, &BiPoly::x()).unwrap();
        assert_eq!((r.lhs, r.rhs, r.i0_d_big_h), (-1, -1, 1));
        let r = casas_check(&phi, &BiPoly::y()).unwrap();
        assert_eq!((r.lhs, r.rhs, r.i0_d_big_h), (1, 1, 3));
        let r = casas_check(&phi, &p(&[(1, 0, 1), (0, 1, -1)])).unwrap();
        assert_eq!((r.lhs, r.rhs), (-1, -1));
    }

    #[test]
    fn singular_test_curve() {
        // H = v^2 - u^3 pulled back along (x, y^2 - x^3)
        let phi = MapGerm::new(BiPoly::x(), p(&[(0, 2, 1), (3, 0, -1)])).unwrap();
        let r = casas_check(&phi, &p(&[(0, 2, 1), (3, 0, -1)])).unwrap();
        assert!(r.holds, "{r:?}");
    }
}
