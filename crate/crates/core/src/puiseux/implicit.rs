//! From a branch back to its Weierstrass polynomial, by power sums over the conjugates.

use super::Branch;
use crate::algebra::bipoly::BiPoly;
use crate::algebra::field::Field;
use crate::algebra::rational::rat;
use crate::algebra::series::Series;
use crate::error::{GermError, Result};

/// Monic polynomial in the tail coordinate with coefficients truncated series in the monomial
/// coordinate: `coeffs[k]` multiplies `w^k`, all known modulo `u^{prec}`.
#[derive(Clone, Debug)]
pub struct Implicit {
    pub coeffs: Vec<Series>,
    pub prec: usize,
    /// `true` when the polynomial is in `x` over series in `y`.
    pub swapped: bool,
}

impl Implicit {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The truncated polynomial as a bivariate polynomial in the input coordinates.
    pub fn to_bipoly(&self) -> BiPoly {
        let field = self.coeffs[0].field().clone();
        let mut out = BiPoly::zero(&field);
        for (k, s) in self.coeffs.iter().enumerate() {
            for (n, c) in s.coeffs().iter().enumerate() {
                out.add_term((n as u32, k as u32), c.clone());
            }
        }
        if self.swapped { out.swap_xy() } else { out }
    }
}

/// Implicit equation of `b` and its conjugates over `base`, with coefficients known modulo
/// `u^{prec}` where `u` is the monomial coordinate.
pub fn implicitize(b: &Branch, base: &Field, prec: usize) -> Result<Implicit> {
    let m = b.m as usize;
    let need = prec * m;
    let w = b.tail_to(need);
    if w.prec() < need {
        return Err(GermError::Precision(format!(
            "tail known to t^{} cannot give {} terms of the implicit equation",
            w.prec(),
            prec
        )));
    }
    let w = w.with_prec(need);
    let n_roots = m * b.conjugacy;
    let ginv = b.gamma.inv()?;
    let gpow: Vec<_> = (0..prec).scan(b.field.one(), |acc, _| {
        let r = acc.clone();
        *acc = &*acc * &ginv;
        Some(r)
    }).collect();
    // power sums p_j(u) over all m * conjugacy roots
    let mut p: Vec<Series> = Vec::with_capacity(n_roots + 1);
    p.push(Series::zero(base, prec));
    let mut wj = Series::one(&b.field, need);
    for _ in 1..=n_roots {
        wj = wj.mul(&w).with_prec(need);
        let mut cs = Vec::with_capacity(prec);
        for (n, gp) in gpow.iter().enumerate() {
            let c = (&wj.coeff(m * n) * gp).scale(&rat(m as i64));
            cs.push(c.trace_to(base)?);
        }
        p.push(Series::new(base, cs, prec)?);
    }
    // Newton identities: k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} p_i
    let mut e = vec![Series::one(base, prec)];
    for k in 1..=n_roots {
        let mut acc = Series::zero(base, prec);
        for i in 1..=k {
            let t = e[k - i].mul(&p[i]).with_prec(prec);
            acc = if i % 2 == 1 { acc.add(&t) } else { acc.sub(&t) };
        }
        e.push(acc.scale(&base.from_rational(crate::algebra::rational::ratio(1, k as i64))));
    }
    // w^N - e_1 w^{N-1} + e_2 w^{N-2} - ...
    let mut coeffs = vec![Series::zero(base, prec); n_roots + 1];
    for (k, ek) in e.iter().enumerate() {
        coeffs[n_roots - k] = if k % 2 == 0 { ek.clone() } else { ek.neg() };
    }
    Ok(Implicit { coeffs, prec, swapped: b.swapped })
}
