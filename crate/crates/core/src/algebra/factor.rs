//! Factorisation of univariate polynomials over `Q` and over towers.
//!
//! Over `Q` the square-free parts are cleared of denominators and handed to the
//! Zassenhaus factoriser in [`super::zassenhaus`].
//! Over a tower `K` we use Trager's norm method: shift the square-free part so that its
//! norm down to `Q` is square-free, factor the norm over `Q`, and recover each factor by a
//! gcd over `K`.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::field::{Fe, Field};
use super::linalg;
use super::rational::{denominator_lcm, rat, Rational};
use super::upoly::{is_squarefree_q, Poly};
use super::zassenhaus;
use crate::error::{GermError, Result};

static MAX_FACTOR_DEGREE: AtomicUsize = AtomicUsize::new(128);

/// Cap on the degree of any polynomial handed to the factoriser over `Q`
/// (for tower inputs this is the degree of the norm).
pub fn max_factor_degree() -> usize {
    MAX_FACTOR_DEGREE.load(Ordering::Relaxed)
}

pub fn set_max_factor_degree(cap: usize) {
    MAX_FACTOR_DEGREE.store(cap.max(1), Ordering::Relaxed);
}

type QFactors = Vec<(Vec<Rational>, usize)>;

fn memo() -> &'static Mutex<HashMap<Vec<Rational>, QFactors>> {
    static MEMO: OnceLock<Mutex<HashMap<Vec<Rational>, QFactors>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

fn trim(v: &[Rational]) -> Vec<Rational> {
    let mut v = v.to_vec();
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

/// Monic irreducible factors over `Q` with multiplicities, sorted by degree then
/// coefficients. Constants yield an empty list. Panics on the zero polynomial.
pub fn factor_q(coeffs: &[Rational]) -> QFactors {
    let p = trim(coeffs);
    assert!(!p.is_empty(), "factor_q of the zero polynomial");
    if p.len() == 1 {
        return Vec::new();
    }
    let lc = p.last().unwrap().clone();
    let monic: Vec<Rational> = p.iter().map(|c| c / &lc).collect();
    if monic.len() == 2 {
        return vec![(monic, 1)];
    }
    if let Some(hit) = memo().lock().unwrap().get(&monic) {
        return hit.clone();
    }
    let mut out: QFactors = Vec::new();
    for (sq, e) in Poly::from_rationals(&monic).squarefree().expect("nonzero") {
        let sq = sq.as_rationals().expect("rational coefficients");
        let den = denominator_lcm(&sq);
        let ints: Vec<BigInt> = sq.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
        for f in zassenhaus::factor_squarefree_z(&ints) {
            let l = Rational::from_integer(f.last().unwrap().clone());
            out.push((f.into_iter().map(|c| Rational::from_integer(c) / &l).collect(), e));
        }
    }
    out.sort();
    memo().lock().unwrap().insert(monic, out.clone());
    out
}

fn poly_key(p: &Poly) -> (usize, Vec<Vec<Rational>>) {
    (p.coeffs().len(), p.coeffs().iter().map(|c| c.coords().to_vec()).collect())
}

/// Monic irreducible factors of `p` over its coefficient field, with multiplicities.
///
/// The constant is dropped: `p = lc(p) * prod f_i^{e_i}`.
pub fn factor(p: &Poly) -> Result<Vec<(Poly, usize)>> {
    if p.is_zero() {
        return Err(GermError::ZeroInput("cannot factor the zero polynomial".into()));
    }
    let k = p.field().clone();
    let n = p.degree().unwrap() * k.degree();
    if n > max_factor_degree() {
        return Err(GermError::Capacity {
            what: format!("factorisation of degree {} over a field of degree {}", p.degree().unwrap(), k.degree()),
            cap: max_factor_degree(),
        });
    }
    if k.is_rationals() {
        let q = p.as_rationals().expect("rational coefficients");
        return Ok(factor_q(&q).into_iter().map(|(f, e)| (Poly::from_rationals(&f), e)).collect());
    }
    let mut out = Vec::new();
    for (s, e) in p.squarefree()? {
        for f in factor_squarefree(&s)? {
            out.push((f, e));
        }
    }
    out.sort_by_key(|(f, e)| (poly_key(f), *e));
    Ok(out)
}

/// Monic irreducible factors of a monic square-free polynomial over a tower.
fn factor_squarefree(s: &Poly) -> Result<Vec<Poly>> {
    let d = s.degree().unwrap_or(0);
    if d <= 1 {
        return Ok(if d == 1 { vec![s.clone()] } else { Vec::new() });
    }
    let k = s.field().clone();
    let gamma = k.primitive_element();
    for c in 0i64..64 {
        let shift = gamma.scale(&rat(-c));
        let st = s.shift(&shift); // s(T - c*gamma)
        let norm = norm_to_q(&st);
        if !is_squarefree_q(&norm) {
            continue;
        }
        let mut out = Vec::new();
        for (g, _) in factor_q(&norm) {
            let gk = Poly::from_rationals(&g).lift_to(&k)?;
            let h = st.gcd(&gk)?;
            if h.degree().unwrap_or(0) >= 1 {
                out.push(h.shift(&gamma.scale(&rat(c))).monic()?);
            }
        }
        let total: usize = out.iter().map(|f| f.degree().unwrap()).sum();
        if total != d {
            return Err(GermError::Inconsistency("norm factorisation lost degree".into()));
        }
        return Ok(out);
    }
    Err(GermError::Inconsistency("no square-free norm shift found".into()))
}

/// `Norm_{K/Q}(p)` as a polynomial in `Q[T]`, by evaluation and interpolation.
pub fn norm_to_q(p: &Poly) -> Vec<Rational> {
    let k = p.field();
    let n = p.degree().unwrap_or(0) * k.degree();
    let xs: Vec<Rational> = (0..=n as i64).map(rat).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|x| {
            let v = p.eval(&k.from_rational(x.clone()));
            if k.is_rationals() {
                v.coords()[0].clone()
            } else {
                linalg::det(v.mult_matrix())
            }
        })
        .collect();
    linalg::interpolate(&xs, &ys)
}

/// A root of the irreducible monic `psi`: in the same field when linear, otherwise the
/// generator of a new level adjoined on top.
pub fn root_of(psi: &Poly, name: Option<&str>) -> Result<(Field, Fe)> {
    match psi.degree() {
        Some(1) => Ok((psi.field().clone(), psi.coeff(0).neg().checked_div(&psi.coeff(1))?)),
        Some(_) => {
            let m = psi.monic()?;
            let k = psi.field().extend(m.coeffs(), name)?;
            let g = k.generator();
            Ok((k, g))
        }
        None => Err(GermError::ZeroInput("root of the zero polynomial".into())),
    }
}

/// Multiplies a factor list back out.
pub fn expand_q(factors: &QFactors) -> Vec<Rational> {
    let mut acc = Poly::from_rationals(&[Rational::one()]);
    for (f, e) in factors {
        acc = acc.mul(&Poly::from_rationals(f).pow(*e));
    }
    acc.as_rationals().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::ratio;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rational_goldens() {
        assert_eq!(factor_q(&q(&[-1, 0, 1])), vec![(q(&[-1, 1]), 1), (q(&[1, 1]), 1)]);
        assert_eq!(factor_q(&q(&[-2, 0, 1])), vec![(q(&[-2, 0, 1]), 1)]);
        let cube = expand_q(&vec![(vec![ratio(1, 4), rat(1)], 3)]);
        assert_eq!(factor_q(&cube), vec![(vec![ratio(1, 4), rat(1)], 3)]);
    }

    #[test]
    fn cubic_over_own_stem_field() {
        let qf = Field::rationals();
        let m = [ratio(8, 9), ratio(4, 3), rat(2), rat(1)];
        let k = qf.extend(&m.iter().map(|c| qf.from_rational(c.clone())).collect::<Vec<_>>(), None).unwrap();
        let p = Poly::from_rationals(&m).lift_to(&k).unwrap();
        let fs = factor(&p).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().any(|(f, _)| f.degree() == Some(1)));
    }

    #[test]
    fn splits_over_extension() {
        let qf = Field::rationals();
        let k = qf.extend(&[qf.from_int(-2), qf.zero(), qf.one()], Some("s")).unwrap();
        let p = Poly::from_rationals(&q(&[-1, 0, -2, 0, 1])).lift_to(&k).unwrap();
        let fs = factor(&p).unwrap();
        // T^4 - 2T^2 - 1 = (T^2 - 1 - s)(T^2 - 1 + s)
        assert_eq!(fs.len(), 2);
        let back = fs.iter().fold(Poly::constant(k.one()), |a, (f, e)| a.mul(&f.pow(*e)));
        assert_eq!(back, p);
        let p2 = Poly::from_rationals(&q(&[-2, 0, 1])).lift_to(&k).unwrap();
        assert_eq!(factor(&p2).unwrap().len(), 2);
    }

    #[test]
    fn factor_over_two_level_tower() {
        let qf = Field::rationals();
        let k = qf.extend(&[qf.from_int(-2), qf.zero(), qf.one()], Some("s")).unwrap();
        let s = k.generator();
        let l = k.extend(&[s.neg(), k.zero(), k.one()], Some("b")).unwrap();
        let p = Poly::from_rationals(&q(&[-2, 0, 0, 0, 1])).lift_to(&l).unwrap();
        let fs = factor(&p).unwrap();
        // T^4 - 2 = (T - b)(T + b)(T^2 + s)
        let degs: Vec<usize> = fs.iter().map(|(f, _)| f.degree().unwrap()).collect();
        assert_eq!(degs, vec![1, 1, 2]);
    }
}
