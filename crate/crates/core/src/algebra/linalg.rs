//! Dense exact linear algebra over the rationals.

use super::rational::Rational;
use num_traits::{One, Zero};

/// Determinant by fraction-carrying Gaussian elimination.
pub fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut d = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            d = -d;
        }
        let p = m[col][col].clone();
        d *= &p;
        let pinv = p.recip();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &pinv;
            for c in col..n {
                let t = &factor * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    d
}

/// Solves `m x = b`; `None` when `m` is singular.
pub fn solve(mut m: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(piv, col);
        b.swap(piv, col);
        let pinv = m[col][col].recip();
        for c in col..n {
            m[col][c] *= &pinv;
        }
        b[col] *= &pinv;
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..n {
                let t = &factor * &m[col][c];
                m[r][c] -= t;
            }
            let t = &factor * &b[col];
            b[r] -= t;
        }
    }
    Some(b)
}

/// Lagrange interpolation through `(xs[i], ys[i])`; coefficients low to high.
pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> Vec<Rational> {
    let n = xs.len();
    // Newton divided differences
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = &coef[i] - &coef[i - 1];
            let den = &xs[i] - &xs[i - j];
            coef[i] = num / den;
        }
    }
    let mut out = vec![Rational::zero(); n];
    // Horner on the Newton form
    for i in (0..n).rev() {
        // out = out * (x - xs[i]) + coef[i]
        let mut next = vec![Rational::zero(); n];
        for k in 0..n {
            if out[k].is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += &out[k];
            }
            next[k] -= &out[k] * &xs[i];
        }
        next[0] += &coef[i];
        out = next;
    }
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[test]
    fn det_and_solve() {
        let m = vec![vec![rat(2), rat(1)], vec![rat(1), rat(3)]];
        assert_eq!(det(m.clone()), rat(5));
        let x = solve(m, vec![rat(3), rat(4)]).unwrap();
        assert_eq!(x, vec![rat(1), rat(1)]);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        // 2 - x + 3x^2
        let xs: Vec<_> = (0..4).map(rat).collect();
        let ys: Vec<_> = xs.iter().map(|x| rat(2) - x + rat(3) * x * x).collect();
        assert_eq!(interpolate(&xs, &ys), vec![rat(2), rat(-1), rat(3)]);
    }
}
