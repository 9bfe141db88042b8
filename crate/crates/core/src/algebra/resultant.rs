//! Sylvester resultants.
//!
//! Sign convention: the Sylvester matrix of `p` (degree `m`) and `q` (degree `n`) has `p`'s
//! coefficients, highest first, in the first `n` rows and `q`'s in the last `m` rows.

use super::bipoly::BiPoly;
use super::field::{Fe, Field};
use super::rational::{rat, Rational};
use super::upoly::Poly;
use super::linalg;
use crate::error::{GermError, Result};

/// Commutative ring operations needed by the division-free determinant.
pub trait Ring: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn r_add(&self, o: &Self) -> Self;
    fn r_mul(&self, o: &Self) -> Self;
    fn r_neg(&self) -> Self;
    fn r_is_zero(&self) -> bool;
}

impl Ring for Rational {
    fn zero_like(&self) -> Self {
        rat(0)
    }
    fn one_like(&self) -> Self {
        rat(1)
    }
    fn r_add(&self, o: &Self) -> Self {
        self + o
    }
    fn r_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn r_neg(&self) -> Self {
        -self
    }
    fn r_is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

impl Ring for Fe {
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn r_add(&self, o: &Self) -> Self {
        self + o
    }
    fn r_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn r_neg(&self) -> Self {
        self.neg()
    }
    fn r_is_zero(&self) -> bool {
        self.is_zero()
    }
}

impl Ring for Poly {
    fn zero_like(&self) -> Self {
        Poly::zero(self.field())
    }
    fn one_like(&self) -> Self {
        Poly::constant(self.field().one())
    }
    fn r_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn r_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn r_neg(&self) -> Self {
        self.neg()
    }
    fn r_is_zero(&self) -> bool {
        self.is_zero()
    }
}

impl Ring for BiPoly {
    fn zero_like(&self) -> Self {
        BiPoly::zero(self.field())
    }
    fn one_like(&self) -> Self {
        BiPoly::one(self.field())
    }
    fn r_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn r_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn r_neg(&self) -> Self {
        self.neg()
    }
    fn r_is_zero(&self) -> bool {
        self.is_zero()
    }
}

/// Determinant by Berkowitz's division-free algorithm.
pub fn berkowitz_det<R: Ring>(a: &[Vec<R>], one: &R) -> R {
    let n = a.len();
    if n == 0 {
        return one.clone();
    }
    // p holds det(lambda I - A_r) coefficients, highest degree first
    let mut p = vec![one.clone(), a[0][0].r_neg()];
    for r in 1..n {
        let c: Vec<R> = (0..r).map(|i| a[i][r].clone()).collect();
        let row: Vec<R> = (0..r).map(|j| a[r][j].clone()).collect();
        // first column of the Toeplitz matrix: 1, -a_rr, -R C, -R A C, ...
        let mut col = vec![one.clone(), a[r][r].r_neg()];
        let mut v = c;
        for k in 0..r {
            let dot = row.iter().zip(&v).fold(one.zero_like(), |acc, (x, y)| acc.r_add(&x.r_mul(y)));
            col.push(dot.r_neg());
            if k + 1 < r {
                v = (0..r)
                    .map(|i| (0..r).fold(one.zero_like(), |acc, j| acc.r_add(&a[i][j].r_mul(&v[j]))))
                    .collect();
            }
        }
        // new p = T p, T is (r+2) x (r+1) lower-triangular Toeplitz
        let mut np = vec![one.zero_like(); r + 2];
        for (i, slot) in np.iter_mut().enumerate() {
            for (j, pj) in p.iter().enumerate() {
                if i >= j && i - j < col.len() {
                    let t = col[i - j].r_mul(pj);
                    *slot = slot.r_add(&t);
                }
            }
        }
        p = np;
    }
    let c = p[n].clone();
    if n % 2 == 1 {
        c.r_neg()
    } else {
        c
    }
}

/// Sylvester matrix of two coefficient lists (low to high, leading entries as given).
pub fn sylvester<R: Ring>(p: &[R], q: &[R]) -> Vec<Vec<R>> {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let z = p[0].zero_like();
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for r in 0..n {
        let mut row = vec![z.clone(); size];
        for (k, c) in p.iter().rev().enumerate() {
            row[r + k] = c.clone();
        }
        rows.push(row);
    }
    for r in 0..m {
        let mut row = vec![z.clone(); size];
        for (k, c) in q.iter().rev().enumerate() {
            row[r + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

fn trim<R: Ring>(v: &[R]) -> Vec<R> {
    let mut v = v.to_vec();
    while v.len() > 1 && v.last().is_some_and(R::r_is_zero) {
        v.pop();
    }
    v
}

/// `Res(p, q)` of univariate polynomials over a ring, given low to high.
pub fn resultant<R: Ring>(p: &[R], q: &[R]) -> Result<R> {
    let p = trim(p);
    let q = trim(q);
    let pz = p.is_empty() || (p.len() == 1 && p[0].r_is_zero());
    let qz = q.is_empty() || (q.len() == 1 && q[0].r_is_zero());
    if pz && qz {
        return Err(GermError::UndefinedResultant);
    }
    let proto = if pz { &q[0] } else { &p[0] };
    if pz || qz {
        let other = if pz { &q } else { &p };
        return Ok(if other.len() == 1 { proto.one_like() } else { proto.zero_like() });
    }
    let one = proto.one_like();
    Ok(berkowitz_det(&sylvester(&p, &q), &one))
}

/// Determinant over a field by Gaussian elimination.
pub fn det_fe(mut m: Vec<Vec<Fe>>, field: &Field) -> Fe {
    let n = m.len();
    let mut det = field.one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return field.zero();
        };
        if piv != c {
            m.swap(piv, c);
            det = det.neg();
        }
        let inv = m[c][c].inv().expect("nonzero pivot");
        det = &det * &m[c][c];
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] * &inv;
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] = &m[r][k] - &t;
            }
        }
    }
    det
}

/// `Res_y(f, g)` evaluated at `x = x0`, with the Sylvester matrix built from the formal
/// `y`-degrees of `f` and `g` (so the value is the specialisation of the polynomial resultant).
pub fn resultant_y_at(f: &BiPoly, g: &BiPoly, x0: &Fe) -> Result<Fe> {
    let field = f.field().join(g.field()).unwrap_or_else(|_| f.field().clone());
    let field = field.join(x0.field()).unwrap_or(field);
    let fc: Vec<Fe> = f.y_coeffs().iter().map(|p| p.eval(x0).lift_to(&field)).collect::<Result<_>>()?;
    let gc: Vec<Fe> = g.y_coeffs().iter().map(|p| p.eval(x0).lift_to(&field)).collect::<Result<_>>()?;
    if fc.is_empty() && gc.is_empty() {
        return Err(GermError::UndefinedResultant);
    }
    if fc.is_empty() || gc.is_empty() {
        let other = if fc.is_empty() { &gc } else { &fc };
        return Ok(if other.len() == 1 { field.one() } else { field.zero() });
    }
    Ok(det_fe(sylvester(&fc, &gc), &field))
}

/// `Res_y(f, g)` as a polynomial in `x`, by evaluation at `x = 0, 1, ...` and interpolation.
pub fn resultant_y(f: &BiPoly, g: &BiPoly) -> Result<Poly> {
    let field = f.field().join(g.field())?;
    let m = f.degree_y().unwrap_or(0) as usize;
    let n = g.degree_y().unwrap_or(0) as usize;
    let bound = n * f.degree_x().unwrap_or(0) as usize + m * g.degree_x().unwrap_or(0) as usize;
    let xs: Vec<Rational> = (0..=bound as i64).map(rat).collect();
    let vals = xs
        .iter()
        .map(|x| resultant_y_at(f, g, &field.from_rational(x.clone())))
        .collect::<Result<Vec<Fe>>>()?;
    let d = field.degree();
    let mut coords: Vec<Vec<Rational>> = Vec::new();
    for k in 0..d {
        let ys: Vec<Rational> = vals.iter().map(|v| v.coords()[k].clone()).collect();
        coords.push(linalg::interpolate(&xs, &ys));
    }
    let len = coords.iter().map(Vec::len).max().unwrap_or(0);
    let mut cs = Vec::with_capacity(len);
    for i in 0..len {
        let c: Vec<Rational> = (0..d).map(|k| coords[k].get(i).cloned().unwrap_or_else(|| rat(0))).collect();
        cs.push(Fe::from_coords(&field, c)?);
    }
    Poly::new(&field, cs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_int_terms(t)
    }

    #[test]
    fn sylvester_sign_convention() {
        let cusp = p(&[(0, 2, 1), (3, 0, -1)]);
        let r = resultant_y(&cusp, &p(&[(0, 1, 1)])).unwrap();
        assert_eq!(r, Poly::from_rationals(&[rat(0), rat(0), rat(0), rat(-1)]));
        assert!(resultant_y(&cusp, &cusp).unwrap().is_zero());
    }

    #[test]
    fn berkowitz_matches_generic() {
        // coefficients in Q[x]: y - a and y - b with a = x, b = x^2
        let a = Poly::from_rationals(&[rat(0), rat(1)]);
        let b = Poly::from_rationals(&[rat(0), rat(0), rat(1)]);
        let one = Poly::from_rationals(&[rat(1)]);
        let r = resultant(&[a.neg(), one.clone()], &[b.neg(), one]).unwrap();
        assert_eq!(r, a.sub(&b));
        let m: Vec<Vec<Rational>> = vec![
            vec![rat(2), rat(1), rat(3)],
            vec![rat(0), rat(-1), rat(4)],
            vec![rat(5), rat(2), rat(1)],
        ];
        assert_eq!(berkowitz_det(&m, &rat(1)), linalg::det(m.clone()));
    }

    #[test]
    fn both_zero_is_undefined() {
        let z = vec![rat(0)];
        assert_eq!(resultant(&z, &z), Err(GermError::UndefinedResultant));
    }
}
