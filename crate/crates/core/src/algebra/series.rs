//! Truncated power series: univariate [`Series`] in `t` and bivariate [`TruncSeries`].

use std::fmt;

use super::bipoly::BiPoly;
use super::field::{Fe, Field};
use super::rational::{rat, Rational};
use crate::error::{GermError, Result};

/// `sum_{i < prec} c_i t^i + O(t^prec)`.
#[derive(Clone)]
pub struct Series {
    field: Field,
    coeffs: Vec<Fe>,
    prec: usize,
}

impl PartialEq for Series {
    fn eq(&self, o: &Self) -> bool {
        self.prec == o.prec
            && self.coeffs.len() == o.coeffs.len()
            && self.coeffs.iter().zip(&o.coeffs).all(|(a, b)| a == b)
    }
}
impl Eq for Series {}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_in("t"))
    }
}

impl Series {
    pub fn new(field: &Field, coeffs: Vec<Fe>, prec: usize) -> Result<Series> {
        let mut cs = coeffs.into_iter().map(|c| c.lift_to(field)).collect::<Result<Vec<_>>>()?;
        cs.truncate(prec);
        let mut s = Series { field: field.clone(), coeffs: cs, prec };
        s.trim();
        Ok(s)
    }

    pub fn from_rationals(coeffs: &[Rational], prec: usize) -> Series {
        let q = Field::rationals();
        Series::new(&q, coeffs.iter().map(|c| q.from_rational(c.clone())).collect(), prec).expect("rationals")
    }

    pub fn zero(field: &Field, prec: usize) -> Series {
        Series { field: field.clone(), coeffs: Vec::new(), prec }
    }

    pub fn one(field: &Field, prec: usize) -> Series {
        Series::monomial(field.one(), 0, prec)
    }

    /// `c t^k` at precision `prec`.
    pub fn monomial(c: Fe, k: usize, prec: usize) -> Series {
        let field = c.field().clone();
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = c;
        let mut s = Series { field, coeffs, prec };
        s.coeffs.truncate(prec);
        s.trim();
        s
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Fe::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// `true` when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order of the first nonzero coefficient; `None` if zero to precision.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn lift_to(&self, target: &Field) -> Result<Series> {
        Series::new(target, self.coeffs.clone(), self.prec)
    }

    pub fn with_prec(&self, prec: usize) -> Series {
        let mut s = self.clone();
        s.prec = prec.min(self.prec);
        s.coeffs.truncate(s.prec);
        s.trim();
        s
    }

    /// Raises the nominal precision; only sound when the tail is known to vanish.
    pub fn assume_exact_to(&self, prec: usize) -> Series {
        let mut s = self.clone();
        s.prec = prec;
        s
    }

    fn join_field(&self, o: &Series) -> Field {
        self.field.join(&o.field).unwrap_or_else(|_| self.field.clone())
    }

    pub fn add(&self, o: &Series) -> Series {
        let prec = self.prec.min(o.prec);
        let n = self.coeffs.len().max(o.coeffs.len()).min(prec);
        let cs = (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect();
        Series::new(&self.join_field(o), cs, prec).expect("field")
    }

    pub fn neg(&self) -> Series {
        Series { field: self.field.clone(), coeffs: self.coeffs.iter().map(Fe::neg).collect(), prec: self.prec }
    }

    pub fn sub(&self, o: &Series) -> Series {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Fe) -> Series {
        let field = if self.field.is_subfield_of(c.field()) { c.field().clone() } else { self.field.clone() };
        Series::new(&field, self.coeffs.iter().map(|a| a * c).collect(), self.prec).expect("field")
    }

    /// Precision of a product is `min(p_a + v_b, p_b + v_a)`.
    pub fn mul(&self, o: &Series) -> Series {
        let field = self.join_field(o);
        let va = self.valuation();
        let vb = o.valuation();
        let prec = match (va, vb) {
            (Some(a), Some(b)) => (self.prec + b).min(o.prec + a),
            (None, Some(b)) => self.prec + b,
            (Some(a), None) => o.prec + a,
            (None, None) => self.prec.min(o.prec),
        };
        let mut cs = vec![field.zero(); (self.coeffs.len() + o.coeffs.len()).min(prec)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= prec {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= prec {
                    break;
                }
                if !b.is_zero() {
                    cs[i + j] = &cs[i + j] + &(a * b);
                }
            }
        }
        Series::new(&field, cs, prec).expect("field")
    }

    pub fn pow(&self, e: usize) -> Series {
        let mut acc = Series::one(&self.field, self.prec.max(1) + self.valuation().unwrap_or(0) * e);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplies by `t^k`.
    pub fn shift_up(&self, k: usize) -> Series {
        let mut cs = vec![self.field.zero(); k];
        cs.extend(self.coeffs.iter().cloned());
        Series { field: self.field.clone(), coeffs: cs, prec: self.prec + k }
    }

    /// Divides by `t^k` (the first `k` coefficients must vanish).
    pub fn shift_down(&self, k: usize) -> Result<Series> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) || self.prec < k {
            return Err(GermError::NonInvertibleSeries(format!("series is not divisible by t^{k}")));
        }
        Ok(Series {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().skip(k).cloned().collect(),
            prec: self.prec - k,
        })
    }

    pub fn derivative(&self) -> Series {
        let cs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.scale(&rat(i as i64))).collect();
        Series::new(&self.field, cs, self.prec.saturating_sub(1)).expect("field")
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inv(&self) -> Result<Series> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(GermError::NonInvertibleSeries("constant term vanishes".into()));
        }
        let i0 = c0.inv()?;
        let n = self.prec;
        let mut r: Vec<Fe> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                r.push(i0.clone());
                continue;
            }
            let mut acc = self.field.zero();
            for j in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                acc = &acc + &(&self.coeffs[j] * &r[k - j]);
            }
            r.push(&acc.neg() * &i0);
        }
        Series::new(&self.field, r, n)
    }

    /// `self^alpha` for rational `alpha`, when the constant term is 1.
    pub fn pow_rational(&self, alpha: &Rational) -> Result<Series> {
        if !self.coeff(0).is_one() {
            return Err(GermError::NonInvertibleSeries("fractional power needs constant term 1".into()));
        }
        // J.C.P. Miller recurrence: r' a = alpha a' r
        let n = self.prec;
        let a = &self.coeffs;
        let mut r = vec![self.field.one()];
        for k in 1..n {
            let mut acc = self.field.zero();
            for j in 1..=k.min(a.len().saturating_sub(1)) {
                let w = alpha * rat(j as i64) - rat((k - j) as i64);
                acc = &acc + &(&a[j] * &r[k - j]).scale(&w);
            }
            r.push(acc.scale(&Rational::new(1.into(), (k as i64).into())));
        }
        Series::new(&self.field, r, n)
    }

    /// `self(r(t))` with `r(0) = 0`.
    pub fn compose(&self, r: &Series) -> Result<Series> {
        if r.valuation() == Some(0) {
            return Err(GermError::NonInvertibleSeries("inner series must vanish at 0".into()));
        }
        let v = r.valuation().unwrap_or(r.prec).max(1);
        let prec = (self.prec * v).max(1);
        let field = self.join_field(r);
        let mut acc = Series::zero(&field, prec);
        let mut pw = Series::one(&field, prec);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                pw = pw.mul(r).with_prec(prec);
            }
            if pw.valuation().unwrap_or(pw.prec) >= prec {
                break;
            }
            if !c.is_zero() {
                acc = acc.add(&pw.scale(c));
            }
        }
        Ok(acc)
    }

    /// Compositional inverse of `c t + O(t^2)`, `c != 0`.
    pub fn reverse(&self) -> Result<Series> {
        let c1 = self.coeff(1);
        if !self.coeff(0).is_zero() || c1.is_zero() {
            return Err(GermError::NonInvertibleSeries("series must be c*t + O(t^2) with c != 0".into()));
        }
        let n = self.prec;
        let ic = c1.inv()?;
        // Newton-free iterative solve: r = (t - (s(r) - c r)) / c
        let mut r = Series::monomial(ic.clone(), 1, n);
        let t = Series::monomial(self.field.one(), 1, n);
        let nonlinear = self.sub(&Series::monomial(c1.clone(), 1, n));
        for _ in 0..n {
            let next = t.sub(&nonlinear.compose(&r)?.with_prec(n)).scale(&ic).with_prec(n);
            if next == r {
                break;
            }
            r = next;
        }
        Ok(r.with_prec(n))
    }

    pub fn to_string_in(&self, var: &str) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let cs = c.to_string();
            parts.push(if mono.is_empty() {
                cs
            } else if c.is_one() {
                mono
            } else if cs.contains(' ') || cs.contains('/') {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            });
        }
        parts.push(format!("O({var}^{})", self.prec));
        parts.join(" + ").replace("+ -", "- ")
    }

    /// Like [`Series::to_string_in`] without the order term, for series known to be polynomials.
    pub fn to_exact_string(&self, var: &str) -> String {
        let s = self.to_string_in(var);
        let cut = s.rfind("O(").unwrap_or(s.len());
        let body = s[..cut].trim_end().trim_end_matches('+').trim_end();
        if body.is_empty() { "0".to_string() } else { body.to_string() }
    }
}

/// Bivariate series known exactly in total degree `< prec`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    body: BiPoly,
    prec: u32,
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({})", self.body, self.prec)
    }
}

impl TruncSeries {
    pub fn new(body: BiPoly, prec: u32) -> TruncSeries {
        let prec = prec.max(1);
        TruncSeries { body: body.truncate(prec), prec }
    }

    /// Exact polynomial viewed as a series of precision one above its degree.
    pub fn exact(p: &BiPoly) -> TruncSeries {
        TruncSeries { body: p.clone(), prec: p.total_degree().map_or(1, |d| d + 1) }
    }

    pub fn body(&self) -> &BiPoly {
        &self.body
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn add(&self, o: &TruncSeries) -> TruncSeries {
        TruncSeries::new(self.body.add(&o.body), self.prec.min(o.prec))
    }

    pub fn sub(&self, o: &TruncSeries) -> TruncSeries {
        TruncSeries::new(self.body.sub(&o.body), self.prec.min(o.prec))
    }

    pub fn mul(&self, o: &TruncSeries) -> TruncSeries {
        let va = self.body.order().unwrap_or(self.prec);
        let vb = o.body.order().unwrap_or(o.prec);
        let prec = (self.prec + vb).min(o.prec + va);
        TruncSeries::new(self.body.mul_trunc(&o.body, prec), prec)
    }

    pub fn pow(&self, e: u32) -> TruncSeries {
        let mut acc = TruncSeries::new(BiPoly::one(self.body.field()), self.prec + self.body.order().unwrap_or(0) * e);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn dx(&self) -> TruncSeries {
        TruncSeries::new(self.body.dx(), self.prec.saturating_sub(1))
    }

    pub fn dy(&self) -> TruncSeries {
        TruncSeries::new(self.body.dy(), self.prec.saturating_sub(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::ratio;

    fn s(v: &[i64], prec: usize) -> Series {
        Series::from_rationals(&v.iter().map(|&x| rat(x)).collect::<Vec<_>>(), prec)
    }

    #[test]
    fn geometric_series_identity() {
        let a = TruncSeries::new(BiPoly::from_int_terms(&[(0, 0, 1), (1, 0, 1)]), 4);
        let b = TruncSeries::new(BiPoly::from_int_terms(&[(0, 0, 1), (1, 0, -1), (2, 0, 1), (3, 0, -1)]), 4);
        let p = a.mul(&b);
        assert_eq!(p.body(), &BiPoly::from_int_terms(&[(0, 0, 1)]));
        assert_eq!(p.prec(), 4);
    }

    #[test]
    fn reversion_goldens() {
        assert_eq!(s(&[0, 1, 1], 4).reverse().unwrap(), s(&[0, 1, -1, 2], 4));
        assert_eq!(s(&[0, 2], 4).reverse().unwrap(), Series::from_rationals(&[rat(0), ratio(1, 2)], 4));
        assert_eq!(s(&[0, 1], 5).reverse().unwrap(), s(&[0, 1], 5));
        assert!(s(&[0, 0, 1], 4).reverse().is_err());
    }

    #[test]
    fn square_root_series() {
        // (1 + t)^{1/2} = 1 + t/2 - t^2/8 + t^3/16
        let r = s(&[1, 1], 4).pow_rational(&ratio(1, 2)).unwrap();
        assert_eq!(r, Series::from_rationals(&[rat(1), ratio(1, 2), ratio(-1, 8), ratio(1, 16)], 4));
        assert_eq!(r.mul(&r), s(&[1, 1], 4));
    }

    #[test]
    fn inverse_series() {
        let a = s(&[1, 1], 6);
        assert_eq!(a.inv().unwrap(), s(&[1, -1, 1, -1, 1, -1], 6));
    }
}
