//! Dense univariate polynomials over a tower field.

use std::fmt;

use num_traits::One;

use super::field::{Fe, Field};
use super::rational::Rational;
use crate::error::{GermError, Result};

/// Polynomial `c_0 + c_1 T + ...` with coefficients in one field; no trailing zeros.
#[derive(Clone)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Fe>,
}

impl PartialEq for Poly {
    fn eq(&self, o: &Self) -> bool {
        self.coeffs.len() == o.coeffs.len() && self.coeffs.iter().zip(&o.coeffs).all(|(a, b)| a == b)
    }
}
impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_in("T"))
    }
}

impl Poly {
    pub fn new(field: &Field, coeffs: Vec<Fe>) -> Result<Poly> {
        let coeffs = coeffs.into_iter().map(|c| c.lift_to(field)).collect::<Result<Vec<_>>>()?;
        let mut p = Poly { field: field.clone(), coeffs };
        p.trim();
        Ok(p)
    }

    pub fn from_rationals(coeffs: &[Rational]) -> Poly {
        let q = Field::rationals();
        let mut p = Poly { coeffs: coeffs.iter().map(|c| q.from_rational(c.clone())).collect(), field: q };
        p.trim();
        p
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(c: Fe) -> Poly {
        let field = c.field().clone();
        let mut p = Poly { field, coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn monomial(c: Fe, deg: usize) -> Poly {
        let field = c.field().clone();
        if c.is_zero() {
            return Poly::zero(&field);
        }
        let mut coeffs = vec![field.zero(); deg + 1];
        coeffs[deg] = c;
        Poly { field, coeffs }
    }

    /// `T - c`.
    pub fn linear_root(c: &Fe) -> Poly {
        let f = c.field();
        Poly { field: f.clone(), coeffs: vec![c.neg(), f.one()] }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Fe::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Fe {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn lift_to(&self, target: &Field) -> Result<Poly> {
        Poly::new(target, self.coeffs.clone())
    }

    /// Coefficients as rationals, when they all are.
    pub fn as_rationals(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(Fe::as_rational).collect()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let field = if self.field.is_subfield_of(&o.field) { o.field.clone() } else { self.field.clone() };
        let coeffs = (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect();
        let mut p = Poly { field: field.clone(), coeffs };
        p.coeffs = p.coeffs.into_iter().map(|c| c.lift_to(&field).expect("field")).collect();
        p.trim();
        p
    }

    pub fn neg(&self) -> Poly {
        Poly { field: self.field.clone(), coeffs: self.coeffs.iter().map(Fe::neg).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let field = if self.field.is_subfield_of(&o.field) { o.field.clone() } else { self.field.clone() };
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&field);
        }
        let mut coeffs = vec![field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        let mut p = Poly { field, coeffs };
        p.trim();
        p
    }

    pub fn scale(&self, c: &Fe) -> Poly {
        let field = if self.field.is_subfield_of(c.field()) { c.field().clone() } else { self.field.clone() };
        let mut p = Poly { field, coeffs: self.coeffs.iter().map(|a| a * c).collect() };
        p.trim();
        p
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::constant(self.field.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn monic(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(GermError::ZeroInput("cannot normalise the zero polynomial".into()));
        }
        Ok(self.scale(&self.lc().inv()?))
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&Rational::from_integer((i as i64).into())))
            .collect();
        let mut p = Poly { field: self.field.clone(), coeffs };
        p.trim();
        p
    }

    pub fn eval(&self, x: &Fe) -> Fe {
        let mut acc = x.field().zero().lift_to(&self.field).unwrap_or_else(|_| x.field().zero());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `p(T + c)`.
    pub fn shift(&self, c: &Fe) -> Poly {
        let lin = Poly::new(&self.field.join(c.field()).unwrap_or_else(|_| self.field.clone()), vec![c.clone(), self.field.one()])
            .expect("field");
        let mut acc = Poly::zero(lin.field());
        for a in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Poly::constant(a.clone()));
        }
        acc
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let Some(dd) = d.degree() else {
            return Err(GermError::DivisionByZero);
        };
        let field = self.field.join(&d.field)?;
        let inv = d.lc().inv()?;
        let mut r = self.lift_to(&field)?;
        let mut q = vec![field.zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = &r.lc() * &inv;
            let shift = rd - dd;
            q[shift] = c.clone();
            for (i, b) in d.coeffs.iter().enumerate() {
                r.coeffs[i + shift] = &r.coeffs[i + shift] - &(&c * b);
            }
            r.coeffs[rd] = field.zero();
            r.trim();
        }
        let mut qp = Poly { field, coeffs: q };
        qp.trim();
        Ok((qp, r))
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, o: &Poly) -> Result<Poly> {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            a.monic()
        }
    }

    /// Yun's square-free decomposition: monic pairwise coprime `(factor, multiplicity)`.
    pub fn squarefree(&self) -> Result<Vec<(Poly, usize)>> {
        if self.is_zero() {
            return Err(GermError::ZeroInput("square-free decomposition of zero".into()));
        }
        let f = self.monic()?;
        let mut out = Vec::new();
        if f.degree() == Some(0) {
            return Ok(out);
        }
        let df = f.derivative();
        let a0 = f.gcd(&df)?;
        let mut b = f.divrem(&a0)?.0;
        let mut c = df.divrem(&a0)?.0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let a = b.gcd(&d)?;
            if a.degree() > Some(0) {
                out.push((a.clone(), i));
            }
            b = b.divrem(&a)?.0;
            if b.degree() == Some(0) || b.is_zero() {
                break;
            }
            c = d.divrem(&a)?.0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        Ok(out)
    }

    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
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
            } else if cs.contains(' ') {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

pub fn eval_q_at(coeffs: &[Rational], x: &Fe) -> Fe {
    let mut acc = x.field().zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * x) + &x.field().from_rational(c.clone());
    }
    acc
}

pub fn is_squarefree_q(coeffs: &[Rational]) -> bool {
    let p = Poly::from_rationals(coeffs);
    match p.gcd(&p.derivative()) {
        Ok(g) => g.degree() == Some(0),
        Err(_) => false,
    }
}

/// Multiplies out a factor list: `prod f_i^{e_i}`.
pub fn expand_factors(field: &Field, factors: &[(Poly, usize)]) -> Poly {
    factors.iter().fold(Poly::constant(field.one()), |acc, (f, e)| acc.mul(&f.pow(*e)))
}

pub fn rational_coeffs_to_string(coeffs: &[Rational], var: &str) -> String {
    Poly::from_rationals(coeffs).to_string_in(var)
}

pub fn q_is_one(q: &Rational) -> bool {
    q.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{rat, ratio};

    fn qp(v: &[i64]) -> Poly {
        Poly::from_rationals(&v.iter().map(|&x| rat(x)).collect::<Vec<_>>())
    }

    #[test]
    fn division_and_gcd() {
        let a = qp(&[-1, 0, 1]); // T^2 - 1
        let b = qp(&[1, 1]);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q, qp(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&qp(&[-1, 1])).unwrap(), qp(&[-1, 1]));
    }

    #[test]
    fn yun_decomposition() {
        // (T + 1/4)^3 (T - 2)
        let l = Poly::from_rationals(&[ratio(1, 4), rat(1)]);
        let p = l.pow(3).mul(&qp(&[-2, 1]));
        let sf = p.squarefree().unwrap();
        assert_eq!(sf, vec![(qp(&[-2, 1]), 1), (l, 3)]);
    }

    #[test]
    fn shift_matches_evaluation() {
        let p = qp(&[1, 2, 3]);
        let c = Field::rationals().from_int(2);
        let s = p.shift(&c);
        let x = Field::rationals().from_int(5);
        assert_eq!(s.eval(&x), p.eval(&(&x + &c)));
    }
}
