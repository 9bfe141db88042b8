//! Sparse bivariate polynomials `sum a_ij x^i y^j` over a tower field.

use std::collections::BTreeMap;
use std::fmt;

use super::field::{Fe, Field};
use super::rational::{rat, Rational};
use super::upoly::Poly;
use crate::error::{GermError, Result};

pub type Exp = (u32, u32);

/// Finite support map from `(i, j)` (exponent of `x`, exponent of `y`) to nonzero coefficients.
#[derive(Clone)]
pub struct BiPoly {
    field: Field,
    terms: BTreeMap<Exp, Fe>,
}

/// Equality of coefficients; rational values compare equal across fields.
impl PartialEq for BiPoly {
    fn eq(&self, o: &Self) -> bool {
        self.terms.len() == o.terms.len()
            && self.terms.iter().zip(&o.terms).all(|((e1, c1), (e2, c2))| e1 == e2 && c1 == c2)
    }
}
impl Eq for BiPoly {}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_in("x", "y"))
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_in("x", "y"))
    }
}

impl BiPoly {
    pub fn zero(field: &Field) -> BiPoly {
        BiPoly { field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn one(field: &Field) -> BiPoly {
        BiPoly::constant(field.one())
    }

    pub fn constant(c: Fe) -> BiPoly {
        BiPoly::monomial(c, 0, 0)
    }

    pub fn monomial(c: Fe, i: u32, j: u32) -> BiPoly {
        let field = c.field().clone();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        BiPoly { field, terms }
    }

    pub fn x() -> BiPoly {
        BiPoly::monomial(Field::rationals().one(), 1, 0)
    }

    pub fn y() -> BiPoly {
        BiPoly::monomial(Field::rationals().one(), 0, 1)
    }

    /// Rational polynomial from `(i, j, coefficient)` triples; repeated exponents add up.
    pub fn from_rational_terms(terms: &[(u32, u32, Rational)]) -> BiPoly {
        let q = Field::rationals();
        let mut p = BiPoly::zero(&q);
        for (i, j, c) in terms {
            p.add_term((*i, *j), q.from_rational(c.clone()));
        }
        p
    }

    /// Shorthand for integer coefficients.
    pub fn from_int_terms(terms: &[(u32, u32, i64)]) -> BiPoly {
        let t: Vec<_> = terms.iter().map(|&(i, j, c)| (i, j, rat(c))).collect();
        BiPoly::from_rational_terms(&t)
    }

    pub fn from_terms(field: &Field, terms: impl IntoIterator<Item = (Exp, Fe)>) -> Result<BiPoly> {
        let mut p = BiPoly::zero(field);
        for (e, c) in terms {
            p.add_term(e, c.lift_to(field)?);
        }
        Ok(p)
    }

    /// Adds `c x^i y^j` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, e: Exp, c: Fe) {
        if c.is_zero() {
            return;
        }
        if !c.field().is_subfield_of(&self.field) {
            if c.as_rational().is_none() {
                let f = c.field().clone();
                *self = self.lift_to(&f).expect("incompatible coefficient fields");
            }
        }
        let c = c.lift_to(&self.field).expect("incompatible coefficient fields");
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> &BTreeMap<Exp, Fe> {
        &self.terms
    }

    pub fn support(&self) -> Vec<Exp> {
        self.terms.keys().copied().collect()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Fe {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Fe {
        self.coeff(0, 0)
    }

    /// `true` when every coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.terms.values().all(Fe::is_rational)
    }

    pub fn lift_to(&self, target: &Field) -> Result<BiPoly> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            terms.insert(*e, c.lift_to(target)?);
        }
        Ok(BiPoly { field: target.clone(), terms })
    }

    /// Moves rational-coefficient polynomials back to `Q`.
    pub fn to_rationals(&self) -> Option<BiPoly> {
        let q = Field::rationals();
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            terms.insert(*e, q.from_rational(c.as_rational()?));
        }
        Some(BiPoly { field: q, terms })
    }

    fn common_field(&self, o: &BiPoly) -> Field {
        if self.field.is_subfield_of(&o.field) {
            o.field.clone()
        } else if o.field.is_subfield_of(&self.field) || o.is_rational() {
            self.field.clone()
        } else if self.is_rational() {
            o.field.clone()
        } else {
            panic!("incompatible coefficient fields")
        }
    }

    pub fn checked_add(&self, o: &BiPoly) -> Result<BiPoly> {
        self.field.join(&o.field).or_else(|e| {
            if self.is_rational() || o.is_rational() {
                Ok(self.field.clone())
            } else {
                Err(e)
            }
        })?;
        Ok(self.add(o))
    }

    pub fn add(&self, o: &BiPoly) -> BiPoly {
        let f = self.common_field(o);
        let mut out = self.lift_to(&f).unwrap_or_else(|_| self.clone());
        out.field = f;
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly { field: self.field.clone(), terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect() }
    }

    pub fn sub(&self, o: &BiPoly) -> BiPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        let f = self.common_field(o);
        let mut out = BiPoly::zero(&f);
        for ((i1, j1), a) in &self.terms {
            for ((i2, j2), b) in &o.terms {
                out.add_term((i1 + i2, j1 + j2), a * b);
            }
        }
        out
    }

    /// Product keeping only terms with `i + j < prec`.
    pub fn mul_trunc(&self, o: &BiPoly, prec: u32) -> BiPoly {
        let f = self.common_field(o);
        let mut out = BiPoly::zero(&f);
        for ((i1, j1), a) in &self.terms {
            if i1 + j1 >= prec {
                continue;
            }
            for ((i2, j2), b) in &o.terms {
                if i1 + j1 + i2 + j2 < prec {
                    out.add_term((i1 + i2, j1 + j2), a * b);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Fe) -> BiPoly {
        let mut out = BiPoly::zero(&self.field);
        for (e, a) in &self.terms {
            out.add_term(*e, a * c);
        }
        out
    }

    pub fn scale_q(&self, q: &Rational) -> BiPoly {
        let mut out = BiPoly::zero(&self.field);
        for (e, a) in &self.terms {
            out.add_term(*e, a.scale(q));
        }
        out
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let mut acc = BiPoly::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn pow_trunc(&self, e: u32, prec: u32) -> BiPoly {
        let mut acc = BiPoly::one(&self.field).truncate(prec);
        for _ in 0..e {
            acc = acc.mul_trunc(self, prec);
        }
        acc
    }

    pub fn dx(&self) -> BiPoly {
        let mut out = BiPoly::zero(&self.field);
        for ((i, j), c) in &self.terms {
            if *i > 0 {
                out.add_term((i - 1, *j), c.scale(&rat(*i as i64)));
            }
        }
        out
    }

    pub fn dy(&self) -> BiPoly {
        let mut out = BiPoly::zero(&self.field);
        for ((i, j), c) in &self.terms {
            if *j > 0 {
                out.add_term((*i, j - 1), c.scale(&rat(*j as i64)));
            }
        }
        out
    }

    /// Drops every term of total degree `>= prec`.
    pub fn truncate(&self, prec: u32) -> BiPoly {
        BiPoly {
            field: self.field.clone(),
            terms: self.terms.iter().filter(|((i, j), _)| i + j < prec).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    /// Keeps the terms for which `keep(i, j)` holds.
    pub fn filter(&self, keep: impl Fn(u32, u32) -> bool) -> BiPoly {
        BiPoly {
            field: self.field.clone(),
            terms: self.terms.iter().filter(|((i, j), _)| keep(*i, *j)).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    /// Lowest total degree of a term (`None` for zero).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).min()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0).max()
    }

    pub fn degree_y(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.1).max()
    }

    /// Largest `a` with `x^a | self`.
    pub fn x_valuation(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0).min()
    }

    pub fn y_valuation(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.1).min()
    }

    /// Divides by `x^a y^b` (the monomial must divide every term).
    pub fn div_monomial(&self, a: u32, b: u32) -> BiPoly {
        BiPoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|((i, j), c)| ((i - a, j - b), c.clone())).collect(),
        }
    }

    pub fn mul_monomial(&self, a: u32, b: u32) -> BiPoly {
        BiPoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|((i, j), c)| ((i + a, j + b), c.clone())).collect(),
        }
    }

    pub fn swap_xy(&self) -> BiPoly {
        BiPoly { field: self.field.clone(), terms: self.terms.iter().map(|((i, j), c)| ((*j, *i), c.clone())).collect() }
    }

    /// `self(a x, b y)`.
    pub fn rescale(&self, a: &Fe, b: &Fe) -> BiPoly {
        let mut out = BiPoly::zero(&self.field);
        for ((i, j), c) in &self.terms {
            out.add_term((*i, *j), &(c * &a.pow(*i as u64)) * &b.pow(*j as u64));
        }
        out
    }

    /// `self(x + c y, y)`.
    pub fn shear(&self, c: &Fe) -> BiPoly {
        let lin = BiPoly::x().add(&BiPoly::monomial(c.clone(), 0, 1));
        self.substitute(&lin, &BiPoly::y())
    }

    /// `self(X, Y)` for bivariate polynomials `X`, `Y`.
    pub fn substitute(&self, xs: &BiPoly, ys: &BiPoly) -> BiPoly {
        self.substitute_trunc(xs, ys, None)
    }

    pub fn substitute_trunc(&self, xs: &BiPoly, ys: &BiPoly, prec: Option<u32>) -> BiPoly {
        let dx = self.degree_x().unwrap_or(0);
        let dy = self.degree_y().unwrap_or(0);
        let mul = |a: &BiPoly, b: &BiPoly| match prec {
            Some(p) => a.mul_trunc(b, p),
            None => a.mul(b),
        };
        let f = self.field.clone();
        let mut xp = vec![BiPoly::one(&f)];
        for k in 1..=dx as usize {
            xp.push(mul(&xp[k - 1], xs));
        }
        let mut yp = vec![BiPoly::one(&f)];
        for k in 1..=dy as usize {
            yp.push(mul(&yp[k - 1], ys));
        }
        let mut out = BiPoly::zero(&f);
        for ((i, j), c) in &self.terms {
            let t = mul(&xp[*i as usize], &yp[*j as usize]).scale(c);
            out = out.add(&t);
        }
        match prec {
            Some(p) => out.truncate(p),
            None => out,
        }
    }

    pub fn eval(&self, x: &Fe, y: &Fe) -> Fe {
        let mut acc = self.field.zero();
        for ((i, j), c) in &self.terms {
            acc = &acc + &(&(c * &x.pow(*i as u64)) * &y.pow(*j as u64));
        }
        acc
    }

    /// Coefficients in `y`: entry `j` is the polynomial in `x` multiplying `y^j`.
    pub fn y_coeffs(&self) -> Vec<Poly> {
        let dy = match self.degree_y() {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let dx = self.degree_x().unwrap_or(0) as usize;
        let mut rows = vec![vec![self.field.zero(); dx + 1]; dy + 1];
        for ((i, j), c) in &self.terms {
            rows[*j as usize][*i as usize] = c.clone();
        }
        rows.into_iter().map(|r| Poly::new(&self.field, r).expect("field")).collect()
    }

    pub fn from_y_coeffs(field: &Field, cs: &[Poly]) -> BiPoly {
        let mut out = BiPoly::zero(field);
        for (j, p) in cs.iter().enumerate() {
            for (i, c) in p.coeffs().iter().enumerate() {
                out.add_term((i as u32, j as u32), c.clone());
            }
        }
        out
    }

    /// `self(x0, y)` as a polynomial in `y`.
    pub fn eval_x(&self, x0: &Fe) -> Poly {
        let field = self.field.join(x0.field()).unwrap_or_else(|_| self.field.clone());
        let cs: Vec<Fe> = self.y_coeffs().iter().map(|p| p.eval(x0)).collect();
        Poly::new(&field, cs).expect("field")
    }

    /// `self(x, 0)` as a polynomial in `x`.
    pub fn at_y_zero(&self) -> Poly {
        let dx = self.degree_x().unwrap_or(0) as usize;
        let mut cs = vec![self.field.zero(); dx + 1];
        for ((i, j), c) in &self.terms {
            if *j == 0 {
                cs[*i as usize] = c.clone();
            }
        }
        Poly::new(&self.field, cs).expect("field")
    }

    /// `self(0, y)` as a polynomial in `y`.
    pub fn at_x_zero(&self) -> Poly {
        self.swap_xy().at_y_zero()
    }

    /// Leading term under lex order with `y > x`.
    fn lead(&self) -> Option<(Exp, &Fe)> {
        self.terms.iter().max_by_key(|((i, j), _)| (*j, *i)).map(|(e, c)| (*e, c))
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &BiPoly) -> Option<BiPoly> {
        let ((di, dj), dc) = d.lead()?;
        let inv = dc.inv().ok()?;
        let mut r = self.clone();
        let mut q = BiPoly::zero(&self.common_field(d));
        while let Some(((ri, rj), rc)) = r.lead() {
            if ri < di || rj < dj {
                return None;
            }
            let c = rc * &inv;
            let m = BiPoly::monomial(c, ri - di, rj - dj);
            r = r.sub(&m.mul(d));
            q = q.add(&m);
        }
        Some(q)
    }

    /// Gcd in `K[x, y]`, normalised to leading coefficient 1 under lex order `y > x`.
    pub fn gcd(&self, o: &BiPoly) -> Result<BiPoly> {
        let f = self.common_field(o);
        if self.is_zero() {
            return o.normalized();
        }
        if o.is_zero() {
            return self.normalized();
        }
        let a = self.y_coeffs().into_iter().map(|p| p.lift_to(&f)).collect::<Result<Vec<_>>>()?;
        let b = o.y_coeffs().into_iter().map(|p| p.lift_to(&f)).collect::<Result<Vec<_>>>()?;
        let ca = content(&a)?;
        let cb = content(&b)?;
        let c = ca.gcd(&cb)?;
        let mut p = prim_part(&a, &ca)?;
        let mut q = prim_part(&b, &cb)?;
        if p.len() < q.len() {
            std::mem::swap(&mut p, &mut q);
        }
        while q.len() > 1 {
            let r = pseudo_rem(&p, &q);
            if r.is_empty() {
                break;
            }
            let cr = content(&r)?;
            p = q;
            q = prim_part(&r, &cr)?;
        }
        let g = if q.len() == 1 { vec![Poly::constant(f.one())] } else { q };
        let g: Vec<Poly> = g.iter().map(|p| p.mul(&c)).collect();
        BiPoly::from_y_coeffs(&f, &g).normalized()
    }

    /// Scales so that the lex-leading coefficient is 1.
    pub fn normalized(&self) -> Result<BiPoly> {
        match self.lead() {
            None => Ok(self.clone()),
            Some((_, c)) => Ok(self.scale(&c.inv()?)),
        }
    }

    /// Square-free part in `K[x, y]`.
    pub fn squarefree_part(&self) -> Result<BiPoly> {
        if self.is_zero() {
            return Err(GermError::ZeroInput("square-free part of zero".into()));
        }
        let xs = self.x_valuation().unwrap_or(0).min(1);
        let ys = self.y_valuation().unwrap_or(0).min(1);
        let core = self.div_monomial(self.x_valuation().unwrap_or(0), self.y_valuation().unwrap_or(0));
        let mut g = core.gcd(&core.dy())?;
        g = g.gcd(&core.dx())?;
        let red = core.div_exact(&g).ok_or_else(|| GermError::Inconsistency("gcd does not divide".into()))?;
        Ok(red.mul_monomial(xs, ys).normalized()?)
    }

    /// Square-free decomposition `self = c * prod g_k^k` in `K[x, y]`, by repeated gcds.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(BiPoly, u32)>> {
        if self.is_zero() {
            return Err(GermError::ZeroInput("square-free decomposition of zero".into()));
        }
        let mut out = Vec::new();
        let xa = self.x_valuation().unwrap_or(0);
        let yb = self.y_valuation().unwrap_or(0);
        let core = self.div_monomial(xa, yb);
        // a_k = product of factors of multiplicity >= k
        let mut cur = core.clone();
        let mut levels = Vec::new();
        while cur.total_degree().unwrap_or(0) > 0 {
            let r = cur.squarefree_part()?;
            levels.push(r.clone());
            cur = cur
                .div_exact(&r)
                .ok_or_else(|| GermError::Inconsistency("square-free part does not divide".into()))?;
        }
        for k in 0..levels.len() {
            let next = levels.get(k + 1).cloned().unwrap_or_else(|| BiPoly::one(self.field()));
            let g = levels[k]
                .div_exact(&next)
                .ok_or_else(|| GermError::Inconsistency("square-free levels do not nest".into()))?;
            if g.total_degree().unwrap_or(0) > 0 {
                out.push((g.normalized()?, k as u32 + 1));
            }
        }
        if xa > 0 {
            out.push((BiPoly::x(), xa));
        }
        if yb > 0 {
            out.push((BiPoly::y(), yb));
        }
        Ok(out)
    }

    /// Terms sorted for printing: by total degree, then by decreasing power of the second variable.
    pub fn sorted_terms(&self) -> Vec<(Exp, Fe)> {
        let mut v: Vec<(Exp, Fe)> = self.terms.iter().map(|(e, c)| (*e, c.clone())).collect();
        v.sort_by_key(|((i, j), _)| (i + j, std::cmp::Reverse(*j)));
        v
    }

    pub fn to_string_in(&self, xv: &str, yv: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, ((i, j), c)) in self.sorted_terms().into_iter().enumerate() {
            let mut mono = Vec::new();
            for (v, e) in [(xv, i), (yv, j)] {
                match e {
                    0 => {}
                    1 => mono.push(v.to_string()),
                    _ => mono.push(format!("{v}^{e}")),
                }
            }
            let mono = mono.join("*");
            let (neg, body) = match c.as_rational() {
                Some(q) => {
                    let neg = q < Rational::from_integer(0.into());
                    let a = if neg { -q } else { q };
                    let s = super::rational::fmt_rational(&a);
                    let s = if s.contains('/') && !mono.is_empty() { format!("({s})") } else { s };
                    (neg, if mono.is_empty() { s } else if a == rat(1) { mono.clone() } else { format!("{s}*{mono}") })
                }
                None => {
                    let s = format!("({c})");
                    (false, if mono.is_empty() { s } else { format!("{s}*{mono}") })
                }
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

fn content(cs: &[Poly]) -> Result<Poly> {
    let mut g = Poly::zero(cs[0].field());
    for c in cs {
        g = g.gcd(c)?;
        if g.degree() == Some(0) {
            break;
        }
    }
    Ok(g)
}

fn prim_part(cs: &[Poly], c: &Poly) -> Result<Vec<Poly>> {
    cs.iter().map(|p| Ok(p.divrem(c)?.0)).collect()
}

/// Pseudo-remainder of `a` by `b` as polynomials in `y` over `K[x]` (trimmed).
fn pseudo_rem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r: Vec<Poly> = a.to_vec();
    while r.len() > db {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for k in 0..r.len() {
            r[k] = r[k].mul(&lb);
        }
        for (k, bk) in b.iter().enumerate() {
            r[k + shift] = r[k + shift].sub(&bk.mul(&lr));
        }
        while r.last().is_some_and(Poly::is_zero) {
            r.pop();
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_int_terms(t)
    }

    #[test]
    fn difference_of_squares_and_derivative() {
        let a = p(&[(1, 0, 1), (0, 1, 1)]);
        let b = p(&[(1, 0, 1), (0, 1, -1)]);
        assert_eq!(a.mul(&b), p(&[(2, 0, 1), (0, 2, -1)]));
        assert_eq!(p(&[(0, 2, 1), (3, 0, -1)]).dy(), p(&[(0, 1, 2)]));
        assert!(p(&[(0, 0, 7)]).dx().is_zero());
    }

    #[test]
    fn gcd_and_exact_division() {
        let f = p(&[(0, 2, 1), (3, 0, -1)]);
        let g = p(&[(0, 1, 1), (1, 0, 1)]);
        let fg = f.mul(&g);
        let fg2 = f.mul(&g).mul(&g);
        assert_eq!(fg.gcd(&fg2).unwrap(), fg.normalized().unwrap());
        assert_eq!(fg.div_exact(&g).unwrap(), f);
        assert!(f.div_exact(&g).is_none());
        let dec = fg2.squarefree_decomposition().unwrap();
        assert_eq!(dec, vec![(f.normalized().unwrap(), 1), (g.normalized().unwrap(), 2)]);
    }

    #[test]
    fn display_order() {
        assert_eq!(p(&[(0, 2, 1), (3, 0, -1)]).to_string_in("x", "y"), "y^2 - x^3");
        let q = BiPoly::from_rational_terms(&[(1, 1, super::super::rational::ratio(1, 2)), (4, 0, rat(1))]);
        assert_eq!(q.to_string(), "(1/2)*x*y + x^4");
    }
}
