//! Towers of simple algebraic extensions of the rationals.
//!
//! A [`Field`] is either `Q` or a level `K[a]/(p(a))` stacked on a parent field, where `p`
//! is monic and irreducible over the parent. Elements ([`Fe`]) are dense coordinate vectors
//! over `Q`: an element `c_0 + c_1 a + ... + c_{d-1} a^{d-1}` of a level is stored as the
//! concatenation of the parent coordinates of `c_0, c_1, ...`. Consequently an element of an
//! ancestor field embeds by zero padding, which makes towers that share a prefix compatible.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};

use super::linalg;
use super::rational::{fmt_rational, rat, Rational};
use crate::error::{GermError, Result};

static MAX_TOWER_DEGREE: AtomicUsize = AtomicUsize::new(16);

/// Cap on the total degree `[K:Q]` of any tower built by the crate.
pub fn max_tower_degree() -> usize {
    MAX_TOWER_DEGREE.load(Ordering::Relaxed)
}

pub fn set_max_tower_degree(cap: usize) {
    MAX_TOWER_DEGREE.store(cap.max(1), Ordering::Relaxed);
}

pub struct Level {
    parent: Field,
    name: String,
    /// Monic minimal polynomial over the parent, low to high, `rel_degree + 1` entries.
    minpoly: Vec<Fe>,
    rel_degree: usize,
    total_degree: usize,
    depth: usize,
    primitive: OnceLock<Vec<Rational>>,
}

#[derive(Clone)]
pub struct Field(Option<Arc<Level>>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (None, None) => true,
            (Some(a), Some(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field[{}]", self.describe().join(" ; "))
    }
}

impl Field {
    pub fn rationals() -> Field {
        Field(None)
    }

    pub fn is_rationals(&self) -> bool {
        self.0.is_none()
    }

    /// Total degree over `Q`.
    pub fn degree(&self) -> usize {
        self.0.as_ref().map_or(1, |l| l.total_degree)
    }

    pub fn depth(&self) -> usize {
        self.0.as_ref().map_or(0, |l| l.depth)
    }

    pub fn parent(&self) -> Option<Field> {
        self.0.as_ref().map(|l| l.parent.clone())
    }

    pub fn rel_degree(&self) -> usize {
        self.0.as_ref().map_or(1, |l| l.rel_degree)
    }

    pub fn generator_name(&self) -> Option<&str> {
        self.0.as_ref().map(|l| l.name.as_str())
    }

    /// Minimal polynomial of the top generator over the parent (low to high).
    pub fn top_minpoly(&self) -> Option<&[Fe]> {
        self.0.as_ref().map(|l| l.minpoly.as_slice())
    }

    /// `true` when `self` is `other` or one of its ancestors.
    pub fn is_subfield_of(&self, other: &Field) -> bool {
        let mut cur = Some(other.clone());
        while let Some(c) = cur {
            if c.depth() < self.depth() {
                return false;
            }
            if &c == self {
                return true;
            }
            cur = c.parent();
        }
        false
    }

    /// The smaller of the two fields' common extension, if one contains the other.
    pub fn join(&self, other: &Field) -> Result<Field> {
        if self.is_subfield_of(other) {
            Ok(other.clone())
        } else if other.is_subfield_of(self) {
            Ok(self.clone())
        } else {
            Err(GermError::IncompatibleField)
        }
    }

    /// Chain of fields from `Q` up to `self` (inclusive).
    pub fn chain(&self) -> Vec<Field> {
        let mut out = vec![self.clone()];
        let mut cur = self.clone();
        while let Some(p) = cur.parent() {
            out.push(p.clone());
            cur = p;
        }
        out.reverse();
        out
    }

    /// Adjoins a root of `minpoly` (monic, irreducible over `self`, coefficients low to high).
    pub fn extend(&self, minpoly: &[Fe], name: Option<&str>) -> Result<Field> {
        let d = minpoly.len().saturating_sub(1);
        if d < 2 {
            return Err(GermError::InvalidInput(
                "extension polynomial must have degree at least 2".into(),
            ));
        }
        let total = self.degree() * d;
        if total > max_tower_degree() {
            return Err(GermError::Capacity {
                what: format!("tower degree {total}"),
                cap: max_tower_degree(),
            });
        }
        let lc = &minpoly[d];
        if !lc.is_one() {
            return Err(GermError::InvalidInput("extension polynomial must be monic".into()));
        }
        let coeffs = minpoly
            .iter()
            .map(|c| c.lift_to(self))
            .collect::<Result<Vec<_>>>()?;
        let depth = self.depth() + 1;
        Ok(Field(Some(Arc::new(Level {
            parent: self.clone(),
            name: name.map_or_else(|| format!("a{depth}"), str::to_string),
            minpoly: coeffs,
            rel_degree: d,
            total_degree: total,
            depth,
            primitive: OnceLock::new(),
        }))))
    }

    pub fn zero(&self) -> Fe {
        Fe { field: self.clone(), coords: vec![Rational::zero(); self.degree()] }
    }

    pub fn one(&self) -> Fe {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(&self, q: Rational) -> Fe {
        let mut coords = vec![Rational::zero(); self.degree()];
        coords[0] = q;
        Fe { field: self.clone(), coords }
    }

    pub fn from_int(&self, n: i64) -> Fe {
        self.from_rational(rat(n))
    }

    /// The generator adjoined at the top level (`1` for `Q`).
    pub fn generator(&self) -> Fe {
        match &self.0 {
            None => self.one(),
            Some(l) => {
                let mut coords = vec![Rational::zero(); l.total_degree];
                coords[l.parent.degree()] = Rational::one();
                Fe { field: self.clone(), coords }
            }
        }
    }

    /// Generators of every level, from the bottom, lifted into `self`.
    pub fn generators(&self) -> Vec<Fe> {
        self.chain()
            .iter()
            .skip(1)
            .map(|f| f.generator().lift_to(self).expect("ancestor"))
            .collect()
    }

    /// Unit vector `e_i` of the flattened `Q`-basis.
    pub fn basis_element(&self, i: usize) -> Fe {
        let mut coords = vec![Rational::zero(); self.degree()];
        coords[i] = Rational::one();
        Fe { field: self.clone(), coords }
    }

    /// A primitive element of `self` over `Q` (cached).
    pub fn primitive_element(&self) -> Fe {
        match &self.0 {
            None => self.one(),
            Some(l) => Fe {
                field: self.clone(),
                coords: l.primitive.get_or_init(|| find_primitive_element(self).coords).clone(),
            },
        }
    }

    /// Human-readable description of every level, bottom up.
    pub fn describe(&self) -> Vec<String> {
        self.chain()
            .iter()
            .skip(1)
            .map(|f| {
                let l = f.0.as_ref().expect("level");
                let mp: Vec<String> = l.minpoly.iter().map(|c| c.to_string()).collect();
                format!("{}: root of T^{} with coefficients [{}]", l.name, l.rel_degree, mp.join(", "))
            })
            .collect()
    }

    /// Minimal polynomials of every level as strings in the variable named by the level.
    pub fn describe_minpolys(&self) -> Vec<(String, String)> {
        self.chain()
            .iter()
            .skip(1)
            .map(|f| {
                let l = f.0.as_ref().expect("level");
                let mut terms = Vec::new();
                for (i, c) in l.minpoly.iter().enumerate().rev() {
                    if c.is_zero() {
                        continue;
                    }
                    let mono = match i {
                        0 => String::new(),
                        1 => l.name.clone(),
                        _ => format!("{}^{}", l.name, i),
                    };
                    let cs = c.to_string();
                    terms.push(if mono.is_empty() {
                        format!("({cs})")
                    } else if c.is_one() {
                        mono
                    } else {
                        format!("({cs})*{mono}")
                    });
                }
                (l.name.clone(), terms.join(" + "))
            })
            .collect()
    }
}

fn find_primitive_element(field: &Field) -> Fe {
    let gens = field.generators();
    if gens.len() == 1 {
        return gens[0].clone();
    }
    let n = field.degree();
    // gamma = a_1 + c_2 a_2 + ... with small integer weights
    for bound in 1i64..=8 {
        let mut weights = vec![1i64; gens.len()];
        loop {
            let mut g = field.zero();
            for (w, a) in weights.iter().zip(&gens) {
                g = &g + &(a * &field.from_int(*w));
            }
            let cp = g.charpoly_q();
            if super::upoly::is_squarefree_q(&cp) && cp.len() == n + 1 {
                return g;
            }
            // next weight vector in [1, bound]^k
            let mut i = 0;
            loop {
                if i == weights.len() {
                    break;
                }
                weights[i] += 1;
                if weights[i] <= bound {
                    break;
                }
                weights[i] = 1;
                i += 1;
            }
            if i == weights.len() {
                break;
            }
        }
    }
    unreachable!("a primitive element always exists among small integer combinations")
}

/// Element of a [`Field`].
#[derive(Clone)]
pub struct Fe {
    field: Field,
    coords: Vec<Rational>,
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render(&self.field, &self.coords))
    }
}

fn render(field: &Field, coords: &[Rational]) -> String {
    match &field.0 {
        None => fmt_rational(&coords[0]),
        Some(l) => {
            let pd = l.parent.degree();
            let mut parts = Vec::new();
            for i in 0..l.rel_degree {
                let chunk = &coords[i * pd..(i + 1) * pd];
                if chunk.iter().all(Zero::is_zero) {
                    continue;
                }
                let c = render(&l.parent, chunk);
                let is_one = chunk[0].is_one() && chunk[1..].iter().all(Zero::is_zero);
                parts.push(match i {
                    0 => c,
                    _ => {
                        let mono = if i == 1 { l.name.clone() } else { format!("{}^{}", l.name, i) };
                        if is_one {
                            mono
                        } else if chunk.iter().filter(|q| !q.is_zero()).count() == 1
                            && !c.contains('+')
                            && !c.contains(' ')
                        {
                            format!("{c}*{mono}")
                        } else {
                            format!("({c})*{mono}")
                        }
                    }
                });
            }
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join(" + ")
            }
        }
    }
}

impl PartialEq for Fe {
    fn eq(&self, other: &Self) -> bool {
        if self.field == other.field {
            return self.coords == other.coords;
        }
        match self.field.join(&other.field) {
            Ok(f) => {
                self.lift_to(&f).map(|a| a.coords) == other.lift_to(&f).map(|b| b.coords)
            }
            Err(_) => false,
        }
    }
}
impl Eq for Fe {}

impl From<Rational> for Fe {
    fn from(q: Rational) -> Fe {
        Field::rationals().from_rational(q)
    }
}

fn mul_coords(field: &Field, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    match &field.0 {
        None => vec![&a[0] * &b[0]],
        Some(l) => {
            let pd = l.parent.degree();
            let d = l.rel_degree;
            let chunk = |v: &[Rational], i: usize| -> Option<Vec<Rational>> {
                let c = &v[i * pd..(i + 1) * pd];
                if c.iter().all(Zero::is_zero) {
                    None
                } else {
                    Some(c.to_vec())
                }
            };
            let ac: Vec<_> = (0..d).map(|i| chunk(a, i)).collect();
            let bc: Vec<_> = (0..d).map(|i| chunk(b, i)).collect();
            let mut prod: Vec<Vec<Rational>> = vec![vec![Rational::zero(); pd]; 2 * d - 1];
            for (i, ai) in ac.iter().enumerate() {
                let Some(ai) = ai else { continue };
                for (j, bj) in bc.iter().enumerate() {
                    let Some(bj) = bj else { continue };
                    let p = mul_coords(&l.parent, ai, bj);
                    for (t, v) in prod[i + j].iter_mut().zip(p) {
                        *t += v;
                    }
                }
            }
            for k in (d..2 * d - 1).rev() {
                if prod[k].iter().all(Zero::is_zero) {
                    continue;
                }
                let lead = std::mem::replace(&mut prod[k], vec![Rational::zero(); pd]);
                for i in 0..d {
                    let m = &l.minpoly[i].coords;
                    if m.iter().all(Zero::is_zero) {
                        continue;
                    }
                    let p = mul_coords(&l.parent, &lead, m);
                    for (t, v) in prod[k - d + i].iter_mut().zip(p) {
                        *t -= v;
                    }
                }
            }
            prod.truncate(d);
            prod.into_iter().flatten().collect()
        }
    }
}

impl Fe {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn from_coords(field: &Field, coords: Vec<Rational>) -> Result<Fe> {
        if coords.len() != field.degree() {
            return Err(GermError::InvalidInput("coordinate vector has wrong length".into()));
        }
        Ok(Fe { field: field.clone(), coords })
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// `Some(q)` when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Embeds the element into an extension of its field.
    pub fn lift_to(&self, target: &Field) -> Result<Fe> {
        if &self.field == target {
            return Ok(self.clone());
        }
        if !self.field.is_subfield_of(target) {
            // allow rational elements to travel anywhere
            if let Some(q) = self.as_rational() {
                return Ok(target.from_rational(q));
            }
            return Err(GermError::IncompatibleField);
        }
        let mut coords = self.coords.clone();
        coords.resize(target.degree(), Rational::zero());
        Ok(Fe { field: target.clone(), coords })
    }

    /// Projects to a subfield, failing if the element does not lie in it.
    pub fn project_to(&self, sub: &Field) -> Result<Fe> {
        if !sub.is_subfield_of(&self.field) {
            return Err(GermError::IncompatibleField);
        }
        let n = sub.degree();
        if self.coords[n..].iter().any(|q| !q.is_zero()) {
            return Err(GermError::InvalidInput("element does not lie in the subfield".into()));
        }
        Ok(Fe { field: sub.clone(), coords: self.coords[..n].to_vec() })
    }

    fn pair(&self, other: &Fe) -> Result<(Field, Fe, Fe)> {
        if self.field == other.field {
            return Ok((self.field.clone(), self.clone(), other.clone()));
        }
        match self.field.join(&other.field) {
            Ok(f) => Ok((f.clone(), self.lift_to(&f)?, other.lift_to(&f)?)),
            Err(e) => {
                if let Some(q) = other.as_rational() {
                    Ok((self.field.clone(), self.clone(), self.field.from_rational(q)))
                } else if let Some(q) = self.as_rational() {
                    Ok((other.field.clone(), other.field.from_rational(q), other.clone()))
                } else {
                    Err(e)
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Fe) -> Result<Fe> {
        let (f, a, b) = self.pair(other)?;
        let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        Ok(Fe { field: f, coords })
    }

    pub fn checked_sub(&self, other: &Fe) -> Result<Fe> {
        let (f, a, b) = self.pair(other)?;
        let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect();
        Ok(Fe { field: f, coords })
    }

    pub fn checked_mul(&self, other: &Fe) -> Result<Fe> {
        if self.field == other.field {
            return Ok(self.mul_same(other));
        }
        if let Some(q) = other.as_rational() {
            return Ok(self.scale(&q));
        }
        if let Some(q) = self.as_rational() {
            return Ok(other.scale(&q));
        }
        let (f, a, b) = self.pair(other)?;
        Ok(Fe { coords: mul_coords(&f, &a.coords, &b.coords), field: f })
    }

    fn mul_same(&self, other: &Fe) -> Fe {
        if self.field.is_rationals() {
            return Fe { field: self.field.clone(), coords: vec![&self.coords[0] * &other.coords[0]] };
        }
        Fe { field: self.field.clone(), coords: mul_coords(&self.field, &self.coords, &other.coords) }
    }

    pub fn scale(&self, q: &Rational) -> Fe {
        Fe { field: self.field.clone(), coords: self.coords.iter().map(|c| c * q).collect() }
    }

    pub fn neg(&self) -> Fe {
        Fe { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn pow(&self, mut e: u64) -> Fe {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_same(&base);
            }
        }
        acc
    }

    /// Matrix of multiplication by `self` on the flattened `Q`-basis (column `j` = `self * e_j`).
    pub fn mult_matrix(&self) -> Vec<Vec<Rational>> {
        let n = self.field.degree();
        let cols: Vec<Vec<Rational>> = (0..n)
            .map(|j| mul_coords(&self.field, &self.coords, &self.field.basis_element(j).coords))
            .collect();
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }

    pub fn inv(&self) -> Result<Fe> {
        if self.is_zero() {
            return Err(GermError::DivisionByZero);
        }
        if self.field.is_rationals() {
            return Ok(Fe { field: self.field.clone(), coords: vec![self.coords[0].recip()] });
        }
        let n = self.field.degree();
        let mut e0 = vec![Rational::zero(); n];
        e0[0] = Rational::one();
        let x = linalg::solve(self.mult_matrix(), e0)
            .ok_or_else(|| GermError::Inconsistency("tower level is not a field".into()))?;
        Ok(Fe { field: self.field.clone(), coords: x })
    }

    pub fn checked_div(&self, other: &Fe) -> Result<Fe> {
        self.checked_mul(&other.inv()?)
    }

    /// Trace over `Q`.
    pub fn trace_q(&self) -> Rational {
        let m = self.mult_matrix();
        (0..m.len()).fold(Rational::zero(), |acc, i| acc + &m[i][i])
    }

    /// Trace relative to an ancestor field `base`.
    pub fn trace_to(&self, base: &Field) -> Result<Fe> {
        if !base.is_subfield_of(&self.field) {
            return Err(GermError::IncompatibleField);
        }
        let nb = base.degree();
        let r = self.field.degree() / nb;
        let mut acc = vec![Rational::zero(); nb];
        for j in 0..r {
            let e = self.field.basis_element(j * nb);
            let p = mul_coords(&self.field, &self.coords, &e.coords);
            for (a, v) in acc.iter_mut().zip(&p[j * nb..(j + 1) * nb]) {
                *a += v;
            }
        }
        Ok(Fe { field: base.clone(), coords: acc })
    }

    /// Norm over `Q`.
    pub fn norm_q(&self) -> Rational {
        linalg::det(self.mult_matrix())
    }

    /// Characteristic polynomial over `Q` of multiplication by `self` (low to high, monic).
    pub fn charpoly_q(&self) -> Vec<Rational> {
        let n = self.field.degree();
        let m = self.mult_matrix();
        let xs: Vec<Rational> = (0..=n as i64).map(rat).collect();
        let ys: Vec<Rational> = xs
            .iter()
            .map(|x| {
                let mut a = m.iter().map(|row| row.iter().map(|v| -v).collect::<Vec<_>>()).collect::<Vec<_>>();
                for (i, row) in a.iter_mut().enumerate() {
                    row[i] += x;
                }
                linalg::det(a)
            })
            .collect();
        linalg::interpolate(&xs, &ys)
    }

    /// Minimal polynomial over `Q` (monic, low to high).
    pub fn minpoly_q(&self) -> Vec<Rational> {
        if let Some(q) = self.as_rational() {
            return vec![-q, Rational::one()];
        }
        let cp = self.charpoly_q();
        for (fac, _) in super::factor::factor_q(&cp) {
            if super::upoly::eval_q_at(&fac, self).is_zero() {
                return fac;
            }
        }
        unreachable!("an element is a root of its characteristic polynomial")
    }
}

impl std::ops::Add for &Fe {
    type Output = Fe;
    fn add(self, rhs: &Fe) -> Fe {
        self.checked_add(rhs).expect("incompatible coefficient fields")
    }
}
impl std::ops::Sub for &Fe {
    type Output = Fe;
    fn sub(self, rhs: &Fe) -> Fe {
        self.checked_sub(rhs).expect("incompatible coefficient fields")
    }
}
impl std::ops::Mul for &Fe {
    type Output = Fe;
    fn mul(self, rhs: &Fe) -> Fe {
        self.checked_mul(rhs).expect("incompatible coefficient fields")
    }
}
impl std::ops::Neg for &Fe {
    type Output = Fe;
    fn neg(self) -> Fe {
        Fe::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::ratio;

    fn sqrt2() -> Field {
        let q = Field::rationals();
        q.extend(&[q.from_int(-2), q.zero(), q.one()], Some("s")).unwrap()
    }

    #[test]
    fn quadratic_arithmetic() {
        let k = sqrt2();
        let s = k.generator();
        assert_eq!(&s * &s, k.from_int(2));
        let a = &s + &k.one();
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        assert_eq!(a.norm_q(), rat(-1));
        assert_eq!(a.trace_q(), rat(2));
        assert_eq!(a.minpoly_q(), vec![rat(-1), rat(-2), rat(1)]);
    }

    #[test]
    fn two_level_tower() {
        // Q(sqrt 2)(b), b^2 = sqrt 2
        let k = sqrt2();
        let s = k.generator();
        let l = k.extend(&[s.neg(), k.zero(), k.one()], Some("b")).unwrap();
        let b = l.generator();
        assert_eq!(l.degree(), 4);
        let b4 = b.pow(4);
        assert_eq!(b4, l.from_int(2));
        assert_eq!(b.minpoly_q(), vec![rat(-2), rat(0), rat(0), rat(0), rat(1)]);
        let half = ratio(1, 2);
        let c = &b.scale(&half) + &s.lift_to(&l).unwrap();
        assert!((&c * &c.inv().unwrap()).is_one());
        assert_eq!(b.trace_to(&k).unwrap(), k.zero());
        assert_eq!(b.pow(2).trace_to(&k).unwrap(), s.scale(&rat(2)));
        let p = l.primitive_element();
        assert_eq!(p.charpoly_q().len(), 5);
    }

    #[test]
    fn incompatible_towers_error() {
        let a = sqrt2();
        let b = sqrt2();
        assert_eq!(a.generator().checked_add(&b.generator()), Err(GermError::IncompatibleField));
        // rationals mix with anything
        assert!(a.generator().checked_add(&b.one()).is_ok());
    }

    #[test]
    fn capacity_is_enforced() {
        let q = Field::rationals();
        let mut coeffs = vec![q.zero(); 18];
        coeffs[0] = q.from_int(-2);
        coeffs[17] = q.one();
        assert!(q.extend(&coeffs, None).unwrap_err().is_capacity());
    }
}
