//! Characteristic exponents and value semigroups of branches.

use super::Branch;
use crate::algebra::rational::{gcd_u64, ratio};
use crate::algebra::series::Series;
use crate::error::{GermError, Result};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacteristicData {
    /// `beta_0 = multiplicity, beta_1 < beta_2 < ...`
    pub beta: Vec<u32>,
    /// `e_q = gcd(beta_0, ..., beta_q)`, ending at 1.
    pub e: Vec<u32>,
}

impl CharacteristicData {
    /// Minimal generators of the value semigroup.
    pub fn semigroup(&self) -> Vec<u32> {
        semigroup_from_characteristic(&self.beta)
    }

    /// Conductor of the semigroup: `sum (e_{q-1} - e_q) beta_q - beta_0 + 1`.
    pub fn conductor(&self) -> u32 {
        let mut c: i64 = 1 - self.beta[0] as i64;
        for q in 1..self.beta.len() {
            c += (self.e[q - 1] as i64 - self.e[q] as i64) * self.beta[q] as i64;
        }
        c as u32
    }
}

/// `bar beta_{q+1} = (e_{q-1}/e_q) bar beta_q + beta_{q+1} - beta_q`.
pub fn semigroup_from_characteristic(beta: &[u32]) -> Vec<u32> {
    let mut e = vec![beta[0]];
    for b in &beta[1..] {
        let last = *e.last().unwrap();
        e.push(gcd_u64(last as u64, *b as u64) as u32);
    }
    let mut bar = vec![beta[0]];
    if beta.len() > 1 {
        bar.push(beta[1]);
    }
    for q in 1..beta.len().saturating_sub(1) {
        bar.push((e[q - 1] / e[q]) * bar[q] + beta[q + 1] - beta[q]);
    }
    bar
}

/// Scans exponents of `s` (as a series in the parameter, with `beta_0 = m`).
fn scan(m: u32, s: &Series) -> Result<CharacteristicData> {
    let mut beta = vec![m];
    let mut e = vec![m];
    for (k, c) in s.coeffs().iter().enumerate() {
        if *e.last().unwrap() == 1 {
            break;
        }
        if c.is_zero() || k == 0 {
            continue;
        }
        let g = gcd_u64(*e.last().unwrap() as u64, k as u64) as u32;
        if g < *e.last().unwrap() {
            beta.push(k as u32);
            e.push(g);
        }
    }
    if *e.last().unwrap() != 1 {
        return Err(GermError::Precision(format!(
            "tail known to t^{} does not reach the last characteristic exponent",
            s.prec()
        )));
    }
    Ok(CharacteristicData { beta, e })
}

/// Characteristic exponents of a branch, using the coordinate of smaller order as the
/// transversal parameter.
pub fn characteristic_data(b: &Branch) -> Result<CharacteristicData> {
    let w = if b.exact { b.tail_to(b.prec().max(b.m as usize + 1)) } else { b.tail.clone() };
    let v = match w.valuation() {
        Some(v) => v as u32,
        None if b.exact => return Ok(CharacteristicData { beta: vec![1], e: vec![1] }),
        None if w.prec() > b.m as usize => b.m,
        None => return Err(GermError::Precision("tail vanishes to the known precision".into())),
    };
    if b.m == 1 || v == 1 {
        return Ok(CharacteristicData { beta: vec![1], e: vec![1] });
    }
    if v >= b.m {
        return scan(b.m, &w);
    }
    // w = c t^v W(t): put s = t W^{1/v}, so w = c s^v, and expand the monomial coordinate in s
    let c = w.coeff(v as usize);
    let unit = w.shift_down(v as usize)?.scale(&c.inv()?);
    let root = unit.pow_rational(&ratio(1, v as i64))?;
    let s_of_t = root.shift_up(1);
    let t_of_s = s_of_t.reverse()?;
    let mono = t_of_s.pow(b.m as usize);
    scan(v, &mono)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::bipoly::BiPoly;
    use crate::puiseux::puiseux_expand;

    fn p(t: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_int_terms(t)
    }

    fn chars_of(f: &BiPoly) -> CharacteristicData {
        let e = puiseux_expand(f, 24).unwrap();
        characteristic_data(&e.branches[0]).unwrap()
    }

    #[test]
    fn cusp_and_smooth() {
        let c = chars_of(&p(&[(0, 2, 1), (3, 0, -1)]));
        assert_eq!((c.beta.clone(), c.e.clone()), (vec![2, 3], vec![2, 1]));
        assert_eq!(c.semigroup(), vec![2, 3]);
        let c = chars_of(&p(&[(0, 1, 1), (2, 0, -1)]));
        assert_eq!((c.beta, c.e), (vec![1], vec![1]));
        assert_eq!(chars_of(&p(&[(0, 2, 1), (5, 0, -1)])).semigroup(), vec![2, 5]);
    }

    #[test]
    fn two_pairs() {
        assert_eq!(semigroup_from_characteristic(&[4, 6, 7]), vec![4, 6, 13]);
        // (y^2 - x^3)^2 - x^5 y: beta = (4; 6, 7)
        let f = p(&[(0, 2, 1), (3, 0, -1)]).pow(2).sub(&p(&[(5, 1, 1)]));
        let c = chars_of(&f);
        assert_eq!(c.beta, vec![4, 6, 7]);
        assert_eq!(c.e, vec![4, 2, 1]);
        assert_eq!(c.semigroup(), vec![4, 6, 13]);
        assert_eq!(c.conductor(), 16);
    }

    #[test]
    fn tangent_to_the_y_axis() {
        // x^2 = y^3 written with the roles of x and y exchanged
        let c = chars_of(&p(&[(2, 0, 1), (0, 3, -1)]));
        assert_eq!(c.beta, vec![2, 3]);
    }
}
