//! Discriminant by elimination: an independent cross-check of the branch pushforward.

use crate::algebra::bipoly::BiPoly;
use crate::algebra::field::Field;
use crate::algebra::linalg::{det, interpolate};
use crate::algebra::rational::{rat, Rational};
use crate::discriminant::{discriminant, jacobian, MapGerm};
use crate::error::{GermError, Result};
use crate::local::IntersectionNumber;

/// Shears tried when looking for coordinates with constant leading coefficients.
const SHEARS: i64 = 8;

#[derive(Clone, Debug)]
pub struct OracleResult {
    /// `F^m`, equal to the discriminant up to a unit.
    pub equation: BiPoly,
    /// Square-free eliminant; its factors not through the origin are units.
    pub reduced: BiPoly,
    pub multiplicity: u32,
    /// Set when the multiplicities could not be matched against the branch ledger.
    pub flagged: Option<String>,
}

/// Dense coefficient table `c[i][j]` of `x^i y^j`.
fn dense(p: &BiPoly) -> Vec<Vec<Rational>> {
    let dx = p.degree_x().unwrap_or(0) as usize;
    let dy = p.degree_y().unwrap_or(0) as usize;
    let mut c = vec![vec![rat(0); dy + 1]; dx + 1];
    for ((i, j), a) in p.terms() {
        c[*i as usize][*j as usize] = a.as_rational().expect("rational");
    }
    c
}

/// Resultant of two univariate polynomials of formal degrees `p.len() - 1` and `q.len() - 1`.
fn formal_resultant(p: &[Rational], q: &[Rational]) -> Rational {
    let (m, n) = (p.len() - 1, q.len() - 1);
    if m + n == 0 {
        return rat(1);
    }
    let mut s = vec![vec![rat(0); m + n]; m + n];
    for r in 0..n {
        for (k, c) in p.iter().rev().enumerate() {
            s[r][r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in q.iter().rev().enumerate() {
            s[n + r][r + k] = c.clone();
        }
    }
    det(s)
}

/// `p(x, y)` as a polynomial in `y` with coefficients evaluated at `x = x0` (formal degree kept).
fn y_coeffs_at(c: &[Vec<Rational>], x0: &Rational, ylen: usize) -> Vec<Rational> {
    let mut out = vec![rat(0); ylen];
    for (i, row) in c.iter().enumerate() {
        let xi = num_pow(x0, i);
        for (j, a) in row.iter().enumerate() {
            out[j] += a * &xi;
        }
    }
    out
}

fn num_pow(x: &Rational, e: usize) -> Rational {
    (0..e).fold(rat(1), |acc, _| acc * x)
}

/// `Res_y(a, b - z)` as a polynomial in `(x, z)`, stored with `x` in the first slot.
fn eliminate_y(a: &BiPoly, b: &BiPoly) -> BiPoly {
    let ca = dense(a);
    let cb = dense(b);
    let ya = a.degree_y().unwrap_or(0) as usize + 1;
    let yb = b.degree_y().unwrap_or(0) as usize + 1;
    let dx = a.degree_x().unwrap_or(0) as usize * (yb - 1) + b.degree_x().unwrap_or(0) as usize * (ya - 1);
    let dz = ya - 1;
    let xs: Vec<Rational> = (0..=dx as i64).map(rat).collect();
    let zs: Vec<Rational> = (0..=dz as i64).map(rat).collect();
    // values[zi][xi]
    let mut by_z = Vec::new();
    for z in &zs {
        let vals: Vec<Rational> = xs
            .iter()
            .map(|x| {
                let pa = y_coeffs_at(&ca, x, ya);
                let mut pb = y_coeffs_at(&cb, x, yb);
                pb[0] -= z;
                formal_resultant(&pa, &pb)
            })
            .collect();
        by_z.push(interpolate(&xs, &vals));
    }
    let mut out = BiPoly::zero(&Field::rationals());
    for i in 0..=dx {
        let col: Vec<Rational> = by_z.iter().map(|c| c.get(i).cloned().unwrap_or_else(|| rat(0))).collect();
        for (k, c) in interpolate(&zs, &col).into_iter().enumerate() {
            out.add_term((i as u32, k as u32), Field::rationals().from_rational(c));
        }
    }
    out
}

/// `Res_x(s(x, u), t(x, v))` as a polynomial in `(u, v)`.
fn eliminate_x(s: &BiPoly, t: &BiPoly) -> BiPoly {
    let cs = dense(&s.swap_xy()); // indexed [u][x]
    let ct = dense(&t.swap_xy()); // indexed [v][x]
    let xs_len = s.degree_x().unwrap_or(0) as usize + 1;
    let xt_len = t.degree_x().unwrap_or(0) as usize + 1;
    let du = s.degree_y().unwrap_or(0) as usize * (xt_len - 1);
    let dv = t.degree_y().unwrap_or(0) as usize * (xs_len - 1);
    let us: Vec<Rational> = (0..=du as i64).map(rat).collect();
    let vs: Vec<Rational> = (0..=dv as i64).map(rat).collect();
    let mut by_v = Vec::new();
    for v in &vs {
        let qt = y_coeffs_at(&ct, v, xt_len);
        let vals: Vec<Rational> = us.iter().map(|u| formal_resultant(&y_coeffs_at(&cs, u, xs_len), &qt)).collect();
        by_v.push(interpolate(&us, &vals));
    }
    let mut out = BiPoly::zero(&Field::rationals());
    for i in 0..=du {
        let col: Vec<Rational> = by_v.iter().map(|c| c.get(i).cloned().unwrap_or_else(|| rat(0))).collect();
        for (k, c) in interpolate(&vs, &col).into_iter().enumerate() {
            out.add_term((i as u32, k as u32), Field::rationals().from_rational(c));
        }
    }
    out
}

fn constant_lc_in_y(p: &BiPoly) -> bool {
    p.y_coeffs().last().is_some_and(|c| c.degree() == Some(0))
}

/// Eliminant of `(f - u, g - v, J)` after the shear `x -> x + c y`, when that shear makes every
/// leading coefficient in `y` constant.
fn eliminant(phi: &MapGerm, c: i64) -> Result<Option<BiPoly>> {
    let cf = Field::rationals().from_int(c);
    let (f, g) = (phi.f.shear(&cf), phi.g.shear(&cf));
    let j = jacobian(&MapGerm::unchecked(f.clone(), g.clone()))?;
    if ![&f, &g, &j].iter().all(|p| constant_lc_in_y(p)) {
        return Ok(None);
    }
    let s = eliminate_y(&j, &f);
    let t = eliminate_y(&j, &g);
    let r = eliminate_x(&s, &t);
    Ok((!r.is_zero()).then_some(r))
}

/// Iterated-resultant discriminant of `phi`, up to a unit. Factors of the eliminant that
/// depend on the coordinates are removed by a gcd over three shears; the multiplicity of the
/// remaining square-free part is matched against the branch ledger of [`discriminant`].
pub fn oracle_discriminant(phi: &MapGerm, degree_cap: u32) -> Result<OracleResult> {
    for p in [&phi.f, &phi.g] {
        if !p.is_rational() {
            return Err(GermError::InvalidInput("the oracle needs rational coefficients".into()));
        }
        if p.total_degree().unwrap_or(0) > degree_cap {
            return Err(GermError::Capacity { what: "oracle input degree".into(), cap: degree_cap as usize });
        }
    }
    let mut common: Option<BiPoly> = None;
    let mut used = 0;
    for c in 1..=SHEARS {
        if let Some(r) = eliminant(phi, c)? {
            common = Some(match common {
                None => r,
                Some(g) => g.gcd(&r)?,
            });
            used += 1;
            if used == 3 {
                break;
            }
        }
    }
    let g = common.ok_or_else(|| GermError::Capacity { what: "oracle shears".into(), cap: SHEARS as usize })?;
    let one = BiPoly::one(&Field::rationals());
    if !g.constant_term().is_zero() || g.total_degree().unwrap_or(0) == 0 {
        return Ok(OracleResult { equation: one.clone(), reduced: one, multiplicity: 0, flagged: None });
    }
    let reduced = g.squarefree_part()?;
    let d = discriminant(phi)?;
    let total = |pick: fn(&crate::discriminant::LedgerEntry) -> IntersectionNumber| -> Option<u64> {
        d.ledger.iter().try_fold(0u64, |acc, e| {
            pick(e).finite().map(|n| acc + n * e.multiplicity as u64 * e.conjugacy as u64)
        })
    };
    let a_u = total(|e| e.i_f);
    let a_v = total(|e| e.i_g);
    let ord_v = reduced.terms().keys().filter(|e| e.0 == 0).map(|e| e.1 as u64).min();
    let ord_u = reduced.terms().keys().filter(|e| e.1 == 0).map(|e| e.0 as u64).min();
    let mut m: Option<u64> = None;
    let mut flagged = None;
    for (want, ord) in [(a_u, ord_v), (a_v, ord_u)] {
        if let (Some(want), Some(ord)) = (want, ord) {
            if want % ord != 0 {
                flagged = Some(format!("ledger total {want} is not a multiple of the eliminant order {ord}"));
                continue;
            }
            match m {
                None => m = Some(want / ord),
                Some(prev) if prev != want / ord => {
                    flagged = Some(format!("multiplicities {prev} and {} disagree between the axes", want / ord))
                }
                _ => {}
            }
        }
    }
    let m = match m {
        Some(m) => m as u32,
        None => {
            flagged.get_or_insert_with(|| "no axis determines the multiplicity".into());
            1
        }
    };
    Ok(OracleResult { equation: reduced.pow(m), reduced, multiplicity: m, flagged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton::initial_newton_polynomial;

    fn p(t: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_int_terms(t)
    }

    fn initial(phi: &MapGerm) -> BiPoly {
        let o = oracle_discriminant(phi, 4).unwrap();
        assert!(o.flagged.is_none(), "{:?}", o.flagged);
        initial_newton_polynomial(&o.equation).unwrap().normalized().unwrap()
    }

    #[test]
    fn goldens() {
        let cusp = p(&[(0, 2, 1), (3, 0, -1)]);
        let phi = MapGerm::new(BiPoly::x(), cusp.clone()).unwrap();
        assert_eq!(initial(&phi), p(&[(0, 1, 1), (3, 0, 1)]).normalized().unwrap());
        let phi = MapGerm::new(BiPoly::x(), p(&[(0, 2, 1)])).unwrap();
        assert_eq!(initial(&phi), BiPoly::y());
        let phi = MapGerm::new(BiPoly::y(), cusp).unwrap();
        let o = oracle_discriminant(&phi, 4).unwrap();
        assert_eq!(o.multiplicity, 2);
        let phi = MapGerm::new(BiPoly::x(), BiPoly::y()).unwrap();
        assert_eq!(oracle_discriminant(&phi, 4).unwrap().multiplicity, 0);
    }
}
