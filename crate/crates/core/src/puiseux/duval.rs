//! Duval's rational Newton-Puiseux algorithm on polynomials known modulo `X^px`.

use crate::algebra::bipoly::BiPoly;
use crate::algebra::factor::{factor, root_of};
use crate::algebra::field::Fe;
use crate::algebra::rational::{gcd_u64, rat};
use crate::algebra::series::Series;
use crate::algebra::upoly::Poly;
use crate::error::{GermError, Result};

/// Accumulated substitution: `X0 = c T^M`, `Y0 = A(T) + s T^E Y`.
#[derive(Clone, Debug)]
pub(crate) struct Chain {
    pub c: Fe,
    pub m: u32,
    pub a: Vec<(u32, Fe)>,
    pub s: Fe,
    pub e: u32,
}

impl Chain {
    pub fn start(one: Fe) -> Chain {
        Chain { c: one.clone(), m: 1, a: Vec::new(), s: one, e: 0 }
    }

    /// Applies `X = theta^v X1^m`, `Y = X1^q (theta^u + Y1)`.
    fn step(&self, theta: &Fe, m: u32, q: u32, u: u32, v: u32) -> Chain {
        let tv = theta.pow(v as u64);
        let mut a: Vec<(u32, Fe)> = self.a.iter().map(|(k, c)| (k * m, c * &tv.pow(*k as u64))).collect();
        let se = &self.s * &tv.pow(self.e as u64);
        a.push((m * self.e + q, &se * &theta.pow(u as u64)));
        Chain { c: &self.c * &tv.pow(self.m as u64), m: self.m * m, a, s: se, e: m * self.e + q }
    }
}

/// A branch as produced by the recursion, before packaging.
#[derive(Clone, Debug)]
pub(crate) struct RawBranch {
    pub chain: Chain,
    /// Smooth remainder `Y = S(T)`, known modulo `T^{prec}`.
    pub s: Series,
    pub exact: bool,
}

pub(crate) struct Ctx {
    /// Wanted precision of the final tail, in powers of `T`.
    pub need: usize,
}

/// Runs the recursion on `h`, known modulo `X^px` (`exact` when no term was ever dropped).
pub(crate) fn duval(h: &BiPoly, px: u32, exact: bool, chain: Chain, ctx: &Ctx, out: &mut Vec<RawBranch>) -> Result<()> {
    duval_inner(h, px, exact, chain, ctx, out, false)
}

fn duval_inner(
    h: &BiPoly,
    px: u32,
    exact: bool,
    chain: Chain,
    ctx: &Ctx,
    out: &mut Vec<RawBranch>,
    sibling: bool,
) -> Result<()> {
    let h0 = h.at_x_zero();
    let d = match h0.coeffs().iter().position(|c| !c.is_zero()) {
        Some(d) => d,
        None => return Err(GermError::Inconsistency("x divides the polynomial inside the expansion".into())),
    };
    if d == 0 {
        return Ok(());
    }
    let hy0 = h.at_y_zero();
    if hy0.is_zero() && exact {
        // Y divides h exactly: the branch Y = 0 is exact
        let start = out.len();
        let rest = h.div_monomial(0, 1);
        duval_inner(&rest, px, exact, chain.clone(), ctx, out, true)?;
        let sep = out[start..].iter().map(|b| b.chain.e as usize + b.s.valuation().unwrap_or(0) + 1).max().unwrap_or(0);
        let prec = (ctx.need.max(1)).max(sep.saturating_sub(chain.e as usize));
        out.push(RawBranch { chain, s: Series::zero(h.field(), prec), exact: true });
        return Ok(());
    }
    if d == 1 {
        let want = (ctx.need as i64 - chain.e as i64).max(1) as u32;
        let s = if sibling {
            // must see the first nonzero term to tell this branch from its exact sibling Y = 0
            let s = smooth_root(h, px)?;
            match s.valuation() {
                Some(v) => s.with_prec((v + 1).max(want as usize)),
                None => return Err(GermError::Precision("branch not separated from a neighbour".into())),
            }
        } else {
            smooth_root(h, px.min(want))?
        };
        out.push(RawBranch { chain, s, exact: false });
        return Ok(());
    }
    match hy0.coeffs().iter().position(|c| !c.is_zero()) {
        Some(i) if (i as u32) < px => {}
        _ => return Err(GermError::Precision("expansion precision too low to separate branches".into())),
    }
    // lower hull from (0, d) to (i_n, 0)
    let pts: Vec<(u32, u32)> = h.support().into_iter().filter(|&(i, j)| i < px && (j as usize) <= d).collect();
    let mut cur = (0u32, d as u32);
    while cur.1 > 0 {
        let mut best: Option<((u32, u32), (u32, u32))> = None; // (num, den) of slope, point
        for &(i, j) in &pts {
            if j >= cur.1 {
                continue;
            }
            let num = i - cur.0;
            let den = cur.1 - j;
            let better = match best {
                None => true,
                Some(((bn, bd), bp)) => {
                    let l = num as u64 * bd as u64;
                    let r = bn as u64 * den as u64;
                    l < r || (l == r && j < bp.1)
                }
            };
            if better {
                best = Some(((num, den), (i, j)));
            }
        }
        let ((_, _), next) = best.expect("hull reaches the X axis");
        let di = next.0 - cur.0;
        let dj = cur.1 - next.1;
        let g = gcd_u64(di as u64, dj as u64) as u32;
        let (q, m) = (di / g, dj / g);
        let l = m * cur.0 + q * cur.1;
        // edge polynomial in T = xi^m
        let field = h.field().clone();
        let mut phi = vec![field.zero(); g as usize + 1];
        for (&(i, j), c) in h.terms() {
            if i < px && m * i + q * j == l && j >= next.1 && j <= cur.1 {
                phi[((j - next.1) / m) as usize] = c.clone();
            }
        }
        let phi = Poly::new(&field, phi)?;
        let (u, v) = bezout(m, q);
        for (psi, _r) in factor(&phi)? {
            if psi.coeff(0).is_zero() {
                continue;
            }
            let (_, theta) = root_of(&psi, None)?;
            let (h1, px1, exact1) = transform(h, &theta, m, q, u, v, l, px, exact);
            duval(&h1, px1, exact1, chain.step(&theta, m, q, u, v), ctx, out)?;
        }
        cur = next;
    }
    Ok(())
}

/// `u m - v q = 1` with `u, v >= 0`.
fn bezout(m: u32, q: u32) -> (u32, u32) {
    if q == 1 {
        return (1, m - 1);
    }
    let u = (1..=q).find(|u| (u * m) % q == 1).expect("coprime");
    (u, (u * m - 1) / q)
}

#[allow(clippy::too_many_arguments)]
fn transform(h: &BiPoly, theta: &Fe, m: u32, q: u32, u: u32, v: u32, l: u32, px: u32, exact: bool) -> (BiPoly, u32, bool) {
    let px1 = m * px - l;
    let field = theta.field().clone();
    let mut out = BiPoly::zero(&field);
    let mut exact1 = exact;
    let tu = theta.pow(u as u64);
    let tv = theta.pow(v as u64);
    let max_j = h.degree_y().unwrap_or(0) as usize;
    let max_i = h.degree_x().unwrap_or(0) as usize;
    let tu_pows: Vec<Fe> = (0..=max_j).scan(field.one(), |acc, _| {
        let r = acc.clone();
        *acc = &*acc * &tu;
        Some(r)
    }).collect();
    let tv_pows: Vec<Fe> = (0..=max_i.min(px as usize)).scan(field.one(), |acc, _| {
        let r = acc.clone();
        *acc = &*acc * &tv;
        Some(r)
    }).collect();
    let binom = binomials(max_j);
    for (&(i, j), c) in h.terms() {
        if i >= px {
            continue;
        }
        let b = m * i + q * j - l;
        if b >= px1 {
            exact1 = false;
            continue;
        }
        let base = c * &tv_pows[i as usize];
        for k in 0..=j as usize {
            let coef = (&base * &tu_pows[j as usize - k]).scale(&binom[j as usize][k]);
            out.add_term((b, k as u32), coef);
        }
    }
    (out, px1, exact1)
}

fn binomials(n: usize) -> Vec<Vec<crate::algebra::rational::Rational>> {
    let mut rows = vec![vec![rat(1)]];
    for k in 1..=n {
        let prev = &rows[k - 1];
        let mut row = vec![rat(1); k + 1];
        for i in 1..k {
            row[i] = &prev[i - 1] + &prev[i];
        }
        rows.push(row);
    }
    rows
}

/// `h(X, Y)` with `Y = y(X)`, as a series in `X` to precision `p`.
pub(crate) fn eval_y(h: &BiPoly, y: &Series, p: usize) -> Series {
    let field = y.field().clone();
    let coeffs = h.y_coeffs();
    let mut acc = Series::zero(&field, p);
    for c in coeffs.iter().rev() {
        let cs = Series::new(&field, c.coeffs().iter().take(p).cloned().collect(), p).expect("field");
        acc = acc.mul(y).with_prec(p).add(&cs).with_prec(p);
    }
    acc
}

/// The unique `S` with `S(0) = 0` and `h(X, S(X)) = 0 mod X^p`, given `h_Y(0, 0) != 0`.
fn smooth_root(h: &BiPoly, p: u32) -> Result<Series> {
    let p = p as usize;
    let field = h.field().clone();
    let hy = h.dy();
    let mut s = Series::zero(&field, p);
    let mut cur = 1usize;
    loop {
        cur = (cur * 2).min(p);
        let val = eval_y(h, &s, cur);
        let der = eval_y(&hy, &s, cur);
        let step = val.mul(&der.inv()?).with_prec(cur);
        s = s.assume_exact_to(p).sub(&step.assume_exact_to(p)).with_prec(p);
        if cur == p {
            // one more pass to be safe against the initial guess
            let val = eval_y(h, &s, p);
            if val.is_zero() {
                return Ok(s);
            }
            let der = eval_y(&hy, &s, p);
            let step = val.mul(&der.inv()?).with_prec(p);
            s = s.sub(&step).with_prec(p);
            if eval_y(h, &s, p).is_zero() {
                return Ok(s);
            }
            return Err(GermError::Inconsistency("Newton iteration for a smooth root did not converge".into()));
        }
    }
}
