//! Puiseux parametrizations of the branches of a plane curve germ at the origin.
//!
//! Each branch is stored as `x = gamma t^m`, `y = tail(t)` (or with `x` and `y` exchanged for
//! the branch `x = 0`), with coefficients in a finite extension of the input field. A branch
//! whose field has degree `D` over the base stands for `D` Galois-conjugate branches.

mod chars;
mod duval;
mod implicit;

pub use chars::{characteristic_data, semigroup_from_characteristic, CharacteristicData};
pub use implicit::{implicitize, Implicit};

use crate::algebra::bipoly::BiPoly;
use crate::algebra::field::{Fe, Field};
use crate::algebra::series::Series;
use crate::error::{GermError, Result};
use duval::{duval, Chain, Ctx, RawBranch};

/// Largest `X`-precision tried before giving up on separating branches.
pub const MAX_X_PRECISION: u32 = 1 << 14;

#[derive(Clone, Debug)]
pub struct Branch {
    /// Ramification index of the monomial coordinate.
    pub m: u32,
    pub gamma: Fe,
    /// The other coordinate, known modulo `t^{tail.prec()}`.
    pub tail: Series,
    /// Multiplicity of the branch as a factor of the input.
    pub multiplicity: u32,
    /// `true` when the monomial coordinate is `y` (only for the branch `x = 0`).
    pub swapped: bool,
    /// `true` when the tail is a polynomial known exactly.
    pub exact: bool,
    pub field: Field,
    /// Number of conjugate branches represented, `[field : base]`.
    pub conjugacy: usize,
    /// Exponent of `t` beyond which this branch no longer shares terms with the others.
    pub separation: u32,
}

impl Branch {
    pub fn prec(&self) -> usize {
        self.tail.prec()
    }

    /// The tail with its precision raised, when it is exact.
    pub fn tail_to(&self, prec: usize) -> Series {
        if self.exact {
            self.tail.assume_exact_to(prec.max(self.tail.prec()))
        } else {
            self.tail.clone()
        }
    }

    /// `(x(t), y(t))`; the monomial coordinate carries precision `big`.
    pub fn param(&self, big: usize) -> (Series, Series) {
        let mono = Series::monomial(self.gamma.clone(), self.m as usize, big);
        if self.swapped {
            (self.tail.clone(), mono)
        } else {
            (mono, self.tail.clone())
        }
    }

    /// Multiplicity of the branch as a curve: `min(m, ord tail)`.
    pub fn curve_multiplicity(&self) -> u32 {
        match self.tail.valuation() {
            Some(v) => self.m.min(v as u32),
            None => self.m,
        }
    }

    /// `f(x(t), y(t))` as a series in `t`, with certified precision.
    pub fn eval(&self, f: &BiPoly) -> Series {
        let g = if self.swapped { f.swap_xy() } else { f.clone() };
        let field = self.field.join(g.field()).unwrap_or_else(|_| self.field.clone());
        let w = self.tail.lift_to(&field).expect("field");
        let du = g.degree_x().unwrap_or(0) as usize;
        let dw = g.degree_y().unwrap_or(0) as usize;
        let big = w.prec() * (dw + 1) + self.m as usize * (du + 1) + 1;
        let gpow: Vec<Fe> = (0..=du).map(|i| self.gamma.pow(i as u64)).collect();
        let mut acc = Series::zero(&field, big);
        for (j, c) in g.y_coeffs().iter().enumerate().rev() {
            let mut cs = vec![field.zero(); self.m as usize * c.coeffs().len().max(1)];
            for (i, a) in c.coeffs().iter().enumerate() {
                if !a.is_zero() {
                    cs[self.m as usize * i] = a * &gpow[i];
                }
            }
            let cser = Series::new(&field, cs, big).expect("field");
            acc = if j + 1 == g.y_coeffs().len() { cser } else { acc.mul(&w).add(&cser) };
        }
        acc
    }

    /// `ord_t f(x(t), y(t))`: `Ok(Some(n))` when certified, `Ok(None)` when `f` vanishes to
    /// the available precision.
    pub fn order_of(&self, f: &BiPoly) -> Option<usize> {
        self.eval(f).valuation()
    }

    /// Text form, e.g. `x = t^2, y = t^3 + O(t^6)`.
    pub fn describe(&self) -> String {
        let mono = if self.gamma.is_one() {
            if self.m == 1 { "t".to_string() } else { format!("t^{}", self.m) }
        } else {
            let g = crate::algebra::upoly::Poly::constant(self.gamma.clone()).to_string_in("t");
            if self.m == 1 { format!("({g})*t") } else { format!("({g})*t^{}", self.m) }
        };
        let tail = if self.exact { self.tail.to_exact_string("t") } else { self.tail.to_string_in("t") };
        if self.swapped {
            format!("x = {tail}, y = {mono}")
        } else {
            format!("x = {mono}, y = {tail}")
        }
    }
}

#[derive(Clone, Debug)]
pub struct Expansion {
    pub base: Field,
    pub branches: Vec<Branch>,
}

impl Expansion {
    /// Number of branches over the algebraic closure, counted without multiplicity.
    pub fn branch_count(&self) -> usize {
        self.branches.iter().map(|b| b.conjugacy).sum()
    }
}

/// Branches of `f` at the origin over the field of `f`, with tails known to at least `terms`.
pub fn puiseux_expand(f: &BiPoly, terms: usize) -> Result<Expansion> {
    expand_over(f, terms, f.field())
}

/// Like [`puiseux_expand`] with coefficients taken in `base` (which must contain those of `f`).
pub fn expand_over(f: &BiPoly, terms: usize, base: &Field) -> Result<Expansion> {
    if f.is_zero() {
        return Err(GermError::ZeroInput("cannot expand the zero polynomial".into()));
    }
    let f = f.lift_to(base)?;
    if !f.constant_term().is_zero() {
        return Ok(Expansion { base: base.clone(), branches: Vec::new() });
    }
    let terms = terms.max(1);
    let mut branches = Vec::new();
    let xa = f.x_valuation().unwrap_or(0);
    let core = f.div_monomial(xa, 0);
    if xa > 0 {
        branches.push(Branch {
            m: 1,
            gamma: base.one(),
            tail: Series::zero(base, terms),
            multiplicity: xa,
            swapped: true,
            exact: true,
            field: base.clone(),
            conjugacy: 1,
            separation: 0,
        });
    }
    for (g, k) in local_squarefree(&core)? {
        if !g.constant_term().is_zero() {
            continue;
        }
        for mut b in expand_squarefree(&g, terms, base)? {
            b.multiplicity = k;
            branches.push(b);
        }
    }
    Ok(Expansion { base: base.clone(), branches })
}

/// Expansion over an extension of `f`'s field in which every branch is defined, so each
/// returned branch has `conjugacy == 1`.
pub fn expand_split(f: &BiPoly, terms: usize) -> Result<Expansion> {
    expand_split_over(f, terms, f.field())
}

/// [`expand_split`] starting from the coefficient field `base`.
pub fn expand_split_over(f: &BiPoly, terms: usize, base: &Field) -> Result<Expansion> {
    let mut base = base.clone();
    loop {
        let e = expand_over(f, terms, &base)?;
        match e.branches.iter().find(|b| b.conjugacy > 1) {
            None => return Ok(e),
            Some(b) => base = b.field.clone(),
        }
    }
}

/// Square-free factors of `f` (no `x` content), grouped by multiplicity. Uses a cheap
/// specialisation test first and falls back to the full decomposition.
fn local_squarefree(f: &BiPoly) -> Result<Vec<(BiPoly, u32)>> {
    let dy = f.degree_y().unwrap_or(0);
    if dy == 0 {
        return Ok(Vec::new());
    }
    let field = f.field().clone();
    for x0 in 1..=8i64 {
        let p = f.eval_x(&field.from_int(x0));
        if p.degree() != Some(dy as usize) {
            continue;
        }
        if p.gcd(&p.derivative())?.degree() == Some(0) {
            return Ok(vec![(f.clone(), 1)]);
        }
        break;
    }
    Ok(f.squarefree_decomposition()?.into_iter().filter(|(g, _)| g.degree_y().unwrap_or(0) > 0).collect())
}

fn expand_squarefree(g: &BiPoly, terms: usize, base: &Field) -> Result<Vec<Branch>> {
    let d = g.at_x_zero().coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut px = (terms as u32).max(4) + g.at_y_zero().coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0) as u32;
    loop {
        let ctx = Ctx { need: terms };
        let mut raw = Vec::new();
        let exact = g.degree_x().unwrap_or(0) < px;
        match duval(g, px, exact, Chain::start(base.one()), &ctx, &mut raw) {
            Ok(()) => {
                let branches: Vec<Branch> = raw.into_iter().map(|r| package(r, base)).collect::<Result<_>>()?;
                let count: usize = branches.iter().map(|b| b.m as usize * b.conjugacy).sum();
                if count != d {
                    return Err(GermError::Inconsistency(format!(
                        "branch count {count} does not match local degree {d}"
                    )));
                }
                if branches.iter().all(|b| b.prec() >= terms && b.prec() > b.separation as usize) {
                    return Ok(branches);
                }
            }
            Err(GermError::Precision(_)) => {}
            Err(e) => return Err(e),
        }
        px *= 2;
        if px > MAX_X_PRECISION {
            return Err(GermError::Capacity { what: "expansion precision".into(), cap: MAX_X_PRECISION as usize });
        }
    }
}

fn package(r: RawBranch, base: &Field) -> Result<Branch> {
    let RawBranch { chain, s, exact } = r;
    let field = s.field().join(chain.c.field())?;
    let field = chain.a.iter().try_fold(field, |f, (_, c)| f.join(c.field()))?;
    let prec = chain.e as usize + s.prec();
    let mut cs = vec![field.zero(); prec];
    for (k, c) in &chain.a {
        if (*k as usize) < prec {
            cs[*k as usize] = &cs[*k as usize] + &c.lift_to(&field)?;
        }
    }
    for (k, c) in s.coeffs().iter().enumerate() {
        let idx = chain.e as usize + k;
        if idx < prec && !c.is_zero() {
            cs[idx] = &cs[idx] + &(&chain.s * c);
        }
    }
    let tail = Series::new(&field, cs, prec)?;
    let conjugacy = field.degree() / base.degree();
    Ok(Branch {
        m: chain.m,
        gamma: chain.c.lift_to(&field)?,
        tail,
        multiplicity: 1,
        swapped: false,
        exact,
        field,
        conjugacy,
        separation: chain.e,
    })
}

/// Re-expands until `ok` accepts the branches, doubling `terms` each time.
pub fn expand_until<T>(
    f: &BiPoly,
    mut terms: usize,
    split: bool,
    mut ok: impl FnMut(&Expansion) -> Result<Option<T>>,
) -> Result<T> {
    loop {
        let e = if split { expand_split(f, terms)? } else { puiseux_expand(f, terms)? };
        if let Some(t) = ok(&e)? {
            return Ok(t);
        }
        terms *= 2;
        if terms > MAX_X_PRECISION as usize {
            return Err(GermError::Capacity { what: "expansion terms".into(), cap: MAX_X_PRECISION as usize });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_int_terms(t)
    }

    #[test]
    fn cusp_branch() {
        let e = puiseux_expand(&p(&[(0, 2, 1), (3, 0, -1)]), 8).unwrap();
        assert_eq!(e.branches.len(), 1);
        let b = &e.branches[0];
        assert_eq!(b.m, 2);
        assert!(b.gamma.is_one());
        assert_eq!(b.tail.valuation(), Some(3));
        assert!(b.tail.coeff(3).is_one());
        assert!(b.tail.coeffs().iter().enumerate().all(|(k, c)| k == 3 || c.is_zero()));
    }

    #[test]
    fn node_has_two_smooth_branches() {
        let e = puiseux_expand(&p(&[(1, 1, 1)]), 6).unwrap();
        assert_eq!(e.branch_count(), 2);
        assert!(e.branches.iter().any(|b| b.swapped));
        let e = puiseux_expand(&p(&[(0, 2, 1), (2, 0, -1), (3, 0, -1)]), 6).unwrap();
        assert_eq!(e.branch_count(), 2);
        for b in &e.branches {
            assert_eq!(b.m, 1);
            assert_eq!(b.tail.valuation(), Some(1));
            // y = +-x (1 + x/2 - x^2/8 + ...)
            assert_eq!(b.tail.coeff(2), b.tail.coeff(1).scale(&crate::algebra::rational::ratio(1, 2)));
        }
    }

    #[test]
    fn irrational_branches_are_grouped() {
        // y^2 = 2 x^2: one class over Q(sqrt 2) standing for two branches
        let e = puiseux_expand(&p(&[(0, 2, 1), (2, 0, -2)]), 4).unwrap();
        assert_eq!(e.branches.len(), 1);
        assert_eq!(e.branches[0].conjugacy, 2);
        let s = expand_split(&p(&[(0, 2, 1), (2, 0, -2)]), 4).unwrap();
        assert_eq!(s.branches.len(), 2);
        assert!(s.branches.iter().all(|b| b.conjugacy == 1));
    }

    #[test]
    fn branch_satisfies_equation() {
        let f = p(&[(0, 4, 1), (6, 0, -2), (5, 2, 3), (7, 1, 1)]);
        let e = puiseux_expand(&f, 20).unwrap();
        for b in &e.branches {
            let v = b.eval(&f);
            assert!(v.valuation().is_none(), "residual {}", v.to_string_in("t"));
            assert!(v.prec() >= 20);
        }
        assert_eq!(e.branches.iter().map(|b| b.m as usize * b.conjugacy).sum::<usize>(), 4);
    }

    #[test]
    fn repeated_factors_carry_multiplicity() {
        let f = p(&[(0, 1, 1), (2, 0, -1)]).pow(2).mul(&p(&[(0, 1, 1), (1, 0, 1)]));
        let e = puiseux_expand(&f, 5).unwrap();
        let mut mults: Vec<u32> = e.branches.iter().map(|b| b.multiplicity).collect();
        mults.sort();
        assert_eq!(mults, vec![1, 2]);
    }

    #[test]
    fn close_branches_need_more_precision() {
        // (y - x^2)(y - x^2 - x^9): branches agree up to x^9
        let a = p(&[(0, 1, 1), (2, 0, -1)]);
        let b = p(&[(0, 1, 1), (2, 0, -1), (9, 0, -1)]);
        let e = puiseux_expand(&a.mul(&b), 3).unwrap();
        assert_eq!(e.branches.len(), 2);
        assert!(e.branches.iter().all(|b| b.prec() > 9));
    }
}
