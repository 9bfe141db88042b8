//! Deciding `q(x, y) = p(a x, b y)` for some nonzero `a`, `b`.

use crate::algebra::bipoly::{BiPoly, Exp};
use crate::algebra::factor::{factor, root_of};
use crate::algebra::field::Fe;
use crate::algebra::upoly::Poly;
use crate::error::Result;

/// An integer relation `sum lambda_e e = 0` on the support together with the value of the
/// coefficient-ratio character on it.
#[derive(Clone, Debug)]
pub struct LatticeRelation {
    pub terms: Vec<(Exp, i64)>,
    pub ratio: Fe,
}

#[derive(Clone, Debug)]
pub struct RescaleWitness {
    pub solvable: bool,
    pub witness: Option<(Fe, Fe)>,
    pub obstruction: Option<LatticeRelation>,
    pub supports_differ: bool,
}

fn pow_i(x: &Fe, e: i64) -> Result<Fe> {
    if e >= 0 {
        Ok(x.pow(e as u64))
    } else {
        Ok(x.pow((-e) as u64).inv()?)
    }
}

fn character(ratios: &[Fe], lambda: &[i64]) -> Result<Fe> {
    let mut acc = ratios[0].field().one();
    for (r, l) in ratios.iter().zip(lambda) {
        if *l != 0 {
            acc = acc.checked_mul(&pow_i(r, *l)?)?;
        }
    }
    Ok(acc)
}

struct Vecs {
    v: (i64, i64),
    lambda: Vec<i64>,
}

fn combine(a: &mut Vecs, b: &Vecs, q: i64) {
    a.v.0 -= q * b.v.0;
    a.v.1 -= q * b.v.1;
    for (x, y) in a.lambda.iter_mut().zip(&b.lambda) {
        *x -= q * y;
    }
}

/// Euclid on one coordinate: leaves at most one vector with a nonzero entry there.
fn reduce(vs: &mut [Vecs], coord: usize) -> Option<usize> {
    let get = |v: &Vecs| if coord == 0 { v.v.0 } else { v.v.1 };
    loop {
        let nz: Vec<usize> = (0..vs.len()).filter(|&i| get(&vs[i]) != 0).collect();
        if nz.len() <= 1 {
            return nz.first().copied();
        }
        let piv = *nz.iter().min_by_key(|&&i| get(&vs[i]).abs()).unwrap();
        let pv = get(&vs[piv]);
        for &i in &nz {
            if i != piv {
                let q = get(&vs[i]).div_euclid(pv);
                let b = Vecs { v: vs[piv].v, lambda: vs[piv].lambda.clone() };
                combine(&mut vs[i], &b, q);
            }
        }
    }
}

/// `y` with `y^n = c`, in a field extended as needed.
fn nth_root(c: &Fe, n: u32) -> Result<Fe> {
    if n == 1 {
        return Ok(c.clone());
    }
    let f = c.field();
    let mut cs = vec![f.zero(); n as usize + 1];
    cs[0] = c.neg();
    cs[n as usize] = f.one();
    let facs = factor(&Poly::new(f, cs)?)?;
    let (psi, _) = facs.iter().min_by_key(|(p, _)| p.degree()).expect("nonconstant");
    Ok(root_of(psi, None)?.1)
}

pub fn rescale_equal(p: &BiPoly, q: &BiPoly) -> Result<RescaleWitness> {
    if p.support() != q.support() {
        return Ok(RescaleWitness { solvable: false, witness: None, obstruction: None, supports_differ: true });
    }
    let support = p.support();
    let ratios: Vec<Fe> = support
        .iter()
        .map(|e| q.terms()[e].checked_div(&p.terms()[e]))
        .collect::<Result<_>>()?;
    let n = support.len();
    let mut vs: Vec<Vecs> = support
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let mut lambda = vec![0; n];
            lambda[k] = 1;
            Vecs { v: (e.0 as i64, e.1 as i64), lambda }
        })
        .collect();
    let h1 = reduce(&mut vs, 0);
    let rest: Vec<usize> = (0..n).filter(|i| Some(*i) != h1).collect();
    let mut tail: Vec<Vecs> = rest.iter().map(|&i| Vecs { v: vs[i].v, lambda: vs[i].lambda.clone() }).collect();
    let h2 = reduce(&mut tail, 1);
    // zero vectors left over span the relation lattice
    for (idx, t) in tail.iter().enumerate() {
        if Some(idx) == h2 {
            continue;
        }
        let chi = character(&ratios, &t.lambda)?;
        if !chi.is_one() {
            let terms = support
                .iter()
                .zip(&t.lambda)
                .filter(|(_, l)| **l != 0)
                .map(|(e, l)| (*e, *l))
                .collect();
            return Ok(RescaleWitness {
                solvable: false,
                witness: None,
                obstruction: Some(LatticeRelation { terms, ratio: chi }),
                supports_differ: false,
            });
        }
    }
    let mut g1 = h1.map(|i| Vecs { v: vs[i].v, lambda: vs[i].lambda.clone() });
    let mut g2 = h2.map(|i| Vecs { v: tail[i].v, lambda: tail[i].lambda.clone() });
    for g in [&mut g1, &mut g2].into_iter().flatten() {
        if g.v.0 < 0 || (g.v.0 == 0 && g.v.1 < 0) {
            g.v = (-g.v.0, -g.v.1);
            g.lambda.iter_mut().for_each(|x| *x = -*x);
        }
    }
    let witness = (|| -> Result<(Fe, Fe)> {
        let one = ratios[0].field().one();
        let b = match &g2 {
            Some(g) => nth_root(&character(&ratios, &g.lambda)?, g.v.1 as u32)?,
            None => one.clone(),
        };
        let a = match &g1 {
            Some(g) => {
                let c = character(&ratios, &g.lambda)?.checked_div(&pow_i(&b, g.v.1)?)?;
                nth_root(&c, g.v.0 as u32)?
            }
            None => one,
        };
        let a = a.lift_to(b.field()).or_else(|_| Ok::<_, crate::GermError>(a.clone()))?;
        let b = b.lift_to(a.field()).unwrap_or(b);
        Ok((a, b))
    })();
    let witness = match witness {
        Ok((a, b)) if p.rescale(&a, &b) == *q => Some((a, b)),
        Ok(_) => {
            return Err(crate::GermError::Inconsistency("rescaling witness failed verification".into()));
        }
        Err(e) if e.is_capacity() => None,
        Err(e) => return Err(e),
    };
    Ok(RescaleWitness { solvable: true, witness, obstruction: None, supports_differ: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn p(t: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_int_terms(t)
    }

    #[test]
    fn solvable_with_cube_root() {
        let w = rescale_equal(&p(&[(0, 1, 1), (3, 0, 1)]), &p(&[(0, 1, 2), (3, 0, 54)])).unwrap();
        assert!(w.solvable);
        let (a, b) = w.witness.unwrap();
        assert_eq!(b, b.field().from_int(2));
        assert_eq!(a.pow(3), a.field().from_int(54));
    }

    #[test]
    fn obstruction_is_reported() {
        let w = rescale_equal(&p(&[(1, 0, 1), (0, 1, 1), (1, 1, 1)]), &p(&[(1, 0, 1), (0, 1, 1), (1, 1, 2)])).unwrap();
        assert!(!w.solvable);
        let ob = w.obstruction.unwrap();
        assert_eq!(ob.terms.len(), 3);
        assert!(!ob.ratio.is_one());
    }

    #[test]
    fn identity_witness() {
        let f = p(&[(0, 2, 1), (3, 0, -1), (1, 1, 3)]);
        let w = rescale_equal(&f, &f).unwrap();
        let (a, b) = w.witness.unwrap();
        assert_eq!((a.as_rational(), b.as_rational()), (Some(rat(1)), Some(rat(1))));
    }
}
