//! Equisingularity types of labeled curve collections.

use serde::Serialize;

use super::IntersectionNumber;
use crate::algebra::bipoly::BiPoly;
use crate::algebra::field::Field;
use crate::error::{GermError, Result};
use crate::puiseux::{characteristic_data, expand_split_over, implicitize, Branch, MAX_X_PRECISION};

/// Largest number of branches the matching search accepts.
pub const MAX_BRANCHES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchRecord {
    /// Index into the label list.
    pub label: usize,
    pub semigroup: Vec<u32>,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquisingularityType {
    pub labels: Vec<String>,
    pub branches: Vec<BranchRecord>,
    /// Pairwise intersection numbers; the diagonal is unused and set to 0.
    pub matrix: Vec<Vec<IntersectionNumber>>,
}

/// `matching[i]` is the branch of the second type matched with branch `i` of the first.
pub type Matching = Vec<usize>;

fn split_all(germs: &[(String, BiPoly)], terms: usize) -> Result<(Field, Vec<(usize, Branch)>)> {
    let mut base = Field::rationals();
    for (_, g) in germs {
        base = base.join(g.field())?;
    }
    'outer: loop {
        let mut out = Vec::new();
        for (k, (_, g)) in germs.iter().enumerate() {
            let e = expand_split_over(g, terms, &base)?;
            if e.base.degree() != base.degree() {
                base = e.base;
                continue 'outer;
            }
            out.extend(e.branches.into_iter().map(|b| (k, b)));
        }
        return Ok((base, out));
    }
}

fn pair_i0(bi: &Branch, bj: &Branch, base: &Field, terms: usize, bezout: usize) -> Result<Option<IntersectionNumber>> {
    let (eq, trunc) = if bj.swapped {
        (BiPoly::x(), None)
    } else {
        let p = (terms / bj.m as usize).max(1);
        (implicitize(bj, base, p)?.to_bipoly(), Some(p))
    };
    let s = bi.eval(&eq);
    let bound = match (bi.swapped, trunc) {
        (false, Some(p)) => s.prec().min(p * bi.m as usize),
        _ => s.prec(),
    };
    Ok(match s.valuation() {
        Some(o) if o < bound => Some(IntersectionNumber::Finite(o as u64)),
        _ if bound > bezout => Some(IntersectionNumber::Infinite),
        _ => None,
    })
}

fn attempt(germs: &[(String, BiPoly)], terms: usize) -> Result<Option<EquisingularityType>> {
    let (base, branches) = split_all(germs, terms)?;
    if branches.len() > MAX_BRANCHES {
        return Err(GermError::Capacity { what: "branches in an equisingularity type".into(), cap: MAX_BRANCHES });
    }
    let mut records = Vec::with_capacity(branches.len());
    for (label, b) in &branches {
        let c = match characteristic_data(b) {
            Ok(c) => c,
            Err(GermError::Precision(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        records.push(BranchRecord { label: *label, semigroup: c.semigroup(), multiplicity: b.multiplicity });
    }
    let degs: Vec<usize> = germs.iter().map(|(_, g)| g.total_degree().unwrap_or(0) as usize).collect();
    let n = branches.len();
    let mut matrix = vec![vec![IntersectionNumber::Finite(0); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let bezout = degs[branches[i].0] * degs[branches[j].0];
            let v = match pair_i0(&branches[i].1, &branches[j].1, &base, terms, bezout) {
                Ok(Some(v)) => v,
                Ok(None) | Err(GermError::Precision(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            matrix[i][j] = v;
            matrix[j][i] = v;
        }
    }
    Ok(Some(EquisingularityType { labels: germs.iter().map(|(l, _)| l.clone()).collect(), branches: records, matrix }))
}

/// Branches of every germ with their semigroups and multiplicities, and all pairwise
/// intersection numbers between branches.
pub fn equisingularity_type(germs: &[(String, BiPoly)]) -> Result<EquisingularityType> {
    for (l, g) in germs {
        if g.is_zero() {
            return Err(GermError::ZeroInput(format!("germ {l} is zero")));
        }
    }
    let mut terms = 16;
    loop {
        if let Some(t) = attempt(germs, terms)? {
            return Ok(t);
        }
        terms *= 2;
        if terms > MAX_X_PRECISION as usize {
            return Err(GermError::Capacity { what: "expansion terms".into(), cap: MAX_X_PRECISION as usize });
        }
    }
}

/// A label-preserving bijection of branches matching semigroups, multiplicities and the
/// intersection matrix, if one exists.
pub fn equisingular(a: &EquisingularityType, b: &EquisingularityType) -> Result<Option<Matching>> {
    let n = a.branches.len();
    if n > MAX_BRANCHES || b.branches.len() > MAX_BRANCHES {
        return Err(GermError::Capacity { what: "branches in an equisingularity type".into(), cap: MAX_BRANCHES });
    }
    if n != b.branches.len() || a.labels.len() != b.labels.len() {
        return Ok(None);
    }
    let key = |r: &BranchRecord| (r.label, r.semigroup.clone(), r.multiplicity);
    let mut ka: Vec<_> = a.branches.iter().map(key).collect();
    let mut kb: Vec<_> = b.branches.iter().map(key).collect();
    ka.sort();
    kb.sort();
    if ka != kb {
        return Ok(None);
    }
    // canonical order: branches of a sorted by key, then by their row of intersection numbers
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| {
        let mut row = a.matrix[i].clone();
        row.sort();
        (key(&a.branches[i]), row)
    });
    let mut assign = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if search(a, b, &order, 0, &mut assign, &mut used) {
        Ok(Some(assign))
    } else {
        Ok(None)
    }
}

fn search(
    a: &EquisingularityType,
    b: &EquisingularityType,
    order: &[usize],
    depth: usize,
    assign: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let i = order[depth];
    let ra = &a.branches[i];
    for j in 0..b.branches.len() {
        if used[j] {
            continue;
        }
        let rb = &b.branches[j];
        if ra.label != rb.label || ra.semigroup != rb.semigroup || ra.multiplicity != rb.multiplicity {
            continue;
        }
        let consistent = order[..depth].iter().all(|&k| a.matrix[i][k] == b.matrix[j][assign[k]]);
        if !consistent {
            continue;
        }
        assign[i] = j;
        used[j] = true;
        if search(a, b, order, depth + 1, assign, used) {
            return true;
        }
        used[j] = false;
        assign[i] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use IntersectionNumber::Finite;

    fn p(t: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_int_terms(t)
    }

    fn ty(gs: &[BiPoly]) -> EquisingularityType {
        let germs: Vec<(String, BiPoly)> = gs.iter().enumerate().map(|(k, g)| (format!("g{k}"), g.clone())).collect();
        equisingularity_type(&germs).unwrap()
    }

    #[test]
    fn type_goldens() {
        let t = ty(&[BiPoly::x(), p(&[(0, 2, 1), (3, 0, -1)])]);
        assert_eq!(t.branches.len(), 2);
        assert_eq!(t.branches[0].semigroup, vec![1]);
        assert_eq!(t.branches[1].semigroup, vec![2, 3]);
        assert_eq!(t.matrix[0][1], Finite(2));
        let t = ty(&[p(&[(1, 1, 1)])]);
        assert_eq!(t.branches.len(), 2);
        assert_eq!(t.matrix[0][1], Finite(1));
        let t = ty(&[p(&[(0, 2, 1), (3, 0, -1)]), p(&[(0, 2, 1), (5, 0, -1)])]);
        assert_eq!(t.branches[1].semigroup, vec![2, 5]);
        assert_eq!(t.matrix[0][1], Finite(6));
    }

    #[test]
    fn matching_goldens() {
        let cusp = ty(&[p(&[(0, 2, 1), (3, 0, -1)])]);
        assert!(equisingular(&cusp, &ty(&[p(&[(0, 2, 1), (3, 0, -2)])])).unwrap().is_some());
        assert!(equisingular(&cusp, &ty(&[p(&[(0, 2, 1), (5, 0, -1)])])).unwrap().is_none());
        assert_eq!(equisingular(&cusp, &cusp).unwrap(), Some(vec![0]));
    }

    #[test]
    fn conjugate_branches_are_split() {
        // y^2 - 2x^2 is two transverse smooth lines over Q(sqrt 2), like xy
        let a = ty(&[p(&[(0, 2, 1), (2, 0, -2)])]);
        assert_eq!(a.branches.len(), 2);
        assert!(equisingular(&a, &ty(&[p(&[(1, 1, 1)])])).unwrap().is_some());
        // tangent lines y(y - x^2) differ from xy
        assert!(equisingular(&ty(&[p(&[(0, 2, 1), (2, 1, -1)])]), &ty(&[p(&[(1, 1, 1)])])).unwrap().is_none());
    }

    #[test]
    fn labels_are_preserved() {
        let a = ty(&[BiPoly::x(), p(&[(0, 2, 1), (3, 0, -1)])]);
        let b = ty(&[p(&[(0, 2, 1), (3, 0, -1)]), BiPoly::x()]);
        assert!(equisingular(&a, &b).unwrap().is_none());
    }
}
