//! Grouping branches by their Hironaka quotient `i_0(g, p) / i_0(f, p)`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use super::{direct_image, DirectImage, LedgerEntry, MapGerm};
use crate::algebra::bipoly::BiPoly;
use crate::algebra::rational::{fmt_rational, Rational};
use crate::error::{GermError, Result};
use crate::local::IntersectionNumber;
use crate::newton::{Edge, NewtonDiagram};

/// `i_0(g, p) / i_0(f, p)`, with the two axis cases kept apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Quotient {
    /// Branch inside `f = 0`: the image lies on `u = 0`.
    FInfinite,
    Finite(Rational),
    /// Branch inside `g = 0`: the image lies on `v = 0`.
    GInfinite,
}

impl Quotient {
    fn rank(&self) -> (u8, Option<&Rational>) {
        match self {
            Quotient::GInfinite => (0, None),
            Quotient::Finite(q) => (1, Some(q)),
            Quotient::FInfinite => (2, None),
        }
    }
}

impl PartialOrd for Quotient {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Quotient {
    fn cmp(&self, o: &Self) -> Ordering {
        self.rank().cmp(&o.rank())
    }
}

impl fmt::Display for Quotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quotient::Finite(q) => write!(f, "{}", fmt_rational(q)),
            Quotient::FInfinite => write!(f, "inf (inside f = 0)"),
            Quotient::GInfinite => write!(f, "0 (inside g = 0)"),
        }
    }
}

impl Serialize for Quotient {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HironakaFactor {
    pub quotient: Quotient,
    pub branches: Vec<String>,
    /// `i_0(f, h_i)` and `i_0(g, h_i)` for the whole group.
    pub i_f: IntersectionNumber,
    pub i_g: IntersectionNumber,
    /// Edge of the direct image's diagram with inclination equal to the quotient.
    pub edge: Option<Edge>,
}

fn quotient(e: &LedgerEntry) -> Quotient {
    match (e.i_f, e.i_g) {
        (IntersectionNumber::Finite(m), IntersectionNumber::Finite(k)) => {
            Quotient::Finite(Rational::new((k as i64).into(), (m as i64).into()))
        }
        (IntersectionNumber::Infinite, _) => Quotient::FInfinite,
        _ => Quotient::GInfinite,
    }
}

fn add(a: IntersectionNumber, b: IntersectionNumber, w: u64) -> IntersectionNumber {
    match (a, b) {
        (IntersectionNumber::Finite(x), IntersectionNumber::Finite(y)) => IntersectionNumber::Finite(x + y * w),
        _ => IntersectionNumber::Infinite,
    }
}

/// Groups the branches of `h` by Hironaka quotient, in increasing order, and checks that the
/// group totals rebuild the diagram of the direct image.
pub fn hironaka_factorization(h: &BiPoly, phi: &MapGerm) -> Result<Vec<HironakaFactor>> {
    let img = direct_image_for_diagram(h, phi)?;
    let mut groups: Vec<HironakaFactor> = Vec::new();
    for e in &img.ledger {
        let q = quotient(e);
        let w = e.multiplicity as u64 * e.conjugacy as u64;
        match groups.iter_mut().find(|g| g.quotient == q) {
            Some(g) => {
                g.branches.push(e.branch.clone());
                g.i_f = add(g.i_f, e.i_f, w);
                g.i_g = add(g.i_g, e.i_g, w);
            }
            None => groups.push(HironakaFactor {
                quotient: q,
                branches: vec![e.branch.clone()],
                i_f: add(IntersectionNumber::Finite(0), e.i_f, w),
                i_g: add(IntersectionNumber::Finite(0), e.i_g, w),
                edge: None,
            }),
        }
    }
    groups.sort_by(|a, b| a.quotient.cmp(&b.quotient));
    let diag = img.diagram()?;
    let mut rebuilt = NewtonDiagram::empty();
    for g in &mut groups {
        let pts = match (&g.quotient, g.i_f, g.i_g) {
            (Quotient::Finite(_), IntersectionNumber::Finite(m), IntersectionNumber::Finite(k)) => {
                vec![(k as u32, 0), (0, m as u32)]
            }
            (Quotient::FInfinite, _, IntersectionNumber::Finite(k)) => vec![(k as u32, 0)],
            (Quotient::GInfinite, IntersectionNumber::Finite(m), _) => vec![(0, m as u32)],
            _ => return Err(GermError::Inconsistency("branch inside both f = 0 and g = 0".into())),
        };
        rebuilt = rebuilt.minkowski(&NewtonDiagram::from_support(&pts).expect("nonempty"));
        if let Quotient::Finite(q) = &g.quotient {
            g.edge = diag.compact_edges.iter().find(|e| &e.inclination == q).cloned();
            if g.edge.is_none() {
                return Err(GermError::Inconsistency(format!("no edge of inclination {}", fmt_rational(q))));
            }
        }
    }
    if rebuilt != diag {
        return Err(GermError::Inconsistency(format!(
            "Hironaka totals give vertices {:?}, the direct image has {:?}",
            rebuilt.vertices, diag.vertices
        )));
    }
    Ok(groups)
}

/// Direct image at a precision large enough for its diagram to be certified.
fn direct_image_for_diagram(h: &BiPoly, phi: &MapGerm) -> Result<DirectImage> {
    let mut prec = 8;
    loop {
        let img = direct_image(h, phi, prec)?;
        let want = img.ledger_diagram();
        let top = want.vertices.iter().map(|v| v.0 + v.1).max().unwrap_or(0);
        if img.unit || prec > top {
            return Ok(img);
        }
        prec = top + 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn p(t: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_int_terms(t)
    }

    #[test]
    fn goldens() {
        let cusp = p(&[(0, 2, 1), (3, 0, -1)]);
        let phi = MapGerm::new(BiPoly::x(), cusp.clone()).unwrap();
        let h = hironaka_factorization(&p(&[(0, 1, 2)]), &phi).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].quotient, Quotient::Finite(rat(3)));
        assert_eq!((h[0].i_f, h[0].i_g), (IntersectionNumber::Finite(1), IntersectionNumber::Finite(3)));

        let id = MapGerm::new(BiPoly::x(), BiPoly::y()).unwrap();
        // (y - x)(y + x): two lines of quotient 1 merge
        let h = hironaka_factorization(&p(&[(0, 2, 1), (2, 0, -1)]), &id).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].quotient, Quotient::Finite(rat(1)));
        assert_eq!(h[0].branches.len(), 2);
        assert_eq!((h[0].i_f, h[0].i_g), (IntersectionNumber::Finite(2), IntersectionNumber::Finite(2)));
        // y (y - x): the line y = 0 lies inside g = 0 and is kept apart from y = x
        let h = hironaka_factorization(&p(&[(0, 2, 1), (1, 1, -1)]), &id).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h[0].quotient, Quotient::GInfinite);
        assert_eq!(h[0].i_f, IntersectionNumber::Finite(1));
        assert_eq!(h[1].quotient, Quotient::Finite(rat(1)));
        assert_eq!((h[1].i_f, h[1].i_g), (IntersectionNumber::Finite(1), IntersectionNumber::Finite(1)));

        let phi = MapGerm::new(BiPoly::y(), cusp).unwrap();
        let h = hironaka_factorization(&p(&[(2, 0, 3)]), &phi).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].quotient, Quotient::Finite(rat(2)));
        assert_eq!((h[0].i_f, h[0].i_g), (IntersectionNumber::Finite(2), IntersectionNumber::Finite(4)));
    }
}
