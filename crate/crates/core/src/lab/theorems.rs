//! The discriminant under unit perturbations `((1 + u') f, (1 + u'') g)` and its corollaries.

use super::pencil::{atypical_values_by_edges, reference_t};
use super::{uv, VerificationReport};
use crate::algebra::bipoly::BiPoly;
use crate::algebra::field::{Fe, Field};
use crate::discriminant::{discriminant, DirectImage, MapGerm};
use crate::error::{GermError, Result};
use crate::local::{equisingular, equisingularity_type, intersection_multiplicity, EquisingularityType, IntersectionNumber};
use crate::newton::{factor_edge, initial_newton_polynomial_series, rescale_equal, NewtonDiagram};

/// Largest `N` tried by the stabilization in [`key_lemma_check`].
pub const MAX_KEY_LEMMA_N: u32 = 10;

/// A pencil member `g^k - t f^l` to compare on both sides.
#[derive(Clone, Debug)]
pub struct PencilSpec {
    pub w: (u32, u32),
    pub t: Fe,
}

fn one() -> BiPoly {
    BiPoly::one(&Field::rationals())
}

fn vanishing(p: &BiPoly, what: &str) -> Result<()> {
    if !p.constant_term().is_zero() {
        return Err(GermError::InvalidInput(format!("{what} must vanish at the origin")));
    }
    Ok(())
}

fn perturbed(f: &BiPoly, g: &BiPoly, u1: &BiPoly, u2: &BiPoly) -> Result<(MapGerm, MapGerm)> {
    vanishing(u1, "u'")?;
    vanishing(u2, "u''")?;
    let phi = MapGerm::new(f.clone(), g.clone())?;
    let psi = MapGerm::new(one().add(u1).mul(f), one().add(u2).mul(g))?;
    Ok((phi, psi))
}

/// Diagram and initial Newton polynomial of the normalized equation and of its canonical form.
struct Initial {
    diagram: NewtonDiagram,
    strict: BiPoly,
    canonical: BiPoly,
}

fn initial(d: &DirectImage) -> Result<Initial> {
    if d.unit {
        return Ok(Initial { diagram: NewtonDiagram::empty(), strict: one(), canonical: one() });
    }
    Ok(Initial {
        diagram: d.diagram()?,
        strict: initial_newton_polynomial_series(&d.equation)?,
        canonical: initial_newton_polynomial_series(&d.canonical)?,
    })
}

/// Records the comparison of two initial Newton polynomials in `r`.
fn compare_initial(r: &mut VerificationReport, a: &Initial, b: &Initial) {
    if a.diagram != b.diagram {
        r.fail("diagram", format!("{:?}", a.diagram.vertices), format!("{:?}", b.diagram.vertices));
    }
    if a.strict != b.strict {
        if a.canonical == b.canonical {
            r.weaken();
        } else {
            r.fail("initial_polynomial", uv(&a.canonical), uv(&b.canonical));
        }
    }
}

fn edge_roots(p: &Initial) -> Result<String> {
    let mut out = Vec::new();
    for e in &p.diagram.compact_edges {
        let w = e.weight();
        let fac = factor_edge(&p.strict.filter(|i, j| e.contains((i, j))), w)?;
        for r in &fac.roots {
            out.push(format!("w=({},{}): {} (nu {})", w.0, w.1, r.minpoly.to_string_in("t"), r.nu));
        }
    }
    Ok(out.join("; "))
}

/// Checks that the discriminants of `(f, g)` and `((1 + u') f, (1 + u'') g)` have the same Newton
/// diagram and the same initial Newton polynomial.
pub fn verify_main_theorem(f: &BiPoly, g: &BiPoly, u1: &BiPoly, u2: &BiPoly) -> Result<VerificationReport> {
    let (phi, psi) = perturbed(f, g, u1, u2)?;
    let mut r = VerificationReport::new("main_theorem");
    r.input("f", f);
    r.input("g", g);
    r.input("u1", u1);
    r.input("u2", u2);
    let d = discriminant(&phi)?;
    let dt = discriminant(&psi)?;
    r.precision = vec![d.equation.prec(), dt.equation.prec()];
    let (a, b) = (initial(&d)?, initial(&dt)?);
    r.artifact("diagram", format!("{:?}", a.diagram.vertices));
    r.artifact("diagram_perturbed", format!("{:?}", b.diagram.vertices));
    r.artifact("initial", uv(&a.strict));
    r.artifact("initial_perturbed", uv(&b.strict));
    r.artifact("edge_roots", edge_roots(&a)?);
    r.artifact("edge_roots_perturbed", edge_roots(&b)?);
    compare_initial(&mut r, &a, &b);
    Ok(r)
}

fn curve_type(label: &str, h: &BiPoly) -> Result<EquisingularityType> {
    equisingularity_type(&[(label.to_string(), h.clone())])
}

fn describe_type(t: &EquisingularityType) -> String {
    let b: Vec<String> = t
        .branches
        .iter()
        .map(|b| format!("<{}>", b.semigroup.iter().map(u32::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    let mut pairs = Vec::new();
    for i in 0..t.matrix.len() {
        for j in i + 1..t.matrix.len() {
            pairs.push(t.matrix[i][j].to_string());
        }
    }
    format!("branches [{}], i0 [{}]", b.join(" "), pairs.join(" "))
}

fn pencil_member(f: &BiPoly, g: &BiPoly, w: (u32, u32), t: &Fe) -> Result<BiPoly> {
    let field = f.field().join(g.field())?.join(t.field())?;
    let (f, g) = (f.lift_to(&field)?, g.lift_to(&field)?);
    Ok(g.pow(w.0).sub(&f.pow(w.1).scale(&t.lift_to(&field)?)))
}

/// Equisingularity of the generic members `g^k - t f^l` and `g~^k - t f~^l` for two rational
/// `t` outside both atypical sets.
pub fn generic_fiber_equisingularity(
    f: &BiPoly,
    g: &BiPoly,
    u1: &BiPoly,
    u2: &BiPoly,
    w: (u32, u32),
) -> Result<VerificationReport> {
    let (phi, psi) = perturbed(f, g, u1, u2)?;
    let mut r = VerificationReport::new("generic_fibers");
    r.input("f", f);
    r.input("g", g);
    r.input("u1", u1);
    r.input("u2", u2);
    r.input("w", format!("({}, {})", w.0, w.1));
    let mut avoid: Vec<_> = atypical_values_by_edges(&phi, w)?.into_iter().map(|a| a.t).collect();
    avoid.extend(atypical_values_by_edges(&psi, w)?.into_iter().map(|a| a.t));
    let q = Field::rationals();
    let t1 = reference_t(&avoid, &q.zero());
    let t2 = reference_t(&avoid, &q.from_int(t1));
    r.artifact("t_values", format!("{t1}, {t2}"));
    for t in [t1, t2] {
        let tf = q.from_int(t);
        let a = curve_type("h", &pencil_member(&phi.f, &phi.g, w, &tf)?)?;
        let b = curve_type("h", &pencil_member(&psi.f, &psi.g, w, &tf)?)?;
        r.artifact(&format!("type_t{t}"), describe_type(&a));
        r.artifact(&format!("type_t{t}_perturbed"), describe_type(&b));
        if equisingular(&a, &b)?.is_none() {
            r.fail(&format!("t{t}"), describe_type(&a), describe_type(&b));
        }
    }
    Ok(r)
}

/// `(g - f)^N - f^{N + 1}`.
fn key_curve(f: &BiPoly, g: &BiPoly, n: u32) -> BiPoly {
    g.sub(f).pow(n).sub(&f.pow(n + 1))
}

fn key_verdict(phi: &MapGerm, psi: &MapGerm, n: u32) -> Result<(bool, EquisingularityType, EquisingularityType)> {
    let a = curve_type("h", &key_curve(&phi.f, &phi.g, n))?;
    let b = curve_type("h", &key_curve(&psi.f, &psi.g, n))?;
    Ok((equisingular(&a, &b)?.is_some(), a, b))
}

/// Equisingularity of `(g - f)^N - f^{N + 1}` and `(g~ - f~)^N - f~^{N + 1}`, with the verdict
/// required to agree for `N` and `N + 1`. Without `n`, `N` runs from 2 until two consecutive
/// values both give equisingular curves. A supplied pencil member `h_t` is compared as well.
pub fn key_lemma_check(
    f: &BiPoly,
    g: &BiPoly,
    u1: &BiPoly,
    u2: &BiPoly,
    n: Option<u32>,
    pencil: Option<&PencilSpec>,
) -> Result<VerificationReport> {
    let (phi, psi) = perturbed(f, g, u1, u2)?;
    let mut r = VerificationReport::new("key_lemma");
    r.input("f", f);
    r.input("g", g);
    r.input("u1", u1);
    r.input("u2", u2);
    let mut cur = n.unwrap_or(2);
    let mut here = key_verdict(&phi, &psi, cur)?;
    let mut next = key_verdict(&phi, &psi, cur + 1)?;
    while n.is_none() && !(here.0 && next.0) {
        if cur + 2 > MAX_KEY_LEMMA_N {
            return Err(GermError::Capacity { what: "key lemma exponent N".into(), cap: MAX_KEY_LEMMA_N as usize });
        }
        cur += 1;
        here = next;
        next = key_verdict(&phi, &psi, cur + 1)?;
    }
    r.n_values = vec![cur, cur + 1];
    r.artifact("type", describe_type(&here.1));
    r.artifact("type_perturbed", describe_type(&here.2));
    for (k, v) in [(cur, &here), (cur + 1, &next)] {
        if !v.0 {
            r.fail(&format!("n{k}"), describe_type(&v.1), describe_type(&v.2));
        }
    }
    if let Some(p) = pencil {
        let kl = p.w.0 * p.w.1;
        let nn = cur.max(kl + 1);
        let a = curve_type("h", &super::source_pencil(&phi.f, &phi.g, p.w, &p.t, nn)?)?;
        let b = curve_type("h", &super::source_pencil(&psi.f, &psi.g, p.w, &p.t, nn)?)?;
        r.artifact("pencil_type", describe_type(&a));
        r.artifact("pencil_type_perturbed", describe_type(&b));
        if equisingular(&a, &b)?.is_none() {
            r.fail("pencil", describe_type(&a), describe_type(&b));
        }
    }
    Ok(r)
}

/// Initial Newton polynomials of the discriminants of `(f, g)` and `(u1 f, u2 g)` for units
/// `u1`, `u2` agree after rescaling the variables; with `a = u1(0)`, `b = u2(0)` the initial
/// part of `D1(a u, b v)` is proportional to that of `D(u, v)`.
pub fn rescaling_check(f: &BiPoly, g: &BiPoly, u1: &BiPoly, u2: &BiPoly) -> Result<VerificationReport> {
    let (a, b) = (u1.constant_term(), u2.constant_term());
    if a.is_zero() || b.is_zero() {
        return Err(GermError::InvalidInput("u1 and u2 must be units".into()));
    }
    let mut r = VerificationReport::new("rescaling");
    r.input("f", f);
    r.input("g", g);
    r.input("u1", u1);
    r.input("u2", u2);
    let phi = MapGerm::new(f.clone(), g.clone())?;
    let psi = MapGerm::new(u1.mul(f), u2.mul(g))?;
    let (d, d1) = (discriminant(&phi)?, discriminant(&psi)?);
    r.precision = vec![d.equation.prec(), d1.equation.prec()];
    let (p, p1) = (initial(&d)?, initial(&d1)?);
    r.artifact("initial", uv(&p.strict));
    r.artifact("initial_rescaled_map", uv(&p1.strict));
    r.artifact("initial_at_au_bv", uv(&p.strict.rescale(&a, &b)));
    if p.diagram != p1.diagram {
        r.fail("diagram", format!("{:?}", p.diagram.vertices), format!("{:?}", p1.diagram.vertices));
        return Ok(r);
    }
    if d.unit {
        return Ok(r);
    }
    let wit = rescale_equal(&p.strict, &p1.strict)?;
    match &wit.witness {
        Some((x, y)) => r.artifact("witness", format!("a = {x}, b = {y}")),
        None if wit.solvable => r.artifact("witness", "omitted: beyond the tower-degree cap"),
        None => r.fail("rescale", uv(&p.strict), uv(&p1.strict)),
    }
    let lhs = p1.strict.rescale(&a, &b).normalized()?;
    let rhs = p.strict.normalized()?;
    if lhs != rhs {
        r.fail("identity", uv(&lhs), uv(&rhs));
    }
    Ok(r)
}

/// Lowest homogeneous part of `h` when it is `c L^m` for a linear form `L`: the direction
/// `(p, q)` of the line `L = 0`.
fn tangent_direction(h: &BiPoly) -> Result<(Fe, Fe, u32)> {
    let m = h.order().ok_or_else(|| GermError::ZeroInput("tc3 curve is zero".into()))?;
    if m < 2 {
        return Err(GermError::InvalidInput("the curve must be singular".into()));
    }
    let hm = h.filter(|i, j| i + j == m);
    let f = h.field().clone();
    let cy = hm.coeff(0, m);
    let (lin, dir) = if cy.is_zero() {
        (BiPoly::x(), (f.zero(), f.one()))
    } else {
        let rr = hm.coeff(1, m - 1).checked_div(&cy.scale(&crate::algebra::rational::rat(m as i64)))?;
        let lin = BiPoly::y().lift_to(&f)?.add(&BiPoly::monomial(rr.clone(), 1, 0));
        (lin, (f.one(), rr.neg()))
    };
    let lead = hm.terms().iter().next().map(|(_, c)| c.clone()).expect("nonzero");
    let pw = lin.pow(m);
    let scale = lead.checked_div(&pw.terms().iter().next().map(|(_, c)| c.clone()).expect("nonzero"))?;
    if pw.scale(&scale) != hm {
        return Err(GermError::InvalidInput(format!("tangent cone {hm} is not a power of one line")));
    }
    Ok((dir.0, dir.1, m))
}

/// For a unitangent singular `h` and smooth `l1`, `l2` transverse to it: `d` is the limit of
/// `l2 / l1` along the tangent line, and the discriminants of `(d l1, h)` and `(l2, h)` have
/// equal initial Newton polynomials.
pub fn tc3_check(h: &BiPoly, l1: &BiPoly, l2: &BiPoly) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("tc3");
    r.input("h", h);
    r.input("l1", l1);
    r.input("l2", l2);
    let (p, q, m) = tangent_direction(h)?;
    r.artifact("multiplicity", m);
    let mut vals = Vec::new();
    for (name, l) in [("l1", l1), ("l2", l2)] {
        vanishing(l, name)?;
        let a = l.coeff(1, 0);
        let b = l.coeff(0, 1);
        if a.is_zero() && b.is_zero() {
            return Err(GermError::InvalidInput(format!("{name} is not smooth")));
        }
        if intersection_multiplicity(l, h)? != IntersectionNumber::Finite(m as u64) {
            return Err(GermError::InvalidInput(format!("{name} is not transverse to the curve")));
        }
        vals.push(a.checked_mul(&p)?.checked_add(&b.checked_mul(&q)?)?);
    }
    if vals[0].is_zero() || vals[1].is_zero() {
        return Err(GermError::InvalidInput("d is undefined along the tangent".into()));
    }
    let d = vals[1].checked_div(&vals[0])?;
    r.artifact("d", &d);
    let phi1 = MapGerm::new(l1.lift_to(d.field())?.scale(&d), h.clone())?;
    let phi2 = MapGerm::new(l2.clone(), h.clone())?;
    let (a, b) = (initial(&discriminant(&phi1)?)?, initial(&discriminant(&phi2)?)?);
    r.artifact("initial_d_l1", uv(&a.strict));
    r.artifact("initial_l2", uv(&b.strict));
    compare_initial(&mut r, &a, &b);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::Verdict;

    fn p(t: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_int_terms(t)
    }

    fn zero() -> BiPoly {
        BiPoly::zero(&Field::rationals())
    }

    fn cusp() -> BiPoly {
        p(&[(0, 2, 1), (3, 0, -1)])
    }

    #[test]
    fn main_theorem_goldens() {
        let r = verify_main_theorem(&BiPoly::x(), &cusp(), &BiPoly::y(), &BiPoly::x()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r:?}");
        assert_eq!(r.artifacts["initial"], "v + u^3");
        let r = verify_main_theorem(&BiPoly::x(), &cusp(), &zero(), &zero()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        let lines = p(&[(0, 2, 1), (1, 1, -1)]);
        let r = verify_main_theorem(&BiPoly::x(), &lines, &BiPoly::x(), &BiPoly::y()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r:?}");
        assert!(r.artifacts["edge_roots_perturbed"].contains("t + 1/4"), "{r:?}");
    }

    #[test]
    fn generic_fibers() {
        let r = generic_fiber_equisingularity(&BiPoly::x(), &cusp(), &BiPoly::y(), &BiPoly::x(), (1, 3)).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r:?}");
        let lines = p(&[(0, 2, 1), (1, 1, -1)]);
        let r = generic_fiber_equisingularity(&BiPoly::x(), &lines, &BiPoly::x(), &BiPoly::y(), (1, 2)).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r:?}");
    }

    #[test]
    fn key_lemma_goldens() {
        let r = key_lemma_check(&BiPoly::x(), &BiPoly::y(), &BiPoly::y(), &BiPoly::x(), Some(3), None).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r:?}");
        assert!(r.artifacts["type"].starts_with("branches [<3,4>]"), "{r:?}");
        let r = key_lemma_check(&BiPoly::x(), &cusp(), &BiPoly::y(), &zero(), None, None).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r:?}");
    }

    #[test]
    fn rescaling_goldens() {
        let q = Field::rationals();
        let two = BiPoly::constant(q.from_int(2));
        let three = BiPoly::constant(q.from_int(3));
        let r = rescaling_check(&BiPoly::x(), &cusp(), &two, &three).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.artifacts["initial_at_au_bv"], "3*v + 8*u^3");
        let one = BiPoly::one(&q);
        assert_eq!(rescaling_check(&BiPoly::x(), &cusp(), &one, &one).unwrap().verdict, Verdict::Holds);
        let u1 = p(&[(0, 0, 1), (0, 1, 1)]);
        let u2 = p(&[(0, 0, 2), (1, 0, 2)]);
        assert!(rescaling_check(&BiPoly::x(), &cusp(), &u1, &u2).unwrap().passed());
    }

    #[test]
    fn tc3_goldens() {
        let r = tc3_check(&cusp(), &BiPoly::x(), &p(&[(1, 0, 1), (0, 1, 1)])).unwrap();
        assert_eq!(r.artifacts["d"], "1");
        assert_eq!(r.verdict, Verdict::Holds, "{r:?}");
        assert_eq!(r.artifacts["initial_l2"], "v + u^3");
        let r = tc3_check(&cusp(), &BiPoly::x(), &p(&[(1, 0, 2), (0, 1, 1)])).unwrap();
        assert_eq!(r.artifacts["d"], "2");
        assert!(r.passed(), "{r:?}");
        assert!(tc3_check(&p(&[(1, 1, 1)]), &BiPoly::x(), &BiPoly::y()).is_err());
    }
}
