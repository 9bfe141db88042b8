//! Acceptance run: one line per criterion, exact comparisons throughout.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use germcore::algebra::field::{Fe, Field};
use germcore::algebra::rational::{rat, ratio};
use germcore::algebra::BiPoly;
use germcore::discriminant::{direct_image, discriminant, MapGerm};
use germcore::lab::corpus::{Corpus, Shape};
use germcore::lab::{
    atypical_values, atypical_values_by_edges, atypical_values_by_milnor, key_lemma_check, nu_via_intersection,
    nu_via_intersection_exact, nu_via_milnor, oracle_discriminant, rescaling_check, tc3_check, verify_main_theorem,
    AlgebraicValue, AtypicalValue, Verdict,
};
use germcore::local::{casas_check, i0_resultant, i0_trunc, i0_zeuthen, intersection_multiplicity, milnor_number, IntersectionNumber};
use germcore::newton::{initial_newton_polynomial, newton_diagram, weighted_initial_form};
use germcore::puiseux::{implicitize, puiseux_expand};

type Outcome = Result<String, String>;

fn p(t: &[(u32, u32, i64)]) -> BiPoly {
    BiPoly::from_int_terms(t)
}

fn x() -> BiPoly {
    BiPoly::x()
}

fn y() -> BiPoly {
    BiPoly::y()
}

fn cusp() -> BiPoly {
    p(&[(0, 2, 1), (3, 0, -1)])
}

fn map(f: BiPoly, g: BiPoly) -> MapGerm {
    MapGerm::new(f, g).expect("map germ")
}

fn q(n: i64) -> Fe {
    Field::rationals().from_int(n)
}

fn qr(n: i64, d: i64) -> Fe {
    Field::rationals().from_rational(ratio(n, d))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

/// Map germs small enough for the full pipeline.
fn corpus_maps(seed: u64, n: usize) -> Vec<MapGerm> {
    let mut c = Corpus::new(seed);
    (0..n)
        .map(|_| {
            c.map_germ(Shape::new(2, 2, 3), Shape::new(3, 3, 3), |phi| {
                intersection_multiplicity(&phi.f, &phi.g).map(|i| i.finite().is_some_and(|n| n <= 6)).unwrap_or(false)
            })
        })
        .collect()
}

fn c1_discriminant_goldens() -> Outcome {
    let cases = [
        (map(x(), cusp()), p(&[(0, 1, 1), (3, 0, 1)])),
        (map(y(), cusp()), p(&[(0, 1, 1), (2, 0, -1)]).pow(2)),
        (map(x(), p(&[(0, 2, 1)])), p(&[(0, 1, 1)])),
        (map(x(), p(&[(0, 2, 1), (1, 1, -1)])), BiPoly::from_rational_terms(&[(0, 1, rat(1)), (2, 0, ratio(1, 4))])),
    ];
    for (phi, want) in &cases {
        let t = Instant::now();
        let d = ok(discriminant(phi), "discriminant")?;
        let secs = t.elapsed().as_secs_f64();
        ensure(secs < 5.0, || format!("{} took {secs:.1}s", phi.g))?;
        let got = d.canonical.body().clone();
        ensure(got == want.truncate(d.canonical.prec()), || format!("D({}, {}) = {got}, want {want}", phi.f, phi.g))?;
        let o = ok(oracle_discriminant(phi, 4), "oracle")?;
        ensure(o.flagged.is_none(), || format!("oracle flagged: {:?}", o.flagged))?;
        let lhs = ok(initial_newton_polynomial(&o.equation).and_then(|p| p.normalized()), "initial")?;
        let rhs = ok(initial_newton_polynomial(want).and_then(|p| p.normalized()), "initial")?;
        ensure(lhs == rhs, || format!("oracle initial {lhs} differs from {rhs}"))?;
        let dd = ok(newton_diagram(&o.equation), "diagram")?;
        ensure(dd == ok(newton_diagram(want), "diagram")?, || "oracle diagram differs".into())?;
    }
    Ok("4 goldens, oracle agrees".into())
}

fn c2_intersection_agreement() -> Outcome {
    let goldens = [(cusp(), p(&[(0, 2, 1), (3, 0, 1)]), 6), (cusp(), y(), 3)];
    for (f, g, want) in &goldens {
        for n in [ok(i0_resultant(f, g, 0), "resultant")?, ok(i0_zeuthen(f, g), "zeuthen")?] {
            ensure(n == IntersectionNumber::Finite(*want), || format!("i0({f}, {g}) = {n:?}, want {want}"))?;
        }
    }
    let mut c = Corpus::new(2);
    for k in 0..30 {
        let (f, g) = c.coprime_pair(Shape::new(4, 4, 5));
        let a = ok(i0_resultant(&f, &g, 0), "resultant")?;
        let b = ok(i0_zeuthen(&f, &g), "zeuthen")?;
        ensure(a == b, || format!("pair {k}: resultant {a:?} vs Zeuthen {b:?} for ({f}, {g})"))?;
    }
    Ok("30 seeded pairs and 2 goldens".into())
}

fn c3_milnor() -> Outcome {
    for (h, want) in [(cusp(), 2), (p(&[(1, 1, 1)]), 1), (p(&[(0, 1, 1), (2, 0, -1)]), 0)] {
        let mu = ok(milnor_number(&h), "milnor")?;
        ensure(mu == want, || format!("mu({h}) = {mu}, want {want}"))?;
    }
    let mut c = Corpus::new(3);
    let mut done = 0;
    while done < 10 {
        let h = c.germ(Shape::new(4, 4, 4));
        let Ok(mu) = milnor_number(&h) else { continue };
        let u = c.unit(Shape::new(2, 3, 3));
        let mu2 = ok(milnor_number(&u.mul(&h)), "milnor")?;
        ensure(mu == mu2, || format!("mu({h}) = {mu} but mu(({u}) * h) = {mu2}"))?;
        done += 1;
    }
    Ok("3 goldens, 10 unit multiplications".into())
}

fn c4_casas() -> Outcome {
    let phi = map(x(), cusp());
    let hand = [(p(&[(1, 0, 1)]), -1), (p(&[(0, 1, 1)]), 1), (p(&[(1, 0, 1), (0, 1, -1)]), -1)];
    for (h, lhs) in &hand {
        let r = ok(casas_check(&phi, h), "casas")?;
        ensure(r.holds && r.lhs == *lhs && r.rhs == *lhs, || format!("H = {h}: {r:?}"))?;
    }
    let mut c = Corpus::new(4);
    let mut done = 0;
    let mut tries = 0;
    while done < 20 {
        tries += 1;
        ensure(tries < 400, || "could not draw 20 admissible triples".into())?;
        let phi = c.map_germ(Shape::new(2, 2, 3), Shape::new(2, 3, 3), |_| true);
        let h = c.germ(Shape::new(3, 3, 3));
        let r = match casas_check(&phi, &h) {
            Ok(r) => r,
            Err(germcore::GermError::NonIsolated(_)) | Err(germcore::GermError::InvalidInput(_)) => continue,
            Err(e) => return Err(format!("({}, {}), H = {h}: {e}", phi.f, phi.g)),
        };
        ensure(r.holds, || format!("({}, {}), H = {h}: {r:?}", phi.f, phi.g))?;
        done += 1;
    }
    Ok("3 hand examples, 20 seeded triples".into())
}

fn c5_nu_instance() -> Outcome {
    let d = p(&[(0, 2, 1), (3, 0, -1)]);
    let r = ok(nu_via_intersection_exact(&d, (2, 3), &q(1), Some(7)), "nu")?;
    ensure(r.delta == 6 && r.nu == 1 && r.n == 7, || format!("t = 1: {r:?}"))?;
    let r = ok(nu_via_intersection_exact(&d, (2, 3), &q(5), Some(7)), "nu")?;
    ensure(r.delta == 0 && r.nu == 0, || format!("t = 5: {r:?}"))?;
    // (x, y^3 + x y) has discriminant v^2 + (4/27) u^3
    let phi = map(x(), p(&[(0, 3, 1), (1, 1, 1)]));
    let r = ok(nu_via_intersection(&phi, (2, 3), &qr(-4, 27), Some(7)), "nu")?;
    ensure(r.delta == 6 && r.nu == 1, || format!("map, t = -4/27: {r:?}"))?;
    let r = ok(nu_via_intersection(&phi, (2, 3), &q(1), Some(7)), "nu")?;
    ensure(r.nu == 0, || format!("map, t = 1: {r:?}"))?;
    Ok("difference 6 at the root, 0 elsewhere".into())
}

fn c6_milnor_vs_intersection() -> Outcome {
    let mut items: Vec<(MapGerm, (u32, u32), Fe, Option<u64>)> = vec![
        (map(x(), p(&[(0, 2, 1), (1, 1, -1)])), (1, 2), qr(-1, 4), Some(1)),
        (map(x(), p(&[(0, 2, 1), (1, 1, -1)])), (1, 2), q(1), Some(0)),
        (map(x(), cusp()), (1, 3), q(-1), Some(1)),
        (map(x(), cusp()), (1, 3), q(2), Some(0)),
        (map(x(), p(&[(0, 3, 1), (1, 1, 1)])), (2, 3), qr(-4, 27), Some(1)),
        (map(y(), cusp()), (1, 2), q(1), Some(2)),
        (map(y(), cusp()), (1, 2), q(3), Some(0)),
    ];
    for phi in corpus_maps(6, 6) {
        let Ok(vals) = atypical_values_by_edges(&phi, (1, 1)) else { continue };
        let t = vals.iter().find_map(|v| v.t.as_rational()).map(|r| Field::rationals().from_rational(r)).unwrap_or(q(7));
        items.push((phi, (1, 1), t, None));
    }
    let mut compared = 0;
    for (phi, w, t, want) in &items {
        let a = ok(nu_via_milnor(phi, *w, t, None), "nu_via_milnor")?;
        let b = ok(nu_via_intersection(phi, *w, t, None), "nu_via_intersection")?;
        ensure(a.nu == b.nu, || format!("({}, {}), w {w:?}, t {t}: Milnor {} vs intersection {}", phi.f, phi.g, a.nu, b.nu))?;
        if let Some(want) = want {
            ensure(a.nu == *want, || format!("({}, {}), t {t}: nu {} want {want}", phi.f, phi.g, a.nu))?;
        }
        compared += 1;
    }
    ensure(compared >= 10, || format!("only {compared} items"))?;
    Ok(format!("{compared} items agree"))
}

fn c7_main_theorem() -> Outcome {
    let perturbations = [(y(), x()), (x().pow(2), y().pow(2))];
    let r = ok(verify_main_theorem(&x(), &cusp(), &y(), &x()), "main theorem")?;
    ensure(r.passed() && r.artifacts["initial"] == "v + u^3", || format!("hand case: {r:?}"))?;
    let (mut strict, mut total) = (0, 1);
    for phi in corpus_maps(7, 15) {
        for (u1, u2) in &perturbations {
            let r = ok(verify_main_theorem(&phi.f, &phi.g, u1, u2), "main theorem")?;
            ensure(r.passed(), || format!("({}, {}) with ({u1}, {u2}): {:?}", phi.f, phi.g, r.counterexample))?;
            total += 1;
            strict += (r.verdict == Verdict::Holds) as usize;
        }
    }
    Ok(format!("{total} comparisons, {} strict holds", strict + 1))
}

fn c8_key_lemma() -> Outcome {
    let r = ok(key_lemma_check(&x(), &y(), &y(), &x(), Some(3), None), "key lemma")?;
    ensure(r.passed() && r.artifacts["type"].contains("<3,4>"), || format!("(x, y): {r:?}"))?;
    // smooth f; draws whose curves split beyond the tower cap are redrawn and counted
    let mut c = Corpus::new(8);
    let (mut n, mut skipped) = (1, 0);
    while n < 5 {
        ensure(skipped < 20, || format!("{skipped} draws exceeded the tower cap"))?;
        let phi = c.map_germ(Shape::new(2, 2, 3), Shape::new(3, 3, 3), |phi| {
            phi.f.order() == Some(1)
                && intersection_multiplicity(&phi.f, &phi.g).map(|i| i.finite().is_some_and(|n| n <= 6)).unwrap_or(false)
        });
        let r = match key_lemma_check(&phi.f, &phi.g, &y(), &x(), None, None) {
            Err(e) if e.is_capacity() => {
                skipped += 1;
                continue;
            }
            r => ok(r, &format!("key lemma for ({}, {})", phi.f, phi.g))?,
        };
        ensure(r.passed(), || format!("({}, {}): {:?}", phi.f, phi.g, r.counterexample))?;
        n += 1;
    }
    Ok(format!("{n} cases stable over consecutive N, {skipped} draws over the tower cap"))
}

fn c9_atypical() -> Outcome {
    let got = ok(atypical_values(&map(x(), p(&[(0, 2, 1), (1, 1, -1)])), (1, 2)), "atypical")?;
    let want = vec![AtypicalValue { t: AlgebraicValue::rational(ratio(-1, 4)), nu: 1 }];
    ensure(got == want, || format!("(x, y(y - x)): {got:?}"))?;
    let got = ok(atypical_values(&map(x(), y()), (1, 2)), "atypical")?;
    ensure(got.is_empty(), || format!("(x, y): {got:?}"))?;
    let weights = [(1, 1), (1, 2), (2, 1), (2, 3), (1, 3)];
    let mut c = Corpus::new(9);
    let maps = corpus_maps(9, 10);
    for phi in &maps {
        let w = weights[c.gen_range(0, weights.len() as i64 - 1) as usize];
        let a = ok(atypical_values_by_edges(phi, w), "method A")?;
        let b = ok(atypical_values_by_milnor(phi, w), "method B")?;
        ensure(a == b, || format!("({}, {}), w {w:?}: edges {a:?} vs Milnor {b:?}", phi.f, phi.g))?;
    }
    Ok("10 pencils agree, goldens {-1/4} and {}".into())
}

fn c10_rescaling_tc3() -> Outcome {
    for phi in corpus_maps(10, 5) {
        let r = ok(rescaling_check(&phi.f, &phi.g, &BiPoly::from_int_terms(&[(0, 0, 2)]), &BiPoly::from_int_terms(&[(0, 0, 3)])), "rescaling")?;
        ensure(r.passed() && r.artifacts.contains_key("initial_at_au_bv"), || format!("({}, {}): {r:?}", phi.f, phi.g))?;
    }
    let r = ok(tc3_check(&cusp(), &x(), &p(&[(1, 0, 1), (0, 1, 1)])), "tc3")?;
    ensure(r.passed() && r.artifacts["d"] == "1", || format!("tc3: {r:?}"))?;
    Ok("5 rescalings with witness, tc3 with d = 1".into())
}

fn c11_property_suites() -> Outcome {
    let mut c = Corpus::new(0);
    let s = Shape::new(4, 4, 5);
    for _ in 0..40 {
        let (a, b, e) = (c.germ(s), c.unit(s), c.germ(s));
        ensure(a.add(&b) == b.add(&a) && a.mul(&b) == b.mul(&a), || "commutativity".into())?;
        ensure(a.mul(&b).mul(&e) == a.mul(&b.mul(&e)), || "associativity".into())?;
        ensure(a.mul(&b.add(&e)) == a.mul(&b).add(&a.mul(&e)), || "distributivity".into())?;
        ensure(a.sub(&a).is_zero() && a.mul(&BiPoly::one(&Field::rationals())) == a, || "identities".into())?;
        let (da, de) = (ok(newton_diagram(&a), "diagram")?, ok(newton_diagram(&e), "diagram")?);
        let dae = ok(newton_diagram(&a.mul(&e)), "diagram")?;
        ensure(dae == da.minkowski(&de), || format!("Minkowski fails for {a}, {e}"))?;
        let ia = ok(initial_newton_polynomial(&a), "initial")?;
        let ie = ok(initial_newton_polynomial(&e), "initial")?;
        // multiplicative face by face: the product of initial polynomials, cut down to the
        // compact boundary of the product's diagram
        let iae = ok(initial_newton_polynomial(&a.mul(&e)), "initial")?;
        let cut = ia.mul(&ie).filter(|i, j| dae.on_boundary((i, j)));
        ensure(iae == cut, || format!("initial polynomials: in({a}) = {ia}, in({e}) = {ie}, in(product) = {iae}"))?;
        let weights = [(1, 1), (1, 2), (2, 1), (2, 3), (3, 2), (1, 4)];
        let w = weights[c.gen_range(0, 5) as usize];
        let wa = ok(weighted_initial_form(&a, w), "inw")?;
        let we = ok(weighted_initial_form(&e, w), "inw")?;
        ensure(ok(weighted_initial_form(&a.mul(&e), w), "inw")? == wa.mul(&we), || format!("weighted forms, w = {w:?}"))?;
    }
    // projection formula i_0(H o phi, h) = i_0(H, phi_* h)
    let mut checked = 0;
    while checked < 15 {
        let phi = c.map_germ(Shape::new(2, 2, 3), Shape::new(2, 3, 3), |_| true);
        let h = c.germ(Shape::new(3, 3, 3));
        let big_h = c.germ(Shape::new(3, 2, 3));
        let pulled = big_h.substitute(&phi.f, &phi.g);
        let Ok(IntersectionNumber::Finite(lhs)) = intersection_multiplicity(&pulled, &h) else { continue };
        let prec = 2 * lhs as u32 + 8;
        let Ok(img) = direct_image(&h, &phi, prec) else { continue };
        let rhs = ok(i0_trunc(&img.equation, &big_h), "i0_trunc")?;
        ensure(lhs == rhs, || format!("h = {h}, H = {big_h}, phi = ({}, {}): {lhs} vs {rhs}", phi.f, phi.g))?;
        checked += 1;
    }
    // Puiseux round trip: the branches annihilate the curve, and their implicit equations
    // multiply back to the curve up to a unit
    let mut expanded = 0;
    while expanded < 15 {
        let f = c.germ(Shape::new(4, 3, 4));
        let Ok(e) = puiseux_expand(&f, 48) else { continue };
        let mut prod = BiPoly::one(&e.base);
        for b in &e.branches {
            ensure(b.eval(&f).valuation().is_none(), || format!("{f} does not vanish on {}", b.describe()))?;
            let imp = ok(implicitize(b, &e.base, 12), "implicitize")?;
            prod = prod.mul(&imp.to_bipoly().pow(b.multiplicity)).truncate(12);
        }
        let lhs = ok(initial_newton_polynomial(&prod).and_then(|p| p.normalized()), "initial")?;
        let rhs = ok(initial_newton_polynomial(&f).and_then(|p| p.normalized()), "initial")?;
        ensure(lhs == rhs, || format!("{f}: branches rebuild {lhs}, want {rhs}"))?;
        expanded += 1;
    }
    Ok("ring axioms, Minkowski, initial polynomials, projection formula, Puiseux round trip".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("discriminant goldens", c1_discriminant_goldens),
        ("intersection methods agree", c2_intersection_agreement),
        ("Milnor goldens and unit invariance", c3_milnor),
        ("Casas identity", c4_casas),
        ("nu from intersection numbers", c5_nu_instance),
        ("nu from Milnor numbers", c6_milnor_vs_intersection),
        ("main theorem", c7_main_theorem),
        ("key lemma", c8_key_lemma),
        ("atypical values", c9_atypical),
        ("rescaling and transversal lines", c10_rescaling_tc3),
        ("property suites", c11_property_suites),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let results: Vec<(usize, bool)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .enumerate()
            .filter(|(k, _)| only.is_none_or(|o| o == k + 1))
            .map(|(k, (name, run))| {
                s.spawn(move || {
                    let t = Instant::now();
                    let r = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
                    let secs = t.elapsed().as_secs_f64();
                    match &r {
                        Ok(m) => println!("criterion {:>2} PASS  {name}: {m} ({secs:.1}s)", k + 1),
                        Err(m) => println!("criterion {:>2} FAIL  {name}: {m} ({secs:.1}s)", k + 1),
                    }
                    (k, r.is_ok())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("joined")).collect()
    });
    let failed = results.iter().filter(|(_, ok)| !ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
