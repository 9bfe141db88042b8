//! Randomised algebraic identities over small integer germs.

use germcore::algebra::factor::{expand_q, factor_q};
use germcore::algebra::field::Field;
use germcore::algebra::rational::{rat, Rational};
use germcore::algebra::BiPoly;
use germcore::local::milnor_number;
use germcore::newton::{initial_newton_polynomial, newton_diagram, rescale_equal, weighted_initial_form};
use proptest::prelude::*;

fn germ() -> impl Strategy<Value = BiPoly> {
    prop::collection::vec((0u32..5, 0u32..5, -4i64..=4), 1..6).prop_map(|t| {
        let t: Vec<_> = t.into_iter().filter(|&(i, j, c)| i + j > 0 && c != 0).collect();
        BiPoly::from_int_terms(&t)
    })
}

fn nonzero_germ() -> impl Strategy<Value = BiPoly> {
    germ().prop_filter("nonzero", |p| !p.is_zero())
}

fn unit() -> impl Strategy<Value = BiPoly> {
    (germ(), 1i64..4).prop_map(|(p, c)| p.add(&BiPoly::from_int_terms(&[(0, 0, c)])))
}

fn scalar() -> impl Strategy<Value = i64> {
    prop_oneof![-3i64..=-1, 1i64..=3]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in germ(), b in germ(), c in germ()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.mul(&BiPoly::one(&Field::rationals())), a);
    }

    #[test]
    fn newton_diagram_of_product_is_minkowski_sum(a in nonzero_germ(), b in nonzero_germ()) {
        let d = newton_diagram(&a.mul(&b)).unwrap();
        prop_assert_eq!(d, newton_diagram(&a).unwrap().minkowski(&newton_diagram(&b).unwrap()));
    }

    #[test]
    fn initial_polynomial_of_product_on_boundary(a in nonzero_germ(), b in nonzero_germ()) {
        let ab = a.mul(&b);
        let d = newton_diagram(&ab).unwrap();
        let prod = initial_newton_polynomial(&a).unwrap().mul(&initial_newton_polynomial(&b).unwrap());
        prop_assert_eq!(initial_newton_polynomial(&ab).unwrap(), prod.filter(|i, j| d.on_boundary((i, j))));
    }

    #[test]
    fn weighted_forms_multiply(
        a in nonzero_germ(),
        b in nonzero_germ(),
        w in prop::sample::select(vec![(1u32, 1u32), (1, 2), (2, 1), (2, 3), (3, 2), (1, 4), (5, 3)]),
    ) {
        let lhs = weighted_initial_form(&a.mul(&b), w).unwrap();
        prop_assert_eq!(lhs, weighted_initial_form(&a, w).unwrap().mul(&weighted_initial_form(&b, w).unwrap()));
    }

    #[test]
    fn milnor_number_is_unit_invariant(h in nonzero_germ(), u in unit()) {
        if let Ok(mu) = milnor_number(&h) {
            prop_assert_eq!(milnor_number(&h.mul(&u)).unwrap(), mu);
        }
    }

    #[test]
    fn rescale_equal_is_an_equivalence(p in nonzero_germ(), a in scalar(), b in scalar(), c in scalar(), d in scalar()) {
        let k = Field::rationals();
        let q = p.rescale(&k.from_int(a), &k.from_int(b));
        let r = q.rescale(&k.from_int(c), &k.from_int(d));
        prop_assert!(rescale_equal(&p, &p).unwrap().solvable);
        prop_assert!(rescale_equal(&p, &q).unwrap().solvable);
        prop_assert!(rescale_equal(&q, &p).unwrap().solvable);
        prop_assert!(rescale_equal(&p, &r).unwrap().solvable);
    }

    #[test]
    fn rational_factorisation_multiplies_back(
        fs in prop::collection::vec(prop::collection::vec(-5i64..=5, 2..5), 1..4),
    ) {
        let polys: Vec<Vec<Rational>> = fs
            .iter()
            .map(|f| {
                let mut f: Vec<Rational> = f.iter().map(|&c| rat(c)).collect();
                *f.last_mut().unwrap() = rat(1);
                f
            })
            .collect();
        let prod = expand_q(&polys.iter().map(|f| (f.clone(), 1)).collect());
        let factors = factor_q(&prod);
        prop_assert_eq!(expand_q(&factors), prod);
        let pieces: usize = factors.iter().map(|(_, e)| e).sum();
        prop_assert!(pieces >= polys.len());
    }
}
