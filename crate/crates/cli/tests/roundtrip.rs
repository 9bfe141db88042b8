use germ_cli::parse_germ;
use germcore::algebra::rational::Rational;
use germcore::algebra::BiPoly;
use proptest::prelude::*;

fn poly() -> impl Strategy<Value = BiPoly> {
    prop::collection::vec((0u32..7, 0u32..7, -50i64..50, 1i64..12), 0..8).prop_map(|terms| {
        let t: Vec<(u32, u32, Rational)> = terms
            .into_iter()
            .map(|(i, j, n, d)| (i, j, Rational::new(n.into(), d.into())))
            .collect();
        BiPoly::from_rational_terms(&t)
    })
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(p in poly()) {
        prop_assert_eq!(parse_germ(&p.to_string_in("x", "y"), ("x", "y")).unwrap(), p.clone());
        prop_assert_eq!(parse_germ(&p.to_string_in("u", "v"), ("u", "v")).unwrap(), p);
    }

    #[test]
    fn whitespace_is_ignored(p in poly()) {
        let s = p.to_string_in("x", "y");
        let spaced: String =
            s.chars().map(|c| if c.is_alphanumeric() { c.to_string() } else { format!(" {c}\n") }).collect();
        let tight: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        prop_assert_eq!(parse_germ(&spaced, ("x", "y")).unwrap(), p.clone());
        prop_assert_eq!(parse_germ(&tight, ("x", "y")).unwrap(), p);
    }
}
