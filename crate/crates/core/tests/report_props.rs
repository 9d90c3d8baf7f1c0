use foliasep_core::numeric::{ratio, BiPoly, FieldElement, Gaussian};
use foliasep_core::report::{analyze, parse_input, random_fields, AnalyzeOptions, Command, InputSpec};
use proptest::prelude::*;

fn gaussian() -> impl Strategy<Value = FieldElement> {
    (-9i64..=9, 1i64..=5, -9i64..=9, 1i64..=5)
        .prop_map(|(a, b, c, d)| FieldElement::from_gaussian(Gaussian::new(ratio(a, b), ratio(c, d))))
}

fn poly() -> impl Strategy<Value = BiPoly> {
    prop::collection::vec((gaussian(), 0u32..=5, 0u32..=5), 0..7).prop_map(|terms| {
        let mut p = BiPoly::zero();
        for (c, i, j) in terms {
            p.add_term(i, j, &c);
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_input_parses_back(p in poly(), q in poly()) {
        let spec = InputSpec::new(p, q);
        let back = parse_input(&spec.to_text()).unwrap();
        prop_assert_eq!(back, spec);
    }

    #[test]
    fn parser_accepts_reordered_and_commented_input(p in poly(), q in poly()) {
        let spec = InputSpec::new(p, q);
        let text = format!("# swapped\nQ = {};\n  P = {} ;", spec.q, spec.p);
        prop_assert_eq!(parse_input(&text).unwrap(), spec);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn reports_are_deterministic(field_seed in any::<u64>(), seed in 0u64..3) {
        let spec = random_fields(field_seed, 1).remove(0).spec;
        let opts = AnalyzeOptions { seed, ..AnalyzeOptions::default() };
        let a = analyze(&spec, Command::All, &opts);
        let b = analyze(&spec, Command::All, &opts);
        prop_assert_eq!(a.to_json(), b.to_json());
        prop_assert_eq!(a.dot, b.dot);
    }
}
