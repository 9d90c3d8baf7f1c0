use foliasep_core::blowup::{lift_param, reduce_singularities, strict_transform_equation, ReductionTree};
use foliasep_core::foliation::{milnor_oracle, FoliationGerm};
use foliasep_core::numeric::Order;
use foliasep_core::polar::{intersection_number, random_branch, RandomBranch};
use foliasep_core::report::{named_fields, random_fields};
use foliasep_core::separatrix::{
    all_invariant, balanced_divisor, check_multiplicity_formula, default_order, enumerate_separatrices, is_balanced,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn trees() -> Vec<(String, ReductionTree)> {
    let mut fields = named_fields();
    fields.extend(random_fields(11, 10));
    fields
        .into_iter()
        .map(|f| (f.name, reduce_singularities(&f.spec.germ().unwrap()).unwrap()))
        .collect()
}

#[test]
fn separatrices_are_invariant_and_divisors_balanced() {
    for (name, t) in trees() {
        let n = default_order(&t).unwrap();
        let seps = enumerate_separatrices(&t, n).unwrap();
        assert!(all_invariant(&t, &seps), "{name}");
        for j in [false, true] {
            if j && !t.root_is_real() {
                continue;
            }
            let b = balanced_divisor(&t, j, n).unwrap();
            assert!(b.balanced && is_balanced(&t, &b.members), "{name}");
            let m = check_multiplicity_formula(&t, &b).unwrap();
            assert!(m.holds && m.inequality_holds, "{name}: {m:?}");
        }
    }
}

fn branch_pair() -> impl Strategy<Value = (RandomBranch, RandomBranch)> {
    (any::<u64>(), any::<u64>()).prop_map(|(a, b)| {
        let n = 24;
        (
            random_branch(&mut ChaCha8Rng::seed_from_u64(a), n),
            random_branch(&mut ChaCha8Rng::seed_from_u64(b), n),
        )
    })
}

fn order(f: &foliasep_core::numeric::BiPoly) -> usize {
    match f.order() {
        Order::Finite(k) => k,
        Order::Infinite => panic!("zero equation"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// The parametric intersection number agrees with `dim O / (f, h)`.
    #[test]
    fn intersection_matches_local_algebra((b1, b2) in branch_pair()) {
        prop_assume!(b1.equation.normalized() != b2.equation.normalized());
        let i = intersection_number(&b1.equation, &b2.param).unwrap();
        let pair = FoliationGerm::new(b1.equation.clone(), b2.equation.clone()).unwrap();
        prop_assert_eq!(milnor_oracle(&pair, i + 3).unwrap(), i);
    }

    /// `(f, Gamma)_0 = nu(f) nu(Gamma) + (f~, Gamma~)` through one blow-up.
    #[test]
    fn intersections_drop_by_multiplicities((b1, b2) in branch_pair()) {
        prop_assume!(b1.equation.normalized() != b2.equation.normalized());
        let f = &b1.equation;
        let g = &b2.param;
        let before = intersection_number(f, g).unwrap();
        let (kind, c, lifted) = lift_param(g).unwrap();
        let strict = strict_transform_equation(f, kind, &c);
        let after = intersection_number(&strict, &lifted).unwrap();
        prop_assert_eq!(before, order(f) * g.multiplicity().unwrap() + after);
    }
}
