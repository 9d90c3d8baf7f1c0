use foliasep_core::blowup::{
    blowup, lift_param, push_down_param, push_to_origin, reduce_singularities, ChartKind, ReductionTree, DEPTH_CAP,
};
use foliasep_core::foliation::{algebraic_multiplicity, FoliationGerm};
use foliasep_core::numeric::{ratio, FieldElement, PuiseuxParam, TruncSeries};
use foliasep_core::real::involution_fixes_real_points;
use foliasep_core::report::{named_fields, random_fields, CorpusField};
use num_traits::Zero;
use proptest::prelude::*;

fn corpus() -> Vec<CorpusField> {
    let mut out = named_fields();
    out.extend(random_fields(7, 12));
    out
}

fn trees() -> Vec<(String, ReductionTree)> {
    corpus()
        .into_iter()
        .map(|f| {
            let t = reduce_singularities(&f.spec.germ().unwrap()).unwrap();
            (f.name, t)
        })
        .collect()
}

#[test]
fn trees_are_shallow_and_end_in_simple_points() {
    for (name, t) in trees() {
        for p in &t.points {
            assert!(p.depth <= DEPTH_CAP, "{name}: point {} at depth {}", p.id, p.depth);
        }
        for p in t.final_singularities() {
            assert!(p.class.is_simple(), "{name}: final point {} is {:?}", p.id, p.class);
        }
    }
}

#[test]
fn exceptional_power_is_multiplicity_plus_dicriticity() {
    for (name, t) in trees() {
        for b in &t.blowups {
            let germ = &t.point(b.center).germ;
            assert_eq!(b.charts.nu, algebraic_multiplicity(germ), "{name}: blow-up {}", b.id);
            assert_eq!(b.charts.m, b.charts.nu + b.charts.dicritical as usize, "{name}: blow-up {}", b.id);
            assert_eq!(t.component(b.component).dicritical, b.charts.dicritical, "{name}");
        }
    }
}

/// A smooth curve crossing a component at a generic point has multiplicity
/// at the origin equal to the weight of the component.
#[test]
fn weights_are_multiplicities_of_transverse_curves() {
    let n = 12;
    let c = FieldElement::from_int(7);
    for (name, t) in trees() {
        for comp in t.visible_components() {
            let b = t.blowup(comp.blowup);
            let local = PuiseuxParam::new(TruncSeries::t(n), TruncSeries::zero(n));
            let g = push_to_origin(&t, b.center, &push_down_param(&local, ChartKind::U, &c));
            assert_eq!(g.multiplicity().unwrap(), comp.weight, "{name}: component {}", comp.id);
        }
    }
}

#[test]
fn real_trees_carry_a_conjugation_involution() {
    for (name, t) in trees() {
        if t.root_is_real() {
            assert!(involution_fixes_real_points(&t), "{name}");
        }
    }
}

fn random_germ() -> impl Strategy<Value = FoliationGerm> {
    any::<u64>().prop_map(|seed| random_fields(seed, 1)[0].spec.germ().unwrap())
}

fn nonzero_rational() -> impl Strategy<Value = FieldElement> {
    (1i64..=5, 1i64..=4, any::<bool>()).prop_map(|(a, b, s)| {
        FieldElement::from_rational(ratio(if s { a } else { -a }, b))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// On the overlap `x_U = x_V v`, `u = 1 / v` the two charts carry the
    /// same form: `omega_V = v^m omega_U`.
    #[test]
    fn charts_agree_on_the_overlap(f in random_germ(), xv in nonzero_rational(), v in nonzero_rational()) {
        let ch = blowup(&f);
        let xu = &xv * &v;
        let vinv = v.inv().unwrap();
        // omega_U = a du + b dx_U
        let a = ch.chart_u.0.eval(&xu, &vinv);
        let b = -ch.chart_u.1.eval(&xu, &vinv);
        // omega_V = c dv + d dx_V
        let c = ch.chart_v.0.eval(&xv, &v);
        let d = -ch.chart_v.1.eval(&xv, &v);
        let vm = (0..ch.m).fold(FieldElement::from_int(1), |acc, _| &acc * &v);
        // dx_U = v dx_V + x_V dv, du = -dv / v^2
        let dv_coeff = &(&b * &xv) - &(&a * &(&vinv * &vinv));
        let dx_coeff = &b * &v;
        prop_assert_eq!(c, &vm * &dv_coeff);
        prop_assert_eq!(d, &vm * &dx_coeff);
    }

    #[test]
    fn lifting_inverts_pushing_down(c in nonzero_rational(), k in 1usize..4, s in nonzero_rational()) {
        let n = 10;
        let g = PuiseuxParam::new(TruncSeries::t(n), TruncSeries::monomial(s, k, n));
        let down = push_down_param(&g, ChartKind::U, &c);
        let (kind, c2, up) = lift_param(&down).unwrap();
        prop_assert_eq!(kind, ChartKind::U);
        prop_assert_eq!(c2, c);
        for j in 0..n - 1 {
            prop_assert_eq!(up.y.coeff(j), g.y.coeff(j));
        }
        let (kind, c3, _) = lift_param(&push_down_param(&g, ChartKind::V, &FieldElement::zero())).unwrap();
        prop_assert_eq!(kind, ChartKind::V);
        prop_assert!(c3.is_zero());
    }
}
