use proptest::prelude::*;
use subdfo::dfo::test_functions::SphereQuadratic;
use subdfo::dfo::{run_driver, DriverConfig, IterationKind, ObjectiveHandle};
use subdfo::formulas::{expected_decrease, expected_decrease_ds, expected_decrease_mb, per_evaluation, P_MAX};
use subdfo::specfun::{gamma_half_ratio, gautschi_bounds};
use subdfo::{sample_stiefel, RngStream, Variant};

fn variant() -> impl Strategy<Value = Variant> {
    prop_oneof![Just(Variant::Ds), Just(Variant::Mb)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cross_ratio_separates(v in variant(), d1 in 1usize..5000, d2 in 1usize..5000, a in 0usize..1000, b in 0usize..1000) {
        let cap = match v { Variant::Ds => P_MAX.min(d1).min(d2), Variant::Mb => d1.min(d2) };
        let (p1, p2) = (1 + a % cap, 1 + b % cap);
        let e = |p, d| expected_decrease(v, p, d).unwrap().value;
        let lhs = e(p1, d1) * e(p2, d2);
        let rhs = e(p1, d2) * e(p2, d1);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs);
    }

    #[test]
    fn model_step_dominates_poll(d in 1usize..3000, a in 0usize..100) {
        let p = 1 + a % P_MAX.min(d);
        let ds = expected_decrease_ds(p, d).unwrap().value;
        let mb = expected_decrease_mb(p, d).unwrap().value;
        prop_assert!(ds > 0.0 && mb <= 1.0);
        prop_assert!(mb >= ds * (1.0 - 1e-12));
    }

    #[test]
    fn decrease_grows_and_per_evaluation_shrinks(d in 10usize..3000, a in 0usize..100) {
        let p = 1 + a % (P_MAX - 1);
        for v in [Variant::Ds, Variant::Mb] {
            prop_assert!(expected_decrease(v, p + 1, d).unwrap().value > expected_decrease(v, p, d).unwrap().value);
            prop_assert!(per_evaluation(v, p + 1, d).unwrap().value < per_evaluation(v, p, d).unwrap().value);
        }
    }

    #[test]
    fn gamma_ratio_within_gautschi(d in 1usize..1_000_000) {
        let r = gamma_half_ratio(d).unwrap().value;
        let (lo, hi) = gautschi_bounds(d);
        prop_assert!(lo <= r && r <= hi);
    }

    #[test]
    fn stiefel_samples_are_orthonormal(d in 1usize..40, a in 0usize..40, seed in any::<u64>()) {
        let p = 1 + a % d;
        let b = sample_stiefel(d, p, &mut RngStream::new(seed).generator()).unwrap();
        prop_assert!(b.orthonormality_defect() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trace_best_value_never_increases(seed in any::<u64>(), p in 1usize..4, mb in any::<bool>()) {
        let kind = if mb { IterationKind::Mb } else { IterationKind::DsComplete };
        let config = DriverConfig { p, max_evaluations: 300, iteration_kind: kind, expand_factor: 1.5, ..Default::default() };
        let h = ObjectiveHandle::new(SphereQuadratic { d: 6 });
        let trace = run_driver(&h, &[0.5, -1.0, 2.0, 0.0, 1.0, -0.3], &config, RngStream::new(seed)).unwrap();
        for w in trace.rows.windows(2) {
            prop_assert!(w[1].best_value <= w[0].best_value);
            prop_assert!(w[1].eval_count > w[0].eval_count);
        }
    }
}
