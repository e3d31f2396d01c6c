use num_traits::{One, Zero};
use proptest::prelude::*;

use persuade::attribution::attribution_weights;
use persuade::career::{accuracy_delta, construct_prop2_params};
use persuade::montecarlo;
use persuade::oracle::{exact_threshold_in_p_doc, Oracle, Regime};
use persuade::rational::{half, parse_decimal, ratio, to_decimal_string, to_fraction_string};
use persuade::sweep::{decimal_matches_fraction, realizable_information_sets, verify_point, ClosedForms, GridSpec};
use persuade::thresholds::{thresholds, ThresholdKind};
use persuade::{ModelParams, Rational};

fn twentieths(lo: i64, hi: i64) -> impl Strategy<Value = Rational> {
    (lo..=hi).prop_map(|k| ratio(k, 20))
}

/// Valid, non-hallucinating parameter points on a 1/20 lattice.
fn valid_params() -> impl Strategy<Value = ModelParams> {
    (twentieths(1, 9), 1i64..=9, twentieths(0, 20), twentieths(10, 20), twentieths(0, 20), twentieths(10, 20))
        .prop_map(|(g, l, pd, ppd, pa, ppa)| {
            let lambda = (&g * ratio(l, 9)).min(g.clone());
            ModelParams::new(g, lambda, pd, ppd, pa, ppa)
        })
        .prop_filter("model assumptions", |p| p.require_valid().is_ok())
}

fn hallucinating_params() -> impl Strategy<Value = ModelParams> {
    (valid_params(), 1i64..=9).prop_filter_map("hallucination bound", |(p, k)| {
        let bound = p.hallucination_bound();
        let phi = &bound + (Rational::one() - &bound) * ratio(k, 10);
        let q = p.with_phi_ai(phi);
        q.require_valid().is_ok().then_some(q)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, max_global_rejects: 100_000, ..ProptestConfig::default() })]

    #[test]
    fn every_check_passes_on_valid_points(p in valid_params()) {
        let failed: Vec<_> = verify_point(0, &p, &ClosedForms::default()).into_iter().filter(|c| !c.passed).collect();
        prop_assert!(failed.is_empty(), "{p}: {failed:?}");
    }

    #[test]
    fn every_check_passes_when_the_ai_hallucinates(p in hallucinating_params()) {
        let failed: Vec<_> = verify_point(0, &p, &ClosedForms::default()).into_iter().filter(|c| !c.passed).collect();
        prop_assert!(failed.is_empty(), "{p}: {failed:?}");
    }

    #[test]
    fn thresholds_are_ordered(p in valid_params()) {
        let s = thresholds(&p).unwrap();
        prop_assert!(s.is_ordered(), "{p}");
    }

    #[test]
    fn enumeration_is_a_distribution(p in valid_params()) {
        let oracle = Oracle::new(&p, true).unwrap();
        let total: Rational = oracle.atoms().iter().map(|a| &a.prob).sum();
        prop_assert!(total.is_one());
        prop_assert!(oracle.atoms().iter().all(|a| a.prob >= Rational::zero()));
    }

    #[test]
    fn posteriors_are_probabilities_and_weights_sum_to_one(p in valid_params()) {
        let oracle = Oracle::new(&p, false).unwrap();
        for info in realizable_information_sets(&oracle) {
            let post = oracle.posterior(&info).unwrap();
            prop_assert!(post >= Rational::zero() && post <= Rational::one());
            if info.is_disagreement() && !info.is_interpretable() {
                let (wa, wc) = attribution_weights(&p, &info).unwrap();
                prop_assert!((wa + wc).is_one());
            }
        }
    }

    #[test]
    fn threshold_solve_splits_the_unit_interval(p in valid_params()) {
        for k in ThresholdKind::CORE {
            let Ok(solve) = exact_threshold_in_p_doc(&p, &k.template()) else { continue };
            let Some(root) = solve.root else { continue };
            prop_assert_eq!(&root, &k.formula(&p));
            // Just above the threshold the doctor is no longer persuaded.
            let above = &root + ratio(1, 1000);
            if above <= Rational::one() && above > half() {
                prop_assert!(!k.persuaded(&above, &root));
            }
        }
    }

    #[test]
    fn decimal_rendering_round_trips(num in 0i64..1_000_000, den in 1i64..1_000_000) {
        let v = ratio(num, den);
        let decimal = to_decimal_string(&v, 12);
        let fraction = to_fraction_string(&v);
        prop_assert!(decimal_matches_fraction(&decimal, &fraction).unwrap());
        prop_assert_eq!(parse_decimal(&fraction).unwrap(), v);
    }

    #[test]
    fn grid_points_stay_in_range(start in 0i64..50, len in 0i64..50, step in 1i64..10) {
        let spec = GridSpec::new("gamma".parse().unwrap(), ratio(start, 100), ratio(start + len, 100), ratio(step, 100)).unwrap();
        let pts = spec.points();
        prop_assert_eq!(pts.len() as i64, len / step + 1);
        prop_assert!(pts.iter().all(|v| *v >= spec.start && *v <= spec.stop));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn constructed_populations_satisfy_the_accuracy_comparison(g in 6i64..9, l in 3i64..=6, pd in 4i64..=16, pa in 4i64..=16) {
        let gamma = ratio(g, 20);
        let lambda = (ratio(l, 20)).min(gamma.clone());
        let Ok(pp) = construct_prop2_params(gamma, lambda, ratio(pd, 20), ratio(pa, 20)) else { return Ok(()) };
        let d = accuracy_delta(&pp).unwrap();
        prop_assert!(d.tau_bar < Rational::one());
        if d.delta > Rational::zero() {
            prop_assert!(pp.tau < d.tau_bar);
        }
    }

    #[test]
    fn monte_carlo_is_deterministic(seed in any::<u64>()) {
        let p = ModelParams::reference();
        let sc = montecarlo::default_scenarios(&p).unwrap();
        let a = montecarlo::run(&p, &sc[..3], 5_000, seed).unwrap();
        let b = montecarlo::run(&p, &sc[..3], 5_000, seed).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

#[test]
fn both_regimes_have_realizable_disagreements() {
    let oracle = Oracle::new(&ModelParams::reference(), false).unwrap();
    let sets = realizable_information_sets(&oracle);
    for regime in Regime::BOTH {
        let interp = regime == Regime::Interpretable;
        assert!(sets.iter().any(|i| i.is_interpretable() == interp && i.is_disagreement()));
    }
}
