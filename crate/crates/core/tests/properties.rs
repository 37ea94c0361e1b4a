use exindex::estimators::{self, EstimatorId};
use exindex::harness::{self, summarize, Overrides, PreparedSample};
use proptest::prelude::*;

fn series(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![0.0..10.0f64, (0u8..5).prop_map(f64::from)], 4..max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    // Values at or below u can be moved anywhere below u without changing
    // threshold-based estimates.
    #[test]
    fn threshold_estimators_see_only_exceedances(x in series(60), u in 1.0..6.0f64, r in 1usize..8, shift in 0.0..5.0f64) {
        prop_assume!(r <= x.len());
        let y: Vec<f64> = x.iter().map(|&v| if v <= u { v - shift - 1.0 } else { v }).collect();
        let pairs: [(Result<_, _>, Result<_, _>); 4] = [
            (estimators::blocks_estimator(&x, r, u), estimators::blocks_estimator(&y, r, u)),
            (estimators::disjoint_blocks_estimator(&x, r, u), estimators::disjoint_blocks_estimator(&y, r, u)),
            (estimators::sliding_blocks_estimator(&x, r, u), estimators::sliding_blocks_estimator(&y, r, u)),
            (estimators::intervals_estimator(&x, u), estimators::intervals_estimator(&y, u)),
        ];
        for (a, b) in pairs {
            prop_assert_eq!(a.map(|e| e.value).ok(), b.map(|e| e.value).ok());
        }
        if r < x.len() {
            prop_assert_eq!(
                estimators::runs_estimator(&x, u, r).map(|e| e.value).ok(),
                estimators::runs_estimator(&y, u, r).map(|e| e.value).ok()
            );
        }
    }

    // The Northrop estimators depend on the data through ranks only.
    #[test]
    fn northrop_invariant_under_increasing_maps(x in series(60), r in 1usize..8) {
        prop_assume!(r <= x.len());
        let y: Vec<f64> = x.iter().map(|&v| (v * 0.7).exp() + 3.0 * v).collect();
        let a = estimators::northrop_sliding(&x, r).unwrap().value;
        let b = estimators::northrop_sliding(&y, r).unwrap().value;
        prop_assert_eq!(a, b);
        let a = estimators::northrop_disjoint(&x, r).unwrap().value;
        let b = estimators::northrop_disjoint(&y, r).unwrap().value;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn output_ranges(x in series(80), u in 0.5..8.0f64, r in 1usize..10) {
        prop_assume!(r <= x.len());
        if let Ok(e) = estimators::blocks_estimator(&x, r, u) {
            prop_assert!(e.value > 0.0 && e.value <= 1.0);
        }
        if r < x.len() {
            if let Ok(e) = estimators::runs_estimator(&x, u, r) {
                prop_assert!((0.0..=1.0).contains(&e.value));
            }
        }
        if let Ok(e) = estimators::intervals_estimator(&x, u) {
            prop_assert!(e.value > 0.0 && e.value <= 1.0);
        }
        prop_assert!(estimators::northrop_sliding(&x, r).unwrap().value > 0.0);
        prop_assert!(estimators::northrop_disjoint(&x, r).unwrap().value > 0.0);
        if x.len() / r >= 2 {
            if let Ok(e) = estimators::scp_estimator(&x, r, 2, 1.0) {
                prop_assert!(e.value >= 1.0 / r as f64 - 1e-15 && e.value <= 1.0 + 1e-15);
            }
        }
    }

    #[test]
    fn summary_is_permutation_invariant(mut x in prop::collection::vec(-100.0..100.0f64, 1..50), seed in any::<u64>()) {
        let a = summarize(&x).unwrap();
        // Deterministic shuffle.
        let mut state = seed | 1;
        for i in (1..x.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            x.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let b = summarize(&x).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(a.min <= a.whisker_low && a.whisker_low <= a.q25);
        prop_assert!(a.q25 <= a.median && a.median <= a.q75);
        prop_assert!(a.q75 <= a.whisker_high && a.whisker_high <= a.max);
    }

    #[test]
    fn evaluate_matches_direct_calls(x in prop::collection::vec(0.0..10.0f64, 40..120), r in 2usize..10) {
        let sample = PreparedSample::new(&x);
        let rules = harness::default_hyperparameters(EstimatorId::Blocks, x.len());
        let spec = rules.threshold_spec(r).unwrap();
        let u = estimators::resolve_threshold(&x, spec).unwrap();
        let via = harness::evaluate(&sample, &rules, r, &Overrides::default()).map(|e| e.value).ok();
        let direct = estimators::blocks_estimator(&x, r, u).map(|e| e.value).ok();
        prop_assert_eq!(via, direct);
    }
}
