// SPDX-License-Identifier: MIT OR Apache-2.0

use proptest::prelude::*;
use segwise_core::cv::{select_k_cv, split, CvFit, SplitMode};
use segwise_core::detect::{candidate_family, DetectorConfig, DetectorKind};
use segwise_core::inference::{critical_value, run_test, test_statistic};
use segwise_core::model::{Segmentation, Series};
use segwise_core::rng::substream;

fn series_strategy(min: usize, max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![-5.0..5.0f64, (0..3i32).prop_map(f64::from)], min..=max)
}

fn mode_strategy() -> impl Strategy<Value = SplitMode> {
    prop_oneof![Just(SplitMode::OddEven), (2usize..=4).prop_map(SplitMode::VFold)]
}

fn detector_strategy() -> impl Strategy<Value = DetectorConfig> {
    prop_oneof![
        Just(DetectorConfig::wbs()),
        Just(DetectorConfig::pelt()),
        Just(DetectorConfig::dp_exact())
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn family_has_exact_counts(x in series_strategy(8, 60), det in detector_strategy(), seed in any::<u64>()) {
        let s = Series::univariate(&x).unwrap();
        let fam = candidate_family(&s, 6, &det, &mut substream(seed, &[])).unwrap();
        prop_assert_eq!(fam.len(), 7);
        for (r, seg) in fam.iter().enumerate() {
            if let Some(seg) = seg {
                prop_assert_eq!(seg.len(), r);
                prop_assert!(seg.min_segment_len() >= det.min_segment_length);
            }
        }
        if det.kind == DetectorKind::Wbs {
            for w in fam.windows(2) {
                if let (Some(a), Some(b)) = (&w[0], &w[1]) {
                    prop_assert!(a.is_subset_of(b));
                }
            }
        }
    }

    #[test]
    fn k_cv_minimises_the_curve(x in series_strategy(12, 80), mode in mode_strategy(), det in detector_strategy()) {
        let s = Series::univariate(&x).unwrap();
        let plan = split(s.n(), mode).unwrap();
        let fit = CvFit::new(&s, &plan, 5, &det, 3).unwrap();
        let curve = fit.cv_curve();
        let k = select_k_cv(&curve);
        for (r, &e) in curve.errors().iter().enumerate() {
            prop_assert!(curve.errors()[k] <= e);
            if r < k {
                prop_assert!(curve.errors()[k] < e);
            }
        }
        // no candidate improves on K_CV, so its discrepancies are all non-positive
        if k < fit.bound() {
            let table = fit.delta_table(k).unwrap();
            prop_assert!(table.delta_hat().iter().all(|&d| d <= 1e-12));
        }
    }

    #[test]
    fn discrepancies_telescope(x in series_strategy(12, 60), mode in mode_strategy()) {
        let s = Series::univariate(&x).unwrap();
        let plan = split(s.n(), mode).unwrap();
        let fit = CvFit::new(&s, &plan, 5, &DetectorConfig::dp_exact(), 0).unwrap();
        let bound = fit.bound();
        prop_assume!(bound >= 2);
        for r in 0..bound - 1 {
            let t = r + 1;
            let (tr, tt) = (fit.delta_table(r).unwrap(), fit.delta_table(t).unwrap());
            for s_idx in 1..tr.s_values().len() {
                let s_val = tr.s_values()[s_idx];
                let via = tr.column(0).iter().zip(tt.column(s_val - t - 1)).map(|(a, b)| a + b);
                for (direct, sum) in tr.column(s_idx).iter().zip(via) {
                    prop_assert!((direct - sum).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn fold_centred_columns_sum_to_zero(x in series_strategy(12, 60), mode in mode_strategy()) {
        let s = Series::univariate(&x).unwrap();
        let plan = split(s.n(), mode).unwrap();
        let fit = CvFit::new(&s, &plan, 4, &DetectorConfig::pelt(), 0).unwrap();
        prop_assume!(fit.bound() >= 1);
        let table = fit.delta_table(0).unwrap();
        for k in 0..table.s_values().len() {
            let c = table.centered_column(k);
            let mut sums = vec![0.0; table.n_folds()];
            for (v, &f) in c.iter().zip(table.fold_of()) {
                sums[f] += v;
            }
            let scale = table.column(k).iter().map(|v| v.abs()).sum::<f64>().max(1.0);
            prop_assert!(sums.iter().all(|s| s.abs() < 1e-9 * scale));
        }
    }

    #[test]
    fn critical_value_monotone_in_alpha(draws in prop::collection::vec(-10.0..10.0f64, 1..200), a in 0.001..0.999f64, b in 0.001..0.999f64) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(critical_value(&draws, lo).unwrap() >= critical_value(&draws, hi).unwrap());
        let c = critical_value(&draws, lo).unwrap();
        prop_assert!(draws.contains(&c));
    }

    #[test]
    fn statistic_is_translation_invariant(x in series_strategy(16, 50), seed in any::<u64>()) {
        let s = Series::univariate(&x).unwrap();
        let shifted: Vec<f64> = x.iter().map(|v| v + 7.5).collect();
        let t = Series::univariate(&shifted).unwrap();
        let plan = split(s.n(), SplitMode::OddEven).unwrap();
        let det = DetectorConfig::dp_exact();
        let fa = CvFit::new(&s, &plan, 3, &det, 0).unwrap();
        let fb = CvFit::new(&t, &plan, 3, &det, 0).unwrap();
        prop_assume!(fa.bound() >= 1);
        let (ta, tb) = (fa.delta_table(0).unwrap(), fb.delta_table(0).unwrap());
        let (sa, sb) = (test_statistic(&ta), test_statistic(&tb));
        prop_assert!(sa == sb || (sa - sb).abs() < 1e-6 * sa.abs().max(1.0));
        let (ra, rb) = (run_test(&ta, 0.1, 50, seed).unwrap(), run_test(&tb, 0.1, 50, seed).unwrap());
        prop_assert!(ra.rejected == rb.rejected || (ra.statistic - ra.critical_value).abs() < 1e-6);
    }

    #[test]
    fn segmentation_rejects_unordered(cps in prop::collection::vec(0usize..20, 0..6)) {
        let ok = cps.windows(2).all(|w| w[0] < w[1]) && cps.iter().all(|&t| t > 0 && t < 20);
        prop_assert_eq!(Segmentation::new(cps, 20).is_ok(), ok);
    }
}
