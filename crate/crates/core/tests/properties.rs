mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use rebalance::classify::logistic_loss_and_grad;
use rebalance::cleaners::{self, EnnScope};
use rebalance::metrics;
use rebalance::neighbors::{build_index, DistanceKind};
use rebalance::samplers::{self, Algorithm, MixupConfig, SmoteConfig};
use rebalance::RowOrigin;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn knn_matches_exhaustive_sort(seed in any::<u64>(), n in 8usize..80, dim in 1usize..4, grid in any::<bool>(), nominal in any::<bool>()) {
        let d = random_dataset(&mut rng(seed), n, dim, grid, nominal);
        let rows = d.all_rows();
        let dm = distance_matrix(&d, &rows);
        let index = build_index(&d, &rows, DistanceKind::for_dataset(&d, &rows), None).unwrap();
        for i in 0..n {
            let k = 1 + i % 5;
            let got: Vec<usize> = index.knn_of_row(i, k).unwrap().iter().map(|x| x.row).collect();
            prop_assert_eq!(got, knn_oracle(&rows, &dm, i, k));
        }
    }

    #[test]
    fn enn_and_tomek_match_definitions(seed in any::<u64>(), n in 8usize..80, dim in 1usize..4, grid in any::<bool>()) {
        let d = random_dataset(&mut rng(seed), n, dim, grid, false);
        let rows = d.all_rows();
        let dm = distance_matrix(&d, &rows);
        let (_, report) = cleaners::enn(&d, &rows, EnnScope::AllRows).unwrap();
        let removed: BTreeSet<usize> = report.removed.iter().map(|x| x.row).collect();
        prop_assert_eq!(removed, enn_oracle(&d, &rows, &dm, None));
        let counts = d.class_counts(&rows);
        let minority = u8::from(counts[1] <= counts[0]);
        let links: BTreeSet<(usize, usize)> =
            cleaners::find_tomek_links(&d, &rows).unwrap().iter().map(|l| (l.minority_idx, l.majority_idx)).collect();
        prop_assert_eq!(links, tomek_oracle(&d, &rows, &dm, minority));
    }

    #[test]
    fn smote_rows_lie_on_logged_segments(seed in any::<u64>(), n in 12usize..80, k in 1usize..6, ratio in 0.3f64..=1.0) {
        let d = random_dataset(&mut rng(seed), n, 3, false, false);
        let out = samplers::smote(&d, &d.all_rows(), &SmoteConfig { k, target_ratio: ratio, seed }).unwrap();
        for rec in &out.provenance {
            let pos = out.data.origins().iter().position(|&o| o == RowOrigin::Synthetic(rec.id)).unwrap();
            let (RowOrigin::Original(s), RowOrigin::Original(nb)) = (rec.source, rec.neighbor) else {
                return Err(TestCaseError::fail("smote parents must be original rows"));
            };
            prop_assert!((0.0..1.0).contains(&rec.coefficient));
            for c in 0..3 {
                let want = d.row(s)[c] + rec.coefficient * (d.row(nb)[c] - d.row(s)[c]);
                prop_assert!((out.data.row(pos)[c] - want).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn mixup_rows_are_same_class_convex_combinations(seed in any::<u64>(), n in 12usize..60, alpha in 0.1f64..2.0, pairs in 1usize..30) {
        let d = random_dataset(&mut rng(seed), n, 2, false, false);
        let cfg = MixupConfig { alpha, pairs_per_class: Some(pairs), seed, ..Default::default() };
        let out = samplers::mixup_augment(&d, &d.all_rows(), &cfg).unwrap();
        prop_assert_eq!(out.provenance.len(), 2 * pairs);
        for rec in &out.provenance {
            prop_assert_eq!(rec.algorithm, Algorithm::Mixup);
            let (RowOrigin::Original(a), RowOrigin::Original(b)) = (rec.source, rec.neighbor) else {
                return Err(TestCaseError::fail("mixup parents must be original rows here"));
            };
            prop_assert_eq!(d.label(a), rec.label);
            prop_assert_eq!(d.label(b), rec.label);
            let lambda = rec.coefficient;
            prop_assert!((0.0..=1.0).contains(&lambda));
            let pos = out.data.origins().iter().position(|&o| o == RowOrigin::Synthetic(rec.id)).unwrap();
            for c in 0..2 {
                let want = lambda * d.row(a)[c] + (1.0 - lambda) * d.row(b)[c];
                prop_assert!((out.data.row(pos)[c] - want).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn auc_counts_ordered_pairs(seed in any::<u64>(), n in 2usize..120, resolution in 1u32..20) {
        use rand::Rng;
        let mut r = rng(seed);
        let mut labels: Vec<u8> = (0..n).map(|_| u8::from(r.random::<bool>())).collect();
        labels[0] = 0;
        labels[1] = 1;
        let scores: Vec<f64> = (0..n).map(|_| f64::from(r.random_range(0..=resolution))).collect();
        let got = metrics::auc(&labels, &scores).unwrap();
        prop_assert!((got - pair_auc(&labels, &scores)).abs() <= 1e-12);
        let flipped: Vec<f64> = scores.iter().map(|s| -s).collect();
        prop_assert!((metrics::auc(&labels, &flipped).unwrap() - (1.0 - got)).abs() <= 1e-12);
    }

    #[test]
    fn logistic_gradient_matches_finite_differences(seed in any::<u64>(), n in 3usize..25, d in 1usize..5, l2 in 0.0f64..0.2) {
        use rand::Rng;
        let mut r = rng(seed);
        let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| r.random_range(-2.0..2.0)).collect()).collect();
        let xs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        let ys: Vec<u8> = (0..n).map(|_| u8::from(r.random::<bool>())).collect();
        let params: Vec<f64> = (0..=d).map(|_| r.random_range(-1.0..1.0)).collect();
        let (_, grad) = logistic_loss_and_grad(&params, &xs, &ys, l2);
        let fd = numeric_gradient(|p| logistic_loss(p, &xs, &ys, l2), &params, 1e-6);
        let diff: Vec<f64> = grad.iter().zip(&fd).map(|(a, b)| a - b).collect();
        prop_assert!(norm(&diff) <= 1e-5 * norm(&grad).max(norm(&fd)).max(1e-8));
    }
}

#[test]
fn direct_metrics_agree_on_edge_cases() {
    for (labels, preds) in [
        (vec![0u8, 0, 0], vec![0u8, 0, 0]),
        (vec![1, 1], vec![0, 0]),
        (vec![0, 1], vec![1, 1]),
        (vec![1, 0, 1, 0], vec![1, 0, 0, 1]),
    ] {
        let cm = metrics::confusion(&labels, &preds).unwrap();
        let row = metrics::MetricRow::from_matrix(&cm, 0.5).unwrap();
        let (a, p, r, f) = direct_metrics(&labels, &preds);
        assert_eq!((row.accuracy, row.precision, row.recall, row.f1), (a, p, r, f));
    }
}
