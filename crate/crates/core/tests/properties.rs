use std::collections::HashSet;

use chi2nn::binning::{BinGrid, BinStats};
use chi2nn::bpnn::BpnnNetwork;
use chi2nn::chi2nn::init_network;
use chi2nn::data::{split_indices, train_size};
use chi2nn::model_io::{read_params, write_params, ModelKind};
use chi2nn::network::SingleHiddenLayer;
use chi2nn::pca::{fit_pca, sample_covariance, PcaVariant};
use ndarray::{Array2, Axis};
use proptest::prelude::*;

fn matrix(rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> impl Strategy<Value = Array2<f64>> {
    (rows, cols).prop_flat_map(|(n, d)| {
        prop::collection::vec(-10.0f64..10.0, n * d)
            .prop_map(move |v| Array2::from_shape_vec((n, d), v).unwrap())
    })
}

fn rotation(d: usize, angles: &[f64]) -> Array2<f64> {
    // product of Givens rotations
    let mut q = Array2::eye(d);
    let mut a = angles.iter().cycle();
    for i in 0..d {
        for j in i + 1..d {
            let t = *a.next().unwrap();
            let mut g = Array2::eye(d);
            g[[i, i]] = t.cos();
            g[[j, j]] = t.cos();
            g[[i, j]] = -t.sin();
            g[[j, i]] = t.sin();
            q = q.dot(&g);
        }
    }
    q
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pca_axes_are_orthonormal(x in matrix(3..30, 1..6)) {
        let model = fit_pca(x.view(), PcaVariant::Covariance).unwrap();
        let gram = model.axes.t().dot(&model.axes);
        let d = gram.nrows();
        for i in 0..d {
            for j in 0..d {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((gram[[i, j]] - want).abs() < 1e-9);
            }
        }
        let total: f64 = model.contribution.sum();
        if !model.degenerate {
            prop_assert!((total - 1.0).abs() < 1e-9);
        }
        for w in model.eigenvalues.as_slice().unwrap().windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn pca_projections_are_uncorrelated(x in matrix(4..30, 2..5)) {
        let model = fit_pca(x.view(), PcaVariant::Covariance).unwrap();
        let z = model.project(x.view(), model.dim()).unwrap();
        let c = sample_covariance(z.view());
        let scale = model.eigenvalues[0].max(1.0);
        for i in 0..c.nrows() {
            for j in 0..c.ncols() {
                let want = if i == j { model.eigenvalues[i] } else { 0.0 };
                prop_assert!((c[[i, j]] - want).abs() < 1e-8 * scale, "{i},{j}: {} vs {want}", c[[i, j]]);
            }
        }
    }

    #[test]
    fn pca_spectrum_is_rotation_invariant(
        x in matrix(4..25, 2..5),
        angles in prop::collection::vec(-3.0f64..3.0, 10),
    ) {
        let q = rotation(x.ncols(), &angles);
        let a = fit_pca(x.view(), PcaVariant::Covariance).unwrap();
        let b = fit_pca(x.dot(&q).view(), PcaVariant::Covariance).unwrap();
        let scale = a.eigenvalues[0].max(1.0);
        for (u, v) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            prop_assert!((u - v).abs() < 1e-8 * scale);
        }
    }

    #[test]
    fn binning_is_a_partition(x in matrix(1..40, 1..4), k in 1usize..5) {
        let grid = BinGrid::fit(x.view(), k).unwrap();
        let sections = grid.assign(x.view()).unwrap();
        prop_assert!(sections.iter().all(|&s| s < grid.sections()));
        let y = vec![1u8; x.nrows()];
        let stats = BinStats::from_assignments(&sections, &y, grid.sections()).unwrap();
        prop_assert_eq!(stats.counts.iter().sum::<usize>(), x.nrows());
        prop_assert!((stats.p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn binning_ignores_translation(
        raw in prop::collection::vec(-64i32..64, 2..60),
        shift in -1000i32..1000,
        k in prop::sample::select(vec![1usize, 2, 4, 8]),
    ) {
        // dyadic values and integer shifts keep every edge exact
        let n = raw.len() / 2;
        prop_assume!(n >= 1);
        let x = Array2::from_shape_fn((n, 2), |(i, j)| raw[2 * i + j] as f64 / 8.0);
        let moved = x.mapv(|v| v + shift as f64);
        let a = BinGrid::fit(x.view(), k).unwrap().assign(x.view()).unwrap();
        let b = BinGrid::fit(moved.view(), k).unwrap().assign(moved.view()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn model_text_round_trip(r in 1usize..6, h in 1usize..12, seed in any::<u64>(), scale in 0.0f64..100.0) {
        let net = SingleHiddenLayer::random(r, h, seed, scale);
        for kind in [ModelKind::Chi2nn, ModelKind::Bpnn] {
            let (k2, back) = read_params(&write_params(kind, &net)).unwrap();
            prop_assert_eq!(k2, kind);
            prop_assert_eq!(&back, &net);
        }
    }

    #[test]
    fn batch_predict_matches_single(x in matrix(1..30, 1..5), seed in any::<u64>()) {
        let chi = init_network(x.ncols(), 7, seed, 3.0);
        let bp = BpnnNetwork { params: chi.params.clone() };
        let batch_chi = chi.predict_batch(x.view());
        let batch_bp = bp.predict_batch(x.view());
        for (i, row) in x.axis_iter(Axis(0)).enumerate() {
            prop_assert_eq!(batch_chi[i], chi.predict(row));
            prop_assert_eq!(batch_bp[i], bp.predict(row));
        }
    }
}

#[test]
fn split_invariants_over_many_seeds() {
    for n in [2usize, 8, 76, 100, 683] {
        for f in [0.5, 0.9] {
            let n_train = train_size(n, f);
            if n_train == 0 || n_train == n {
                continue;
            }
            let mut distinct = HashSet::new();
            for seed in 0..1000u64 {
                let s = split_indices(n, f, seed).unwrap();
                assert_eq!(s.train_indices.len(), n_train);
                assert_eq!(s.train_indices.len() + s.test_indices.len(), n);
                let mut all: Vec<usize> = s.train_indices.iter().chain(&s.test_indices).copied().collect();
                all.sort_unstable();
                assert!(all.iter().copied().eq(0..n), "not a partition");
                assert_eq!(s, split_indices(n, f, seed).unwrap());
                distinct.insert(s.train_indices);
            }
            if n >= 76 {
                assert!(distinct.len() > 900, "n {n}: only {} distinct splits", distinct.len());
            }
        }
    }
}
