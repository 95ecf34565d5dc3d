mod common;

use common::*;
use mmds_core::mds::*;
use mmds_core::nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;

fn points_strategy() -> impl Strategy<Value = DMatrix<f64>> {
    (2usize..9, 1usize..5).prop_flat_map(|(n, dim)| {
        proptest::collection::vec(-5.0f64..5.0, n * dim)
            .prop_map(move |v| DMatrix::from_row_slice(n, dim, &v))
    })
}

fn centered(points: &DMatrix<f64>) -> DMatrix<f64> {
    let mut p = points.clone();
    for mut col in p.column_iter_mut() {
        let mean = col.mean();
        col.add_scalar_mut(-mean);
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn double_centering_recovers_gram(points in points_strategy()) {
        let x = centered(&points);
        let gram = &x * x.transpose();
        let b = double_center(&embedding_distance_matrix(&x));
        let scale = gram.amax().max(1.0);
        prop_assert!((b.as_matrix() - &gram).amax() <= 1e-9 * scale);
    }

    #[test]
    fn gram_rows_vanish(points in points_strategy()) {
        let b = double_center(&distances_of(&points));
        let n = b.n() as f64;
        let tol = 1e-9 * n * b.as_matrix().amax().max(f64::MIN_POSITIVE);
        for row in b.as_matrix().row_iter() {
            prop_assert!(row.sum().abs() <= tol);
        }
    }

    #[test]
    fn euclidean_input_is_realized(points in points_strategy()) {
        let d = distances_of(&points);
        let test = euclidean_test(&d, None).unwrap();
        prop_assert!(test.is_euclidean);
        let r = test.min_dimension.unwrap().max(1);
        let e = classical_mds(&d, r.min(d.n())).unwrap();
        let scale = d.as_matrix().amax().max(1.0);
        prop_assert!(embedding_distance_matrix(&e).max_abs_diff(&d).unwrap() <= 1e-9 * scale);
    }

    #[test]
    fn coordinates_carry_their_eigenvalues(points in points_strategy(), m in 1usize..4) {
        let d = distances_of(&points);
        let m = m.min(d.n());
        let e = classical_mds(&d, m).unwrap();
        for k in 0..m {
            let sq = e.coords.column(k).norm_squared();
            let lambda = e.retained_eigenvalues[k];
            prop_assert!((sq - lambda).abs() <= 1e-9 * lambda.max(1e-12));
        }
        prop_assert!(e.retained_eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(e.retained_eigenvalues.iter().all(|&l| l >= 0.0));
    }

    #[test]
    fn eigen_invariants(seed in any::<u64>(), n in 1usize..12) {
        let mut r = rng(seed);
        let b = center(&random_symmetric(&mut r, n));
        let sys = symmetric_eigen(&b).unwrap();
        let norm = b.as_matrix().norm().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let v = sys.vectors.column(k);
            let residual = (b.as_matrix() * v - v * sys.values[k]).norm();
            prop_assert!(residual <= 1e-9 * norm);
            let lead = v.iter().copied().fold(0.0_f64, |a, x| if x.abs() > a.abs() { x } else { a });
            prop_assert!(lead > 0.0);
        }
        let gram = sys.vectors.transpose() * &sys.vectors;
        prop_assert!((gram - DMatrix::identity(n, n)).amax() <= 1e-9);
        prop_assert!(sys.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn eigenvalues_match_jacobi_oracle(seed in any::<u64>(), n in 1usize..10) {
        let mut r = rng(seed);
        let b = center(&random_symmetric(&mut r, n));
        let sys = symmetric_eigen(&b).unwrap();
        let (oracle, _) = jacobi_eigen(b.as_matrix());
        for (a, o) in sys.values.iter().zip(&oracle) {
            prop_assert!((a - o).abs() <= 1e-10);
        }
    }

    #[test]
    fn spectral_strain_identity(seed in any::<u64>(), n in 2usize..9) {
        let mut r = rng(seed);
        let b = center(&random_symmetric(&mut r, n));
        let sys = symmetric_eigen(&b).unwrap();
        // any spectrum on B's eigenvectors, kept centered by zeroing the
        // eigenvalue attached to the constant vector's eigenspace
        let hat_values: Vec<f64> = sys
            .values
            .iter()
            .map(|&l| if l.abs() < 1e-12 { 0.0 } else { l + r.random_range(-1.0..1.0) })
            .collect();
        let mut hat = DMatrix::zeros(n, n);
        for (k, &h) in hat_values.iter().enumerate() {
            let v = sys.vectors.column(k);
            hat += (v * v.transpose()) * h;
        }
        let hat = GramMatrix::new((&hat + hat.transpose()) * 0.5).unwrap();
        let report = strain(&b, &hat).unwrap();
        let expected: f64 = sys.values.iter().zip(&hat_values).map(|(a, b)| (a - b).powi(2)).sum();
        prop_assert!((report.strain_value - expected).abs() <= 1e-9 * expected.max(1e-12));
        let from_dropped: f64 = report.dropped_spectrum.iter().map(|x| x * x).sum();
        prop_assert!((report.strain_value - from_dropped).abs() <= 1e-9 * expected.max(1e-9));
    }
}

#[test]
fn truncation_strain_matches_dropped_spectrum() {
    let mut r = rng(11);
    for _ in 0..20 {
        let n = r.random_range(3..10);
        let b = center(&random_symmetric(&mut r, n));
        let sys = symmetric_eigen(&b).unwrap();
        for m in 1..n {
            let report = strain(&b, &mds_truncation(&b, m).unwrap()).unwrap();
            let expected: f64 = sys
                .values
                .iter()
                .enumerate()
                .map(|(k, &l)| if k < m && l > 0.0 { 0.0 } else { l * l })
                .sum();
            assert!((report.strain_value - expected).abs() <= 1e-9 * expected.max(1e-12));
            assert!(report.strain_value >= 0.0);
        }
    }
}

#[test]
fn strain_optimality_against_random_competitors() {
    let mut r = rng(2024);
    for _ in 0..20 {
        let n = r.random_range(2..=10);
        let b = center(&random_symmetric(&mut r, n));
        for m in 1..=3.min(n) {
            let best = strain(&b, &mds_truncation(&b, m).unwrap())
                .unwrap()
                .strain_value;
            for _ in 0..200 {
                let competitor = center(&random_psd(&mut r, n, m));
                let s = strain(&b, &competitor).unwrap().strain_value;
                assert!(s >= best - 1e-12, "competitor {s} beat truncation {best}");
            }
        }
    }
}

#[test]
fn embeddings_are_bit_identical_across_runs() {
    let mut r = rng(5);
    let d = random_dissimilarity(&mut r, 9);
    let a = classical_mds(&d, 4).unwrap();
    let b = classical_mds(&d, 4).unwrap();
    assert_eq!(a, b);
    let bits = |e: &Embedding| e.coords.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a), bits(&b));
}

#[test]
fn d3_clip_strain_is_square_of_negative_eigenvalue() {
    let b = double_center(&d3());
    let (oracle, _) = jacobi_eigen(b.as_matrix());
    let lambda_min = *oracle.last().unwrap();
    assert!(lambda_min < 0.0);
    assert!(oracle[..oracle.len() - 1].iter().all(|&l| l > -1e-12));
    let s = strain(&b, &psd_clip(&b).unwrap()).unwrap();
    assert!((s.strain_value - lambda_min * lambda_min).abs() <= 1e-9 * lambda_min * lambda_min);
}

#[test]
fn d2_needs_three_dimensions() {
    let t = euclidean_test(&d2(), None).unwrap();
    assert!(t.is_euclidean);
    assert_eq!(t.min_dimension, Some(3));
}
