//! Test-only fixtures and independent oracles.
#![allow(dead_code)]

use mmds_core::mds::{DissimilarityMatrix, GramMatrix};
use mmds_core::nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn d1() -> DissimilarityMatrix {
    DissimilarityMatrix::from_rows(&[&[0.0, 6.0, 8.0], &[6.0, 0.0, 10.0], &[8.0, 10.0, 0.0]])
        .unwrap()
}

pub fn d2() -> DissimilarityMatrix {
    let s = 2f64.sqrt();
    DissimilarityMatrix::from_rows(&[
        &[0.0, 1.0, 1.0, s, 1.0],
        &[1.0, 0.0, s, 1.0, 1.0],
        &[1.0, s, 0.0, 1.0, 1.0],
        &[s, 1.0, 1.0, 0.0, 1.0],
        &[1.0, 1.0, 1.0, 1.0, 0.0],
    ])
    .unwrap()
}

pub fn d3() -> DissimilarityMatrix {
    DissimilarityMatrix::from_rows(&[
        &[0.0, 2.0, 2.0, 1.0],
        &[2.0, 0.0, 2.0, 1.0],
        &[2.0, 2.0, 0.0, 1.0],
        &[1.0, 1.0, 1.0, 0.0],
    ])
    .unwrap()
}

/// `n` points drawn uniformly from `[-1, 1]^dim`.
pub fn random_points(rng: &mut impl Rng, n: usize, dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, dim, |_, _| rng.random_range(-1.0..1.0))
}

pub fn distances_of(points: &DMatrix<f64>) -> DissimilarityMatrix {
    let n = points.nrows();
    let d = DMatrix::from_fn(n, n, |i, j| (points.row(i) - points.row(j)).norm());
    DissimilarityMatrix::new(d).unwrap()
}

/// Random metric-free dissimilarities in `[0.1, 2)`.
pub fn random_dissimilarity(rng: &mut impl Rng, n: usize) -> DissimilarityMatrix {
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = rng.random_range(0.1..2.0);
            d[(i, j)] = v;
            d[(j, i)] = v;
        }
    }
    DissimilarityMatrix::new(d).unwrap()
}

/// Strictly positive random probability vector.
pub fn random_weights(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut w: Vec<f64> = raw.iter().map(|x| x / total).collect();
    // absorb rounding so the mass is one to the last bit we can manage
    let drift = 1.0 - w.iter().sum::<f64>();
    w[0] += drift;
    w
}

pub fn centering(n: usize) -> DMatrix<f64> {
    DMatrix::identity(n, n) - DMatrix::from_element(n, n, 1.0 / n as f64)
}

/// `HMH` for a symmetric `M`.
pub fn center(m: &DMatrix<f64>) -> GramMatrix {
    let h = centering(m.nrows());
    let c = &h * m * &h;
    GramMatrix::new((&c + c.transpose()) * 0.5).unwrap()
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    (&m + m.transpose()) * 0.5
}

/// Random positive semi-definite matrix of rank at most `rank`.
pub fn random_psd(rng: &mut impl Rng, n: usize, rank: usize) -> DMatrix<f64> {
    let f = DMatrix::from_fn(n, rank, |_, _| rng.random_range(-1.5..1.5));
    &f * f.transpose()
}

/// Cyclic Jacobi eigenvalue algorithm. Returns eigenvalues sorted
/// non-increasing with matching eigenvector columns.
pub fn jacobi_eigen(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let mut a = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        if off.sqrt() <= 1e-15 * a.norm().max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &v.column(src));
    }
    (values, vectors)
}

/// Exhaustive minimum over matchings between two zero-padded sequences:
/// every entry of `x` is paired with a distinct entry of `y` or with a
/// padding zero, and unpaired entries of `y` meet padding zeros.
pub fn brute_force_rearrangement(x: &[f64], y: &[f64]) -> f64 {
    fn go(i: usize, x: &[f64], y: &[f64], used: &mut Vec<bool>, acc: f64, best: &mut f64) {
        if i == x.len() {
            let rest: f64 = y
                .iter()
                .zip(used.iter())
                .filter(|(_, &u)| !u)
                .map(|(v, _)| v * v)
                .sum();
            *best = best.min(acc + rest);
            return;
        }
        go(i + 1, x, y, used, acc + x[i] * x[i], best);
        for j in 0..y.len() {
            if !used[j] {
                used[j] = true;
                go(i + 1, x, y, used, acc + (x[i] - y[j]).powi(2), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(0, x, y, &mut vec![false; y.len()], 0.0, &mut best);
    best.sqrt()
}
