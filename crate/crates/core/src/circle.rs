//! Exact classical scaling of `n` evenly spaced points on the geodesic circle
//! of circumference `2π`.
//!
//! The distance matrix is real-symmetric circulant with first row
//! `d_0j = (2π/n)·min(j, n-j)`, and so is its Gram matrix. Its eigenvectors
//! are the Fourier modes; the eigenvalue of mode `k` is the cosine sum
//! `λ_k(n) = -½ Σ_j d_0j² cos(2πjk/n)` for `k ≥ 1`, and `λ_0(n) = 0`.
//! Modes `k` and `n-k` share an eigenvalue and combine into the real pair
//! `u_k = cos(jθ)`, `v_k = sin(jθ)` with `θ = 2πk/n`.
//!
//! Odd frequencies carry the positive part of the spectrum, so the
//! embedding into `R^m` uses frequencies `1, 3, …, m-1` and places point `i`
//! at `(a_1 cos θ_i, a_1 sin θ_i, a_3 cos 3θ_i, …)` with
//! `a_j(n) = √λ_j(n) / ‖u_j(n)‖`. As `n` grows, `λ_k(n)/n → (-1)^{k+1}/k²`,
//! `‖u_k(n)‖/√n → 1/√2` and `a_j(n) → √2/j`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mds::{
    classical_mds, AxisSource, DissimilarityMatrix, Embedding, DEFAULT_RELATIVE_TOLERANCE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircleConfig {
    n: usize,
    m: usize,
}

impl CircleConfig {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::CircleTooSmall { n });
        }
        if m < 2 || !m.is_multiple_of(2) {
            return Err(Error::CircleDimension { m });
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Odd frequencies `1, 3, …, m-1`, one per pair of axes.
    pub fn frequencies(&self) -> Vec<usize> {
        odd_frequencies(self.m)
    }
}

fn odd_frequencies(m: usize) -> Vec<usize> {
    (0..m / 2).map(|q| 2 * q + 1).collect()
}

/// Full spectrum of the circle's Gram matrix, indexed by Fourier mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CirculantSpectrum {
    pub n: usize,
    /// `lambdas[k]` is the eigenvalue of mode `k`.
    pub lambdas: Vec<f64>,
    /// `c_n = (1/n) Σ_k d_0k²`.
    pub row_constant: f64,
    /// Modes `(k, n-k)` sharing an eigenvalue, for `1 ≤ k ≤ ⌊(n-1)/2⌋`.
    pub pair_index_map: Vec<(usize, usize)>,
    /// Largest magnitude of the discarded sine sums.
    pub imaginary_residue: f64,
}

impl CirculantSpectrum {
    /// Eigenvalues sorted non-increasing.
    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.lambdas.clone();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    pub fn max_abs(&self) -> f64 {
        self.lambdas.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        Err(Error::CircleTooSmall { n })
    } else {
        Ok(())
    }
}

/// Geodesic distance from point 0 to point `j`.
fn first_row_distance(n: usize, j: usize) -> f64 {
    2.0 * PI / n as f64 * j.min(n - j) as f64
}

/// Angle `2π·(r mod n)/n`, reduced before scaling for accuracy.
fn mode_angle(n: usize, r: usize) -> f64 {
    2.0 * PI * (r % n) as f64 / n as f64
}

pub fn circle_distance_matrix(n: usize) -> Result<DissimilarityMatrix> {
    check_n(n)?;
    let row: Vec<f64> = (0..n).map(|j| first_row_distance(n, j)).collect();
    DissimilarityMatrix::new(DMatrix::from_fn(n, n, |r, s| row[(s + n - r) % n]))
}

/// Closed form of `c_n`; the odd and even cases differ by the antipodal
/// point present when `n` is even.
pub fn row_constant(n: usize) -> f64 {
    let nf = n as f64;
    if n % 2 == 1 {
        PI * PI * (nf * nf - 1.0) / (3.0 * nf * nf)
    } else {
        PI * PI * (nf - 1.0) * (nf - 2.0) / (3.0 * nf * nf) + PI * PI / nf
    }
}

/// `c_n` by direct summation of the first row.
pub fn row_constant_by_summation(n: usize) -> f64 {
    (0..n)
        .map(|j| first_row_distance(n, j).powi(2))
        .sum::<f64>()
        / n as f64
}

/// `λ_k(n)` for a single mode; `λ_0 = 0`.
pub fn circulant_eigenvalue(n: usize, k: usize) -> f64 {
    if k.is_multiple_of(n) {
        return 0.0;
    }
    -0.5 * (0..n)
        .map(|j| first_row_distance(n, j).powi(2) * mode_angle(n, j * k).cos())
        .sum::<f64>()
}

pub fn circulant_eigenvalues(n: usize) -> Result<CirculantSpectrum> {
    check_n(n)?;
    let d2: Vec<f64> = (0..n).map(|j| first_row_distance(n, j).powi(2)).collect();
    let sums: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|k| {
            if k == 0 {
                return (0.0, 0.0);
            }
            d2.iter().enumerate().fold((0.0, 0.0), |(re, im), (j, &x)| {
                let (s, c) = mode_angle(n, j * k).sin_cos();
                (re + x * c, im + x * s)
            })
        })
        .collect();
    let lambdas = sums.iter().map(|&(re, _)| -0.5 * re).collect();
    let imaginary_residue = sums
        .iter()
        .fold(0.0_f64, |acc, &(_, im)| acc.max((0.5 * im).abs()));
    Ok(CirculantSpectrum {
        n,
        lambdas,
        row_constant: row_constant(n),
        pair_index_map: (1..=(n - 1) / 2).map(|k| (k, n - k)).collect(),
        imaginary_residue,
    })
}

/// The cosine and sine eigenvectors `(u_k, v_k)` of a paired mode.
pub fn trig_eigenvectors(n: usize, k: usize) -> Result<(DVector<f64>, DVector<f64>)> {
    check_n(n)?;
    if k == 0 || k > (n - 1) / 2 {
        return Err(Error::FrequencyOutOfRange { n, k });
    }
    let u = DVector::from_fn(n, |j, _| mode_angle(n, j * k).cos());
    let v = DVector::from_fn(n, |j, _| mode_angle(n, j * k).sin());
    Ok((u, v))
}

/// The real eigenvector of an unpaired mode: `k = 0`, or `k = n/2` for even
/// `n`.
pub fn unpaired_eigenvector(n: usize, k: usize) -> Result<DVector<f64>> {
    check_n(n)?;
    if k != 0 && !(n.is_multiple_of(2) && k == n / 2) {
        return Err(Error::FrequencyOutOfRange { n, k });
    }
    Ok(DVector::from_fn(n, |j, _| mode_angle(n, j * k).cos()))
}

/// `a_j(n) = √λ_j(n) / ‖u_j(n)‖` for each odd frequency `j < m`.
pub fn curve_coefficients(config: &CircleConfig) -> Result<Vec<(usize, f64)>> {
    let n = config.n;
    config
        .frequencies()
        .into_iter()
        .map(|j| {
            let (u, _) = trig_eigenvectors(n, j)?;
            let lambda = circulant_eigenvalue(n, j);
            if lambda <= 0.0 {
                return Err(Error::NonPositiveFrequency {
                    n,
                    k: j,
                    value: lambda,
                });
            }
            Ok((j, lambda.sqrt() / u.norm()))
        })
        .collect()
}

/// Classical scaling embedding of the circle built from the Fourier modes.
pub fn analytic_embedding(config: &CircleConfig) -> Result<Embedding> {
    let n = config.n;
    let spectrum = circulant_eigenvalues(n)?;
    let threshold = DEFAULT_RELATIVE_TOLERANCE * spectrum.max_abs();
    let mut coords = DMatrix::zeros(n, config.m);
    let mut retained = Vec::with_capacity(config.m);
    let mut axes = Vec::with_capacity(config.m);
    for (q, j) in config.frequencies().into_iter().enumerate() {
        let (u, v) = trig_eigenvectors(n, j)?;
        let lambda = spectrum.lambdas[j];
        if lambda <= threshold {
            return Err(Error::NonPositiveFrequency {
                n,
                k: j,
                value: lambda,
            });
        }
        let root = lambda.sqrt();
        coords.set_column(2 * q, &(&u * (root / u.norm())));
        coords.set_column(2 * q + 1, &(&v * (root / v.norm())));
        retained.extend([lambda, lambda]);
        axes.push(AxisSource::Cosine { frequency: j });
        axes.push(AxisSource::Sine { frequency: j });
    }
    let clipped_negative_mass = spectrum
        .lambdas
        .iter()
        .filter(|&&l| l < -threshold)
        .map(|l| l * l)
        .sum();
    Ok(Embedding {
        coords,
        retained_eigenvalues: retained,
        clipped_negative_mass,
        axes,
    })
}

/// Embedding of the same configuration through the dense eigen-solver.
pub fn numeric_embedding(config: &CircleConfig) -> Result<Embedding> {
    classical_mds(&circle_distance_matrix(config.n)?, config.m)
}

/// `γ(θ) = √2 (cos θ, sin θ, ⅓ cos 3θ, ⅓ sin 3θ, …) ∈ R^m`.
pub fn limit_curve(m: usize, theta: f64) -> Result<Vec<f64>> {
    if m < 2 || !m.is_multiple_of(2) {
        return Err(Error::CircleDimension { m });
    }
    Ok(odd_frequencies(m)
        .into_iter()
        .flat_map(|j| {
            let (s, c) = (j as f64 * theta).sin_cos();
            let a = 2f64.sqrt() / j as f64;
            [a * c, a * s]
        })
        .collect())
}

/// Whether `λ_1(n) ≥ λ_3(n) ≥ … ≥ λ_p(n) ≥ 0` over the odd frequencies up to
/// `p` that are paired at this `n`.
pub fn odd_frequencies_ordered(n: usize, p: usize) -> bool {
    let top = p.min((n - 1) / 2);
    let values: Vec<f64> = (1..=top)
        .step_by(2)
        .map(|k| circulant_eigenvalue(n, k))
        .collect();
    values.windows(2).all(|w| w[0] >= w[1]) && values.iter().all(|&v| v >= 0.0)
}
