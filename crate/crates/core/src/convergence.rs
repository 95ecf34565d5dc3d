//! Spectrum and embedding convergence experiments.
//!
//! Spectra are compared with the ℓ²-rearrangement distance: the infimum,
//! over bijections between the index sets, of the ℓ² distance between two
//! sequences that are extended by infinitely many zeros. Sorting both
//! sequences (zeros included) realizes the infimum.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::circle::circulant_eigenvalues;
use crate::error::{Error, Result};
use crate::mds::{embedding_distance_matrix, PointConfiguration};
use crate::mmspace::{
    kernel_b, weighted_eigensystem, DiscreteMetricMeasureSpace, EigenfunctionSystem,
};

/// Minimum relative eigengap for an eigenfunction to be compared.
pub const EIGENGAP_THRESHOLD: f64 = 1e-6;

/// Finite non-increasing sequence, implicitly followed by zeros.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PaddedSpectrum {
    values: Vec<f64>,
}

impl PaddedSpectrum {
    /// Sorts the input non-increasing. Non-finite values are rejected.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry { i, j: 0 });
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Extends with `extra` zeros and re-sorts, so zeros sit between the
/// positive and negative entries.
fn padded_sorted(x: &[f64], extra: usize) -> Vec<f64> {
    let mut v = x.to_vec();
    v.resize(x.len() + extra, 0.0);
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// ℓ²-rearrangement distance between two zero-padded spectra.
///
/// Each sequence receives as many zeros as the other has entries, which is
/// enough room for every entry to be matched against a zero.
pub fn l2_rearrangement_distance(x: &PaddedSpectrum, y: &PaddedSpectrum) -> f64 {
    let a = padded_sorted(&x.values, y.len());
    let b = padded_sorted(&y.values, x.len());
    a.iter()
        .zip(&b)
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt()
}

/// `½ Σ |w_i - w'_i|` on a shared support.
pub fn total_variation(w: &[f64], reference: &[f64]) -> Result<f64> {
    if w.len() != reference.len() {
        return Err(Error::DimensionMismatch {
            left: w.len(),
            right: reference.len(),
        });
    }
    Ok(0.5
        * w.iter()
            .zip(reference)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTrace {
    pub ns: Vec<usize>,
    pub distances: Vec<f64>,
    pub reference_n: usize,
    pub top_k: usize,
    pub normalization: String,
}

/// Compares the top `top_k` operator eigenvalues `λ(n)/n` of the circle at
/// each resolution against the reference resolution.
pub fn run_circle_refinement(
    ns: &[usize],
    reference_n: usize,
    top_k: usize,
) -> Result<ConvergenceTrace> {
    if top_k == 0 {
        return Err(Error::ZeroTopK);
    }
    if ns.is_empty() {
        return Err(Error::InvalidResolutions("no resolutions given".into()));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidResolutions(
            "resolutions must be strictly increasing".into(),
        ));
    }
    if ns[0] < 3 {
        return Err(Error::InvalidResolutions(
            "every resolution must be at least 3".into(),
        ));
    }
    let largest = *ns.last().expect("non-empty");
    if reference_n <= largest {
        return Err(Error::InvalidResolutions(format!(
            "reference {reference_n} must exceed every resolution (max {largest})"
        )));
    }

    let top = |n: usize| -> Result<PaddedSpectrum> {
        let spectrum = circulant_eigenvalues(n)?;
        let scaled: Vec<f64> = spectrum
            .sorted()
            .into_iter()
            .take(top_k)
            .map(|l| l / n as f64)
            .collect();
        PaddedSpectrum::new(scaled)
    };
    let reference = top(reference_n)?;
    let distances = ns
        .par_iter()
        .map(|&n| top(n).map(|s| l2_rearrangement_distance(&s, &reference)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTrace {
        ns: ns.to_vec(),
        distances,
        reference_n,
        top_k,
        normalization: "eigenvalues of B divided by n".into(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureTrace {
    pub tv_distances: Vec<f64>,
    pub spectrum_distances: Vec<f64>,
    /// `eigenfunction_deviations[s][c]` is the deviation of the `c`-th
    /// compared component at step `s`, or `None` when the perturbed
    /// eigenvalue is itself too close to a neighbour.
    pub eigenfunction_deviations: Vec<Vec<Option<f64>>>,
    /// Components compared, in column order of `eigenfunction_deviations`.
    pub compared_k: Vec<usize>,
    /// Components skipped because the reference eigengap is too small.
    pub skipped_k: Vec<usize>,
    pub top_k: usize,
    pub normalization: String,
}

/// Relative gap between `values[k]` and its neighbours.
fn relative_gap(values: &[f64], k: usize) -> f64 {
    let scale = values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let mut gap = f64::INFINITY;
    if k > 0 {
        gap = gap.min((values[k - 1] - values[k]).abs());
    }
    if k + 1 < values.len() {
        gap = gap.min((values[k] - values[k + 1]).abs());
    }
    gap / scale
}

/// `max_i |φ(x_i) - φ_ref(x_i)|` after flipping `φ` to have nonnegative
/// weighted inner product with the reference.
fn eigenfunction_deviation(
    sys: &EigenfunctionSystem,
    reference: &EigenfunctionSystem,
    k: usize,
) -> f64 {
    let f = sys.functions.column(k);
    let g = reference.functions.column(k);
    let inner: f64 = (0..f.len())
        .map(|i| reference.weights[i] * f[i] * g[i])
        .sum();
    let sign = if inner < 0.0 { -1.0 } else { 1.0 };
    (0..f.len())
        .map(|i| (sign * f[i] - g[i]).abs())
        .fold(0.0, f64::max)
}

/// Tracks the weighted operator spectrum and eigenfunctions of a fixed
/// space as the measure moves along `weight_sequence`.
pub fn run_measure_perturbation(
    d: &crate::mds::DissimilarityMatrix,
    weight_sequence: &[Vec<f64>],
    reference_w: &[f64],
    top_k: usize,
) -> Result<MeasureTrace> {
    if top_k == 0 {
        return Err(Error::ZeroTopK);
    }
    let system = |w: &[f64]| -> Result<EigenfunctionSystem> {
        let space = DiscreteMetricMeasureSpace::new(d.clone(), w.to_vec())?;
        weighted_eigensystem(&kernel_b(&space))
    };
    let reference = system(reference_w)?;
    let k_max = top_k.min(reference.len());
    let (compared_k, skipped_k): (Vec<usize>, Vec<usize>) =
        (0..k_max).partition(|&k| relative_gap(&reference.values, k) > EIGENGAP_THRESHOLD);
    let reference_top = PaddedSpectrum::new(reference.values[..k_max].to_vec())?;

    let steps = weight_sequence
        .par_iter()
        .map(|w| -> Result<(f64, f64, Vec<Option<f64>>)> {
            let sys = system(w)?;
            let tv = total_variation(w, reference_w)?;
            let top = PaddedSpectrum::new(sys.values.iter().take(top_k).copied().collect())?;
            let dist = l2_rearrangement_distance(&top, &reference_top);
            let devs = compared_k
                .iter()
                .map(|&k| {
                    (k < sys.len() && relative_gap(&sys.values, k) > EIGENGAP_THRESHOLD)
                        .then(|| eigenfunction_deviation(&sys, &reference, k))
                })
                .collect();
            Ok((tv, dist, devs))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut trace = MeasureTrace {
        tv_distances: Vec::with_capacity(steps.len()),
        spectrum_distances: Vec::with_capacity(steps.len()),
        eigenfunction_deviations: Vec::with_capacity(steps.len()),
        compared_k,
        skipped_k,
        top_k,
        normalization: "eigenvalues of the weighted operator W^1/2 K_B W^1/2".into(),
    };
    for (tv, dist, devs) in steps {
        trace.tv_distances.push(tv);
        trace.spectrum_distances.push(dist);
        trace.eigenfunction_deviations.push(devs);
    }
    Ok(trace)
}

/// Frobenius norm of the difference of the two distance matrices, divided
/// by the number of points. Zero exactly when the configurations are
/// congruent.
pub fn embedding_discrepancy<A, B>(e1: &A, e2: &B) -> Result<f64>
where
    A: PointConfiguration + ?Sized,
    B: PointConfiguration + ?Sized,
{
    let (n1, n2) = (e1.num_points(), e2.num_points());
    if n1 != n2 {
        return Err(Error::DimensionMismatch {
            left: n1,
            right: n2,
        });
    }
    let diff: DMatrix<f64> =
        embedding_distance_matrix(e1).as_matrix() - embedding_distance_matrix(e2).as_matrix();
    Ok(diff.norm() / n1 as f64)
}
