//! Multidimensional scaling of discretized metric measure spaces.
//!
//! A space is a distance matrix together with a probability weight per
//! point. The kernel `K_A = -d²/2` is centered against the measure to give
//! `K_B`, whose integral operator `(T f)(x) = Σ_j w_j K_B(x, x_j) f(x_j)`
//! supplies the eigenvalues and eigenfunctions of the embedding
//! `f_m(x) = (√λ̂_1 φ_1(x), …, √λ̂_m φ_m(x))`.
//!
//! The operator is discretized as the symmetric matrix `S = W^{1/2} K W^{1/2}`
//! with `W = diag(w)`. Eigenvectors `u` of `S` become eigenfunctions
//! `φ = W^{-1/2} u`, normalized so that `Σ_i w_i φ(x_i)² = 1`. Points with
//! zero weight are invisible to the operator; their eigenfunction values
//! come from the Nyström formula `φ(x) = λ⁻¹ Σ_i w_i K_B(x, x_i) φ(x_i)`.
//!
//! With uniform weights everything reduces to classical scaling: the
//! operator eigenvalues are the Gram eigenvalues divided by `n` and the
//! eigenfunctions are the Gram eigenvectors scaled by `√n`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::mds::{
    decompose, positivity_threshold, AxisSource, DissimilarityMatrix, PointConfiguration,
    DEFAULT_RELATIVE_TOLERANCE,
};

/// Allowed deviation of the total mass from one.
pub const MASS_TOLERANCE: f64 = 1e-12;

fn check_probability(w: &[f64]) -> Result<()> {
    for (index, &value) in w.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::NegativeWeight { index, value });
        }
    }
    let sum: f64 = w.iter().sum();
    if (sum - 1.0).abs() > MASS_TOLERANCE {
        return Err(Error::WeightsNotProbability { sum });
    }
    Ok(())
}

/// Finite metric space with a probability measure given by point weights.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMetricMeasureSpace {
    d: DissimilarityMatrix,
    w: Vec<f64>,
}

impl DiscreteMetricMeasureSpace {
    pub fn new(d: DissimilarityMatrix, w: Vec<f64>) -> Result<Self> {
        if d.n() != w.len() {
            return Err(Error::DimensionMismatch {
                left: d.n(),
                right: w.len(),
            });
        }
        check_probability(&w)?;
        Ok(Self { d, w })
    }

    /// Counting measure normalized to mass one.
    pub fn uniform(d: DissimilarityMatrix) -> Self {
        let n = d.n();
        Self {
            d,
            w: vec![1.0 / n as f64; n],
        }
    }

    pub fn n(&self) -> usize {
        self.d.n()
    }

    pub fn distances(&self) -> &DissimilarityMatrix {
        &self.d
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }
}

/// The uncentered kernel `K_A(x, s) = -d(x, s)²/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelA {
    a: DMatrix<f64>,
}

impl KernelA {
    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.a
    }
}

/// Symmetric kernel centered against the weights it carries.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedKernel {
    k: DMatrix<f64>,
    w: Vec<f64>,
}

impl WeightedKernel {
    /// Validates symmetry, the weights, and `Σ_j w_j k_ij = 0` within
    /// `1e-9 · max|k|` for every row.
    pub fn new(k: DMatrix<f64>, w: Vec<f64>) -> Result<Self> {
        let (rows, cols) = k.shape();
        if rows != cols || rows == 0 {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows != w.len() {
            return Err(Error::DimensionMismatch {
                left: rows,
                right: w.len(),
            });
        }
        check_probability(&w)?;
        for i in 0..rows {
            for j in 0..cols {
                let (a, b) = (k[(i, j)], k[(j, i)]);
                if !a.is_finite() {
                    return Err(Error::NonFiniteEntry { i, j });
                }
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::NotSymmetric { i, j, a, b });
                }
            }
        }
        let tol = 1e-9 * k.amax();
        for i in 0..rows {
            let sum: f64 = (0..cols).map(|j| w[j] * k[(i, j)]).sum();
            if sum.abs() > tol {
                return Err(Error::NotMeasureCentered { index: i, sum });
            }
        }
        Ok(Self { k, w })
    }

    pub fn n(&self) -> usize {
        self.k.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.k
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }
}

/// Eigenvalues of the weighted operator with eigenfunction values at every
/// point of the space. Column `k` of `functions` holds `φ_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenfunctionSystem {
    pub values: Vec<f64>,
    pub functions: DMatrix<f64>,
    pub weights: Vec<f64>,
}

impl EigenfunctionSystem {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Threshold below which an eigenvalue is treated as zero.
    pub fn tolerance(&self) -> f64 {
        let radius = self.values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        DEFAULT_RELATIVE_TOLERANCE * radius
    }
}

/// Points `f_m(x_i)` in `R^m`; the push-forward measure is `weights`.
#[derive(Debug, Clone, PartialEq)]
pub struct MmEmbedding {
    pub coords: DMatrix<f64>,
    /// `λ̂_k`: the operator eigenvalues with negatives (and numerical zeros)
    /// replaced by zero.
    pub clipped: Vec<f64>,
    pub weights: Vec<f64>,
    pub axes: Vec<AxisSource>,
}

impl PointConfiguration for MmEmbedding {
    fn coords(&self) -> &DMatrix<f64> {
        &self.coords
    }
}

pub fn kernel_a(space: &DiscreteMetricMeasureSpace) -> KernelA {
    KernelA {
        a: space.d.as_matrix().map(|x| -0.5 * x * x),
    }
}

/// Row integrals `Σ_l w_l a_il` and the double integral of a symmetric kernel.
fn integrals(a: &DMatrix<f64>, w: &[f64]) -> (Vec<f64>, f64) {
    let rows: Vec<f64> = a
        .row_iter()
        .map(|r| r.iter().zip(w).map(|(x, wl)| x * wl).sum())
        .collect();
    let total = rows.iter().zip(w).map(|(r, wl)| r * wl).sum();
    (rows, total)
}

/// `k_ij = a_ij - ∫a(·, x_j)dμ - ∫a(x_i, ·)dμ + ∬a dμdμ`.
pub fn weighted_center(a: &KernelA, w: &[f64]) -> Result<WeightedKernel> {
    let n = a.a.nrows();
    if n != w.len() {
        return Err(Error::DimensionMismatch {
            left: n,
            right: w.len(),
        });
    }
    check_probability(w)?;
    let (rows, total) = integrals(&a.a, w);
    let k = DMatrix::from_fn(n, n, |i, j| a.a[(i, j)] - (rows[i] + rows[j]) + total);
    Ok(WeightedKernel { k, w: w.to_vec() })
}

/// Centered kernel `K_B` of a space.
pub fn kernel_b(space: &DiscreteMetricMeasureSpace) -> WeightedKernel {
    let n = space.n();
    let a = kernel_a(space);
    let (rows, total) = integrals(&a.a, &space.w);
    let k = DMatrix::from_fn(n, n, |i, j| a.a[(i, j)] - (rows[i] + rows[j]) + total);
    WeightedKernel {
        k,
        w: space.w.clone(),
    }
}

/// `max_ij |d²_ij - (k_ii + k_jj - 2 k_ij)|`.
pub fn check_distance_identity(
    space: &DiscreteMetricMeasureSpace,
    k_b: &WeightedKernel,
) -> Result<f64> {
    let n = space.n();
    if n != k_b.n() {
        return Err(Error::DimensionMismatch {
            left: n,
            right: k_b.n(),
        });
    }
    let (d, k) = (space.d.as_matrix(), &k_b.k);
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let lhs = d[(i, j)] * d[(i, j)];
            let rhs = k[(i, i)] + k[(j, j)] - 2.0 * k[(i, j)];
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(worst)
}

/// Solves the weighted eigenproblem through `S = W^{1/2} K W^{1/2}` on the
/// support of the measure. The system has one eigenfunction per point of
/// positive weight.
pub fn weighted_eigensystem(k_b: &WeightedKernel) -> Result<EigenfunctionSystem> {
    let n = k_b.n();
    let w = &k_b.w;
    let support: Vec<usize> = (0..n).filter(|&i| w[i] > 0.0).collect();
    let roots: Vec<f64> = support.iter().map(|&i| w[i].sqrt()).collect();
    let s = support.len();
    let sym = DMatrix::from_fn(s, s, |p, q| {
        roots[p] * k_b.k[(support[p], support[q])] * roots[q]
    });
    let sym = (&sym + sym.transpose()) * 0.5;
    let sys = decompose(&sym)?;

    let mut functions = DMatrix::zeros(n, s);
    for (p, &i) in support.iter().enumerate() {
        for c in 0..s {
            functions[(i, c)] = sys.vectors[(p, c)] / roots[p];
        }
    }
    let mut out = EigenfunctionSystem {
        values: sys.values,
        functions,
        weights: w.clone(),
    };
    let tol = out.tolerance();
    for i in (0..n).filter(|&i| w[i] == 0.0) {
        for c in 0..s {
            let lambda = out.values[c];
            if lambda.abs() > tol {
                let acc: f64 = support
                    .iter()
                    .map(|&j| w[j] * k_b.k[(i, j)] * out.functions[(j, c)])
                    .sum();
                out.functions[(i, c)] = acc / lambda;
            }
        }
    }
    Ok(out)
}

/// `f_m(x_i) = (√λ̂_1 φ_1(x_i), …, √λ̂_m φ_m(x_i))`.
pub fn mm_mds_embedding(sys: &EigenfunctionSystem, m: usize) -> Result<MmEmbedding> {
    if m == 0 || m > sys.len() {
        return Err(Error::TargetDimension { m, max: sys.len() });
    }
    let threshold = positivity_threshold(&sys.values, DEFAULT_RELATIVE_TOLERANCE);
    let n = sys.functions.nrows();
    let mut coords = DMatrix::zeros(n, m);
    let mut clipped = Vec::with_capacity(m);
    for k in 0..m {
        let lambda = sys.values[k];
        let hat = if lambda > threshold { lambda } else { 0.0 };
        if hat > 0.0 {
            coords.set_column(k, &(sys.functions.column(k) * hat.sqrt()));
        }
        clipped.push(hat);
    }
    Ok(MmEmbedding {
        coords,
        clipped,
        weights: sys.weights.clone(),
        axes: (0..m).map(|index| AxisSource::Eigen { index }).collect(),
    })
}

/// `λ̂` followed by truncation: negatives become zero, and when `keep` is
/// given only the first `keep` entries of the non-increasing input survive.
/// This is the closest sequence in ℓ² among nonnegative sequences with at
/// most `keep` positive entries.
pub fn clip_and_truncate(values: &[f64], keep: Option<usize>) -> Vec<f64> {
    let keep = keep.unwrap_or(values.len());
    values
        .iter()
        .enumerate()
        .map(|(i, &l)| if i < keep && l > 0.0 { l } else { 0.0 })
        .collect()
}

/// Evaluates eigenfunctions at new points. Row `p` of `cross_distances`
/// holds `d(x_p, x_i)` for every point `x_i` of the space; the result has
/// one row per new point and one column per requested component.
pub fn nystrom_extend(
    sys: &EigenfunctionSystem,
    space: &DiscreteMetricMeasureSpace,
    cross_distances: &DMatrix<f64>,
    components: &[usize],
) -> Result<DMatrix<f64>> {
    let n = space.n();
    if cross_distances.ncols() != n {
        return Err(Error::DimensionMismatch {
            left: cross_distances.ncols(),
            right: n,
        });
    }
    if sys.functions.nrows() != n {
        return Err(Error::DimensionMismatch {
            left: sys.functions.nrows(),
            right: n,
        });
    }
    let tol = sys.tolerance();
    for &k in components {
        if k >= sys.len() {
            return Err(Error::ComponentOutOfRange { k, len: sys.len() });
        }
        if sys.values[k] <= tol {
            return Err(Error::EigenvalueBelowTolerance {
                k,
                value: sys.values[k],
                tol,
            });
        }
    }

    let w = &space.w;
    let a = kernel_a(space);
    let (rows, total) = integrals(&a.a, w);
    let p = cross_distances.nrows();
    let mut out = DMatrix::zeros(p, components.len());
    for x in 0..p {
        let ax: Vec<f64> = cross_distances
            .row(x)
            .iter()
            .map(|d| -0.5 * d * d)
            .collect();
        let cx: f64 = ax.iter().zip(w).map(|(a, wl)| a * wl).sum();
        let kx: Vec<f64> = (0..n).map(|i| ax[i] - (rows[i] + cx) + total).collect();
        for (c, &k) in components.iter().enumerate() {
            let acc: f64 = (0..n).map(|i| w[i] * kx[i] * sys.functions[(i, k)]).sum();
            out[(x, c)] = acc / sys.values[k];
        }
    }
    Ok(out)
}

/// Kernel of the rank-`m` embedding: `Σ_{k<m} λ̂_k φ_k(x) φ_k(s)`.
pub fn kernel_truncation(sys: &EigenfunctionSystem, m: usize) -> Result<WeightedKernel> {
    let emb = mm_mds_embedding(sys, m)?;
    let k = &emb.coords * emb.coords.transpose();
    let k = (&k + k.transpose()) * 0.5;
    Ok(WeightedKernel {
        k,
        w: sys.weights.clone(),
    })
}

/// Squared Hilbert–Schmidt distance between the two integral operators:
/// `Σ_ij w_i w_j (k_ij - k̂_ij)²`.
pub fn hs_strain(k_b: &WeightedKernel, k_b_hat: &WeightedKernel) -> Result<f64> {
    if k_b.w != k_b_hat.w {
        return Err(Error::WeightMismatch);
    }
    let n = k_b.n();
    let w = &k_b.w;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let diff = k_b.k[(i, j)] - k_b_hat.k[(i, j)];
            acc += w[i] * w[j] * diff * diff;
        }
    }
    Ok(acc)
}
