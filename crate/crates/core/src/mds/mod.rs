//! Classical multidimensional scaling.
//!
//! Starting from a dissimilarity matrix `D`, the squared entries are turned
//! into `A = -D²/2`, double-centered into the Gram matrix `B = HAH` with
//! `H = I - 11ᵀ/n`, and the configuration is read off the spectral
//! decomposition `B = ΓΛΓᵀ` as `X = Γ_m Λ_m^{1/2}` after clipping negative
//! eigenvalues to zero. `D` is Euclidean exactly when `B` is positive
//! semi-definite, in which case its rank is the smallest dimension that
//! realizes `D` isometrically.

mod eigen;

use nalgebra::DMatrix;
use serde::Serialize;

pub use eigen::{decompose, EigenSystem};

use crate::error::{Error, Result};

/// Default relative tolerance for rank and positivity decisions, scaled by
/// the largest eigenvalue magnitude.
pub const DEFAULT_RELATIVE_TOLERANCE: f64 = 1e-9;

/// Relative asymmetry that is silently averaged away.
const SYMMETRY_SLACK: f64 = 1e-12;

/// Checks squareness, finiteness and near-symmetry, then averages the two
/// triangles so the result is exactly symmetric.
fn symmetrized(mut m: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (rows, cols) = m.shape();
    if rows != cols || rows == 0 {
        return Err(Error::NotSquare { rows, cols });
    }
    for i in 0..rows {
        for j in 0..cols {
            if !m[(i, j)].is_finite() {
                return Err(Error::NonFiniteEntry { i, j });
            }
        }
    }
    for i in 0..rows {
        for j in (i + 1)..cols {
            let (a, b) = (m[(i, j)], m[(j, i)]);
            if a != b {
                let scale = a.abs().max(b.abs()).max(1.0);
                if (a - b).abs() > SYMMETRY_SLACK * scale {
                    return Err(Error::NotSymmetric { i, j, a, b });
                }
                let mid = 0.5 * (a + b);
                m[(i, j)] = mid;
                m[(j, i)] = mid;
            }
        }
    }
    Ok(m)
}

/// Symmetric, hollow, nonnegative matrix of pairwise dissimilarities.
#[derive(Debug, Clone, PartialEq)]
pub struct DissimilarityMatrix {
    d: DMatrix<f64>,
}

impl DissimilarityMatrix {
    pub fn new(d: DMatrix<f64>) -> Result<Self> {
        let d = symmetrized(d)?;
        for i in 0..d.nrows() {
            if d[(i, i)] != 0.0 {
                return Err(Error::NotHollow {
                    i,
                    value: d[(i, i)],
                });
            }
            for j in 0..d.ncols() {
                if d[(i, j)] < 0.0 {
                    return Err(Error::NegativeDissimilarity {
                        i,
                        j,
                        value: d[(i, j)],
                    });
                }
            }
        }
        Ok(Self { d })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: rows.first().map_or(0, |r| r.len()),
            });
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            d: DMatrix::zeros(n, n),
        }
    }

    pub fn n(&self) -> usize {
        self.d.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.d
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.d
    }

    /// Largest absolute entrywise difference to another matrix of equal size.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok((&self.d - &other.d).amax())
    }
}

/// Symmetric similarity matrix with `c[r][s] <= c[r][r]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    c: DMatrix<f64>,
}

impl SimilarityMatrix {
    pub fn new(c: DMatrix<f64>) -> Result<Self> {
        let c = symmetrized(c)?;
        let n = c.nrows();
        for r in 0..n {
            for s in 0..n {
                let slack = SYMMETRY_SLACK * c[(r, r)].abs().max(1.0);
                if c[(r, s)] > c[(r, r)] + slack {
                    return Err(Error::SimilarityDominance { r, s });
                }
            }
        }
        Ok(Self { c })
    }

    pub fn n(&self) -> usize {
        self.c.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.c
    }
}

/// Doubly-centered symmetric inner-product matrix; may be indefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    b: DMatrix<f64>,
}

impl GramMatrix {
    /// Validates symmetry and that every row and column sum vanishes within
    /// `1e-9 · n · max|b|`.
    pub fn new(b: DMatrix<f64>) -> Result<Self> {
        let b = symmetrized(b)?;
        let n = b.nrows();
        let tol = 1e-9 * n as f64 * b.amax();
        for (index, row) in b.row_iter().enumerate() {
            let sum = row.sum();
            if sum.abs() > tol {
                return Err(Error::NotCentered { index, sum });
            }
        }
        Ok(Self { b })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            b: DMatrix::zeros(n, n),
        }
    }

    pub fn n(&self) -> usize {
        self.b.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.b
    }

    pub fn trace(&self) -> f64 {
        self.b.trace()
    }
}

/// Where an embedding axis came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AxisSource {
    /// Position in the sorted spectrum of the decomposed matrix.
    Eigen { index: usize },
    /// Cosine eigenvector of a circulant matrix at the given frequency.
    Cosine { frequency: usize },
    /// Sine eigenvector of a circulant matrix at the given frequency.
    Sine { frequency: usize },
}

/// Anything that places `n` points in `R^m` as the rows of a matrix.
pub trait PointConfiguration {
    fn coords(&self) -> &DMatrix<f64>;

    fn num_points(&self) -> usize {
        self.coords().nrows()
    }

    fn dim(&self) -> usize {
        self.coords().ncols()
    }
}

impl PointConfiguration for DMatrix<f64> {
    fn coords(&self) -> &DMatrix<f64> {
        self
    }
}

/// `n` points in `R^m` produced by classical scaling.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    /// Row `i` is the image of point `i`.
    pub coords: DMatrix<f64>,
    /// Eigenvalue behind each axis; zero for axes padded with zeros.
    pub retained_eigenvalues: Vec<f64>,
    /// Sum of squares of the negative eigenvalues that were clipped.
    pub clipped_negative_mass: f64,
    pub axes: Vec<AxisSource>,
}

impl PointConfiguration for Embedding {
    fn coords(&self) -> &DMatrix<f64> {
        &self.coords
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrainReport {
    pub strain_value: f64,
    /// Numerical rank of the fitted matrix.
    pub rank_used: usize,
    /// Nonzero eigenvalues of `B - B̂`, sorted non-increasing. When `B̂` is a
    /// spectral truncation of `B` these are exactly the discarded eigenvalues.
    pub dropped_spectrum: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EuclideanTest {
    pub is_euclidean: bool,
    /// Rank of `B`; only meaningful when `is_euclidean` holds.
    pub min_dimension: Option<usize>,
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    pub eigenvalues: Vec<f64>,
}

/// `d[r][s] = sqrt(c[r][r] - 2 c[r][s] + c[s][s])`.
pub fn similarity_to_dissimilarity(c: &SimilarityMatrix) -> Result<DissimilarityMatrix> {
    let c = c.as_matrix();
    let n = c.nrows();
    let mut d = DMatrix::zeros(n, n);
    for r in 0..n {
        for s in (r + 1)..n {
            let radicand = c[(r, r)] - 2.0 * c[(r, s)] + c[(s, s)];
            let slack = SYMMETRY_SLACK * (c[(r, r)].abs() + c[(s, s)].abs()).max(1.0);
            if radicand < -slack {
                return Err(Error::NegativeRadicand {
                    r,
                    s,
                    value: radicand,
                });
            }
            let v = radicand.max(0.0).sqrt();
            d[(r, s)] = v;
            d[(s, r)] = v;
        }
    }
    DissimilarityMatrix::new(d)
}

/// `B = HAH` with `a[r][s] = -d[r][s]²/2`.
pub fn double_center(d: &DissimilarityMatrix) -> GramMatrix {
    let n = d.n();
    let a = d.as_matrix().map(|x| -0.5 * x * x);
    let row_means: Vec<f64> = a.row_iter().map(|r| r.sum() / n as f64).collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    let b = DMatrix::from_fn(n, n, |r, s| {
        a[(r, s)] - (row_means[r] + row_means[s]) + grand
    });
    GramMatrix { b }
}

/// Full sorted, sign-normalized spectrum of a Gram matrix.
pub fn symmetric_eigen(b: &GramMatrix) -> Result<EigenSystem> {
    decompose(b.as_matrix())
}

/// Classical MDS into `R^m` with the default positivity tolerance.
pub fn classical_mds(d: &DissimilarityMatrix, m: usize) -> Result<Embedding> {
    classical_mds_with_tolerance(d, m, DEFAULT_RELATIVE_TOLERANCE)
}

/// Classical MDS into `R^m`. Eigenvalues at or below `rel_tol · λ_max` give
/// zero coordinates.
pub fn classical_mds_with_tolerance(
    d: &DissimilarityMatrix,
    m: usize,
    rel_tol: f64,
) -> Result<Embedding> {
    let n = d.n();
    if m == 0 || m > n {
        return Err(Error::TargetDimension { m, max: n });
    }
    let sys = symmetric_eigen(&double_center(d))?;
    Ok(embedding_from_system(&sys, m, rel_tol))
}

pub(crate) fn embedding_from_system(sys: &EigenSystem, m: usize, rel_tol: f64) -> Embedding {
    let n = sys.vectors.nrows();
    let tol = positivity_threshold(&sys.values, rel_tol);
    let mut coords = DMatrix::zeros(n, m);
    let mut retained = Vec::with_capacity(m);
    for k in 0..m {
        let lambda = sys.values[k];
        if lambda > tol {
            coords.set_column(k, &(sys.vectors.column(k) * lambda.sqrt()));
            retained.push(lambda);
        } else {
            retained.push(0.0);
        }
    }
    let clipped_negative_mass = sys
        .values
        .iter()
        .filter(|&&v| v < -tol)
        .map(|v| v * v)
        .sum();
    Embedding {
        coords,
        retained_eigenvalues: retained,
        clipped_negative_mass,
        axes: (0..m).map(|index| AxisSource::Eigen { index }).collect(),
    }
}

/// `rel_tol` times the largest eigenvalue, never negative.
pub(crate) fn positivity_threshold(values: &[f64], rel_tol: f64) -> f64 {
    let lambda_max = values.iter().copied().fold(0.0_f64, f64::max);
    rel_tol * lambda_max
}

/// Euclidean distances between the rows of a configuration.
pub fn embedding_distance_matrix<P: PointConfiguration + ?Sized>(e: &P) -> DissimilarityMatrix {
    let x = e.coords();
    let n = x.nrows();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let dist = (x.row(i) - x.row(j)).norm();
            d[(i, j)] = dist;
            d[(j, i)] = dist;
        }
    }
    DissimilarityMatrix { d }
}

/// `Γ_m Λ̂_m Γ_mᵀ`: the best rank-`m` positive semi-definite approximation
/// of `B` in Frobenius norm.
pub fn mds_truncation(b: &GramMatrix, m: usize) -> Result<GramMatrix> {
    let n = b.n();
    if m == 0 || m > n {
        return Err(Error::TargetDimension { m, max: n });
    }
    let sys = symmetric_eigen(b)?;
    Ok(GramMatrix {
        b: truncated_product(&sys, m, 0.0),
    })
}

/// Clips every negative eigenvalue of `B` to zero.
pub fn psd_clip(b: &GramMatrix) -> Result<GramMatrix> {
    mds_truncation(b, b.n())
}

pub(crate) fn truncated_product(sys: &EigenSystem, m: usize, tol: f64) -> DMatrix<f64> {
    let n = sys.vectors.nrows();
    let mut out = DMatrix::zeros(n, n);
    for k in 0..m {
        let lambda = sys.values[k];
        if lambda > tol {
            let v = sys.vectors.column(k);
            out += (v * v.transpose()) * lambda;
        }
    }
    (&out + out.transpose()) * 0.5
}

/// `tr((B - B̂)²) = Σ (b_ij - b̂_ij)²`.
pub fn strain(b: &GramMatrix, b_hat: &GramMatrix) -> Result<StrainReport> {
    if b.n() != b_hat.n() {
        return Err(Error::DimensionMismatch {
            left: b.n(),
            right: b_hat.n(),
        });
    }
    let residual = b.as_matrix() - b_hat.as_matrix();
    let strain_value = residual.iter().map(|x| x * x).sum();

    let scale = b.as_matrix().amax().max(b_hat.as_matrix().amax());
    let tol = DEFAULT_RELATIVE_TOLERANCE * scale * b.n() as f64;
    let rank_used = decompose(b_hat.as_matrix())?
        .values
        .iter()
        .filter(|&&v| v.abs() > tol)
        .count();
    let dropped_spectrum = decompose(&residual)?
        .values
        .into_iter()
        .filter(|v| v.abs() > tol)
        .collect();
    Ok(StrainReport {
        strain_value,
        rank_used,
        dropped_spectrum,
    })
}

/// Euclidean realizability: `D` is Euclidean iff `λ_min(B) >= -tol`.
/// `tol` defaults to `1e-9 · max|λ|`.
pub fn euclidean_test(d: &DissimilarityMatrix, tol: Option<f64>) -> Result<EuclideanTest> {
    let sys = symmetric_eigen(&double_center(d))?;
    let tolerance = tol.unwrap_or(DEFAULT_RELATIVE_TOLERANCE * sys.spectral_radius());
    let min_eigenvalue = sys.values.last().copied().unwrap_or(0.0);
    let is_euclidean = min_eigenvalue >= -tolerance;
    let min_dimension = is_euclidean.then(|| sys.values.iter().filter(|&&v| v > tolerance).count());
    Ok(EuclideanTest {
        is_euclidean,
        min_dimension,
        min_eigenvalue,
        tolerance,
        eigenvalues: sys.values,
    })
}
