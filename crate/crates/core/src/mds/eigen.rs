//! Dense symmetric eigendecomposition with a canonical output form.
//!
//! The numerical work is delegated to nalgebra's implicit symmetric QR
//! algorithm. Everything downstream depends on the ordering and sign of the
//! result, so the raw decomposition is normalized here: eigenvalues are
//! sorted non-increasing (stable with respect to the solver's order) and
//! every eigenvector is flipped so that its entry of largest magnitude is
//! positive, ties going to the lowest index.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Eigenvalues sorted non-increasing, with column `k` of `vectors` paired
/// with `values[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl EigenSystem {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest eigenvalue magnitude, zero for an empty system.
    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }
}

/// Decomposes a symmetric matrix. Only the lower triangle is read.
pub fn decompose(matrix: &DMatrix<f64>) -> Result<EigenSystem> {
    let n = matrix.nrows();
    if n != matrix.ncols() || n == 0 {
        return Err(Error::NotSquare {
            rows: n,
            cols: matrix.ncols(),
        });
    }
    let budget = 64 * n + 256;
    let raw = SymmetricEigen::try_new(matrix.clone(), f64::EPSILON, budget)
        .ok_or(Error::NoConvergence { n })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw.eigenvalues[b].total_cmp(&raw.eigenvalues[a]));

    let values = order.iter().map(|&k| raw.eigenvalues[k]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut column = raw.eigenvectors.column(src).into_owned();
        if column[leading_index(column.as_slice())] < 0.0 {
            column.neg_mut();
        }
        vectors.set_column(dst, &column);
    }
    Ok(EigenSystem { values, vectors })
}

/// Index of the first entry with the largest absolute value.
pub(crate) fn leading_index(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    best
}
