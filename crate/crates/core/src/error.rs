use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: file not found", path.display())]
    FileMissing { path: PathBuf },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: non-finite entry `{token}`")]
    NonFiniteInput { line: usize, token: String },

    #[error("negative weight {value} at index {index}")]
    NegativeWeight { index: usize, value: f64 },

    #[error("weights sum to zero")]
    ZeroWeightSum,

    #[error("expected {expected} weights, found {found}")]
    WeightCount { expected: usize, found: usize },

    #[error("weights sum to {sum}, not 1 (enable normalization to rescale)")]
    WeightSumNotOne { sum: f64 },

    #[error("axis {axis} out of range for an embedding of dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("matrix must be square and non-empty, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({i}, {j})")]
    NonFiniteEntry { i: usize, j: usize },

    #[error("matrix is not symmetric at ({i}, {j}): {a} vs {b}")]
    NotSymmetric { i: usize, j: usize, a: f64, b: f64 },

    #[error("diagonal entry ({i}, {i}) is {value}, expected 0")]
    NotHollow { i: usize, value: f64 },

    #[error("negative dissimilarity {value} at ({i}, {j})")]
    NegativeDissimilarity { i: usize, j: usize, value: f64 },

    #[error("similarity violates c[r][s] <= c[r][r] at ({r}, {s})")]
    SimilarityDominance { r: usize, s: usize },

    #[error("negative radicand {value} at ({r}, {s})")]
    NegativeRadicand { r: usize, s: usize, value: f64 },

    #[error("matrix is not doubly centered: row/column {index} sums to {sum}")]
    NotCentered { index: usize, sum: f64 },

    #[error("kernel is not measure-centered: row {index} integrates to {sum}")]
    NotMeasureCentered { index: usize, sum: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("target dimension {m} out of range 1..={max}")]
    TargetDimension { m: usize, max: usize },

    #[error("component {k} out of range: the system has {len} components")]
    ComponentOutOfRange { k: usize, len: usize },

    #[error("eigen-solver did not converge for n = {n}")]
    NoConvergence { n: usize },

    #[error("eigenvalue {value} of component {k} is below tolerance {tol}")]
    EigenvalueBelowTolerance { k: usize, value: f64, tol: f64 },

    #[error("circle needs n >= 3, got {n}")]
    CircleTooSmall { n: usize },

    #[error("circle target dimension must be even and >= 2, got {m}")]
    CircleDimension { m: usize },

    #[error("frequency {k} is unpaired or out of range for n = {n}")]
    FrequencyOutOfRange { n: usize, k: usize },

    #[error("frequency {k} has non-positive eigenvalue {value} at n = {n}")]
    NonPositiveFrequency { n: usize, k: usize, value: f64 },

    #[error("weight vector does not sum to 1 (sum = {sum})")]
    WeightsNotProbability { sum: f64 },

    #[error("weight vectors differ between kernels")]
    WeightMismatch,

    #[error("invalid resolutions: {0}")]
    InvalidResolutions(String),

    #[error("top_k must be at least 1")]
    ZeroTopK,

    #[error("invalid report: {0}")]
    InvalidReport(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
