//! Classical multidimensional scaling and its extension to finite metric
//! measure spaces.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`mds`] | double-centering, eigendecomposition, embeddings, Strain, Euclidean test |
//! | [`mmspace`] | measure-weighted kernels, operator eigenfunctions, Nyström extension |
//! | [`circle`] | closed-form spectra and embeddings of evenly spaced circle points |
//! | [`convergence`] | rearrangement distance and convergence experiments |
//! | [`matio`] | matrix, weight, report and SVG files |
//!
//! ```
//! use mmds_core::mds::{classical_mds, embedding_distance_matrix, DissimilarityMatrix};
//!
//! let d = DissimilarityMatrix::from_rows(&[
//!     &[0.0, 6.0, 8.0],
//!     &[6.0, 0.0, 10.0],
//!     &[8.0, 10.0, 0.0],
//! ])?;
//! let e = classical_mds(&d, 2)?;
//! assert!(embedding_distance_matrix(&e).max_abs_diff(&d)? < 1e-9);
//! # Ok::<(), mmds_core::Error>(())
//! ```

pub mod circle;
pub mod convergence;
pub mod error;
pub mod matio;
pub mod mds;
pub mod mmspace;

pub use error::{Error, Result};
pub use mds::{DissimilarityMatrix, Embedding, GramMatrix, PointConfiguration};
pub use mmspace::DiscreteMetricMeasureSpace;

pub use nalgebra;
