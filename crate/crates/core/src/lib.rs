//! Estimate the number of components of a Gaussian mixture by centered
//! singular value thresholding (CSVT).
//!
//! The estimator centers the `p × n` data matrix (columns are samples),
//! computes its singular values, and counts those strictly above
//! `T = √p + √n + t_n`. The count plus one is the estimate `K̂`.
//!
//! ```
//! use csvt::{csvt, DataMatrix, Strategy, TnRule};
//!
//! // two well separated groups of three samples on a line
//! let x = DataMatrix::from_samples(&[
//!     vec![-40.0, 0.0], vec![-40.5, 0.2], vec![-39.5, -0.1],
//!     vec![40.0, 0.1], vec![40.5, -0.2], vec![39.6, 0.0],
//! ]).unwrap();
//! let report = csvt(&x, TnRule::Explicit(1.0), Strategy::Auto).unwrap();
//! assert_eq!(report.k_hat, 2);
//! ```
//!
//! Modules:
//! - [`spectral`]: column means, streaming centered Gram matrices, singular values.
//! - [`estimator`]: the threshold rule, CSVT and the uncentered baseline.
//! - [`synth`]: synthetic mixtures, counterexample constructions, seeded RNG streams.
//! - [`theory`]: executable checks of the signal, noise and perturbation bounds.
//! - [`harness`]: experiment grids with seeded parallel replications.
//! - [`ingest`]: delimited-text loading and real-data presets.

pub mod error;
pub mod estimator;
pub mod harness;
pub mod ingest;
pub mod spectral;
pub mod synth;
pub mod theory;

pub use error::{Error, Result};
pub use estimator::{csvt, csvt_with, raw_count, threshold, EstimateReport, ThresholdSpec, TnRule};
pub use spectral::{
    centered_gram, column_mean, singular_values_centered, spectral_norm, ComputedBy, DataMatrix,
    GramSide, SpectralOptions, SpectrumResult, Strategy,
};
