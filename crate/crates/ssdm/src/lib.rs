//! Intrinsic score-based diffusion models for quantum pure-state ensembles.
//!
//! Pure states live on the complex projective space CP^(d-1) under the
//! Fubini-Study metric. This crate implements the full pipeline:
//!
//! - exact FS geometry (distances, log/exp maps, parallel transport,
//!   isotropic tangent noise) in [`geometry`],
//! - dense complex operator utilities (Pauli/Gell-Mann bases, partial trace,
//!   Hermitian eigenvalues, von Neumann entropy) in [`quantum_linear`],
//! - the forward Riemannian Ornstein-Uhlenbeck diffusion, its stochastic
//!   Schroedinger realization, and the Euclidean variance-preserving
//!   baseline forward process in [`diffusion`],
//! - a from-scratch MLP score network with exact backpropagation and AdamW
//!   in [`score_model`],
//! - local-time teacher scores and the training loop in [`training`],
//! - reverse-time manifold sampling and the Euclidean baseline sampler in
//!   [`sampler`],
//! - gauge-invariant ensemble metrics and kernel diagnostics in [`metrics`],
//! - synthetic data construction, binary ensemble persistence, and strict
//!   configuration handling in [`data_io`],
//! - the command-line driver in [`cli`].

pub mod cli;
pub mod data_io;
pub mod diffusion;
pub mod geometry;
pub mod metrics;
pub mod quantum_linear;
pub mod rng;
pub mod sampler;
pub mod score_model;
pub mod training;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("states are orthogonal within tolerance; logarithm and transport are undefined at the cut locus")]
    OrthogonalStates,

    #[error("vector is not unit norm: |norm - 1| = {deviation:e}")]
    NotUnitNorm { deviation: f64 },

    #[error("vector is not horizontal at its base state: |<base, v>| = {residual:e}")]
    NotHorizontal { residual: f64 },

    #[error("matrix is not Hermitian: max |H - H^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (max off-diagonal {offdiag:e})")]
    NoConvergence { sweeps: usize, offdiag: f64 },

    #[error("dimension {dim} is not a power of two")]
    NotPowerOfTwo { dim: usize },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("non-finite value in {context}")]
    NonFinite { context: String },

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("training aborted at step {step}: {message}")]
    Training { step: usize, message: String },

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("format error at byte offset {offset}: {message}")]
    Format { offset: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
