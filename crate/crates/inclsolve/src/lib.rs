//! Solvers and verification tooling for the extragradient family applied to
//! nonlinear equations `Fx = 0` and composite inclusions `0 ∈ Fx + Tx`.
//!
//! The crate is organized bottom-up:
//!
//! * [`operator_core`] — operator abstractions (`F` as a single-valued map,
//!   `T` accessed only through its resolvent), residual metrics, and sampled
//!   monotonicity probes.
//! * [`problem_zoo`] — parametric synthetic instances with known solutions and
//!   certified constants `(L, μ, ρ)` for every monotonicity regime.
//! * [`solvers`] — one step kernel per scheme (forward, forward-backward,
//!   extragradient, past/optimistic, Tseng-type, reflected, golden-ratio,
//!   anchored, and Nesterov-accelerated variants), plus stepsize windows and
//!   parameter schedules.
//! * [`instrumentation`] — potential-function evaluators, per-iteration
//!   convergence-certificate checkers, best-iterate tracking, rate fitting.
//! * [`harness`] — experiment configuration, run loop, CSV/plot-data emission,
//!   and presets used by the `inclsolve` CLI.
//!
//! # Example
//!
//! ```
//! use inclsolve::harness::{ExperimentConfig, run_experiment};
//!
//! let cfg = ExperimentConfig {
//!     problem_id: "rotation2".to_string(),
//!     method: "eg".to_string(),
//!     iterations: 100,
//!     check_theorems: true,
//!     ..ExperimentConfig::default()
//! };
//! let trace = run_experiment(&cfg).unwrap();
//! assert_eq!(trace.rows.len(), 101);
//! assert!(trace.rows.iter().all(|r| r.cert_pass));
//! ```

pub mod harness;
pub mod instrumentation;
pub mod operator_core;
pub mod problem_zoo;
pub mod solvers;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter is outside its admissible range (e.g. nonpositive stepsize).
    #[error("parameter error: {0}")]
    Parameter(String),
    /// Vector dimensions do not match.
    #[error("shape error: expected dimension {expected}, found {found}")]
    Shape { expected: usize, found: usize },
    /// An inconsistent or incomplete configuration was supplied.
    #[error("configuration error: {0}")]
    Config(String),
    /// A numeric failure (overflow, non-finite values, nonconvergence).
    #[error("numeric error: {0}")]
    Numeric(String),
    /// An I/O failure while reading configuration or writing output.
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Dense column vector over `f64`, the ambient space for all problems.
pub type Vector = nalgebra::DVector<f64>;
