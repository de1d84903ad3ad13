//! Shared error type for all modules.

use thiserror::Error;

/// Errors raised by solvers, distributions and protocol runs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Temperature (or another strictly positive scale) was zero or negative.
    #[error("temperature must be positive, got {0}")]
    NonpositiveTemperature(f64),

    /// A parameter violated its documented domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Requested expectation values lie on or outside the feasible hull of
    /// the observable eigenvalues, so no finite multipliers reproduce them.
    #[error("infeasible target: {0}")]
    InfeasibleTarget(String),

    /// Iterative solver exhausted its budget; the residual is reported so
    /// the caller can judge how close it got.
    #[error("no convergence after {iterations} iterations, residual {residual:e}")]
    NoConvergence { residual: f64, iterations: usize },

    /// Adaptive quadrature could not certify the requested tolerance.
    #[error("tolerance not met: requested {requested:e}, achieved {achieved:e}")]
    ToleranceNotMet { requested: f64, achieved: f64 },

    /// The memory-ancilla chain outgrew the bath it exchanges with.
    #[error("chain length {chain} exceeds bath size {bath}")]
    ChainTooLong { chain: usize, bath: usize },

    /// A residual-entropy stop rule was not reached within the cycle cap.
    #[error("stop rule unreachable: residual entropy {achieved:e} after {cycles} cycles")]
    StopRuleUnreachable { achieved: f64, cycles: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
