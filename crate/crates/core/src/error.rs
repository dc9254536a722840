use thiserror::Error;

use crate::params::{Axis, ConfigurationTag};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid system: {0}")]
    InvalidSystem(String),

    /// A static electric field along an axis that has no restoring force.
    #[error("electric field along {axis} with zero trap frequency: the Hamiltonian cannot be reduced to a quadratic form and is not solvable analytically")]
    DegenerateAxis { axis: Axis },

    #[error("operation requires {expected} configuration, found {found:?}")]
    WrongConfiguration {
        expected: &'static str,
        found: ConfigurationTag,
    },

    /// One of the normal-mode frequencies vanishes (omega_x = 0 or omega_y = 0).
    #[error("zero normal mode: {0}")]
    ZeroMode(String),

    #[error("degenerate mode: {0}")]
    DegenerateMode(String),

    #[error("eigenvector residual {residual:e} exceeds {tolerance:e} for mode {mode}")]
    EigenResidual {
        mode: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("normalization failure for mode {mode}: |u.v - 1| = {deviation:e}")]
    NormalizationFailure { mode: usize, deviation: f64 },

    #[error("quadratic form is not positive definite")]
    NonNormalizable,

    #[error("states live on different Gaussian forms: {0}")]
    IncompatibleForms(String),

    #[error("polynomial degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("negative radicand {value:e} for component {component}")]
    NegativeRadicand { component: usize, value: f64 },

    #[error("grid does not resolve the problem: {0}")]
    Resolution(String),

    #[error("eigensolver did not converge after {iterations} iterations (worst residual {residual:e})")]
    ConvergenceFailure { iterations: usize, residual: f64 },

    #[error("linear solve stalled after {iterations} iterations (relative residual {residual:e})")]
    SolverStall { iterations: usize, residual: f64 },

    #[error("shifted operator is not positive definite at shift {shift}")]
    IndefiniteShift { shift: f64 },
}
