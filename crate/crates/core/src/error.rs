use thiserror::Error;

/// Errors raised across the solver, basis and oracle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StabilityError {
    #[error("index {index} is not valid for {what}")]
    InvalidIndex { what: &'static str, index: usize },

    #[error("argument {value} lies outside the domain [{lo}, {hi}]")]
    OutOfDomain { value: f64, lo: f64, hi: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("no real positive eigenvalue at N = {heating}, a^2 = {a2} (n = {n_modes})")]
    NoPositiveEigenvalue {
        heating: f64,
        a2: f64,
        n_modes: usize,
    },

    #[error("reduction of the coupled system failed: {0}")]
    SingularReduction(String),

    #[error("could not bracket root {index} of the {family} characteristic equation")]
    BracketFailure { family: &'static str, index: usize },

    #[error("Ra(a^2) has no interior minimum on [{lo}, {hi}]")]
    NoInteriorMinimum { lo: f64, hi: f64 },

    #[error("adaptive quadrature did not reach tolerance {tol:e} (estimate {estimate:e})")]
    QuadratureDidNotConverge { tol: f64, estimate: f64 },

    #[error("finite-difference eigen-solve failed on a grid of {m} points")]
    EigenSolveFailed { m: usize },
}

pub type Result<T> = std::result::Result<T, StabilityError>;
