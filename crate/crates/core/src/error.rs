use thiserror::Error;

/// Errors raised by the solvers and analyzers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Domain(String),

    #[error("no sign change of the radial mismatch in [{lo}, {hi}] (f(lo) = {f_lo:e}, f(hi) = {f_hi:e})")]
    BracketNotFound { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("truncation did not converge: {0}")]
    Truncation(String),

    #[error("integrator failure at xi = {xi}: {reason}")]
    Integrator { xi: f64, reason: String },

    #[error("root search did not converge after {iterations} iterations (last bracket width {width:e})")]
    RootNotConverged { iterations: usize, width: f64 },

    #[error("inverse iteration stagnated after {iterations} iterations (last residual {residual:e})")]
    Stagnation { iterations: usize, residual: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("basis is numerically empty: largest overlap eigenvalue {largest:e} below drop tolerance {tau:e}")]
    EmptyBasis { largest: f64, tau: f64 },

    #[error("ill-conditioned fit: sqrt(A)*window = {0:e}; use a larger window")]
    IllConditionedFit(f64),

    #[error("profile is not symmetric under z -> -z (max relative deviation {0:e})")]
    AsymmetricProfile(f64),

    #[error("basis file line {line}: {msg}")]
    BasisParse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
