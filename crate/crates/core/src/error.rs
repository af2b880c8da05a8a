use thiserror::Error;

/// Errors raised by the numeric and symbolic routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("series of order {have} is too short, need at least {need}")]
    OrderDeficit { have: usize, need: usize },
    #[error("exact division failed: {0}")]
    DivisionMismatch(String),
    #[error("basis reduction failed: {0}")]
    Reduction(String),
    #[error("step size underflow at x = {0}")]
    StepSizeUnderflow(f64),
    #[error("method unavailable: {0}")]
    Unavailable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
