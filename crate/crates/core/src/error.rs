use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside its allowed range {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("bad quantum number n = {0} (must be >= 1)")]
    BadQuantumNumber(i64),
    #[error("eigensolver failed to converge: {0}")]
    ConvergenceFailure(String),
    #[error("Picard iteration diverged at step {step}: residual {residual:e} after {iterations} iterations")]
    PicardDivergence {
        step: usize,
        iterations: usize,
        residual: f64,
    },
    #[error("trajectory seeded at x0 = {seed} left the grid at t = {time}")]
    TrajectoryEscaped { seed: f64, time: f64 },
    #[error("lambda = {lambda} is in the classical limit where the Gaussian width diverges")]
    ClassicalSingularity { lambda: f64 },
    #[error("no sign change of the function on [{lo}, {hi}]")]
    NoRootInBracket { lo: f64, hi: f64 },
}
