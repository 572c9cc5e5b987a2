use thiserror::Error;

/// Failure modes shared across the numerical modules.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },
    #[error("solution with {q} cut(s) has negative density near x = {x}; try a different cut count")]
    WrongCutCount { q: usize, x: f64 },
    #[error("recurrence lost precision at n = {n} (ratio {ratio:e})")]
    PrecisionLoss { n: usize, ratio: f64 },
    #[error("point {0} lies on the branch cut")]
    BranchCut(num_complex::Complex64),
    #[error("gamma_{n} = {value} is not positive")]
    NonPositiveGamma { n: usize, value: f64 },
    #[error("line search failed at iteration {0}")]
    LineSearchFailure(usize),
    #[error("Newton iteration diverged: {0}")]
    NewtonDivergence(String),
    #[error("y = {y} is outside the solution grid [{lo}, {hi}]")]
    YOutOfGrid { y: f64, lo: f64, hi: f64 },
    #[error("linear system is ill-conditioned (condition estimate {0:e})")]
    IllConditioned(f64),
    #[error("tau integrand has not decayed: {0:e}")]
    IntegrandTail(f64),
    #[error("coincident points at {0}")]
    CoincidentPoints(f64),
    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),
}

impl Error {
    /// True for failures of an iterative numerical method (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        !matches!(self, Error::InvalidInput(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
