use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("radius must be positive, got r = {0}")]
    NonPositiveRadius(f64),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A SUSY side condition failed, so there is no normalizable
    /// zero-energy state of the chosen superpotential.
    #[error("no quasi-exactly solvable ground state: {name} = {value} must be positive")]
    NoQesSolution { name: &'static str, value: f64 },

    #[error("parameters not quasi-exactly solvable: constraint residual {residual:e} exceeds {tolerance:e}")]
    NotQuasiExactlySolvable { residual: f64, tolerance: f64 },

    #[error("lambda = {lambda} out of range: {violated}")]
    LambdaOutOfBounds { lambda: i64, violated: String },

    #[error("invalid state index: {0}")]
    InvalidState(String),

    #[error("duality mismatch: {lhs} vs {rhs}")]
    DualityMismatch { lhs: f64, rhs: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("potential is not finite at r = {r}")]
    NonFinitePotential { r: f64 },

    #[error("potential collapses at the origin: {0}")]
    FallToCenter(String),

    #[error("solver did not converge: {0}")]
    NoConvergence(String),

    #[error("node-count sequence broken: {0}")]
    NodeSequence(String),

    #[error("numerical overflow during integration: {0}")]
    Overflow(String),
}

impl Error {
    /// True for failures of the numerical machinery rather than of the
    /// caller's inputs.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence(_) | Error::NodeSequence(_) | Error::Overflow(_)
        )
    }
}
