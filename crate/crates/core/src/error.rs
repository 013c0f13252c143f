use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{op}: dimension mismatch, left is {left:?}, right is {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{op}: expected a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("invalid matrix shape: {0}")]
    InvalidShape(String),

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("SVD did not converge after {sweeps} Jacobi sweeps")]
    Convergence { sweeps: usize },

    #[error("exponent l = {l} is smaller than the index k = {k}")]
    ExponentTooSmall { l: usize, k: usize },

    #[error("cannot build a full-rank decomposition of a numerically zero matrix")]
    ZeroMatrix,

    #[error("outer inverse with the prescribed range and null space does not exist: V*A*U is singular")]
    OuterInverseMissing,

    #[error("{0}: inner matrix is numerically singular (inconsistent index or ill-conditioned pair)")]
    SingularInner(&'static str),

    #[error("invalid GAS factors: {0}")]
    InvalidGas(String),

    #[error("cannot generate a pair: {0}")]
    Infeasible(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerics (non-convergence, singular inner
    /// systems) as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. } | Error::OuterInverseMissing | Error::SingularInner(_)
        )
    }
}
