use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("zero vector has no eigen-residual")]
    ZeroVector,

    /// A positive off-diagonal entry; the orbit is reported 1-indexed.
    #[error("not a Z-tensor: off-diagonal entry {value} at orbit {orbit:?} is positive")]
    NotZ { orbit: Vec<usize>, value: f64 },

    #[error("tensor has a negative entry at {orbit:?}")]
    NotNonnegative { orbit: Vec<usize> },

    #[error("tensor is not weakly irreducible")]
    NotWeaklyIrreducible,

    #[error("hypergraph is not connected")]
    Disconnected,

    #[error(
        "perron iteration did not converge after {iterations} steps (bounds [{lower}, {upper}])"
    )]
    NoConvergence {
        iterations: usize,
        lower: f64,
        upper: f64,
    },

    #[error(
        "eigenvector check failed for exponents {exponents:?}: residual {residual:e} > {tol:e}"
    )]
    ResidualViolation {
        exponents: Vec<u64>,
        residual: f64,
        tol: f64,
    },

    #[error("enumeration needs {required} candidates, budget is {budget}")]
    BudgetExceeded { required: String, budget: u64 },
}
