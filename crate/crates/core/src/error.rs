use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("size {n} exceeds the limit {limit} of {what}")]
    TooLarge { what: &'static str, n: usize, limit: usize },
    #[error("matrix is not self-dual (residual {residual:.3e})")]
    NotSelfDual { residual: f64 },
    #[error("matrix is not skew-symmetric (residual {residual:.3e})")]
    NotSkew { residual: f64 },
    #[error("Pfaffian needs an even dimension, got {0}")]
    OddDimension(usize),
    #[error("entry ({row}, {col}) is not a real quaternion")]
    NotRealQuaternion { row: usize, col: usize },
    #[error("weight {index} is not a scalar")]
    NonScalarWeight { index: usize },
    #[error("eigenvalues do not split into Kramers pairs: {0}")]
    Pairing(String),
    #[error("eigensolver did not converge")]
    EigenConvergence,
    #[error("point {0} lies outside the kernel domain")]
    OutsideDomain(String),
    #[error("sub-domain is not contained in the kernel domain: {0}")]
    SubDomain(String),
    #[error("non-scalar residual {residual:.3e} exceeds tolerance {tol:.1e}")]
    NonScalar { residual: f64, tol: f64 },
    #[error("kernel has no diagonal form")]
    MissingDiagonalForm,
    #[error("quadrature under-resolved: term {order} has magnitude {magnitude:.3e}")]
    UnderResolved { order: usize, magnitude: f64 },
    #[error("skew Gram-Schmidt breakdown at pair {pair} (pivot {pivot:.3e})")]
    Breakdown { pair: usize, pivot: f64 },
    #[error("eigenvalues outside [0, 1]: {0}")]
    EigenvalueRange(String),
    #[error("zero variance")]
    ZeroVariance,
    #[error("too few batches: {got} (need at least {need})")]
    TooFewBatches { got: usize, need: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("descriptor parse error: {0}")]
    Descriptor(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
