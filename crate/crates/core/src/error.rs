use std::path::PathBuf;

/// Errors raised anywhere in the synthesis pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("no terms in input")]
    EmptyInput,

    #[error("all coefficients are zero")]
    AllZero,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("qubit index {index} out of range for {qubits} qubits")]
    QubitOutOfRange { index: usize, qubits: usize },

    #[error("{qubits} qubits exceeds the supported maximum of {max}")]
    TooManyQubits { qubits: usize, max: usize },

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("matrix is not orthogonal (residual {0:e})")]
    NotOrthogonal(f64),

    #[error("determinant {0} is not within tolerance of +1 or -1")]
    BadDeterminant(f64),

    #[error("matrix is not a tensor product (residual {0:e})")]
    NotTensorProduct(f64),

    #[error("requested precision {requested:e} is below the supported floor {floor:e}")]
    UnsupportedPrecision { requested: f64, floor: f64 },

    #[error("no eps_t in [{lo:e}, {hi:e}] meets the error budget {epsilon:e}; tighten the AQCE threshold or lower the bracket floor")]
    BudgetUnreachable { lo: f64, hi: f64, epsilon: f64 },

    #[error("circuit contains a gate that cannot be lowered: {0}")]
    NotLowerable(String),
}

impl Error {
    /// Short machine-readable tag used in CLI failure lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
            Error::EmptyInput => "empty-input",
            Error::AllZero => "all-zero",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::QubitOutOfRange { .. } => "qubit-out-of-range",
            Error::TooManyQubits { .. } => "too-many-qubits",
            Error::NotNormalized(_) => "not-normalized",
            Error::NotOrthogonal(_) => "not-orthogonal",
            Error::BadDeterminant(_) => "bad-determinant",
            Error::NotTensorProduct(_) => "not-tensor-product",
            Error::UnsupportedPrecision { .. } => "unsupported-precision",
            Error::BudgetUnreachable { .. } => "budget-unreachable",
            Error::NotLowerable(_) => "not-lowerable",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
