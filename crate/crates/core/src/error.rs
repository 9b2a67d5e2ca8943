use thiserror::Error;

/// Errors raised by the modem, the oracle and the file formats.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GfdmError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid prototype filter: {0}")]
    InvalidFilter(String),

    #[error("length mismatch: expected {expected} samples, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("branch index {branch} out of range for {n_subcarriers} subcarriers")]
    BranchOutOfRange { branch: usize, n_subcarriers: usize },

    #[error("cyclic prefix length {cp_len} must be below the block length {block_len}")]
    CpOutOfRange { cp_len: usize, block_len: usize },

    #[error("channel has {taps} taps but the cyclic prefix is only {cp_len} samples")]
    CpShorterThanChannel { taps: usize, cp_len: usize },

    #[error("polyphase spectrum has a near-zero bin in branches {branches:?}; zero-forcing is undefined")]
    SingularPolyphase { branches: Vec<usize> },

    #[error("A^H A is numerically singular (reciprocal condition {rcond:e})")]
    SingularSystem { rcond: f64 },

    #[error("channel spectrum has near-zero bins {bins:?}")]
    SingularChannel { bins: Vec<usize> },

    #[error("plan or filter bank was built for N={expected_n}, M={expected_m}, got N={n}, M={m}")]
    ConfigMismatch {
        expected_n: usize,
        expected_m: usize,
        n: usize,
        m: usize,
    },

    #[error("instrumentation was not enabled when the plan was built")]
    InstrumentationDisabled,

    #[error("invalid complexity query: {0}")]
    Domain(String),

    #[error("filter-bank file: {0}")]
    Format(String),

    #[error("filter-bank file truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for GfdmError {
    fn from(e: std::io::Error) -> Self {
        GfdmError::Io(e.to_string())
    }
}

impl GfdmError {
    /// True for the errors that come from a numerically singular operator.
    pub fn is_singular(&self) -> bool {
        matches!(
            self,
            GfdmError::SingularPolyphase { .. }
                | GfdmError::SingularSystem { .. }
                | GfdmError::SingularChannel { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, GfdmError>;
