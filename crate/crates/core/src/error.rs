//! Error type shared by all toolkit operations.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OpError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("train node {node} outside representable evaluation window {limit}")]
    NodeOutOfWindow { node: f64, limit: f64 },

    #[error("delta train nodes must be strictly increasing (violation near index {index})")]
    NodesNotMonotone { index: usize },

    #[error("derivative order {0} unsupported (max {max})", max = crate::sinc::MAX_SINC_DERIV)]
    UnsupportedDerivativeOrder(u32),

    #[error("sample spacing {got} does not match expected {expected}")]
    SpacingMismatch { expected: f64, got: f64 },

    #[error("temporal support {t_prime} exceeds sample period {t}")]
    SupportExceedsPeriod { t_prime: f64, t: f64 },

    #[error("filter requires T*Omega <= 1, got {0}")]
    FilterBandwidthProduct(f64),

    #[error("separation condition violated: min node gap {gap} < required {required}")]
    SeparationViolation { gap: f64, required: f64 },

    #[error("separation is not violated: gap {gap} >= {t}; counterexample needs gap < T")]
    SeparationNotViolated { gap: f64, t: f64 },

    #[error("node set is not commensurate with any lattice finer than {0}")]
    IncommensurateNodes(f64),

    #[error("exponential system failed the frame check: A_est = {a_est:.3e}")]
    FrameFailure { a_est: f64 },

    #[error("linear system is singular and no regularization was supplied")]
    SingularSystem,

    #[error("mixing matrix too ill-conditioned: cond = {cond:.3e} exceeds limit {limit:.3e}")]
    IllConditioned { cond: f64, limit: f64 },

    #[error("expected {expected} channel outputs, got {got}")]
    ChannelCountMismatch { expected: usize, got: usize },

    #[error("operator class mismatch: {0}")]
    ClassMismatch(String),

    #[error("density window h = {h} exceeds node span {span}")]
    WindowExceedsSpan { h: f64, span: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, OpError>;
