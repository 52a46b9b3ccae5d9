use thiserror::Error;

/// Unified error type for group validation, capacity limits, and precondition
/// violations across the toolkit.
#[derive(Debug, Error)]
pub enum QdError {
    #[error("group table is not associative: ({a} * {b}) * {c} != {a} * ({b} * {c})")]
    NotAssociative { a: usize, b: usize, c: usize },

    #[error("element 0 is not a two-sided identity (fails at g = {g})")]
    MissingIdentity { g: usize },

    #[error("element {g} has no inverse")]
    MissingInverse { g: usize },

    #[error("multiplication table is not square or contains out-of-range entries (row {row})")]
    MalformedTable { row: usize },

    #[error("unknown builtin group name: {0}")]
    UnknownBuiltin(String),

    #[error("numeric irrep decomposition failed to converge (residual {residual:.3e})")]
    IrrepDecomposition { residual: f64 },

    #[error("incomplete irrep set: fusion residual {residual:.3e} >= 1e-8")]
    IncompleteIrreps { residual: f64 },

    #[error("lattice sides must be at least 2 (got {lx} x {ly})")]
    LatticeTooSmall { lx: usize, ly: usize },

    #[error("ribbon composition mismatch: first ribbon ends at {end:?}, second starts at {start:?}")]
    RibbonMismatch { end: (usize, usize), start: (usize, usize) },

    #[error("holonomy pair must commute: elements {a} and {b} do not")]
    NonCommutingPair { a: usize, b: usize },

    #[error("conjugacy-class component index {index} out of range (class size {size})")]
    ClassIndexOutOfRange { index: usize, size: usize },

    #[error("operation requires a closed ribbon, got an open one")]
    OpenRibbon,

    #[error("regions must partition the edge set: {reason}")]
    BadPartition { reason: String },

    #[error("state trace {trace} deviates from 1 beyond tolerance")]
    NotNormalized { trace: f64 },

    #[error("dimension {dim} exceeds the dense-representation cap {cap}; {advice}")]
    Capacity { dim: usize, cap: usize, advice: String },

    #[error("enumeration budget exceeded: {needed} configurations > limit {limit}")]
    Budget { needed: u128, limit: u64 },

    #[error("modular matrix deviates from unitarity by {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("incompatible density-state representations: {0}")]
    Incompatible(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, QdError>;
