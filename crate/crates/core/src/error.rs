use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("tree height must be at least 1")]
    ZeroHeight,
    #[error("tree height {0} exceeds the supported maximum of {max}", max = crate::welded_tree::MAX_HEIGHT)]
    HeightTooLarge(u32),
    #[error("label space too small: {available} usable labels for {needed} non-entrance vertices at n={n}")]
    LabelSpaceTooSmall { n: u32, available: u64, needed: u64 },
    #[error("invalid weld cycle: {0}")]
    InvalidWeld(String),
    #[error("invalid coloring: {0}")]
    InvalidColoring(String),
    #[error("no valid coloring exists for this welding")]
    NoColoring,
    #[error("known-vertex entries are inconsistent with every welded tree: {0}")]
    InconsistentEntries(String),
    #[error("could not embed known vertices after {0} attempts")]
    EmbeddingFailed(usize),
    #[error("tree document: {0}")]
    TreeDocument(String),
    #[error("width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("register width {width} exceeds the cap of {cap}")]
    WidthCap { width: usize, cap: usize },
    #[error("size cap: {0}")]
    SizeCap(String),
    #[error("circuit failed validation: {0}")]
    InvalidCircuit(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("layer contains a non-query gate")]
    NonQueryGate,
    #[error("wrong tier kind: {0}")]
    TierKind(String),
    #[error("norm drift {drift:e} exceeds tolerance {tol:e}")]
    NormDrift { drift: f64, tol: f64 },
    #[error("too many measurement branches (cap {0})")]
    BranchCap(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
