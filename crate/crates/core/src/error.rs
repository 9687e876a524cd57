use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspace is not contained in the ambient subspace")]
    NotASubspace,
    #[error("truncation window too small: {0}")]
    WindowTooSmall(String),
    #[error("cohomology in negative degree {degree} is nonzero")]
    NegativeCohomology { degree: i32 },
    #[error("dgla is not cohomologically concentrated: H^{degree} has dimension {dim}")]
    NotConcentrated { degree: i32, dim: usize },
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("not a small extension: {0}")]
    NotSmallExtension(String),
    #[error("element does not satisfy the Maurer-Cartan equation")]
    NotMC,
    #[error("group cannot be averaged: {0}")]
    NotAveragable(String),
    #[error("subspace is not stable under the group action: {0}")]
    NotStable(String),
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;
