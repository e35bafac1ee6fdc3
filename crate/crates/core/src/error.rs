use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid open set: {0}")]
    InvalidOpenSet(String),
    #[error("invalid sheaf: {0}")]
    InvalidSheaf(String),
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("unbounded support: {0}")]
    UnboundedSupport(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("not a cartesian square: {0}")]
    NotCartesian(String),
    #[error("Mayer-Vietoris condition violated: {0}")]
    MayerVietoris(String),
}

pub type Result<T> = std::result::Result<T, Error>;
