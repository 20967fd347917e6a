use thiserror::Error;

/// Errors raised while building groups, characters and covariant functions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("subgroup is not normal in {0}")]
    NotNormal(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("character domain is not abelian ({0})")]
    NonAbelianDomain(String),

    #[error("character is not invariant under conjugation by {0}")]
    NotInvariant(String),

    #[error("incompatible context: {0}")]
    IncompatibleContext(String),

    #[error("aliasing risk: {0}")]
    AliasingRisk(String),

    #[error("quadrature under-resolved: {0}")]
    Resolution(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
