use thiserror::Error;

use crate::cartan::CartanError;
use crate::series::SeriesError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    /// A precondition on ranks, epsilon, orders or generator degrees failed.
    #[error("{0}")]
    Domain(String),
    /// A computed quantity contradicts an identity that must hold exactly.
    #[error("identity violated at degree {degree}: {detail}")]
    IdentityViolated { degree: usize, detail: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
