use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator not invertible: {0}")]
    DenominatorNotInvertible(String),
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("division by the zero rational function")]
    DivisionByZeroRat,
    #[error("power series has a non-unit constant term")]
    NonUnitConstantTerm,
    #[error("unknown target `{0}`")]
    UnknownTarget(String),
    #[error("unknown modulus `{0}`")]
    UnknownModulus(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no usable specialization point: {0}")]
    InapplicablePoint(String),
    #[error("unsupported factor shape: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
