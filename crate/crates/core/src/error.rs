use thiserror::Error;

use crate::series::Basis;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Domain errors raised by the library. Schema problems in JSON input are
/// reported separately by [`crate::io::SchemaError`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element is not in the carrier of {model}")]
    NotInCarrier { model: String },
    #[error("coefficient models differ: {left} vs {right}")]
    ModelMismatch { left: String, right: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid coefficient model: {0}")]
    InvalidModel(String),
    #[error("invalid ring morphism: {0}")]
    InvalidMorphism(String),
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("invalid tail certificate: {0}")]
    InvalidTail(String),
    #[error("inclusion is not even bounded: sup of sigma(n)/rho(n) is infinite")]
    UnboundedInclusion,
    #[error("basis mismatch: expected {expected}, found {found}")]
    BasisMismatch { expected: Basis, found: Basis },
    #[error("basis change {from} -> {to} crosses sides of the duality")]
    CrossSide { from: Basis, to: Basis },
    #[error("substituted series must have zero constant term")]
    NonZeroConstantTerm,
    #[error("insufficient order: need {needed} known coefficients, have {available}")]
    InsufficientOrder { needed: usize, available: usize },
    #[error("finite difference needs at least {needed} table entries, have {available}")]
    InsufficientData { needed: usize, available: usize },
    #[error("operation requires finite support")]
    InfiniteSupport,
    #[error("p-adic precision exhausted at coefficient {index}")]
    PrecisionExhausted { index: usize },
    #[error("certificate too weak for requested precision; achievable precision is {achievable}")]
    CertificateTooWeak { achievable: i64 },
    #[error("no tail certificate available")]
    MissingCertificate,
    #[error("pairing undefined: {0}")]
    PairingUndefined(String),
    #[error("normed antipode requires a non-archimedean model")]
    ArchimedeanModel,
    #[error("{op} is not supported over {model}")]
    UnsupportedModel { op: &'static str, model: String },
    #[error("{0}")]
    Domain(String),
}
