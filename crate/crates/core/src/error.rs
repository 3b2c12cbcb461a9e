use thiserror::Error;

/// Errors raised by the computations in this crate.
///
/// Every variant maps to a stable machine-readable code through [`Error::code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("no real root in the requested range")]
    NoRealRoot,
    #[error("arithmetic mixes the distinct radicands {0} and {1}")]
    MixedRadicands(String, String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cone is not full dimensional")]
    NotFullDimensional,
    #[error("class is not pseudo-effective")]
    NotPseudoEffective,
    #[error("model inconsistency: {0}")]
    ModelInconsistency(String),
    #[error("class is not big")]
    NotBig,
    #[error("class is not nef")]
    NotNef,
    #[error("class is not ample")]
    NotAmple,
    #[error("class is not big and nef")]
    NotBigNef,
    #[error("point lies on the negative-part curve {0}")]
    PointInNegLocus(String),
    #[error("flag curve {0} enters the negative part past the start of the walk")]
    FlagCurveReenters(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("input is not integral")]
    NonIntegralInput,
    #[error("model has no canonical class")]
    MissingCanonical,
    #[error("unknown model {0}")]
    UnknownModel(String),
    #[error("unknown curve {0}")]
    UnknownCurve(String),
    #[error("inconsistent multiplicities: {0}")]
    InconsistentMultiplicities(String),
    #[error("invalid flag: {0}")]
    InvalidFlag(String),
    #[error("schema error: {0}")]
    SchemaError(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::SingularMatrix => "SingularMatrix",
            Error::NotSymmetric => "NotSymmetric",
            Error::NoRealRoot => "NoRealRoot",
            Error::MixedRadicands(..) => "MixedRadicands",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotFullDimensional => "NotFullDimensional",
            Error::NotPseudoEffective => "NotPseudoEffective",
            Error::ModelInconsistency(_) => "ModelInconsistency",
            Error::NotBig => "NotBig",
            Error::NotNef => "NotNef",
            Error::NotAmple => "NotAmple",
            Error::NotBigNef => "NotBigNef",
            Error::PointInNegLocus(_) => "PointInNegLocus",
            Error::FlagCurveReenters(_) => "FlagCurveReenters",
            Error::OutOfRange(_) => "OutOfRange",
            Error::InvalidQuery(_) => "InvalidQuery",
            Error::NonIntegralInput => "NonIntegralInput",
            Error::MissingCanonical => "MissingCanonical",
            Error::UnknownModel(_) => "UnknownModel",
            Error::UnknownCurve(_) => "UnknownCurve",
            Error::InconsistentMultiplicities(_) => "InconsistentMultiplicities",
            Error::InvalidFlag(_) => "InvalidFlag",
            Error::SchemaError(_) => "SchemaError",
            Error::InvariantViolation(_) => "InvariantViolation",
            Error::Io(_) => "Io",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
