use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error in {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("quotient does not exist in the Laurent ring")]
    NotDivisible,
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("coordinate {0} of the torus point equals 1")]
    CoordinateOne(usize),
    #[error("operation is not defined for one-colored links")]
    Mu1NotApplicable,
    #[error("operation is only defined for one-colored links")]
    Mu1Only,
    #[error("slope is ambiguous: the class does not annihilate the kernel")]
    AmbiguousSlope,
    #[error("slope has imaginary part {imag:e} (value {real})")]
    NotReal { real: f64, imag: f64 },
    #[error("the point (1,...,1) is excluded from the pointed torus")]
    BasePoint,
    #[error("unknown catalog key {0:?}")]
    UnknownKey(String),
    #[error("link {0:?} carries no Seifert matrices")]
    NoSeifertData(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid field {key:?}: {reason}")]
    Schema { key: String, reason: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn schema(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Schema {
            key: key.into(),
            reason: reason.into(),
        }
    }
}
