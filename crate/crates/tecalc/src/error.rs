use thiserror::Error;

/// Every failure the library can report. `kind()` gives a stable tag for machine-readable output.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("constant term is not invertible")]
    NotAUnit,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("characteristic polynomial does not split over {field}: {detail}")]
    IrrationalSpectrum { field: String, detail: String },
    #[error("internal singular system: {0}")]
    InternalSingular(String),
    #[error("not semisimple: {0}")]
    NotSemisimple(String),
    #[error("residue of the block is not a scalar matrix")]
    ResidueNotScalar,
    #[error("u^-1 coefficient of the block is nonzero")]
    NonzeroSubleading,
    #[error("inconsistent recursion: {0}")]
    Inconsistent(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("solution not unique: {dimension} free directions survive to the requested order")]
    NonUnique { dimension: usize },
    #[error("flat-section recursion obstructed at order {order}")]
    Obstructed { order: usize },
    #[error("grading operator has nonzero diagonal blocks in the eigenframe")]
    MuPropertyFailed,
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("grading data inconsistent: {0}")]
    BadGrading(String),
    #[error("Euler grading missing")]
    MissingGrading,
    #[error("polarization missing")]
    MissingPolarization,
    #[error("parity bookkeeping failed: {0}")]
    OddParityViolation(String),
    #[error("unsupported pole order: {0}")]
    PoleOrder(String),
    #[error("truncation order too low: need {needed}, have {available}")]
    OrderTooLow { needed: usize, available: usize },
    #[error("value outside the working field: {0}")]
    FieldViolation(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "ParseError",
            Error::NotAUnit => "NotAUnit",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::IrrationalSpectrum { .. } => "IrrationalSpectrum",
            Error::InternalSingular(_) => "InternalSingular",
            Error::NotSemisimple(_) => "NotSemisimple",
            Error::ResidueNotScalar => "ResidueNotScalar",
            Error::NonzeroSubleading => "NonzeroSubleading",
            Error::Inconsistent(_) => "Inconsistent",
            Error::NoSolution(_) => "NoSolution",
            Error::NonUnique { .. } => "NonUnique",
            Error::Obstructed { .. } => "Obstructed",
            Error::MuPropertyFailed => "MuPropertyFailed",
            Error::UnknownPreset(_) => "UnknownPreset",
            Error::BadGrading(_) => "BadGrading",
            Error::MissingGrading => "MissingGrading",
            Error::MissingPolarization => "MissingPolarization",
            Error::OddParityViolation(_) => "OddParityViolation",
            Error::PoleOrder(_) => "PoleOrder",
            Error::OrderTooLow { .. } => "OrderTooLow",
            Error::FieldViolation(_) => "FieldViolation",
            Error::Invalid(_) => "Invalid",
        }
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
