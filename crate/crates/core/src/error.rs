use thiserror::Error;

/// Errors raised by the combinatorial and matrix layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Cartan data: {0}")]
    InvalidCartanData(String),
    #[error("unsupported sigma data: {0}")]
    UnsupportedSigma(String),
    #[error("unknown group descriptor `{0}`")]
    UnknownGroup(String),
    #[error("Weyl group has more than {limit} elements")]
    WeylTooLarge { limit: usize },
    #[error("enumeration budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: String,
        needed: u128,
        budget: u128,
    },
    #[error("multiplication convention broken: {0}")]
    ConventionBroken(String),
    #[error("kappa group has torsion that cannot be represented: {0}")]
    TorsionUnsupported(String),
    #[error("no unique maximum among {0} classes")]
    NoUniqueMaximum(usize),
    #[error("no candidate found: {0}")]
    NotFound(String),
    #[error("candidate not unique: {0}")]
    NotUnique(String),
    #[error("iteration cap {cap} exceeded in {what}")]
    IterationCapExceeded { what: String, cap: usize },
    #[error("no sigma-conjugating witness in W: {0}")]
    NoWitness(String),
    #[error("insufficient precision: have {have}, need at least {required}")]
    InsufficientPrecision { have: i64, required: i64 },
    #[error("matrix is not in the requested Iwahori double coset: {0}")]
    NotInCoset(String),
    #[error("oracle inconclusive: {0}")]
    Inconclusive(String),
    #[error("invalid slope data: {0}")]
    InvalidSlopes(String),
    #[error("not a minimal truncation type: {0}")]
    NotMinimalType(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error at position {pos}: expected {expected}")]
    Parse { pos: usize, expected: String },
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

impl Error {
    /// Short name of the variant, used by the CLI when reporting failures.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidCartanData(_) => "InvalidCartanData",
            Error::UnsupportedSigma(_) => "UnsupportedSigma",
            Error::UnknownGroup(_) => "UnknownGroup",
            Error::WeylTooLarge { .. } => "WeylTooLarge",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::ConventionBroken(_) => "ConventionBroken",
            Error::TorsionUnsupported(_) => "TorsionUnsupported",
            Error::NoUniqueMaximum(_) => "NoUniqueMaximum",
            Error::NotFound(_) => "NotFound",
            Error::NotUnique(_) => "NotUnique",
            Error::IterationCapExceeded { .. } => "IterationCapExceeded",
            Error::NoWitness(_) => "NoWitness",
            Error::InsufficientPrecision { .. } => "InsufficientPrecision",
            Error::NotInCoset(_) => "NotInCoset",
            Error::Inconclusive(_) => "Inconclusive",
            Error::InvalidSlopes(_) => "InvalidSlopes",
            Error::NotMinimalType(_) => "NotMinimalType",
            Error::Precondition(_) => "Precondition",
            Error::Parse { .. } => "Parse",
            Error::InvalidField(_) => "InvalidField",
            Error::Dimension(_) => "Dimension",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
