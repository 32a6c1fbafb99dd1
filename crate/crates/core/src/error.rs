use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{p} is not a prime below 2^31")]
    NotPrime { p: u64 },
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("associativity fails at basis triple ({i}, {j}, {k})")]
    AssociativityFailure { i: usize, j: usize, k: usize },
    #[error("unit law fails at basis element {i}")]
    UnitFailure { i: usize },
    #[error("invariant violated: {0}")]
    InvalidStructure(String),
    #[error("path basis does not stabilize below length {bound}")]
    InfiniteDimensional { bound: usize },
    #[error("trace-form radical criterion is not valid in characteristic {p} for dimension {dim}")]
    UnsupportedCharacteristic { p: u32, dim: usize },
    #[error("semisimple quotient is not split over the base field")]
    NonSplitSemisimple,
    #[error("objects live over different algebras")]
    AlgebraMismatch,
    #[error("degree {degree} is outside the certified window of cutoff {cutoff}")]
    WindowTooSmall { degree: i64, cutoff: usize },
    #[error("bimodule complex has a nonzero term in non-negative degree {degree}; the shift must be negative")]
    SupPositive { degree: i32 },
    #[error("DG-ring has no canonical section: {0}")]
    NoCanonicalSection(String),
    #[error("minimal projective resolution does not terminate within cutoff {cutoff}")]
    NotFiniteProjDim { cutoff: usize },
    #[error("cutoff too small: {0}")]
    CutoffTooSmall(String),
    #[error("DG-ring was not built as a trivial extension")]
    NotTrivialExtension,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Variant name, as used in machine-readable reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::NotPrime { .. } => "NotPrime",
            Error::FieldMismatch(_) => "FieldMismatch",
            Error::AssociativityFailure { .. } => "AssociativityFailure",
            Error::UnitFailure { .. } => "UnitFailure",
            Error::InvalidStructure(_) => "InvalidStructure",
            Error::InfiniteDimensional { .. } => "InfiniteDimensional",
            Error::UnsupportedCharacteristic { .. } => "UnsupportedCharacteristic",
            Error::NonSplitSemisimple => "NonSplitSemisimple",
            Error::AlgebraMismatch => "AlgebraMismatch",
            Error::WindowTooSmall { .. } => "WindowTooSmall",
            Error::SupPositive { .. } => "SupPositive",
            Error::NoCanonicalSection(_) => "NoCanonicalSection",
            Error::NotFiniteProjDim { .. } => "NotFiniteProjDim",
            Error::CutoffTooSmall(_) => "CutoffTooSmall",
            Error::NotTrivialExtension => "NotTrivialExtension",
            Error::Parse(_) => "Parse",
            Error::Inconclusive(_) => "Inconclusive",
            Error::Io(_) => "Io",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
