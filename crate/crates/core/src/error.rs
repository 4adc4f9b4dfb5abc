use thiserror::Error;

/// Why a cancellation input was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    NotAnIsometry,
    FirstEntriesDiffer,
    Degenerate,
    DimensionTooSmall,
    ValuesDiffer,
    ZeroValue,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Violation::NotAnIsometry => "matrix is not an isometry between the forms",
            Violation::FirstEntriesDiffer => "first diagonal entries differ",
            Violation::Degenerate => "form is degenerate",
            Violation::DimensionTooSmall => "dimension must be at least 2",
            Violation::ValuesDiffer => "q(x) and q(y) differ",
            Violation::ZeroValue => "q(x) is zero",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("field {0} has infinitely many square classes")]
    InfiniteSquareClassGroup(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("form is degenerate")]
    DegenerateForm,
    #[error("precondition violated: {0}")]
    PreconditionViolated(Violation),
    #[error("reflection vector is isotropic")]
    IsotropicReflectionVector,
    #[error("form is anisotropic")]
    NotIsotropic,
    #[error("vector is not isotropic")]
    NotIsotropicVector,
    #[error("isotropic vector search is not available over {0}")]
    UnsupportedFieldForVectorSearch(String),
    #[error("isotropic vector search exceeded height bound {bound}")]
    SearchBudgetExceeded { bound: u64, trace: Vec<String> },
    #[error("Witt ring over {0} is infinite")]
    InfiniteRing(String),
    #[error("class does not lie in I^{0}")]
    NotInIdealPower(usize),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
}

impl Error {
    /// Stable identifier used by the command-line front end.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::ZeroScalar => "ZeroScalar",
            Error::InfiniteSquareClassGroup(_) => "InfiniteSquareClassGroup",
            Error::InvalidField(_) => "InvalidField",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::FieldMismatch => "FieldMismatch",
            Error::NotSymmetric => "NotSymmetric",
            Error::DegenerateForm => "DegenerateForm",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::IsotropicReflectionVector => "IsotropicReflectionVector",
            Error::NotIsotropic => "NotIsotropic",
            Error::NotIsotropicVector => "NotIsotropicVector",
            Error::UnsupportedFieldForVectorSearch(_) => "UnsupportedFieldForVectorSearch",
            Error::SearchBudgetExceeded { .. } => "SearchBudgetExceeded",
            Error::InfiniteRing(_) => "InfiniteRing",
            Error::NotInIdealPower(_) => "NotInIdealPower",
            Error::UnsupportedField(_) => "UnsupportedField",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
