use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("invalid field description: {0}")]
    InvalidField(String),
    #[error("quadratic form is singular")]
    SingularForm,
    #[error("zero entry in diagonal form")]
    ZeroEntry,
    #[error("zero slot in Pfister form")]
    ZeroSlot,
    #[error("binary quadratic parameters give a singular form")]
    SingularParameters,
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("scaling factor must be nonzero")]
    ZeroScalar,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("isotropy oracle undecided during {stage} (hyperbolic planes split so far: {partial_index})")]
    OracleUndecided { stage: String, partial_index: usize },
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwoDim(usize),
    #[error("degenerate algebra parameters: {0}")]
    DegenerateParameters(String),
    #[error("algebra elements belong to different algebras")]
    OwnerMismatch,
    #[error("hermitian form is not even")]
    NotEven,
    #[error("hermitian form is degenerate")]
    Degenerate,
    #[error("hermitian form data is not λ-hermitian: {0}")]
    NotHermitian(String),
    #[error("forms are over different coefficient algebras or involutions")]
    SignatureMismatch,
    #[error("unsupported variant: {0}")]
    UnsupportedVariant(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("theorem hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("syntax error at {line}:{col}: expected {expected}")]
    Syntax { line: usize, col: usize, expected: String },
}

pub type Result<T> = std::result::Result<T, Error>;
