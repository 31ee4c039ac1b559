use thiserror::Error;

/// Failure of a theory operation.
///
/// Most variants describe an operation that is *undefined* on its arguments
/// (mismatched alphabets, control conflicts, a missing capability). The law
/// evaluator turns those into `inapplicable` verdicts; the remaining variants
/// are genuine errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("alphabet mismatch")]
    AlphabetMismatch,
    #[error("signature mismatch")]
    SignatureMismatch,
    #[error("control conflict")]
    ControlConflict,
    #[error("incompatible")]
    Incompatible,
    #[error("deterministic MTS required")]
    Nondeterministic,
    #[error("{0} is not supported by this theory")]
    Unsupported(&'static str),
    #[error("state blow-up: determinization exceeded {cap} states")]
    StateBlowUp { cap: usize },
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("invalid specification: {0}")]
    Invalid(String),
    #[error("enumeration bound exceeded")]
    EnumerationBound,
}

impl SpecError {
    /// True when the error means "the operation has no value here" rather
    /// than "something went wrong".
    pub fn is_undefined(&self) -> bool {
        matches!(
            self,
            SpecError::AlphabetMismatch
                | SpecError::SignatureMismatch
                | SpecError::ControlConflict
                | SpecError::Incompatible
                | SpecError::Nondeterministic
                | SpecError::Unsupported(_)
        )
    }
}

pub type Result<T, E = SpecError> = std::result::Result<T, E>;
