use thiserror::Error;

/// Errors produced by the library.
///
/// [`Error::Unsupported`] marks requests that the theory does not cover
/// (rank-one reductions, `n <= m` tensor extensions); everything else is an
/// input or usage error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero in K")]
    DivisionByZero,

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("coefficient {value} out of range for F_{p}")]
    CoefficientOutOfRange { value: u64, p: u64 },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not a Drinfeld module: {0}")]
    NotDrinfeld(String),

    #[error("not a t-module presentation: {0}")]
    NotTModule(String),

    #[error("modules do not match: {0}")]
    ModuleMismatch(String),

    #[error("not a morphism: {0}")]
    NotMorphism(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("class has nonzero image in Ext^1(Lie(E),Lie(F))")]
    LieObstruction,

    #[error("splitting search undetermined: {0}")]
    Undetermined(String),

    #[error("normalization failed: {0}")]
    Normalization(String),

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax { pos, msg: msg.into() }
    }

    /// True for requests outside the reach of the theory (as opposed to
    /// malformed input).
    pub fn is_unsupported(&self) -> bool {
        matches!(self, Error::Unsupported(_) | Error::Normalization(_))
    }
}
