use thiserror::Error;

/// Errors raised anywhere in the analysis pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("not quasi-linear: the highest derivative y^({0}) does not appear linearly")]
    NotQuasiLinear(usize),

    #[error("order too low for certification: n = {0}, need n >= 2")]
    OrderTooLow(usize),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid transformation: {0}")]
    InvalidTransformation(String),

    #[error("instance outside the rational quasi-linear class, discarded: {0}")]
    OutsideClass(String),

    #[error("singular expansion point ({0}, {1})")]
    SingularPoint(String, String),

    #[error("invalid option: {0}")]
    InvalidOption(String),

    #[error("infinite-dimensional symmetry algebra")]
    InfiniteDimensional,

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("internal invariant breach: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures caused by the caller's input rather than by the engine.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::NotQuasiLinear(_)
                | Error::OrderTooLow(_)
                | Error::Degenerate(_)
                | Error::InvalidTransformation(_)
                | Error::OutsideClass(_)
                | Error::DivisionByZero
                | Error::SingularPoint(..)
                | Error::InvalidOption(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
