use thiserror::Error;

/// Errors raised across the library. Variants carry enough context to be
/// printed directly by the command-line front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid modulus {0}: must be at least 2")]
    InvalidModulus(String),
    #[error("invalid conductor {0}: {1}")]
    InvalidConductor(String, String),
    #[error("{0} is not coprime to {1}")]
    NotCoprime(String, String),
    #[error("polynomial {0} is reducible over the rationals")]
    NotAField(String),
    #[error(
        "polynomial {0} does not define a cyclic cubic field (discriminant {1} is not a square)"
    )]
    NotCyclic(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not integral: {0}")]
    NotIntegral(String),
    #[error("element is not a unit modulo the ideal")]
    NotAUnit,
    #[error("unsupported modulus: {0}")]
    UnsupportedModulus(String),
    #[error("unit search exhausted at log-radius {0:.1} before reaching rank 2")]
    InsufficientEffort(f64),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        source: Box<Error>,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }
}

/// Tag errors from a pipeline stage with the stage name.
pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| match e {
            e @ Error::Stage { .. } => e,
            e => Error::Stage {
                stage,
                source: Box::new(e),
            },
        })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
