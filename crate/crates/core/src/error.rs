use thiserror::Error;

/// Failure categories shared by every module. The CLI maps each category to
/// its own exit code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,

    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,

    #[error("polynomial is constant; {0}")]
    ConstantPolynomial(&'static str),

    #[error("depth mismatch: {left} vs {right}")]
    DepthMismatch { left: usize, right: usize },

    #[error("iterate of the map is reducible at level {level}")]
    ReducibleIterate { level: usize },

    #[error("orbit is preperiodic: term {from} repeats at term {to} (cycle length {})", to - from)]
    Preperiodic { from: usize, to: usize },

    #[error("prime {p} is a prime of bad reduction")]
    BadReduction { p: u64 },

    #[error("singular curve (discriminant zero)")]
    SingularCurve,

    #[error("point is not on the curve")]
    NotOnCurve,

    #[error("point is not in the span of the supplied basis and torsion")]
    NotInSpan,

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("integrity failure: {0}")]
    Integrity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }

    pub fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }

    /// Coarse category used for process exit codes.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Budget(_) => ErrorKind::Budget,
            Error::Integrity(_) => ErrorKind::Integrity,
            _ => ErrorKind::Precondition,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Precondition,
    Budget,
    Integrity,
}
