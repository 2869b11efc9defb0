use std::fmt;

/// Coarse classification of an [`Error`], used by callers that map failures to exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Domain,
    NonConvergence,
}

/// Which conjugate order an existence condition constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderSide {
    P,
    Q,
}

impl fmt::Display for OrderSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderSide::P => f.write_str("p"),
            OrderSide::Q => f.write_str("q"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested entropy order lies on the wrong side of an existence threshold.
    #[error("entropy sum undefined: {side} = {value} must exceed {threshold}")]
    Undefined { side: OrderSide, value: f64, threshold: f64 },
    #[error("no convergence: {0}")]
    NonConvergence(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Domain(_) | Error::Undefined { .. } => ErrorKind::Domain,
            Error::NonConvergence(_) => ErrorKind::NonConvergence,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn nonconv(msg: impl Into<String>) -> Self {
        Error::NonConvergence(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
