use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Parameters are valid but make the requested quantity meaningless.
    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    /// A query falls outside the range covered by a jump table.
    #[error("argument {arg} outside table range [0, {max}]")]
    OutOfRange { arg: f64, max: u64 },

    /// The request would exceed a configured memory or work budget.
    #[error("resource limit: {0}")]
    Resource(String),

    /// A numerical routine failed to meet its tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("cache format error: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Short machine-readable tag used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Degenerate(_) => "degenerate",
            Error::OutOfRange { .. } => "out_of_range",
            Error::Resource(_) => "resource",
            Error::Numerical(_) => "numerical",
            Error::Format(_) => "format",
            Error::Io(_) => "io",
        }
    }
}
