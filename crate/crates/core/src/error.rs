//! Error taxonomy shared by every module in the crate.

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes the library can report.
///
/// The variants are grouped by what the caller can do about them: `Parse`
/// and `Structure` point at broken input files, `Domain` at parameter values
/// outside their legal set, `Range` at windows or targets that fall outside
/// the observed series, and `InsufficientData` at windows too short to fit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A CSV cell could not be read. Carries the 1-based line number of the
    /// offending row in the input file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    /// The file parsed cell by cell but the series as a whole is malformed
    /// (missing periods, duplicate periods, no data rows).
    #[error("structural error: {0}")]
    Structure(String),

    /// A parameter lies outside its legal set (for example a negative
    /// window length or a confidence level of 1.2).
    #[error("domain error: {0}")]
    Domain(String),

    /// A window or target falls outside the span covered by the series.
    /// The message names the offending bound.
    #[error("range error: {0}")]
    Range(String),

    /// A window is too short for the requested fit.
    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// An inner error annotated with where it happened, e.g. which center
    /// and target period a backtest was working on. The category of the
    /// source error is preserved for exit-code mapping.
    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Wraps the error with a location note while keeping the inner
    /// category reachable.
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, unwrapping any context layers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }
}
