use thiserror::Error;

/// Errors raised by state construction, sector computation and the verifiers.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested computation exceeds the enumeration guard.
    #[error("size error: {what} needs {required} entries, limit is {limit}")]
    Size {
        what: &'static str,
        required: f64,
        limit: f64,
    },

    /// A numerical result violated an invariant that must hold for any input.
    #[error("consistency error: {0}")]
    Consistency(String),

    /// Malformed user input (state specifications, files).
    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
