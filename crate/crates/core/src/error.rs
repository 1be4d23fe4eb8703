use thiserror::Error;

/// Library-wide error type.
///
/// The CLI maps variants onto exit codes: `Domain`/`Parse` -> 2,
/// `Numeric` -> 3, `Resource` -> 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("resource cap exceeded: {what} (cap {cap})")]
    Resource { what: String, cap: u64 },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub fn resource(what: impl Into<String>, cap: u64) -> Self {
        Error::Resource { what: what.into(), cap }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
