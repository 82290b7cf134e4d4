use std::path::PathBuf;

use jobgap::DocumentKind;

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("{0}: {1}")]
    Io(PathBuf, #[source] std::io::Error),
    #[error("malformed archive fixture: {0}")]
    Fixture(String),
    #[error("cannot add job posts to a {0} corpus")]
    WrongSinkKind(DocumentKind),
    #[error(transparent)]
    Corpus(#[from] jobgap::Error),
}

/// Why a single archive page could not be fetched.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FetchError {
    #[error("transport error: {0}")]
    Transport(String),
    #[error("HTTP status {0}")]
    Status(u16),
    #[error("unreadable response body: {0}")]
    Body(String),
}
