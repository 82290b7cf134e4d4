//! Error classification into process exit codes.

use std::fmt;
use std::io;

use jobgap_ingest::IngestError;

/// A failed command: either the invocation is wrong (exit 1) or the data is (exit 2).
#[derive(Debug)]
pub enum CmdError {
    Usage(anyhow::Error),
    Data(anyhow::Error),
}

pub type CmdResult<T> = Result<T, CmdError>;

impl CmdError {
    pub fn code(&self) -> u8 {
        match self {
            CmdError::Usage(_) => 1,
            CmdError::Data(_) => 2,
        }
    }
}

impl fmt::Display for CmdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (CmdError::Usage(e) | CmdError::Data(e)) = self;
        // io-backed errors already quote their source; don't print it twice
        let mut msg = String::new();
        for cause in e.chain() {
            let s = cause.to_string();
            if msg.contains(&s) {
                continue;
            }
            if !msg.is_empty() {
                msg.push_str(": ");
            }
            msg.push_str(&s);
        }
        f.write_str(&msg)
    }
}

pub fn usage(msg: impl fmt::Display) -> CmdError {
    CmdError::Usage(anyhow::anyhow!("{msg}"))
}

pub fn data(msg: impl fmt::Display) -> CmdError {
    CmdError::Data(anyhow::anyhow!("{msg}"))
}

fn missing(e: &io::Error) -> bool {
    e.kind() == io::ErrorKind::NotFound
}

/// A missing input file is a usage problem; anything wrong with its
/// contents is a data problem.
impl From<jobgap::Error> for CmdError {
    fn from(e: jobgap::Error) -> Self {
        match &e {
            jobgap::Error::Io { source, .. } if missing(source) => CmdError::Usage(e.into()),
            _ => CmdError::Data(e.into()),
        }
    }
}

impl From<IngestError> for CmdError {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::Io(_, ref source) if missing(source) => CmdError::Usage(e.into()),
            IngestError::InvalidQuery(_) => CmdError::Usage(e.into()),
            IngestError::Corpus(inner) => inner.into(),
            _ => CmdError::Data(e.into()),
        }
    }
}

/// Adds context to a result while keeping its classification.
pub trait Context<T> {
    fn context(self, what: impl fmt::Display) -> CmdResult<T>;
}

impl<T, E: Into<CmdError>> Context<T> for Result<T, E> {
    fn context(self, what: impl fmt::Display) -> CmdResult<T> {
        self.map_err(|e| match e.into() {
            CmdError::Usage(err) => CmdError::Usage(err.context(what.to_string())),
            CmdError::Data(err) => CmdError::Data(err.context(what.to_string())),
        })
    }
}
