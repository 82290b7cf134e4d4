use std::fmt;

use serde::Serialize;

/// Something that was skipped during ingestion and why.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// Page, record or file the failure refers to.
    pub at: String,
    pub reason: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.at, self.reason)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    /// Well-formed documents received, duplicates included.
    pub fetched: usize,
    /// Documents actually added to the corpus.
    pub kept_after_dedup: usize,
    /// Non-empty archive pages read; zero for directory imports.
    pub pages: usize,
    pub failures: Vec<Failure>,
}

impl IngestReport {
    pub(crate) fn fail(&mut self, at: impl Into<String>, reason: impl Into<String>) {
        let failure = Failure { at: at.into(), reason: reason.into() };
        log::warn!("{failure}");
        self.failures.push(failure);
    }

    pub fn duplicates(&self) -> usize {
        self.fetched - self.kept_after_dedup
    }

    pub fn merge(&mut self, other: IngestReport) {
        self.fetched += other.fetched;
        self.kept_after_dedup += other.kept_after_dedup;
        self.pages += other.pages;
        self.failures.extend(other.failures);
    }
}

impl fmt::Display for IngestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fetched, {} kept, {} duplicates, {} pages, {} failures",
            self.fetched,
            self.kept_after_dedup,
            self.duplicates(),
            self.pages,
            self.failures.len()
        )
    }
}
