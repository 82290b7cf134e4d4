//! Corpus ingestion: job ads from a paginated archive, syllabi (or dated
//! job-ad files) from a directory of text and PDF documents.

pub mod archive;
mod error;
pub mod report;
pub mod textdir;

pub use archive::{
    fetch_job_posts, load_fixture_archive, ArchiveQuery, ArchiveSource, FixtureArchive, HttpArchive, RetryPolicy,
    API_KEY_ENV, DEFAULT_PHRASES,
};
pub use error::{FetchError, IngestError};
pub use report::{Failure, IngestReport};
pub use textdir::{import_text_dir, import_text_dir_with, normalize_whitespace, Extractor, ExtractorSet};
