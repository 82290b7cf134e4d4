//! Imports a flat directory of `.txt` and `.pdf` files as a corpus.
//!
//! Files are visited in lexicographic name order. Each document's id is the
//! lowercase hex SHA-256 of the file bytes, so byte-identical files collapse
//! to one document. Job-post files must carry their publication date as a
//! `YYYY-MM-DD` file-name prefix.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;

use jobgap::{Corpus, Document, DocumentKind};
use sha2::{Digest, Sha256};

use crate::archive::parse_date_prefix;
use crate::error::IngestError;
use crate::report::IngestReport;

/// Turns file bytes into plain text.
pub trait Extractor {
    fn extract(&self, bytes: &[u8]) -> Result<String, String>;
}

struct PlainText;

impl Extractor for PlainText {
    fn extract(&self, bytes: &[u8]) -> Result<String, String> {
        let text = std::str::from_utf8(bytes).map_err(|e| format!("not UTF-8: {e}"))?;
        Ok(text.trim_start_matches('\u{feff}').to_owned())
    }
}

struct Pdf;

impl Extractor for Pdf {
    fn extract(&self, bytes: &[u8]) -> Result<String, String> {
        // the PDF parser panics on some malformed inputs
        match panic::catch_unwind(AssertUnwindSafe(|| pdf_extract::extract_text_from_mem(bytes))) {
            Ok(Ok(text)) => Ok(text),
            Ok(Err(e)) => Err(format!("PDF extraction failed: {e}")),
            Err(_) => Err("PDF extraction failed: parser panicked".into()),
        }
    }
}

/// Extractors keyed by lowercase file extension.
pub struct ExtractorSet {
    by_extension: BTreeMap<String, Box<dyn Extractor>>,
}

impl Default for ExtractorSet {
    fn default() -> Self {
        ExtractorSet::empty().with("txt", PlainText).with("pdf", Pdf)
    }
}

impl ExtractorSet {
    pub fn empty() -> Self {
        ExtractorSet { by_extension: BTreeMap::new() }
    }

    pub fn with(mut self, extension: &str, extractor: impl Extractor + 'static) -> Self {
        self.by_extension.insert(extension.to_ascii_lowercase(), Box::new(extractor));
        self
    }

    pub fn get(&self, path: &Path) -> Option<&dyn Extractor> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        self.by_extension.get(&ext).map(|b| b.as_ref())
    }
}

pub fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn import_text_dir(dir: impl AsRef<Path>, kind: DocumentKind, sink: &mut Corpus) -> Result<IngestReport, IngestError> {
    import_text_dir_with(dir, kind, sink, &ExtractorSet::default())
}

pub fn import_text_dir_with(
    dir: impl AsRef<Path>,
    kind: DocumentKind,
    sink: &mut Corpus,
    extractors: &ExtractorSet,
) -> Result<IngestReport, IngestError> {
    let dir = dir.as_ref();
    if sink.kind() != kind {
        return Err(IngestError::Corpus(jobgap::Error::InvalidDocument(format!(
            "cannot import {kind} files into a {} corpus",
            sink.kind()
        ))));
    }
    let io = |e| IngestError::Io(dir.to_path_buf(), e);
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        let hidden = path.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with('.'));
        if path.is_file() && !hidden && extractors.get(&path).is_some() {
            paths.push(path);
        }
    }
    paths.sort();

    let mut seen: HashSet<String> = sink.iter().map(|d| d.id.clone()).collect();
    let mut report = IngestReport::default();
    for path in &paths {
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let bytes = match fs::read(path) {
            Ok(b) => b,
            Err(e) => {
                report.fail(name, e.to_string());
                continue;
            }
        };
        let extractor = extractors.get(path).expect("filtered above");
        let text = match extractor.extract(&bytes) {
            Ok(t) => normalize_whitespace(&t),
            Err(e) => {
                report.fail(name, e);
                continue;
            }
        };
        if text.is_empty() {
            report.fail(name, "no extractable text");
            continue;
        }
        let id = hex::encode(Sha256::digest(&bytes));
        let doc = match kind {
            DocumentKind::Syllabus => Document::syllabus(id, text),
            DocumentKind::JobPost => match parse_date_prefix(&name) {
                Some(date) => Document::job_post(id, text, date),
                None => {
                    report.fail(name, "job-post file names must start with a YYYY-MM-DD date");
                    continue;
                }
            },
        };
        report.fetched += 1;
        if seen.insert(doc.id.clone()) {
            sink.push(doc.with_source(name))?;
            report.kept_after_dedup += 1;
        }
    }
    Ok(report)
}
