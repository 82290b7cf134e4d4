//! Unified document model shared by job posts and syllabi, with JSONL persistence.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocumentKind {
    JobPost,
    Syllabus,
}

impl DocumentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DocumentKind::JobPost => "job_post",
            DocumentKind::Syllabus => "syllabus",
        }
    }
}

impl fmt::Display for DocumentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for DocumentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "job_post" | "job" | "jobs" => Ok(DocumentKind::JobPost),
            "syllabus" | "syllabi" => Ok(DocumentKind::Syllabus),
            other => Err(Error::InvalidDocument(format!("unknown document kind `{other}`"))),
        }
    }
}

/// One job post or one program syllabus.
///
/// Field order is the on-disk record order; do not reorder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub kind: DocumentKind,
    pub text: String,
    pub published_at: Option<NaiveDate>,
    pub source: String,
    pub search_phrase: Option<String>,
}

impl Document {
    pub fn job_post(id: impl Into<String>, text: impl Into<String>, published_at: NaiveDate) -> Self {
        Document {
            id: id.into(),
            kind: DocumentKind::JobPost,
            text: text.into(),
            published_at: Some(published_at),
            source: String::new(),
            search_phrase: None,
        }
    }

    pub fn syllabus(id: impl Into<String>, text: impl Into<String>) -> Self {
        Document {
            id: id.into(),
            kind: DocumentKind::Syllabus,
            text: text.into(),
            published_at: None,
            source: String::new(),
            search_phrase: None,
        }
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }

    pub fn with_search_phrase(mut self, phrase: impl Into<String>) -> Self {
        self.search_phrase = Some(phrase.into());
        self
    }

    /// Checks the per-document invariants (non-empty id and text, dated job posts).
    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::InvalidDocument("document id is empty".into()));
        }
        if self.text.trim().is_empty() {
            return Err(Error::InvalidDocument(format!("document `{}` has empty text", self.id)));
        }
        if self.kind == DocumentKind::JobPost && self.published_at.is_none() {
            return Err(Error::InvalidDocument(format!(
                "job post `{}` has no published_at date",
                self.id
            )));
        }
        Ok(())
    }
}

/// An ordered collection of documents of a single kind.
///
/// `push` enforces the kind and per-document invariants but not id
/// uniqueness, so that raw ingestion output can be collected first and
/// passed through [`Corpus::deduplicate`]. [`load_corpus`] rejects
/// duplicate ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    kind: DocumentKind,
    documents: Vec<Document>,
}

impl Corpus {
    pub fn new(kind: DocumentKind) -> Self {
        Corpus { kind, documents: Vec::new() }
    }

    pub fn from_documents(kind: DocumentKind, documents: Vec<Document>) -> Result<Self> {
        let mut corpus = Corpus::new(kind);
        for doc in documents {
            corpus.push(doc)?;
        }
        Ok(corpus)
    }

    pub fn kind(&self) -> DocumentKind {
        self.kind
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Document> {
        self.documents.iter()
    }

    pub fn contains_id(&self, id: &str) -> bool {
        self.documents.iter().any(|d| d.id == id)
    }

    pub fn push(&mut self, doc: Document) -> Result<()> {
        if doc.kind != self.kind {
            return Err(Error::KindMismatch { expected: self.kind, found: doc.kind, id: doc.id });
        }
        doc.validate()?;
        self.documents.push(doc);
        Ok(())
    }

    /// Keeps the first occurrence of each id, preserving order.
    pub fn deduplicate(&self) -> Corpus {
        let mut seen = HashSet::with_capacity(self.documents.len());
        let documents = self
            .documents
            .iter()
            .filter(|d| seen.insert(d.id.as_str()))
            .cloned()
            .collect();
        Corpus { kind: self.kind, documents }
    }

    pub fn sort_by_id(&mut self) {
        self.documents.sort_by(|a, b| a.id.cmp(&b.id));
    }

    /// Returns the first id that occurs more than once, if any.
    pub fn first_duplicate_id(&self) -> Option<&str> {
        let mut seen = HashSet::with_capacity(self.documents.len());
        self.documents.iter().map(|d| d.id.as_str()).find(|id| !seen.insert(*id))
    }
}

impl<'a> IntoIterator for &'a Corpus {
    type Item = &'a Document;
    type IntoIter = std::slice::Iter<'a, Document>;

    fn into_iter(self) -> Self::IntoIter {
        self.documents.iter()
    }
}

pub fn deduplicate(corpus: &Corpus) -> Corpus {
    corpus.deduplicate()
}

/// Writes one JSON record per line.
pub fn save_corpus(corpus: &Corpus, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_corpus(corpus, &mut out).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })?;
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn write_corpus<W: Write>(corpus: &Corpus, out: &mut W) -> Result<()> {
    for doc in corpus {
        serde_json::to_writer(&mut *out, doc)?;
        out.write_all(b"\n").map_err(|e| Error::io("<writer>", e))?;
    }
    Ok(())
}

/// Loads a corpus, inferring its kind from the first record. An empty file
/// yields an empty job-post corpus; use [`load_corpus_as`] when the kind is
/// known up front.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus> {
    load(path.as_ref(), None)
}

pub fn load_corpus_as(path: impl AsRef<Path>, kind: DocumentKind) -> Result<Corpus> {
    load(path.as_ref(), Some(kind))
}

fn load(path: &Path, kind: Option<DocumentKind>) -> Result<Corpus> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_corpus(BufReader::new(file), kind).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn read_corpus<R: BufRead>(reader: R, kind: Option<DocumentKind>) -> Result<Corpus> {
    let mut corpus: Option<Corpus> = kind.map(Corpus::new);
    let mut seen: HashSet<String> = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io("<reader>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document = serde_json::from_str(&line)
            .map_err(|e| Error::MalformedLine { line: line_no, message: e.to_string() })?;
        if !seen.insert(doc.id.clone()) {
            return Err(Error::DuplicateId(doc.id));
        }
        let corpus = corpus.get_or_insert_with(|| Corpus::new(doc.kind));
        corpus.push(doc).map_err(|e| Error::MalformedLine { line: line_no, message: e.to_string() })?;
    }
    Ok(corpus.unwrap_or_else(|| Corpus::new(DocumentKind::JobPost)))
}
