//! Paginated job-ad archive client.
//!
//! Wire format: `GET <base_url>?q=<phrase>&published-after=<date>&published-before=<date>&limit=<n>&offset=<n>`
//! answered by a JSON array of records carrying `id`, `headline`,
//! `description` and `publication_date`.

use std::collections::HashSet;
use std::fs;
use std::path::Path;
use std::thread;
use std::time::Duration;

use chrono::NaiveDate;
use jobgap::{Corpus, Document, DocumentKind};
use serde_json::Value;

use crate::error::{FetchError, IngestError};
use crate::report::IngestReport;

pub const API_KEY_ENV: &str = "JOBGAP_API_KEY";

/// The search phrases used against the Swedish archive, in English and Swedish.
pub const DEFAULT_PHRASES: [&str; 5] =
    ["software engineer", "software developer", "systemutvecklare", "mjukvaruutvecklare", "programmerare"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchiveQuery {
    pub phrase: String,
    pub date_from: NaiveDate,
    pub date_to: NaiveDate,
    pub page_size: usize,
    pub base_url: String,
}

impl ArchiveQuery {
    pub fn new(
        phrase: impl Into<String>,
        date_from: NaiveDate,
        date_to: NaiveDate,
        page_size: usize,
        base_url: impl Into<String>,
    ) -> Result<Self, IngestError> {
        if date_from > date_to {
            return Err(IngestError::InvalidQuery(format!("date_from {date_from} is after date_to {date_to}")));
        }
        if page_size == 0 {
            return Err(IngestError::InvalidQuery("page_size must be at least 1".into()));
        }
        Ok(ArchiveQuery { phrase: phrase.into(), date_from, date_to, page_size, base_url: base_url.into() })
    }

    pub fn with_phrase(&self, phrase: impl Into<String>) -> Self {
        ArchiveQuery { phrase: phrase.into(), ..self.clone() }
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.date_from <= date && date <= self.date_to
    }
}

/// Something that serves one page of raw ad records.
pub trait ArchiveSource {
    fn fetch_page(&self, query: &ArchiveQuery, offset: usize) -> Result<Vec<Value>, FetchError>;

    /// Label stored as each document's `source`.
    fn label(&self) -> String;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub attempts: u32,
    pub initial_backoff: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy { attempts: 3, initial_backoff: Duration::from_millis(500) }
    }
}

impl RetryPolicy {
    /// Same attempt count, no sleeping.
    pub fn immediate() -> Self {
        RetryPolicy { initial_backoff: Duration::ZERO, ..Default::default() }
    }
}

fn fetch_with_retry(
    source: &dyn ArchiveSource,
    query: &ArchiveQuery,
    offset: usize,
    retry: &RetryPolicy,
) -> Result<Vec<Value>, FetchError> {
    let mut delay = retry.initial_backoff;
    let mut attempt = 1;
    loop {
        match source.fetch_page(query, offset) {
            Ok(records) => return Ok(records),
            Err(e) if attempt >= retry.attempts.max(1) => return Err(e),
            Err(e) => {
                log::warn!("offset {offset} attempt {attempt} failed: {e}; retrying in {delay:?}");
                if !delay.is_zero() {
                    thread::sleep(delay);
                }
                delay *= 2;
                attempt += 1;
            }
        }
    }
}

/// Consecutive failed pages after which pagination for a phrase gives up.
const MAX_CONSECUTIVE_PAGE_FAILURES: usize = 3;

/// Pages through every ad matching `query` and appends the ones not yet in
/// `sink`. Failed pages and malformed records are recorded in the report
/// instead of aborting.
pub fn fetch_job_posts(
    source: &dyn ArchiveSource,
    query: &ArchiveQuery,
    sink: &mut Corpus,
    retry: &RetryPolicy,
) -> Result<IngestReport, IngestError> {
    if sink.kind() != DocumentKind::JobPost {
        return Err(IngestError::WrongSinkKind(sink.kind()));
    }
    let label = source.label();
    let mut seen: HashSet<String> = sink.iter().map(|d| d.id.clone()).collect();
    let mut report = IngestReport::default();
    let mut offset = 0;
    let mut consecutive_failures = 0;
    loop {
        let page = offset / query.page_size + 1;
        let records = match fetch_with_retry(source, query, offset, retry) {
            Ok(records) => records,
            Err(e) => {
                report.fail(format!("page {page}"), e.to_string());
                consecutive_failures += 1;
                if consecutive_failures >= MAX_CONSECUTIVE_PAGE_FAILURES {
                    break;
                }
                offset += query.page_size;
                continue;
            }
        };
        consecutive_failures = 0;
        let returned = records.len();
        if returned > 0 {
            report.pages += 1;
        }
        for (i, record) in records.iter().enumerate() {
            let doc = match parse_ad(record, query, &label) {
                Ok(doc) => doc,
                Err(reason) => {
                    report.fail(format!("page {page}, record {}", i + 1), reason);
                    continue;
                }
            };
            let date = doc.published_at.expect("parsed ads are dated");
            if !query.contains(date) {
                log::debug!("ad {} dated {date} is outside the query range", doc.id);
                continue;
            }
            report.fetched += 1;
            if seen.insert(doc.id.clone()) {
                sink.push(doc).map_err(IngestError::Corpus)?;
                report.kept_after_dedup += 1;
            }
        }
        if returned < query.page_size {
            break;
        }
        offset += query.page_size;
    }
    Ok(report)
}

fn text_field(record: &Value, key: &str) -> Option<String> {
    match record.get(key)? {
        Value::String(s) => Some(s.clone()),
        // some archive generations nest the body as {"text": ...}
        Value::Object(o) => o.get("text").and_then(Value::as_str).map(str::to_owned),
        Value::Null => None,
        _ => None,
    }
}

/// Leading `YYYY-MM-DD` of a date or timestamp string.
pub fn parse_date_prefix(s: &str) -> Option<NaiveDate> {
    s.get(..10)?.parse().ok()
}

/// Turns one raw record into a job-post document. The text is the headline
/// and the description joined by a newline.
pub fn parse_ad(record: &Value, query: &ArchiveQuery, source: &str) -> Result<Document, String> {
    let id = match record.get("id") {
        Some(Value::String(s)) if !s.is_empty() => s.clone(),
        Some(Value::Number(n)) => n.to_string(),
        _ => return Err("missing or empty `id`".into()),
    };
    let date = record
        .get("publication_date")
        .and_then(Value::as_str)
        .and_then(parse_date_prefix)
        .ok_or_else(|| format!("ad {id}: missing or invalid `publication_date`"))?;
    let headline = text_field(record, "headline").unwrap_or_default();
    let description = text_field(record, "description").unwrap_or_default();
    let text = match (headline.trim().is_empty(), description.trim().is_empty()) {
        (true, true) => return Err(format!("ad {id}: no headline or description")),
        (false, true) => headline,
        (true, false) => description,
        (false, false) => format!("{headline}\n{description}"),
    };
    Ok(Document::job_post(id, text, date)
        .with_source(source)
        .with_search_phrase(query.phrase.clone()))
}

/// Live HTTP archive.
pub struct HttpArchive {
    agent: ureq::Agent,
    api_key: Option<String>,
}

impl HttpArchive {
    pub fn new(api_key: Option<String>) -> Self {
        let agent = ureq::AgentBuilder::new().timeout(Duration::from_secs(60)).build();
        HttpArchive { agent, api_key }
    }

    /// Reads the bearer token from `JOBGAP_API_KEY` when set.
    pub fn from_env() -> Self {
        Self::new(std::env::var(API_KEY_ENV).ok().filter(|k| !k.is_empty()))
    }
}

impl ArchiveSource for HttpArchive {
    fn fetch_page(&self, query: &ArchiveQuery, offset: usize) -> Result<Vec<Value>, FetchError> {
        let mut req = self
            .agent
            .get(&query.base_url)
            .query("q", &query.phrase)
            .query("published-after", &query.date_from.to_string())
            .query("published-before", &query.date_to.to_string())
            .query("limit", &query.page_size.to_string())
            .query("offset", &offset.to_string())
            .set("Accept", "application/json");
        if let Some(key) = &self.api_key {
            req = req.set("Authorization", &format!("Bearer {key}"));
        }
        let body = match req.call() {
            Ok(resp) => resp.into_string().map_err(|e| FetchError::Transport(e.to_string()))?,
            Err(ureq::Error::Status(code, _)) => return Err(FetchError::Status(code)),
            Err(e) => return Err(FetchError::Transport(e.to_string())),
        };
        decode_page(&body)
    }

    fn label(&self) -> String {
        "archive".into()
    }
}

pub fn decode_page(body: &str) -> Result<Vec<Value>, FetchError> {
    match serde_json::from_str::<Value>(body) {
        Ok(Value::Array(records)) => Ok(records),
        Ok(_) => Err(FetchError::Body("response is not a record list".into())),
        Err(e) => Err(FetchError::Body(e.to_string())),
    }
}

/// An in-process archive backed by a JSONL file of raw records, with the
/// same filtering and pagination as the live endpoint.
#[derive(Debug, Clone, Default)]
pub struct FixtureArchive {
    records: Vec<Value>,
    label: String,
}

pub fn load_fixture_archive(path: impl AsRef<Path>) -> Result<FixtureArchive, IngestError> {
    let path = path.as_ref();
    let input = fs::read_to_string(path).map_err(|e| IngestError::Io(path.to_path_buf(), e))?;
    let mut archive = FixtureArchive::from_jsonl(&input)?;
    // the file name, not the full path, so saved corpora do not depend on the checkout location
    archive.label = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
    Ok(archive)
}

impl FixtureArchive {
    pub fn new(records: Vec<Value>) -> Self {
        FixtureArchive { records, label: "fixture".into() }
    }

    pub fn from_jsonl(input: &str) -> Result<Self, IngestError> {
        let mut records = Vec::new();
        for (i, line) in input.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let value: Value = serde_json::from_str(line)
                .map_err(|e| IngestError::Fixture(format!("line {}: {e}", i + 1)))?;
            if !value.is_object() {
                return Err(IngestError::Fixture(format!("line {}: record is not an object", i + 1)));
            }
            records.push(value);
        }
        Ok(FixtureArchive::new(records))
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    fn matches(record: &Value, query: &ArchiveQuery) -> bool {
        let phrase = query.phrase.to_lowercase();
        let hit = ["headline", "description"]
            .iter()
            .filter_map(|k| text_field(record, k))
            .any(|t| t.to_lowercase().contains(&phrase));
        // undated records pass the date filter so the client sees them
        let in_range = record
            .get("publication_date")
            .and_then(Value::as_str)
            .and_then(parse_date_prefix)
            .is_none_or(|d| query.contains(d));
        hit && in_range
    }

    /// All records the query selects, in file order.
    pub fn select(&self, query: &ArchiveQuery) -> Vec<&Value> {
        self.records.iter().filter(|r| Self::matches(r, query)).collect()
    }

    /// Number of non-empty pages the query spans.
    pub fn page_count(&self, query: &ArchiveQuery) -> usize {
        self.select(query).len().div_ceil(query.page_size)
    }

    pub fn page(&self, query: &ArchiveQuery, offset: usize, limit: usize) -> Vec<Value> {
        self.select(query).into_iter().skip(offset).take(limit).cloned().collect()
    }
}

impl ArchiveSource for FixtureArchive {
    fn fetch_page(&self, query: &ArchiveQuery, offset: usize) -> Result<Vec<Value>, FetchError> {
        Ok(self.page(query, offset, query.page_size))
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}
