#![allow(dead_code)]

use std::cell::Cell;

use chrono::NaiveDate;
use jobgap_ingest::{ArchiveQuery, ArchiveSource, FetchError};
use serde_json::{json, Value};

pub fn day(s: &str) -> NaiveDate {
    s.parse().unwrap()
}

pub fn query(phrase: &str, page_size: usize) -> ArchiveQuery {
    ArchiveQuery::new(phrase, day("2016-01-01"), day("2021-12-31"), page_size, "http://127.0.0.1:9/unused").unwrap()
}

pub fn ad(id: &str, headline: &str, description: &str, date: &str) -> Value {
    json!({"id": id, "headline": headline, "description": description, "publication_date": format!("{date}T08:00:00")})
}

/// `n` ads for "developer", one per month from January 2017.
pub fn developer_ads(n: usize) -> Vec<Value> {
    (0..n)
        .map(|i| {
            let date = format!("{}-{:02}-15", 2017 + i / 12, i % 12 + 1);
            ad(&format!("dev-{i:03}"), "Backend developer", "Java, SQL and Docker", &date)
        })
        .collect()
}

/// Wraps a source and fails the first `failures` calls at `offset`.
pub struct Flaky<S> {
    pub inner: S,
    pub offset: usize,
    pub failures: usize,
    pub calls: Cell<usize>,
}

impl<S: ArchiveSource> ArchiveSource for Flaky<S> {
    fn fetch_page(&self, query: &ArchiveQuery, offset: usize) -> Result<Vec<Value>, FetchError> {
        if offset == self.offset {
            let n = self.calls.get();
            self.calls.set(n + 1);
            if n < self.failures {
                return Err(FetchError::Status(503));
            }
        }
        self.inner.fetch_page(query, offset)
    }

    fn label(&self) -> String {
        self.inner.label()
    }
}

/// A one-page PDF showing `lines` in Helvetica, with a correct xref table.
pub fn minimal_pdf(lines: &[&str]) -> Vec<u8> {
    let mut content = String::from("BT /F1 12 Tf 72 720 Td 14 TL\n");
    for line in lines {
        let escaped = line.replace('\\', "\\\\").replace('(', "\\(").replace(')', "\\)");
        content.push_str(&format!("({escaped}) Tj T*\n"));
    }
    content.push_str("ET");
    let objects = [
        "<< /Type /Catalog /Pages 2 0 R >>".to_owned(),
        "<< /Type /Pages /Kids [3 0 R] /Count 1 >>".to_owned(),
        "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Resources << /Font << /F1 5 0 R >> >> /Contents 4 0 R >>"
            .to_owned(),
        format!("<< /Length {} >>\nstream\n{content}\nendstream", content.len()),
        "<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica /Encoding /WinAnsiEncoding >>".to_owned(),
    ];
    let mut out = b"%PDF-1.4\n".to_vec();
    let mut offsets = Vec::new();
    for (i, body) in objects.iter().enumerate() {
        offsets.push(out.len());
        out.extend_from_slice(format!("{} 0 obj\n{body}\nendobj\n", i + 1).as_bytes());
    }
    let xref = out.len();
    out.extend_from_slice(format!("xref\n0 {}\n0000000000 65535 f \n", objects.len() + 1).as_bytes());
    for off in offsets {
        out.extend_from_slice(format!("{off:010} 00000 n \n").as_bytes());
    }
    out.extend_from_slice(
        format!("trailer\n<< /Size {} /Root 1 0 R >>\nstartxref\n{xref}\n%%EOF\n", objects.len() + 1).as_bytes(),
    );
    out
}
