//! The live client against a local server speaking the archive wire format.

mod common;

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};
use std::thread;

use common::*;
use jobgap::{Corpus, DocumentKind};
use jobgap_ingest::{fetch_job_posts, ArchiveQuery, FixtureArchive, HttpArchive, RetryPolicy};

#[derive(Debug, Clone)]
struct Seen {
    params: HashMap<String, String>,
    authorization: Option<String>,
}

/// Serves `archive` over HTTP; requests for an offset in `broken` get a 500.
fn serve(archive: FixtureArchive, broken: Vec<usize>) -> (String, Arc<Mutex<Vec<Seen>>>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let base = format!("http://{}/search", listener.local_addr().unwrap());
    let log = Arc::new(Mutex::new(Vec::new()));
    let seen = Arc::clone(&log);
    thread::spawn(move || {
        for stream in listener.incoming() {
            let mut stream = stream.unwrap();
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut request_line = String::new();
            reader.read_line(&mut request_line).unwrap();
            let mut authorization = None;
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).unwrap();
                if line.trim().is_empty() {
                    break;
                }
                if let Some((k, v)) = line.split_once(':') {
                    if k.eq_ignore_ascii_case("authorization") {
                        authorization = Some(v.trim().to_owned());
                    }
                }
            }
            let target = request_line.split_whitespace().nth(1).unwrap();
            let url = url::Url::parse(&format!("http://localhost{target}")).unwrap();
            let params: HashMap<String, String> = url.query_pairs().into_owned().collect();
            seen.lock().unwrap().push(Seen { params: params.clone(), authorization });

            let offset: usize = params["offset"].parse().unwrap();
            let (status, body) = if broken.contains(&offset) {
                ("500 Internal Server Error", "oops".to_owned())
            } else {
                let q = ArchiveQuery::new(
                    params["q"].clone(),
                    params["published-after"].parse().unwrap(),
                    params["published-before"].parse().unwrap(),
                    params["limit"].parse().unwrap(),
                    "",
                )
                .unwrap();
                let page = archive.page(&q, offset, q.page_size);
                ("200 OK", serde_json::to_string(&page).unwrap())
            };
            let _ = write!(
                stream,
                "HTTP/1.1 {status}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                body.len()
            );
        }
    });
    (base, log)
}

#[test]
fn paginates_over_http_with_bearer_token() {
    let (base, seen) = serve(FixtureArchive::new(developer_ads(24)), vec![]);
    let q = ArchiveQuery::new("developer", day("2016-01-01"), day("2021-12-31"), 10, base).unwrap();
    let mut sink = Corpus::new(DocumentKind::JobPost);
    let client = HttpArchive::new(Some("s3cret".into()));
    let report = fetch_job_posts(&client, &q, &mut sink, &RetryPolicy::immediate()).unwrap();
    assert_eq!((report.fetched, report.pages), (24, 3));
    assert_eq!(sink.documents()[0].source, "archive");

    let seen = seen.lock().unwrap();
    let offsets: Vec<&str> = seen.iter().map(|s| s.params["offset"].as_str()).collect();
    assert_eq!(offsets, ["0", "10", "20"]);
    let first = &seen[0];
    assert_eq!(first.params["q"], "developer");
    assert_eq!(first.params["published-after"], "2016-01-01");
    assert_eq!(first.params["published-before"], "2021-12-31");
    assert_eq!(first.params["limit"], "10");
    assert_eq!(first.authorization.as_deref(), Some("Bearer s3cret"));
}

#[test]
fn no_token_sends_no_authorization_header() {
    let (base, seen) = serve(FixtureArchive::new(developer_ads(3)), vec![]);
    let q = ArchiveQuery::new("developer", day("2016-01-01"), day("2021-12-31"), 10, base).unwrap();
    let mut sink = Corpus::new(DocumentKind::JobPost);
    fetch_job_posts(&HttpArchive::new(None), &q, &mut sink, &RetryPolicy::immediate()).unwrap();
    assert_eq!(sink.len(), 3);
    assert!(seen.lock().unwrap()[0].authorization.is_none());
}

#[test]
fn server_errors_are_retried_then_recorded() {
    let (base, seen) = serve(FixtureArchive::new(developer_ads(24)), vec![10]);
    let q = ArchiveQuery::new("developer", day("2016-01-01"), day("2021-12-31"), 10, base).unwrap();
    let mut sink = Corpus::new(DocumentKind::JobPost);
    let report = fetch_job_posts(&HttpArchive::new(None), &q, &mut sink, &RetryPolicy::immediate()).unwrap();
    assert_eq!(report.failures.len(), 1);
    assert!(report.failures[0].reason.contains("500"), "{}", report.failures[0]);
    assert_eq!(sink.len(), 14);
    let hits_on_page_two = seen.lock().unwrap().iter().filter(|s| s.params["offset"] == "10").count();
    assert_eq!(hits_on_page_two, 3);
}
