mod common;

use std::cell::Cell;

use common::*;
use jobgap::{save_corpus, Corpus, DocumentKind};
use jobgap_ingest::{
    fetch_job_posts, load_fixture_archive, ArchiveQuery, ArchiveSource, FixtureArchive, RetryPolicy, DEFAULT_PHRASES,
};
use proptest::prelude::*;
use serde_json::json;

fn run(source: &dyn ArchiveSource, q: &ArchiveQuery) -> (Corpus, jobgap_ingest::IngestReport) {
    let mut sink = Corpus::new(DocumentKind::JobPost);
    let report = fetch_job_posts(source, q, &mut sink, &RetryPolicy::immediate()).unwrap();
    (sink, report)
}

#[test]
fn three_pages_of_ten_ten_four() {
    let archive = FixtureArchive::new(developer_ads(24));
    let (sink, report) = run(&archive, &query("developer", 10));
    assert_eq!(report.fetched, 24);
    assert_eq!(report.pages, 3);
    assert_eq!(report.kept_after_dedup, 24);
    assert!(report.failures.is_empty());
    assert_eq!(sink.len(), 24);
    assert_eq!(sink.documents()[0].text, "Backend developer\nJava, SQL and Docker");
    assert_eq!(sink.documents()[0].search_phrase.as_deref(), Some("developer"));
}

#[test]
fn exact_multiple_of_page_size_stops_on_empty_page() {
    let archive = FixtureArchive::new(developer_ads(20));
    let (_, report) = run(&archive, &query("developer", 10));
    assert_eq!((report.fetched, report.pages), (20, 2));
}

#[test]
fn empty_archive_stops_after_first_page() {
    let archive = FixtureArchive::new(vec![]);
    let (sink, report) = run(&archive, &query("developer", 10));
    assert_eq!((report.fetched, report.pages, sink.len()), (0, 0, 0));
}

#[test]
fn date_range_excluding_everything() {
    let archive = FixtureArchive::new(developer_ads(24));
    let q = ArchiveQuery::new("developer", day("2010-01-01"), day("2015-12-31"), 10, "unused").unwrap();
    let (sink, report) = run(&archive, &q);
    assert_eq!(report.fetched, 0);
    assert!(sink.is_empty());
}

/// A source that ignores the date parameters, as a misbehaving server might.
struct IgnoresDates(FixtureArchive);

impl ArchiveSource for IgnoresDates {
    fn fetch_page(&self, q: &ArchiveQuery, offset: usize) -> Result<Vec<serde_json::Value>, jobgap_ingest::FetchError> {
        let wide = ArchiveQuery { date_from: day("1900-01-01"), date_to: day("2100-01-01"), ..q.clone() };
        self.0.fetch_page(&wide, offset)
    }
    fn label(&self) -> String {
        "loose".into()
    }
}

#[test]
fn out_of_range_ads_are_never_kept() {
    // 24 monthly ads from 2017-01; keep only 2017
    let q = ArchiveQuery::new("developer", day("2017-01-01"), day("2017-12-31"), 5, "unused").unwrap();
    let (sink, report) = run(&IgnoresDates(FixtureArchive::new(developer_ads(24))), &q);
    assert_eq!(report.fetched, 12);
    assert!(sink.iter().all(|d| q.contains(d.published_at.unwrap())));
}

#[test]
fn range_bounds_are_inclusive() {
    let ads = vec![
        ad("a", "developer", "", "2018-01-01"),
        ad("b", "developer", "", "2018-06-30"),
        ad("c", "developer", "", "2018-07-01"),
    ];
    let q = ArchiveQuery::new("developer", day("2018-01-01"), day("2018-06-30"), 10, "unused").unwrap();
    let (sink, _) = run(&IgnoresDates(FixtureArchive::new(ads)), &q);
    let ids: Vec<_> = sink.iter().map(|d| d.id.as_str()).collect();
    assert_eq!(ids, ["a", "b"]);
}

/// One ad per search phrase, plus one ad that matches two phrases.
fn phrase_fixture() -> Vec<serde_json::Value> {
    let mut ads: Vec<_> = DEFAULT_PHRASES
        .iter()
        .enumerate()
        .map(|(i, p)| ad(&format!("p{i}"), &format!("Senior {p}"), "Stockholm", "2019-05-01"))
        .collect();
    ads.push(ad("both", "Software engineer / systemutvecklare", "Göteborg", "2020-09-01"));
    ads.push(ad("none", "Projektledare", "Malmö", "2020-09-01"));
    ads
}

#[test]
fn ad_matching_two_phrases_is_kept_once() {
    let archive = FixtureArchive::new(phrase_fixture());
    let mut sink = Corpus::new(DocumentKind::JobPost);
    let mut total = jobgap_ingest::IngestReport::default();
    for phrase in DEFAULT_PHRASES {
        let r = fetch_job_posts(&archive, &query(phrase, 2), &mut sink, &RetryPolicy::immediate()).unwrap();
        total.merge(r);
    }
    // 5 phrase ads + "both" returned twice; "none" never
    assert_eq!(total.fetched, 7);
    assert_eq!(total.duplicates(), 1);
    assert_eq!(total.kept_after_dedup, total.fetched - 1);
    assert_eq!(sink.len(), 6);
    assert!(!sink.contains_id("none"));
    let both = sink.iter().find(|d| d.id == "both").unwrap();
    assert_eq!(both.search_phrase.as_deref(), Some("software engineer"));
}

fn id_set(sink: &Corpus) -> Vec<String> {
    let mut ids: Vec<_> = sink.iter().map(|d| d.id.clone()).collect();
    ids.sort();
    ids
}

proptest! {
    #[test]
    fn union_over_phrases_is_order_insensitive(order in Just((0..5).collect::<Vec<usize>>()).prop_shuffle(), page_size in 1usize..5) {
        let archive = FixtureArchive::new(phrase_fixture());
        let mut sink = Corpus::new(DocumentKind::JobPost);
        let mut concatenated = Vec::new();
        for &i in &order {
            let q = query(DEFAULT_PHRASES[i], page_size);
            fetch_job_posts(&archive, &q, &mut sink, &RetryPolicy::immediate()).unwrap();
            concatenated.extend(archive.select(&q).into_iter().map(|r| r["id"].as_str().unwrap().to_owned()));
        }
        concatenated.sort();
        concatenated.dedup();
        prop_assert_eq!(id_set(&sink), concatenated);
    }
}

#[test]
fn repeat_runs_save_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let archive = FixtureArchive::new(phrase_fixture());
    let mut outputs = Vec::new();
    for n in 0..2 {
        let mut sink = Corpus::new(DocumentKind::JobPost);
        for phrase in DEFAULT_PHRASES {
            fetch_job_posts(&archive, &query(phrase, 3), &mut sink, &RetryPolicy::immediate()).unwrap();
        }
        sink.sort_by_id();
        let path = dir.path().join(format!("run{n}.jsonl"));
        save_corpus(&sink, &path).unwrap();
        outputs.push(std::fs::read(path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn transient_failures_are_retried() {
    let flaky = Flaky { inner: FixtureArchive::new(developer_ads(24)), offset: 10, failures: 2, calls: Cell::new(0) };
    let (sink, report) = run(&flaky, &query("developer", 10));
    assert_eq!(flaky.calls.get(), 3);
    assert!(report.failures.is_empty());
    assert_eq!(sink.len(), 24);
}

#[test]
fn persistent_page_failure_is_recorded_and_skipped() {
    let flaky = Flaky { inner: FixtureArchive::new(developer_ads(24)), offset: 10, failures: usize::MAX, calls: Cell::new(0) };
    let (sink, report) = run(&flaky, &query("developer", 10));
    assert_eq!(flaky.calls.get(), 3);
    assert_eq!(report.failures.len(), 1);
    assert_eq!(report.failures[0].at, "page 2");
    assert_eq!((report.fetched, report.pages, sink.len()), (14, 2, 14));
}

struct Down;

impl ArchiveSource for Down {
    fn fetch_page(&self, _: &ArchiveQuery, _: usize) -> Result<Vec<serde_json::Value>, jobgap_ingest::FetchError> {
        Err(jobgap_ingest::FetchError::Transport("connection refused".into()))
    }
    fn label(&self) -> String {
        "down".into()
    }
}

#[test]
fn unreachable_archive_gives_up_without_error() {
    let (sink, report) = run(&Down, &query("developer", 10));
    assert!(sink.is_empty());
    assert_eq!(report.failures.len(), 3);
}

#[test]
fn malformed_records_are_skipped_and_recorded() {
    let mut ads = developer_ads(4);
    ads.insert(1, json!({"id": "broken", "headline": "developer"}));
    ads.insert(3, json!({"headline": "developer", "publication_date": "2019-01-01"}));
    let (sink, report) = run(&FixtureArchive::new(ads), &query("developer", 10));
    assert_eq!(sink.len(), 4);
    assert_eq!(report.fetched, 4);
    assert_eq!(report.failures.len(), 2);
    assert_eq!(report.failures[0].at, "page 1, record 2");
}

#[test]
fn existing_sink_ids_are_not_duplicated() {
    let archive = FixtureArchive::new(developer_ads(5));
    let mut sink = Corpus::new(DocumentKind::JobPost);
    fetch_job_posts(&archive, &query("developer", 10), &mut sink, &RetryPolicy::immediate()).unwrap();
    let again = fetch_job_posts(&archive, &query("developer", 10), &mut sink, &RetryPolicy::immediate()).unwrap();
    assert_eq!((again.fetched, again.kept_after_dedup, sink.len()), (5, 0, 5));
}

#[test]
fn syllabus_sink_is_rejected() {
    let mut sink = Corpus::new(DocumentKind::Syllabus);
    let archive = FixtureArchive::new(developer_ads(1));
    assert!(fetch_job_posts(&archive, &query("developer", 10), &mut sink, &RetryPolicy::immediate()).is_err());
}

#[test]
fn fixture_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ads.jsonl");
    let body: String = developer_ads(24).iter().map(|a| format!("{a}\n")).collect();
    std::fs::write(&path, body).unwrap();
    let archive = load_fixture_archive(&path).unwrap();
    assert_eq!(archive.len(), 24);
    assert_eq!(archive.page_count(&query("developer", 24)), 1);
    assert_eq!(archive.page_count(&query("developer", 10)), 3);
    assert_eq!(archive.label(), "ads.jsonl");

    std::fs::write(&path, "{\"id\": 1}\n{oops\n").unwrap();
    let err = load_fixture_archive(&path).unwrap_err().to_string();
    assert!(err.contains("line 2"), "{err}");
    assert!(load_fixture_archive(dir.path().join("missing.jsonl")).is_err());
}
