//! The three operations behind the browser demo. Each takes plain strings
//! and numbers and returns a JSON document, so the wasm bindings stay thin
//! and everything here is testable natively.

use std::collections::BTreeMap;

use jobgap::report::{coverage_rows, render_gap_chart, render_trend_chart, CoverageRow, TrendRow};
use jobgap::{
    compute_gap, fit_trend, match_corpus, skill_ratio, trend_classification, Corpus, Document, DocumentKind, GapRow,
    HalfYearInterval, IntervalRange, IntervalTable, SkillDictionary,
};
use serde::Serialize;

fn dictionary(toml: &str) -> Result<SkillDictionary, String> {
    if toml.trim().is_empty() {
        Ok(SkillDictionary::default_dictionary())
    } else {
        SkillDictionary::from_toml_str(toml).map_err(|e| e.to_string())
    }
}

fn to_json(value: &impl Serialize) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
struct Matched {
    skills: Vec<String>,
    dictionary_skills: usize,
}

/// Skills mentioned in `text`. An empty `dictionary_toml` selects the built-in dictionary.
pub fn match_text(text: &str, dictionary_toml: &str) -> Result<String, String> {
    let dict = dictionary(dictionary_toml)?;
    to_json(&Matched { skills: dict.matches(text).into_iter().collect(), dictionary_skills: dict.entries().len() })
}

#[derive(Debug, Serialize)]
struct Point {
    interval: String,
    pct: f64,
}

#[derive(Debug, Serialize)]
struct Trend {
    slope: f64,
    intercept: f64,
    n: usize,
    class: String,
    series: Vec<Point>,
    svg: String,
}

/// Fits a linear trend to per-half-year mention counts, each normalized by
/// that half-year's total number of posts.
pub fn trend(skill: &str, first_interval: &str, counts: &[u32], totals: &[u32], epsilon: f64) -> Result<String, String> {
    if counts.len() != totals.len() {
        return Err(format!("{} counts but {} totals", counts.len(), totals.len()));
    }
    if counts.is_empty() {
        return Err("no data".into());
    }
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(format!("deadband must be >= 0, got {epsilon}"));
    }
    let first: HalfYearInterval = first_interval.trim().parse().map_err(|e| format!("{e}"))?;
    let last = HalfYearInterval::from_ordinal(first.ordinal() + counts.len() as i64 - 1);
    let range = IntervalRange::new(first, last).map_err(|e| e.to_string())?;
    let name = if skill.trim().is_empty() { "skill" } else { skill.trim() };
    let counts: BTreeMap<String, Vec<usize>> =
        [(name.to_owned(), counts.iter().map(|&c| c as usize).collect())].into();
    let table = IntervalTable::from_counts(range, totals.iter().map(|&t| t as usize).collect(), counts)
        .map_err(|e| e.to_string())?;
    let series = table.series(name);
    let fit = fit_trend(name, &series).map_err(|e| e.to_string())?;
    let class = trend_classification(&fit, epsilon);
    let svg = render_trend_chart(&table, &[TrendRow { fit: fit.clone(), class }]);
    to_json(&Trend {
        slope: fit.slope,
        intercept: fit.intercept,
        n: fit.n,
        class: class.to_string(),
        series: series.into_iter().map(|(i, pct)| Point { interval: i.to_string(), pct }).collect(),
        svg,
    })
}

#[derive(Debug, Serialize)]
struct Comparison {
    syllabi: usize,
    job_posts: usize,
    edu: Vec<CoverageRow>,
    job: Vec<CoverageRow>,
    gaps: Vec<GapRow>,
    svg: String,
}

fn documents(text: &str, kind: DocumentKind) -> Result<Corpus, String> {
    let docs = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, line)| {
            let id = format!("{}-{}", kind, i + 1);
            match kind {
                DocumentKind::Syllabus => Document::syllabus(id, line),
                // coverage ignores dates; any fixed one satisfies the job-post invariant
                DocumentKind::JobPost => {
                    Document::job_post(id, line, HalfYearInterval::from_ordinal(2000 * 2).first_day())
                }
            }
        })
        .collect();
    let corpus = Corpus::from_documents(kind, docs).map_err(|e| e.to_string())?;
    if corpus.is_empty() {
        return Err(format!("no {kind} text given (one document per line)"));
    }
    Ok(corpus)
}

/// Coverage of each skill among syllabi and among job posts (one document
/// per line) and the per-skill gap between the two.
pub fn compare(syllabi: &str, job_posts: &str, dictionary_toml: &str) -> Result<String, String> {
    let dict = dictionary(dictionary_toml)?;
    let edu_docs = documents(syllabi, DocumentKind::Syllabus)?;
    let job_docs = documents(job_posts, DocumentKind::JobPost)?;
    let edu = skill_ratio(&match_corpus(&edu_docs, &dict), edu_docs.len()).map_err(|e| e.to_string())?;
    let job = skill_ratio(&match_corpus(&job_docs, &dict), job_docs.len()).map_err(|e| e.to_string())?;
    let gaps = compute_gap(&edu.percentages(), &job.percentages());
    to_json(&Comparison {
        syllabi: edu_docs.len(),
        job_posts: job_docs.len(),
        edu: coverage_rows(&edu),
        job: coverage_rows(&job),
        svg: render_gap_chart(&gaps),
        gaps,
    })
}

#[cfg(target_arch = "wasm32")]
mod bindings {
    use wasm_bindgen::prelude::*;

    #[wasm_bindgen(js_name = matchText)]
    pub fn match_text(text: &str, dictionary_toml: &str) -> Result<String, JsError> {
        super::match_text(text, dictionary_toml).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen]
    pub fn trend(
        skill: &str,
        first_interval: &str,
        counts: Vec<u32>,
        totals: Vec<u32>,
        epsilon: f64,
    ) -> Result<String, JsError> {
        super::trend(skill, first_interval, &counts, &totals, epsilon).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen]
    pub fn compare(syllabi: &str, job_posts: &str, dictionary_toml: &str) -> Result<String, JsError> {
        super::compare(syllabi, job_posts, dictionary_toml).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(js_name = defaultDictionary)]
    pub fn default_dictionary() -> String {
        jobgap::SkillDictionary::default_toml().to_owned()
    }
}
