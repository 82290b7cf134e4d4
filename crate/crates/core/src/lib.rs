//! Technology-skill demand analysis over job posts and program syllabi.
//!
//! Documents from either source share one [`corpus::Document`] model. A
//! [`skills::SkillDictionary`] maps keyword synonyms to canonical skills,
//! [`analysis`] turns per-document matches into coverage percentages,
//! half-year series, least-squares trends and education/industry gaps, and
//! [`report`] writes them out as CSV and SVG.

pub mod analysis;
pub mod corpus;
mod error;
pub mod pipeline;
pub mod report;
pub mod skills;

pub use analysis::{
    bin_by_interval, compute_gap, fit_line, fit_trend, skill_ratio, trend_classification, Coverage,
    GapRow, Half, HalfYearInterval, IntervalRange, IntervalStat, IntervalTable, LineFit, SkillRatio,
    TrendClass, TrendFit,
};
pub use corpus::{deduplicate, load_corpus, load_corpus_as, save_corpus, Corpus, Document, DocumentKind};
pub use error::{Error, Result};
pub use pipeline::{analyze, Analysis, AnalysisOptions};
pub use report::{emit_charts, emit_csv, ReportBundle};
pub use skills::{load_dictionary, match_corpus, match_document, MatchSet, SkillDictionary, SkillEntry};
