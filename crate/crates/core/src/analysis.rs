//! Coverage ratios, half-year binning, least-squares trend fits and the
//! education/industry gap table.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, DocumentKind};
use crate::error::{Error, Result};
use crate::skills::MatchSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Half {
    H1,
    H2,
}

/// Jan 1 - Jun 30 (`H1`) or Jul 1 - Dec 31 (`H2`) of a calendar year.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfYearInterval {
    pub year: i32,
    pub half: Half,
}

impl HalfYearInterval {
    pub fn new(year: i32, half: Half) -> Self {
        HalfYearInterval { year, half }
    }

    pub fn containing(date: NaiveDate) -> Self {
        let half = if date.month() <= 6 { Half::H1 } else { Half::H2 };
        HalfYearInterval { year: date.year(), half }
    }

    /// Consecutive intervals have consecutive ordinals.
    pub fn ordinal(self) -> i64 {
        i64::from(self.year) * 2 + if self.half == Half::H2 { 1 } else { 0 }
    }

    pub fn from_ordinal(ordinal: i64) -> Self {
        let year = ordinal.div_euclid(2) as i32;
        let half = if ordinal.rem_euclid(2) == 0 { Half::H1 } else { Half::H2 };
        HalfYearInterval { year, half }
    }

    pub fn next(self) -> Self {
        Self::from_ordinal(self.ordinal() + 1)
    }

    pub fn first_day(self) -> NaiveDate {
        let month = if self.half == Half::H1 { 1 } else { 7 };
        NaiveDate::from_ymd_opt(self.year, month, 1).expect("valid interval start")
    }

    pub fn last_day(self) -> NaiveDate {
        let (month, day) = if self.half == Half::H1 { (6, 30) } else { (12, 31) };
        NaiveDate::from_ymd_opt(self.year, month, day).expect("valid interval end")
    }
}

impl fmt::Display for HalfYearInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let half = if self.half == Half::H1 { 1 } else { 2 };
        write!(f, "{}H{}", self.year, half)
    }
}

impl FromStr for HalfYearInterval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Analysis(format!("`{s}` is not a half-year interval like 2016H1"));
        let (year, half) = s.split_once(['H', 'h']).ok_or_else(bad)?;
        let year = year.parse().map_err(|_| bad())?;
        let half = match half {
            "1" => Half::H1,
            "2" => Half::H2,
            _ => return Err(bad()),
        };
        Ok(HalfYearInterval { year, half })
    }
}

/// Inclusive range of half-year intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalRange {
    pub first: HalfYearInterval,
    pub last: HalfYearInterval,
}

impl IntervalRange {
    pub fn new(first: HalfYearInterval, last: HalfYearInterval) -> Result<Self> {
        if first > last {
            return Err(Error::Analysis(format!("empty interval range {first}..{last}")));
        }
        Ok(IntervalRange { first, last })
    }

    pub fn from_dates(from: NaiveDate, to: NaiveDate) -> Result<Self> {
        Self::new(HalfYearInterval::containing(from), HalfYearInterval::containing(to))
    }

    pub fn len(&self) -> usize {
        (self.last.ordinal() - self.first.ordinal() + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, interval: HalfYearInterval) -> bool {
        self.first <= interval && interval <= self.last
    }

    pub fn index_of(&self, interval: HalfYearInterval) -> Option<usize> {
        self.contains(interval).then(|| (interval.ordinal() - self.first.ordinal()) as usize)
    }

    pub fn intervals(&self) -> Vec<HalfYearInterval> {
        (self.first.ordinal()..=self.last.ordinal()).map(HalfYearInterval::from_ordinal).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkillRatio {
    pub count: usize,
    pub pct: f64,
}

/// Per-skill document counts over a corpus of `total` documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    pub total: usize,
    pub skills: BTreeMap<String, SkillRatio>,
}

impl Coverage {
    /// Absent skills report `(0, 0.0)`.
    pub fn get(&self, skill: &str) -> SkillRatio {
        self.skills.get(skill).copied().unwrap_or(SkillRatio { count: 0, pct: 0.0 })
    }

    pub fn percentages(&self) -> BTreeMap<String, f64> {
        self.skills.iter().map(|(k, v)| (k.clone(), v.pct)).collect()
    }

    /// Rows ordered by count descending, then name.
    pub fn ranked(&self) -> Vec<(&str, SkillRatio)> {
        let mut rows: Vec<_> = self.skills.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        rows.sort_by(|a, b| b.1.count.cmp(&a.1.count).then_with(|| a.0.cmp(b.0)));
        rows
    }
}

pub fn percentage(count: usize, total: usize) -> f64 {
    100.0 * count as f64 / total as f64
}

pub fn skill_ratio(matches: &[MatchSet], total_docs: usize) -> Result<Coverage> {
    if total_docs == 0 {
        return Err(Error::Analysis("skill ratio over zero documents is undefined".into()));
    }
    if matches.len() > total_docs {
        return Err(Error::Analysis(format!(
            "{} match sets for a corpus of {total_docs} documents",
            matches.len()
        )));
    }
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for m in matches {
        for skill in &m.skills {
            *counts.entry(skill.clone()).or_default() += 1;
        }
    }
    let skills = counts
        .into_iter()
        .map(|(k, count)| (k, SkillRatio { count, pct: percentage(count, total_docs) }))
        .collect();
    Ok(Coverage { total: total_docs, skills })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalStat {
    pub interval: HalfYearInterval,
    pub skill: String,
    pub count: usize,
    pub total: usize,
    pub pct: f64,
}

/// Skill-by-interval document counts plus per-interval totals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalTable {
    pub range: IntervalRange,
    pub totals: Vec<usize>,
    pub counts: BTreeMap<String, Vec<usize>>,
    /// Dated documents that fell outside `range`.
    pub excluded: usize,
}

impl IntervalTable {
    pub fn from_counts(
        range: IntervalRange,
        totals: Vec<usize>,
        counts: BTreeMap<String, Vec<usize>>,
    ) -> Result<Self> {
        if totals.len() != range.len() {
            return Err(Error::Analysis(format!(
                "{} totals for {} intervals",
                totals.len(),
                range.len()
            )));
        }
        for (skill, row) in &counts {
            if row.len() != totals.len() {
                return Err(Error::Analysis(format!("row `{skill}` has {} cells", row.len())));
            }
            if let Some((i, _)) = row.iter().zip(&totals).enumerate().find(|(_, (c, t))| c > t) {
                return Err(Error::Analysis(format!(
                    "`{skill}` count exceeds the interval total in {}",
                    range.intervals()[i]
                )));
            }
        }
        Ok(IntervalTable { range, totals, counts, excluded: 0 })
    }

    pub fn intervals(&self) -> Vec<HalfYearInterval> {
        self.range.intervals()
    }

    pub fn skills(&self) -> impl Iterator<Item = &str> {
        self.counts.keys().map(String::as_str)
    }

    pub fn binned_documents(&self) -> usize {
        self.totals.iter().sum()
    }

    /// One stat per (interval, skill) with a non-empty interval.
    pub fn stats(&self) -> Vec<IntervalStat> {
        let intervals = self.intervals();
        let mut out = Vec::new();
        for (i, interval) in intervals.iter().enumerate() {
            let total = self.totals[i];
            if total == 0 {
                continue;
            }
            for (skill, row) in &self.counts {
                out.push(IntervalStat {
                    interval: *interval,
                    skill: skill.clone(),
                    count: row[i],
                    total,
                    pct: percentage(row[i], total),
                });
            }
        }
        out
    }

    /// Percentage series for `skill`, skipping intervals with no documents.
    /// Skills absent from the table yield a zero series.
    pub fn series(&self, skill: &str) -> Vec<(HalfYearInterval, f64)> {
        let row = self.counts.get(skill);
        self.intervals()
            .into_iter()
            .enumerate()
            .filter(|(i, _)| self.totals[*i] > 0)
            .map(|(i, iv)| (iv, percentage(row.map_or(0, |r| r[i]), self.totals[i])))
            .collect()
    }
}

/// Counts, per half-year interval, the documents mentioning each skill.
///
/// `matches` must be aligned with the corpus (as returned by
/// [`crate::skills::match_corpus`]).
pub fn bin_by_interval(
    corpus: &Corpus,
    matches: &[MatchSet],
    range: IntervalRange,
) -> Result<IntervalTable> {
    if corpus.kind() != DocumentKind::JobPost {
        return Err(Error::Analysis(format!(
            "cannot bin a {} corpus: binning applies to dated corpora only",
            corpus.kind()
        )));
    }
    if matches.len() != corpus.len() {
        return Err(Error::Analysis(format!(
            "{} match sets for {} documents",
            matches.len(),
            corpus.len()
        )));
    }
    let n = range.len();
    let mut totals = vec![0usize; n];
    let mut counts: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let mut excluded = 0;
    for (doc, m) in corpus.iter().zip(matches) {
        if doc.id != m.document_id {
            return Err(Error::Analysis(format!(
                "match set for `{}` is aligned with document `{}`",
                m.document_id, doc.id
            )));
        }
        let date = doc
            .published_at
            .ok_or_else(|| Error::Analysis(format!("document `{}` has no date", doc.id)))?;
        let Some(i) = range.index_of(HalfYearInterval::containing(date)) else {
            excluded += 1;
            continue;
        };
        totals[i] += 1;
        for skill in &m.skills {
            counts.entry(skill.clone()).or_insert_with(|| vec![0; n])[i] += 1;
        }
    }
    Ok(IntervalTable { range, totals, counts, excluded })
}

/// Least-squares line `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub n: usize,
}

impl LineFit {
    pub fn at(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

/// Closed-form least squares:
///
/// ```text
/// m = (N Σxy - Σx Σy) / (N Σx² - (Σx)²)
/// b = (Σy - m Σx) / N
/// ```
///
/// The sums are accumulated exactly (every finite `f64` is a dyadic
/// rational) and each coefficient is rounded once at the end, so `slope` is
/// the correctly rounded closed-form value. In particular it is bit-for-bit
/// unchanged when every `x` or every `y` is shifted by a constant, as long
/// as the shifted inputs are themselves exact.
pub fn fit_line(points: &[(f64, f64)]) -> Result<LineFit> {
    let n = points.len();
    if n < 2 {
        return Err(Error::Analysis(format!("a trend needs at least 2 points, got {n}")));
    }
    let exact = |v: f64| {
        BigRational::from_float(v)
            .ok_or_else(|| Error::Analysis(format!("non-finite value {v} in trend input")))
    };
    let mut sx = BigRational::zero();
    let mut sy = BigRational::zero();
    let mut sxy = BigRational::zero();
    let mut sxx = BigRational::zero();
    for &(x, y) in points {
        let (x, y) = (exact(x)?, exact(y)?);
        sxy += &x * &y;
        sxx += &x * &x;
        sx += x;
        sy += y;
    }
    let big_n = BigRational::from_integer(BigInt::from(n));
    let denom = &big_n * &sxx - &sx * &sx;
    if denom.is_zero() {
        return Err(Error::Analysis("all x values are equal; slope is undefined".into()));
    }
    let slope = (&big_n * &sxy - &sx * &sy) / denom;
    let intercept = (sy - &slope * sx) / big_n;
    let to_f64 = |r: &BigRational| {
        r.to_f64()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::Analysis("trend coefficient overflows f64".into()))
    };
    Ok(LineFit { slope: to_f64(&slope)?, intercept: to_f64(&intercept)?, n })
}

/// A skill's fitted trend. `slope` is in percentage points per year and
/// `intercept` is the fitted percentage at the first interval of the series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendFit {
    pub skill: String,
    pub slope: f64,
    pub intercept: f64,
    pub n: usize,
}

/// Years between the start of `origin` and the start of `interval`.
pub fn years_since(origin: HalfYearInterval, interval: HalfYearInterval) -> f64 {
    0.5 * (interval.ordinal() - origin.ordinal()) as f64
}

/// Fits a percentage series. The first interval is `x = 0` and each
/// half-year step adds 0.5, so gaps left by skipped intervals are kept.
pub fn fit_trend(skill: &str, series: &[(HalfYearInterval, f64)]) -> Result<TrendFit> {
    let origin = series
        .first()
        .ok_or_else(|| Error::Analysis(format!("`{skill}`: empty series")))?
        .0;
    let points: Vec<(f64, f64)> =
        series.iter().map(|&(iv, pct)| (years_since(origin, iv), pct)).collect();
    let fit = fit_line(&points).map_err(|e| Error::Analysis(format!("`{skill}`: {e}")))?;
    Ok(TrendFit { skill: skill.to_owned(), slope: fit.slope, intercept: fit.intercept, n: fit.n })
}

pub const DEFAULT_DEADBAND: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrendClass {
    AboveMarket,
    WithMarket,
    BelowMarket,
}

impl TrendClass {
    pub fn as_str(self) -> &'static str {
        match self {
            TrendClass::AboveMarket => "above_market",
            TrendClass::WithMarket => "with_market",
            TrendClass::BelowMarket => "below_market",
        }
    }
}

impl fmt::Display for TrendClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Compares a slope against the overall market using a deadband of
/// `epsilon` percentage points per year.
pub fn trend_classification(fit: &TrendFit, epsilon: f64) -> TrendClass {
    if fit.slope > epsilon {
        TrendClass::AboveMarket
    } else if fit.slope < -epsilon {
        TrendClass::BelowMarket
    } else {
        TrendClass::WithMarket
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub skill: String,
    pub edu_pct: f64,
    pub job_pct: f64,
    pub gap: f64,
}

/// One row per skill in either map; a skill missing from a map counts as 0%.
/// Rows are ordered by education coverage descending, then name.
pub fn compute_gap(edu: &BTreeMap<String, f64>, job: &BTreeMap<String, f64>) -> Vec<GapRow> {
    let mut rows: Vec<GapRow> = edu
        .keys()
        .chain(job.keys())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .map(|skill| {
            let edu_pct = edu.get(skill).copied().unwrap_or(0.0);
            let job_pct = job.get(skill).copied().unwrap_or(0.0);
            GapRow { skill: skill.clone(), edu_pct, job_pct, gap: (edu_pct - job_pct).abs() }
        })
        .collect();
    rows.sort_by(|a, b| {
        b.edu_pct.partial_cmp(&a.edu_pct).unwrap_or(Ordering::Equal).then_with(|| a.skill.cmp(&b.skill))
    });
    rows
}
