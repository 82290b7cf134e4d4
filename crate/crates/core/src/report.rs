//! CSV tables and standalone SVG charts for a finished analysis.
//!
//! Everything written here is byte-deterministic: rows have a fixed order,
//! numbers use `.` as the decimal separator and nothing depends on the
//! clock or the locale.

use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{Coverage, GapRow, HalfYearInterval, IntervalTable, TrendClass, TrendFit};
use crate::error::{Error, Result};

mod svg;

pub use svg::{render_coverage_chart, render_gap_chart, render_postings_chart, render_trend_chart};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub skill: String,
    pub count: usize,
    pub pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendRow {
    pub fit: TrendFit,
    pub class: TrendClass,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ReportBundle {
    pub coverage_edu: Vec<CoverageRow>,
    pub coverage_job: Vec<CoverageRow>,
    pub interval_table: Option<IntervalTable>,
    pub trends: Vec<TrendRow>,
    pub gaps: Vec<GapRow>,
}

impl ReportBundle {
    pub fn validate(&self) -> Result<()> {
        for t in &self.trends {
            let known = self
                .interval_table
                .as_ref()
                .is_some_and(|table| table.counts.contains_key(&t.fit.skill));
            if !known {
                return Err(Error::Analysis(format!(
                    "trend for `{}` has no row in the interval table",
                    t.fit.skill
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(input: &str) -> Result<Self> {
        let bundle: ReportBundle = serde_json::from_str(input)?;
        bundle.validate()?;
        Ok(bundle)
    }
}

/// Coverage rows ordered by count descending, then name.
pub fn coverage_rows(coverage: &Coverage) -> Vec<CoverageRow> {
    coverage
        .ranked()
        .into_iter()
        .map(|(skill, r)| CoverageRow { skill: skill.to_owned(), count: r.count, pct: r.pct })
        .collect()
}

/// Interval-table skill rows ordered by total count descending, then name.
pub fn ranked_interval_skills(table: &IntervalTable) -> Vec<&str> {
    let mut skills: Vec<(&str, usize)> =
        table.counts.iter().map(|(k, row)| (k.as_str(), row.iter().sum())).collect();
    skills.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    skills.into_iter().map(|(k, _)| k).collect()
}

/// Percentages are written with one decimal.
pub fn format_pct(value: f64) -> String {
    format_fixed(value, 1)
}

pub(crate) fn format_fixed(value: f64, decimals: usize) -> String {
    let s = format!("{value:.decimals$}");
    // "-0.0" and friends
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_owned()
    } else {
        s
    }
}

pub const CSV_FILES: [&str; 5] =
    ["coverage_edu.csv", "coverage_job.csv", "intervals.csv", "trends.csv", "gaps.csv"];

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

pub fn write_coverage_csv<W: Write>(rows: &[CoverageRow], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["skill", "count", "pct"])?;
    for r in rows {
        w.write_record([r.skill.clone(), r.count.to_string(), format_pct(r.pct)])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))
}

pub fn write_intervals_csv<W: Write>(table: Option<&IntervalTable>, out: W) -> Result<()> {
    let mut w = csv_writer(out);
    let Some(table) = table else {
        w.write_record(["skill"])?;
        return w.flush().map_err(|e| Error::io("<csv>", e));
    };
    let mut header = vec!["skill".to_owned()];
    header.extend(table.intervals().iter().map(ToString::to_string));
    w.write_record(&header)?;
    for skill in ranked_interval_skills(table) {
        let mut record = vec![skill.to_owned()];
        record.extend(table.counts[skill].iter().map(ToString::to_string));
        w.write_record(&record)?;
    }
    let mut totals = vec!["TOTAL".to_owned()];
    totals.extend(table.totals.iter().map(ToString::to_string));
    w.write_record(&totals)?;
    w.flush().map_err(|e| Error::io("<csv>", e))
}

pub fn write_trends_csv<W: Write>(rows: &[TrendRow], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["skill", "slope", "intercept", "n", "trend"])?;
    for r in rows {
        w.write_record([
            r.fit.skill.clone(),
            format_fixed(r.fit.slope, 3),
            format_fixed(r.fit.intercept, 3),
            r.fit.n.to_string(),
            r.class.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))
}

pub fn write_gaps_csv<W: Write>(rows: &[GapRow], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["skill", "edu_pct", "job_pct", "gap"])?;
    for r in rows {
        w.write_record([r.skill.clone(), format_pct(r.edu_pct), format_pct(r.job_pct), format_pct(r.gap)])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))
}

/// Counts recovered from an `intervals.csv`: interval labels, totals row and
/// per-skill rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalMatrix {
    pub intervals: Vec<HalfYearInterval>,
    pub totals: Vec<usize>,
    pub counts: BTreeMap<String, Vec<usize>>,
}

pub fn read_intervals_csv<R: Read>(input: R) -> Result<IntervalMatrix> {
    let mut r = csv::Reader::from_reader(input);
    let intervals = r
        .headers()?
        .iter()
        .skip(1)
        .map(str::parse)
        .collect::<Result<Vec<HalfYearInterval>>>()?;
    let mut totals = None;
    let mut counts = BTreeMap::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        let name = record.get(0).unwrap_or_default().to_owned();
        let row = record
            .iter()
            .skip(1)
            .map(|c| c.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::MalformedLine { line: i + 2, message: e.to_string() })?;
        if name == "TOTAL" {
            totals = Some(row);
        } else {
            counts.insert(name, row);
        }
    }
    Ok(IntervalMatrix { intervals, totals: totals.unwrap_or_default(), counts })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Writes the five CSV tables into `out_dir`.
pub fn emit_csv(bundle: &ReportBundle, out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = out_dir.as_ref();
    ensure_dir(dir)?;
    let mut paths = Vec::new();
    for name in CSV_FILES {
        let mut buf = Vec::new();
        match name {
            "coverage_edu.csv" => write_coverage_csv(&bundle.coverage_edu, &mut buf)?,
            "coverage_job.csv" => write_coverage_csv(&bundle.coverage_job, &mut buf)?,
            "intervals.csv" => write_intervals_csv(bundle.interval_table.as_ref(), &mut buf)?,
            "trends.csv" => write_trends_csv(&bundle.trends, &mut buf)?,
            _ => write_gaps_csv(&bundle.gaps, &mut buf)?,
        }
        let path = dir.join(name);
        write_file(&path, &buf)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Writes the SVG charts that have data behind them.
pub fn emit_charts(bundle: &ReportBundle, out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = out_dir.as_ref();
    ensure_dir(dir)?;
    let mut charts: Vec<(&str, String)> = Vec::new();
    if !bundle.coverage_edu.is_empty() {
        charts.push((
            "coverage_edu.svg",
            render_coverage_chart("Skills in program syllabi", &bundle.coverage_edu),
        ));
    }
    if !bundle.coverage_job.is_empty() {
        charts.push((
            "coverage_job.svg",
            render_coverage_chart("Skills in job posts", &bundle.coverage_job),
        ));
    }
    if let Some(table) = &bundle.interval_table {
        charts.push(("postings.svg", render_postings_chart(table)));
        if !bundle.trends.is_empty() {
            charts.push(("trends.svg", render_trend_chart(table, &bundle.trends)));
        }
    }
    if !bundle.gaps.is_empty() {
        charts.push(("gaps.svg", render_gap_chart(&bundle.gaps)));
    }
    let mut paths = Vec::new();
    for (name, body) in charts {
        let path = dir.join(name);
        write_file(&path, body.as_bytes())?;
        paths.push(path);
    }
    Ok(paths)
}
