//! Match, bin, fit and compare in one pass, producing a [`ReportBundle`].

use chrono::NaiveDate;

use crate::analysis::{
    bin_by_interval, compute_gap, fit_trend, skill_ratio, trend_classification, Coverage,
    IntervalRange, DEFAULT_DEADBAND,
};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::report::{coverage_rows, ranked_interval_skills, ReportBundle, TrendRow};
use crate::skills::{match_corpus, SkillDictionary};

#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub range: IntervalRange,
    pub epsilon: f64,
    /// Restricts the trend rows to these skills.
    pub skills: Option<Vec<String>>,
}

impl AnalysisOptions {
    pub fn default_range() -> IntervalRange {
        let from = NaiveDate::from_ymd_opt(2016, 1, 1).expect("valid date");
        let to = NaiveDate::from_ymd_opt(2021, 12, 31).expect("valid date");
        IntervalRange::from_dates(from, to).expect("non-empty range")
    }
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions { range: Self::default_range(), epsilon: DEFAULT_DEADBAND, skills: None }
    }
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub bundle: ReportBundle,
    pub edu: Option<Coverage>,
    pub job: Option<Coverage>,
    /// Outputs that were skipped and why.
    pub notices: Vec<String>,
}

pub fn analyze(
    jobs: Option<&Corpus>,
    syllabi: Option<&Corpus>,
    dict: &SkillDictionary,
    opts: &AnalysisOptions,
) -> Result<Analysis> {
    if jobs.is_none() && syllabi.is_none() {
        return Err(Error::Analysis("no corpus to analyze".into()));
    }
    if opts.epsilon < 0.0 || !opts.epsilon.is_finite() {
        return Err(Error::Analysis(format!("trend deadband must be >= 0, got {}", opts.epsilon)));
    }
    if let Some(filter) = &opts.skills {
        if let Some(unknown) = filter.iter().find(|s| dict.get(s).is_none()) {
            return Err(Error::Analysis(format!("skill `{unknown}` is not in the dictionary")));
        }
    }

    let mut bundle = ReportBundle::default();
    let mut notices = Vec::new();

    let edu = match syllabi {
        Some(c) if !c.is_empty() => Some(skill_ratio(&match_corpus(c, dict), c.len())?),
        Some(_) => {
            notices.push("syllabus corpus is empty; education coverage skipped".to_owned());
            None
        }
        None => None,
    };

    let job = match jobs {
        Some(c) if !c.is_empty() => {
            let matches = match_corpus(c, dict);
            let coverage = skill_ratio(&matches, c.len())?;
            let mut table = bin_by_interval(c, &matches, opts.range)?;
            if table.excluded > 0 {
                notices.push(format!(
                    "{} job posts fall outside {}..{} and were not binned",
                    table.excluded, opts.range.first, opts.range.last
                ));
            }
            let trend_skills: Vec<String> = match &opts.skills {
                Some(filter) => {
                    for s in filter {
                        table.counts.entry(s.clone()).or_insert_with(|| vec![0; table.totals.len()]);
                    }
                    filter.clone()
                }
                None => ranked_interval_skills(&table).into_iter().map(str::to_owned).collect(),
            };
            let populated = table.totals.iter().filter(|t| **t > 0).count();
            if populated < 2 {
                notices.push(format!(
                    "only {populated} non-empty half-year interval(s); trends skipped"
                ));
            } else {
                for skill in &trend_skills {
                    let fit = fit_trend(skill, &table.series(skill))?;
                    let class = trend_classification(&fit, opts.epsilon);
                    bundle.trends.push(TrendRow { fit, class });
                }
            }
            bundle.interval_table = Some(table);
            Some(coverage)
        }
        Some(_) => {
            notices.push("job corpus is empty; demand and trends skipped".to_owned());
            None
        }
        None => {
            notices.push("no job corpus; interval and trend outputs skipped".to_owned());
            None
        }
    };

    if let Some(edu) = &edu {
        bundle.coverage_edu = coverage_rows(edu);
    }
    if let Some(job) = &job {
        bundle.coverage_job = coverage_rows(job);
    }
    if let (Some(edu), Some(job)) = (&edu, &job) {
        bundle.gaps = compute_gap(&edu.percentages(), &job.percentages());
    }
    Ok(Analysis { bundle, edu, job, notices })
}
