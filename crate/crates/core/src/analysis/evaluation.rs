use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::verdict::EvaluationVerdict;
use crate::consensus::{median_sorted, ConsensusEntry};
use crate::error::{Error, Result};
use crate::extraction::Confidence;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Grouping {
    #[default]
    Language,
    Lemma,
}

impl FromStr for Grouping {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "language" => Ok(Grouping::Language),
            "lemma" => Ok(Grouping::Lemma),
            _ => Err(format!(
                "invalid grouping {s:?} (expected language or lemma)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupAccuracy {
    pub key: String,
    pub correct: usize,
    pub total: usize,
    pub proportion: f64,
    /// Median cumulative confidence of the group's consensus entries;
    /// `None` if it has none.
    pub median_confidence: Option<Confidence>,
    /// 1 + number of groups with a strictly lower proportion.
    pub rank: usize,
}

impl fmt::Display for GroupAccuracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:.1} / rank {}",
            self.key,
            self.proportion * 100.0,
            self.rank
        )
    }
}

/// Least squares through the origin of accuracy on log median confidence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegressionFit {
    pub coefficient: f64,
    /// Uncentered, as is usual without an intercept.
    pub r_squared: f64,
    /// Two-sided t test of a zero coefficient.
    pub p_value: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub grouping: Grouping,
    pub per_language: Vec<GroupAccuracy>,
    pub per_lemma: Vec<GroupAccuracy>,
    /// `None` with fewer than two usable groups.
    pub fit: Option<RegressionFit>,
}

/// Zero-intercept OLS of `y` on `x`. `None` with fewer than two points or
/// an all-zero `x`.
pub fn fit_through_origin(x: &[f64], y: &[f64]) -> Option<RegressionFit> {
    let n = x.len();
    if n != y.len() || n < 2 {
        return None;
    }
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let syy: f64 = y.iter().map(|v| v * v).sum();
    let coefficient = sxy / sxx;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - coefficient * a).powi(2))
        .sum();
    let r_squared = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    let df = (n - 1) as f64;
    let se = (sse / df / sxx).sqrt();
    let p_value = if se == 0.0 {
        if coefficient == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        let t = (coefficient / se).abs();
        let dist = StudentsT::new(0.0, 1.0, df).ok()?;
        (2.0 * dist.sf(t)).min(1.0)
    };
    Some(RegressionFit {
        coefficient,
        r_squared,
        p_value,
        points: n,
    })
}

fn group_table<'a>(
    verdicts: &'a [EvaluationVerdict],
    entries: &'a [ConsensusEntry],
    key_of_verdict: impl Fn(&'a EvaluationVerdict) -> &'a str,
    key_of_entry: impl Fn(&'a ConsensusEntry) -> &'a str,
) -> Vec<GroupAccuracy> {
    let mut counts: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for v in verdicts {
        let c = counts.entry(key_of_verdict(v)).or_default();
        c.0 += v.correct as usize;
        c.1 += 1;
    }
    let mut confidences: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for e in entries {
        confidences
            .entry(key_of_entry(e))
            .or_default()
            .push(e.cumulative_confidence.as_f64());
    }
    let mut rows: Vec<GroupAccuracy> = counts
        .into_iter()
        .map(|(key, (correct, total))| GroupAccuracy {
            key: key.to_string(),
            correct,
            total,
            proportion: correct as f64 / total as f64,
            median_confidence: confidences.get_mut(key).and_then(|c| {
                c.sort_by(f64::total_cmp);
                median_sorted(c).map(Confidence::from_f64)
            }),
            rank: 0,
        })
        .collect();
    let props: Vec<f64> = rows.iter().map(|r| r.proportion).collect();
    for r in &mut rows {
        r.rank = 1 + props.iter().filter(|p| **p < r.proportion).count();
    }
    rows
}

/// Accuracy per language and per lemma, and how accuracy tracks
/// confidence across the chosen grouping. Groups whose median confidence
/// is missing or unbounded are left out of the fit.
pub fn evaluation_report(
    verdicts: &[EvaluationVerdict],
    entries: &[ConsensusEntry],
    grouping: Grouping,
) -> Result<EvaluationReport> {
    if verdicts.is_empty() {
        return Err(Error::Report("no verdicts to evaluate".into()));
    }
    let per_language = group_table(
        verdicts,
        entries,
        |v| v.language_key.as_str(),
        |e| e.language_key.as_str(),
    );
    let per_lemma = group_table(
        verdicts,
        entries,
        |v| v.lemma_form.lemma.as_str(),
        |e| e.lemma_form.lemma.as_str(),
    );
    let groups = match grouping {
        Grouping::Language => &per_language,
        Grouping::Lemma => &per_lemma,
    };
    let (x, y): (Vec<f64>, Vec<f64>) = groups
        .iter()
        .filter_map(|g| {
            let m = g.median_confidence?.finite().filter(|m| *m > 0.0)?;
            Some((m.ln(), g.proportion))
        })
        .unzip();
    Ok(EvaluationReport {
        grouping,
        per_language,
        per_lemma,
        fit: fit_through_origin(&x, &y),
    })
}
