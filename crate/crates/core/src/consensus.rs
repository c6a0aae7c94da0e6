//! Merging the answers of several translations of one language, and
//! spotting translations that paraphrase rather than translate literally.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{Case, Gender, LemmaForm, Number};
use crate::error::{Error, Result};
use crate::extraction::{Confidence, ExtractionRecord};

/// The language-level answer for one lemma form.
#[derive(Clone, Debug, PartialEq)]
pub struct ConsensusEntry {
    pub language_key: String,
    pub lemma_form: LemmaForm,
    pub token: String,
    /// Product of the confidences of the translations voting for `token`.
    pub cumulative_confidence: Confidence,
    pub supporting_translations: usize,
}

#[derive(Default)]
struct Tally {
    votes: usize,
    product: Option<Confidence>,
}

/// Majority vote per lemma form. Records must all belong to one language
/// and one tokenization method, at most one per translation and form.
///
/// Equal vote counts are settled by the larger cumulative confidence; if
/// that is equal too the form gets no entry. A language with a single
/// translation passes its answers through unchanged.
pub fn consensus(language_key: &str, records: &[ExtractionRecord]) -> Vec<ConsensusEntry> {
    let mut by_form: BTreeMap<&LemmaForm, BTreeMap<&str, Tally>> = BTreeMap::new();
    for r in records {
        let tally = by_form
            .entry(&r.lemma_form)
            .or_default()
            .entry(r.token.as_str())
            .or_default();
        tally.votes += 1;
        tally.product = Some(match tally.product {
            None => r.confidence,
            Some(p) => p * r.confidence,
        });
    }

    let mut entries = Vec::new();
    for (form, tallies) in by_form {
        let key = |t: &Tally| (t.votes, t.product.expect("tally has a vote"));
        let mut ranked: Vec<(&str, &Tally)> = tallies.iter().map(|(k, v)| (*k, v)).collect();
        ranked.sort_by_key(|t| std::cmp::Reverse(key(t.1)));
        let (token, best) = ranked[0];
        if ranked.len() > 1 && key(ranked[1].1) == key(best) {
            continue;
        }
        entries.push(ConsensusEntry {
            language_key: language_key.to_string(),
            lemma_form: form.clone(),
            token: token.to_string(),
            cumulative_confidence: key(best).1,
            supporting_translations: best.votes,
        });
    }
    entries
}

/// How many forms a translation answered and how confidently.
#[derive(Clone, Debug, PartialEq)]
pub struct TranslationProfile {
    pub translation_id: String,
    pub lemma_count: usize,
    /// `None` when the translation has no records.
    pub median_confidence: Option<Confidence>,
}

impl TranslationProfile {
    pub fn from_records(translation_id: &str, records: &[ExtractionRecord]) -> Self {
        let mut values: Vec<f64> = records
            .iter()
            .filter(|r| r.translation_id == translation_id)
            .map(|r| r.confidence.as_f64())
            .collect();
        values.sort_by(f64::total_cmp);
        TranslationProfile {
            translation_id: translation_id.to_string(),
            lemma_count: values.len(),
            median_confidence: median_sorted(&values).map(Confidence::from_f64),
        }
    }
}

pub(crate) fn median_sorted(values: &[f64]) -> Option<f64> {
    let n = values.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(values[n / 2]),
        _ => Some((values[n / 2 - 1] + values[n / 2]) / 2.0),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TranslationLabel {
    Literal,
    ParaphraseSuspect,
}

impl fmt::Display for TranslationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TranslationLabel::Literal => "literal",
            TranslationLabel::ParaphraseSuspect => "paraphrase-suspect",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParaphraseThresholds {
    pub count_ratio: f64,
    pub confidence_ratio: f64,
}

impl Default for ParaphraseThresholds {
    fn default() -> Self {
        ParaphraseThresholds {
            count_ratio: 0.75,
            confidence_ratio: 0.75,
        }
    }
}

/// One scatter point plus its label.
#[derive(Clone, Debug, PartialEq)]
pub struct ParaphraseRow {
    pub profile: TranslationProfile,
    pub label: TranslationLabel,
}

/// Flags a translation whose form count and median confidence both fall
/// below the given fractions of the best in its language. A translation
/// with no records has no median and only needs the count condition.
pub fn paraphrase_report(
    profiles: &[TranslationProfile],
    thresholds: ParaphraseThresholds,
) -> Vec<ParaphraseRow> {
    let max_count = profiles.iter().map(|p| p.lemma_count).max().unwrap_or(0);
    let max_median = profiles
        .iter()
        .filter_map(|p| p.median_confidence.and_then(|c| c.finite()))
        .fold(None::<f64>, |acc, v| Some(acc.map_or(v, |a| a.max(v))));

    profiles
        .iter()
        .map(|p| {
            let few = (p.lemma_count as f64) < thresholds.count_ratio * max_count as f64;
            let unsure = match (p.median_confidence, max_median) {
                (_, None) => false,
                (None, Some(_)) => true,
                (Some(c), Some(m)) => c < Confidence::Finite(thresholds.confidence_ratio * m),
            };
            let label = if profiles.len() >= 2 && few && unsure {
                TranslationLabel::ParaphraseSuspect
            } else {
                TranslationLabel::Literal
            };
            ParaphraseRow {
                profile: p.clone(),
                label,
            }
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryRow {
    language: String,
    lemma: String,
    gender: Gender,
    number: Number,
    case: Case,
    token: String,
    cumulative_confidence: Confidence,
    supporters: usize,
}

pub fn write_consensus_to<W: Write>(
    out: &mut W,
    entries: &[ConsensusEntry],
) -> std::io::Result<()> {
    for e in entries {
        let row = EntryRow {
            language: e.language_key.clone(),
            lemma: e.lemma_form.lemma.clone(),
            gender: e.lemma_form.gender,
            number: e.lemma_form.number,
            case: e.lemma_form.case,
            token: e.token.clone(),
            cumulative_confidence: e.cumulative_confidence,
            supporters: e.supporting_translations,
        };
        writeln!(
            out,
            "{}",
            serde_json::to_string(&row).expect("entry serializes")
        )?;
    }
    Ok(())
}

pub fn write_consensus(path: &Path, entries: &[ConsensusEntry]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_consensus_to(&mut out, entries)
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path, e))
}

pub fn read_consensus(path: &Path) -> Result<Vec<ConsensusEntry>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut entries = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let row: EntryRow = serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: format!("bad consensus entry: {e}"),
        })?;
        entries.push(ConsensusEntry {
            language_key: row.language,
            lemma_form: LemmaForm::new(&row.lemma, row.gender, row.number, row.case),
            token: row.token,
            cumulative_confidence: row.cumulative_confidence,
            supporting_translations: row.supporters,
        });
    }
    Ok(entries)
}
