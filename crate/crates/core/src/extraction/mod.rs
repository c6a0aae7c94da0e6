//! Lemma-form alignment: verse sets, exact binomial scoring of candidate
//! tokens, winner selection and confidence.

mod align;
mod binomial;
mod confidence;
mod engine;

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{Case, Gender, LemmaForm, Number};
use crate::error::{Error, Result};
use crate::tokenizer::{ExtractionSummary, TokenizationMethod};

pub use align::{
    build_verse_sets, choose_winner, extract, score_candidates, CandidateScore, ContingencyTable,
    ExtractOptions, PreparedTranslation, VerseSets,
};
pub use binomial::binom_sf_log10;
pub use confidence::Confidence;
pub use engine::{run_extraction, ExtractionJob};

/// The token chosen for one lemma form in one translation.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtractionRecord {
    pub translation_id: String,
    pub lemma_form: LemmaForm,
    pub method: TokenizationMethod,
    pub token: String,
    pub best_neg_log10_p: f64,
    /// Zero when there was no runner-up.
    pub second_neg_log10_p: f64,
    pub confidence: Confidence,
}

impl ExtractionRecord {
    /// Output order: translation, lemma, number, case, gender, method.
    pub fn sort_key(&self) -> (&str, &LemmaForm, TokenizationMethod) {
        (&self.translation_id, &self.lemma_form, self.method)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordRow {
    translation_id: String,
    lemma: String,
    gender: Gender,
    number: Number,
    case: Case,
    method: TokenizationMethod,
    token: String,
    best_nlp: f64,
    second_nlp: f64,
    confidence: Confidence,
}

impl From<&ExtractionRecord> for RecordRow {
    fn from(r: &ExtractionRecord) -> Self {
        RecordRow {
            translation_id: r.translation_id.clone(),
            lemma: r.lemma_form.lemma.clone(),
            gender: r.lemma_form.gender,
            number: r.lemma_form.number,
            case: r.lemma_form.case,
            method: r.method,
            token: r.token.clone(),
            best_nlp: r.best_neg_log10_p,
            second_nlp: r.second_neg_log10_p,
            confidence: r.confidence,
        }
    }
}

impl From<RecordRow> for ExtractionRecord {
    fn from(r: RecordRow) -> Self {
        ExtractionRecord {
            translation_id: r.translation_id,
            lemma_form: LemmaForm::new(&r.lemma, r.gender, r.number, r.case),
            method: r.method,
            token: r.token,
            best_neg_log10_p: r.best_nlp,
            second_neg_log10_p: r.second_nlp,
            confidence: r.confidence,
        }
    }
}

pub fn write_records_to<W: Write>(
    out: &mut W,
    records: &[ExtractionRecord],
) -> std::io::Result<()> {
    for r in records {
        let line = serde_json::to_string(&RecordRow::from(r)).expect("record serializes");
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn write_records(path: &Path, records: &[ExtractionRecord]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_records_to(&mut out, records)
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path, e))
}

pub fn read_records(path: &Path) -> Result<Vec<ExtractionRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut records = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let row: RecordRow = serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: format!("bad extraction record: {e}"),
        })?;
        records.push(row.into());
    }
    Ok(records)
}

/// Groups records into per-(translation, method) answer lists.
pub fn summarize(records: &[ExtractionRecord]) -> Vec<ExtractionSummary> {
    let mut groups: std::collections::BTreeMap<(&str, TokenizationMethod), Vec<String>> =
        Default::default();
    for r in records {
        groups
            .entry((&r.translation_id, r.method))
            .or_default()
            .push(r.token.clone());
    }
    groups
        .into_iter()
        .map(|((id, method), tokens)| ExtractionSummary {
            translation_id: id.to_string(),
            method,
            tokens,
        })
        .collect()
}
