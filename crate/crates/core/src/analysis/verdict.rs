use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use crate::corpus::LemmaForm;
use crate::error::{Error, Result};

/// A human judgement of one extracted word. Kept exactly as given, even
/// when the judgement itself is wrong.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationVerdict {
    pub language_key: String,
    pub lemma_form: LemmaForm,
    pub extracted_token: String,
    pub correct: bool,
}

pub fn load_verdicts(path: &Path) -> Result<Vec<EvaluationVerdict>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_verdicts(file, path)
}

/// Verdict TSV: `language, lemma, gender, number, case, token, verdict`
/// where verdict is `correct` or `incorrect`.
pub fn read_verdicts<R: Read>(reader: R, path: &Path) -> Result<Vec<EvaluationVerdict>> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        };
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 7 {
            return Err(err(format!(
                "expected 7 tab-separated columns, found {}",
                cols.len()
            )));
        }
        let correct = match cols[6] {
            "correct" => true,
            "incorrect" => false,
            other => return Err(err(format!("bad verdict {other:?}"))),
        };
        out.push(EvaluationVerdict {
            language_key: cols[0].to_string(),
            lemma_form: LemmaForm::new(
                cols[1],
                cols[2].parse().map_err(err)?,
                cols[3].parse().map_err(err)?,
                cols[4].parse().map_err(err)?,
            ),
            extracted_token: cols[5].to_string(),
            correct,
        });
    }
    Ok(out)
}

/// (correct, total) per (language, form, token).
pub(crate) type VerdictTally<'a> = HashMap<(&'a str, &'a LemmaForm, &'a str), (usize, usize)>;

pub(crate) fn tally(verdicts: &[EvaluationVerdict]) -> VerdictTally<'_> {
    let mut out: VerdictTally = HashMap::new();
    for v in verdicts {
        let e = out
            .entry((&v.language_key, &v.lemma_form, &v.extracted_token))
            .or_default();
        e.0 += v.correct as usize;
        e.1 += 1;
    }
    out
}
