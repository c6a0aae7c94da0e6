use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{binom_sf_log10, Confidence, ExtractionRecord};
use crate::corpus::{LemmaForm, LemmaOccurrenceIndex, Translation, VerseRef};
use crate::tokenizer::{tokenize_verse, TokenizationMethod};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExtractOptions {
    /// Treat empty-text verses as captured.
    pub count_empty_verses: bool,
}

/// Token presence counts for one candidate.
///
/// `x`/`y`: verses of V with/without the token; `z`/`w`: the same for U.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub x: u64,
    pub y: u64,
    pub z: u64,
    pub w: u64,
}

impl ContingencyTable {
    pub fn trials(&self) -> u64 {
        self.x + self.y
    }

    pub fn total(&self) -> u64 {
        self.x + self.y + self.z + self.w
    }

    /// Share of all eligible verses (V and U pooled) containing the token.
    pub fn baseline(&self) -> f64 {
        (self.x + self.z) as f64 / self.total() as f64
    }

    pub fn neg_log10_p(&self) -> f64 {
        binom_sf_log10(self.x, self.trials(), self.baseline())
            .expect("contingency table yields a valid binomial test")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateScore {
    pub token: String,
    pub table: ContingencyTable,
    pub neg_log10_p: f64,
}

impl CandidateScore {
    fn new(token: String, table: ContingencyTable) -> Self {
        let neg_log10_p = table.neg_log10_p();
        CandidateScore {
            token,
            table,
            neg_log10_p,
        }
    }
}

/// Descending by score; equal scores by token for a stable listing.
fn sort_scores(scores: &mut [CandidateScore]) {
    scores.sort_by(|a, b| {
        b.neg_log10_p
            .total_cmp(&a.neg_log10_p)
            .then_with(|| a.token.cmp(&b.token))
    });
}

/// V: captured verses holding the lemma in this form. U: captured verses
/// holding the lemma in no form at all.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerseSets {
    pub v: BTreeSet<VerseRef>,
    pub u: BTreeSet<VerseRef>,
}

pub fn build_verse_sets(
    translation: &Translation,
    form: &LemmaForm,
    index: &LemmaOccurrenceIndex,
    opts: ExtractOptions,
) -> VerseSets {
    let empty = BTreeSet::new();
    let in_form = index.form_verses(form).unwrap_or(&empty);
    let in_lemma = index.lemma_verses(&form.lemma).unwrap_or(&empty);
    let mut sets = VerseSets::default();
    for (verse, _) in translation.captured_verses(opts.count_empty_verses) {
        if in_form.contains(verse) {
            sets.v.insert(*verse);
        } else if !in_lemma.contains(verse) {
            sets.u.insert(*verse);
        }
    }
    sets
}

fn distinct_tokens(text: &str, method: TokenizationMethod) -> BTreeSet<String> {
    tokenize_verse(text, method).into_iter().collect()
}

/// Scores every token of the V verses by re-tokenizing V and U directly.
///
/// This is the reference path; [`PreparedTranslation`] computes the same
/// tables from precomputed document frequencies.
pub fn score_candidates(
    translation: &Translation,
    method: TokenizationMethod,
    sets: &VerseSets,
) -> Vec<CandidateScore> {
    if sets.v.is_empty() {
        return Vec::new();
    }
    let mut in_v: HashMap<String, u64> = HashMap::new();
    for verse in &sets.v {
        for t in distinct_tokens(translation.text(verse).unwrap_or(""), method) {
            *in_v.entry(t).or_default() += 1;
        }
    }
    let mut in_u: HashMap<String, u64> = HashMap::new();
    for verse in &sets.u {
        for t in distinct_tokens(translation.text(verse).unwrap_or(""), method) {
            if in_v.contains_key(&t) {
                *in_u.entry(t).or_default() += 1;
            }
        }
    }
    let v_len = sets.v.len() as u64;
    let u_len = sets.u.len() as u64;
    let mut scores: Vec<CandidateScore> = in_v
        .into_iter()
        .map(|(token, x)| {
            let z = in_u.get(&token).copied().unwrap_or(0);
            let table = ContingencyTable {
                x,
                y: v_len - x,
                z,
                w: u_len - z,
            };
            CandidateScore::new(token, table)
        })
        .collect();
    sort_scores(&mut scores);
    scores
}

/// Turns a sorted score list into a record. Abstains when the top score is
/// shared: identical tables always produce bit-identical scores, so equal
/// scores are the tie test.
pub fn choose_winner(
    translation_id: &str,
    form: &LemmaForm,
    method: TokenizationMethod,
    scores: &[CandidateScore],
) -> Option<ExtractionRecord> {
    let best = scores.first()?;
    let second = scores.get(1).map_or(0.0, |s| s.neg_log10_p);
    if scores.len() > 1 && second == best.neg_log10_p {
        return None;
    }
    Some(ExtractionRecord {
        translation_id: translation_id.to_string(),
        lemma_form: form.clone(),
        method,
        token: best.token.clone(),
        best_neg_log10_p: best.neg_log10_p,
        second_neg_log10_p: second,
        confidence: Confidence::ratio(best.neg_log10_p, second),
    })
}

/// A translation tokenized once for one method, with per-token counts of
/// captured verses, so each lemma form only touches its own verses.
pub struct PreparedTranslation<'a> {
    translation: &'a Translation,
    method: TokenizationMethod,
    vocab: Vec<String>,
    verse_tokens: HashMap<VerseRef, Vec<u32>>,
    doc_freq: Vec<u64>,
}

impl<'a> PreparedTranslation<'a> {
    pub fn new(
        translation: &'a Translation,
        method: TokenizationMethod,
        opts: ExtractOptions,
    ) -> Self {
        let mut ids: HashMap<String, u32> = HashMap::new();
        let mut vocab = Vec::new();
        let mut doc_freq: Vec<u64> = Vec::new();
        let mut verse_tokens = HashMap::new();
        for (verse, text) in translation.captured_verses(opts.count_empty_verses) {
            let mut toks: Vec<u32> = distinct_tokens(text, method)
                .into_iter()
                .map(|t| {
                    *ids.entry(t).or_insert_with_key(|t| {
                        vocab.push(t.clone());
                        doc_freq.push(0);
                        (vocab.len() - 1) as u32
                    })
                })
                .collect();
            toks.sort_unstable();
            for &t in &toks {
                doc_freq[t as usize] += 1;
            }
            verse_tokens.insert(*verse, toks);
        }
        PreparedTranslation {
            translation,
            method,
            vocab,
            verse_tokens,
            doc_freq,
        }
    }

    pub fn translation(&self) -> &Translation {
        self.translation
    }

    pub fn method(&self) -> TokenizationMethod {
        self.method
    }

    pub fn captured(&self) -> usize {
        self.verse_tokens.len()
    }

    /// Same result as [`score_candidates`] over [`build_verse_sets`].
    pub fn score(&self, form: &LemmaForm, index: &LemmaOccurrenceIndex) -> Vec<CandidateScore> {
        let empty = BTreeSet::new();
        let in_form = index.form_verses(form).unwrap_or(&empty);
        let in_lemma = index.lemma_verses(&form.lemma).unwrap_or(&empty);

        let v: Vec<&Vec<u32>> = in_form
            .iter()
            .filter_map(|r| self.verse_tokens.get(r))
            .collect();
        if v.is_empty() {
            return Vec::new();
        }
        // captured verses holding the lemma only in other forms
        let excluded: Vec<&Vec<u32>> = in_lemma
            .iter()
            .filter(|r| !in_form.contains(r))
            .filter_map(|r| self.verse_tokens.get(r))
            .collect();

        let mut in_v: HashMap<u32, (u64, u64)> = HashMap::new();
        for toks in &v {
            for &t in *toks {
                in_v.entry(t).or_default().0 += 1;
            }
        }
        for toks in &excluded {
            for t in *toks {
                if let Some(e) = in_v.get_mut(t) {
                    e.1 += 1;
                }
            }
        }

        let v_len = v.len() as u64;
        let u_len = (self.captured() - excluded.len()) as u64 - v_len;
        let mut scores: Vec<CandidateScore> = in_v
            .into_iter()
            .map(|(t, (x, excl))| {
                let z = self.doc_freq[t as usize] - x - excl;
                let table = ContingencyTable {
                    x,
                    y: v_len - x,
                    z,
                    w: u_len - z,
                };
                CandidateScore::new(self.vocab[t as usize].clone(), table)
            })
            .collect();
        sort_scores(&mut scores);
        scores
    }

    pub fn extract_form(
        &self,
        form: &LemmaForm,
        index: &LemmaOccurrenceIndex,
    ) -> Option<ExtractionRecord> {
        let scores = self.score(form, index);
        choose_winner(&self.translation.translation_id, form, self.method, &scores)
    }
}

/// Runs the alignment for one translation and method over `forms`, in
/// form order. Forms whose best candidate is tied, or that have no
/// candidates, produce no record.
pub fn extract(
    translation: &Translation,
    forms: &[LemmaForm],
    index: &LemmaOccurrenceIndex,
    method: TokenizationMethod,
    opts: ExtractOptions,
) -> Vec<ExtractionRecord> {
    let prepared = PreparedTranslation::new(translation, method, opts);
    let mut records: Vec<ExtractionRecord> = forms
        .iter()
        .filter_map(|f| prepared.extract_form(f, index))
        .collect();
    records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    records
}
