//! Verse tokenization and written-structure classification.
//!
//! Three strategies cover the writing systems in the corpus: whitespace
//! words (`unigram`), single code points (`unitoken`) for logographic
//! scripts, and sliding four-code-point windows (`quadtoken`) as a stand-in
//! for alphabetic scripts without word separators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use unicode_general_category::{get_general_category, GeneralCategory};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenizationMethod {
    Unigram,
    Unitoken,
    Quadtoken,
}

impl TokenizationMethod {
    pub const ALL: [TokenizationMethod; 3] = [
        TokenizationMethod::Unigram,
        TokenizationMethod::Unitoken,
        TokenizationMethod::Quadtoken,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TokenizationMethod::Unigram => "unigram",
            TokenizationMethod::Unitoken => "unitoken",
            TokenizationMethod::Quadtoken => "quadtoken",
        }
    }
}

impl fmt::Display for TokenizationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TokenizationMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "unigram" => Ok(TokenizationMethod::Unigram),
            "unitoken" => Ok(TokenizationMethod::Unitoken),
            "quadtoken" => Ok(TokenizationMethod::Quadtoken),
            _ => Err(format!(
                "unknown tokenization method {s:?} (expected unigram, unitoken or quadtoken)"
            )),
        }
    }
}

pub fn is_punctuation(c: char) -> bool {
    matches!(
        get_general_category(c),
        GeneralCategory::ConnectorPunctuation
            | GeneralCategory::DashPunctuation
            | GeneralCategory::OpenPunctuation
            | GeneralCategory::ClosePunctuation
            | GeneralCategory::InitialPunctuation
            | GeneralCategory::FinalPunctuation
            | GeneralCategory::OtherPunctuation
    )
}

pub fn tokenize_verse(text: &str, method: TokenizationMethod) -> Vec<String> {
    match method {
        TokenizationMethod::Unigram => unigrams(text),
        TokenizationMethod::Unitoken => text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(String::from)
            .collect(),
        TokenizationMethod::Quadtoken => quadtokens(text),
    }
}

/// Whitespace-separated words with leading and trailing punctuation split
/// off as one token per code point. Word-internal marks stay attached.
fn unigrams(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for word in text.split_whitespace() {
        let chars: Vec<char> = word.chars().collect();
        let start = chars
            .iter()
            .position(|c| !is_punctuation(*c))
            .unwrap_or(chars.len());
        let end = chars
            .iter()
            .rposition(|c| !is_punctuation(*c))
            .map_or(start, |i| i + 1);
        out.extend(chars[..start].iter().map(|c| c.to_string()));
        if start < end {
            out.push(chars[start..end].iter().collect());
        }
        out.extend(chars[end..].iter().map(|c| c.to_string()));
    }
    out
}

fn quadtokens(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    match chars.len() {
        0 => Vec::new(),
        n if n < 4 => vec![chars.iter().collect()],
        _ => chars.windows(4).map(|w| w.iter().collect()).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScriptStructure {
    AlphabetWordMarkers,
    NonAlphabetic,
    AlphabetNoWordMarkers,
}

impl ScriptStructure {
    pub fn chosen_method(&self) -> TokenizationMethod {
        match self {
            ScriptStructure::AlphabetWordMarkers => TokenizationMethod::Unigram,
            ScriptStructure::NonAlphabetic => TokenizationMethod::Unitoken,
            ScriptStructure::AlphabetNoWordMarkers => TokenizationMethod::Quadtoken,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ScriptStructure::AlphabetWordMarkers => "alphabet_word_markers",
            ScriptStructure::NonAlphabetic => "non_alphabetic",
            ScriptStructure::AlphabetNoWordMarkers => "alphabet_no_word_markers",
        }
    }

    /// Human-readable description, e.g. "alphabet, word markers".
    pub fn describe(&self) -> &'static str {
        match self {
            ScriptStructure::AlphabetWordMarkers => "alphabet, word markers",
            ScriptStructure::NonAlphabetic => "non-alphabetic",
            ScriptStructure::AlphabetNoWordMarkers => "alphabetic, no word markers",
        }
    }
}

impl fmt::Display for ScriptStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScriptStructure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "alphabet_word_markers" => Ok(ScriptStructure::AlphabetWordMarkers),
            "non_alphabetic" => Ok(ScriptStructure::NonAlphabetic),
            "alphabet_no_word_markers" => Ok(ScriptStructure::AlphabetNoWordMarkers),
            _ => Err(format!("unknown script structure {s:?}")),
        }
    }
}

/// Thresholds for [`detect_script_structure`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StructureThresholds {
    /// Minimum distinct unigram translations for a word-marker script.
    pub unigram_threshold: usize,
    /// Minimum share of distinct unitoken answers for a non-alphabetic script.
    pub distinctness_ratio: f64,
}

impl Default for StructureThresholds {
    fn default() -> Self {
        StructureThresholds {
            unigram_threshold: 160,
            distinctness_ratio: 0.5,
        }
    }
}

/// The answers one translation produced under one tokenization method:
/// one token per lemma form that received a translation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractionSummary {
    pub translation_id: String,
    pub method: TokenizationMethod,
    pub tokens: Vec<String>,
}

impl ExtractionSummary {
    pub fn distinct(&self) -> usize {
        self.tokens.iter().collect::<BTreeSet<_>>().len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureReport {
    pub structure: ScriptStructure,
    pub method: TokenizationMethod,
    /// Most distinct unigram answers of any translation.
    pub u: usize,
    /// Most distinct unitoken answers of any translation.
    pub v: usize,
    /// Unitoken answers, duplicates included, of the translation giving `v`.
    pub w: usize,
    pub unitoken_translation: Option<String>,
}

/// Pure decision rule on the three statistics.
pub fn classify(u: usize, v: usize, w: usize, thresholds: StructureThresholds) -> ScriptStructure {
    if u >= thresholds.unigram_threshold {
        ScriptStructure::AlphabetWordMarkers
    } else if v as f64 >= thresholds.distinctness_ratio * w as f64 {
        ScriptStructure::NonAlphabetic
    } else {
        ScriptStructure::AlphabetNoWordMarkers
    }
}

/// Classifies the written structure of one language from the unigram and
/// unitoken answers of all its translations.
///
/// When several translations share the largest distinct unitoken count, the
/// one with the smallest translation id supplies `w`.
pub fn detect_script_structure(
    summaries: &[ExtractionSummary],
    thresholds: StructureThresholds,
) -> Result<StructureReport> {
    let relevant: Vec<&ExtractionSummary> = summaries
        .iter()
        .filter(|s| s.method != TokenizationMethod::Quadtoken)
        .collect();
    if relevant.is_empty() {
        return Err(Error::Classification(
            "no unigram or unitoken extractions available".into(),
        ));
    }

    let u = relevant
        .iter()
        .filter(|s| s.method == TokenizationMethod::Unigram)
        .map(|s| s.distinct())
        .max()
        .unwrap_or(0);

    // (distinct, total) per translation id, ordered by id
    let unitoken: BTreeMap<&str, (usize, usize)> = relevant
        .iter()
        .filter(|s| s.method == TokenizationMethod::Unitoken)
        .map(|s| (s.translation_id.as_str(), (s.distinct(), s.tokens.len())))
        .collect();
    let best = unitoken.iter().fold(
        None::<(&str, usize, usize)>,
        |acc, (id, &(d, t))| match acc {
            Some((_, bd, _)) if bd >= d => acc,
            _ => Some((id, d, t)),
        },
    );
    let (v, w) = best.map_or((0, 0), |(_, d, t)| (d, t));

    let structure = classify(u, v, w, thresholds);
    Ok(StructureReport {
        structure,
        method: structure.chosen_method(),
        u,
        v,
        w,
        unitoken_translation: best.map(|(id, _, _)| id.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use TokenizationMethod::*;

    #[test]
    fn empty_text() {
        for m in TokenizationMethod::ALL {
            assert!(tokenize_verse("", m).is_empty());
            assert!(tokenize_verse(" \t ", m).is_empty());
        }
    }

    #[test]
    fn detaches_edge_punctuation() {
        assert_eq!(tokenize_verse("the tomb.", Unigram), ["the", "tomb", "."]);
        assert_eq!(
            tokenize_verse("(for the Jews' day)", Unigram),
            ["(", "for", "the", "Jews", "'", "day", ")"]
        );
        assert_eq!(tokenize_verse("«ναί»;", Unigram), ["«", "ναί", "»", ";"]);
        assert_eq!(tokenize_verse("...", Unigram), [".", ".", "."]);
    }

    #[test]
    fn internal_marks_stay_attached() {
        assert_eq!(
            tokenize_verse("aujourd'hui well-known", Unigram),
            ["aujourd'hui", "well-known"]
        );
        // symbols are not punctuation
        assert_eq!(tokenize_verse("$5", Unigram), ["$5"]);
    }

    #[test]
    fn unitoken_and_quadtoken() {
        assert_eq!(
            tokenize_verse("太初 有道", Unitoken),
            ["太", "初", "有", "道"]
        );
        assert_eq!(tokenize_verse("ab c", Quadtoken), ["abc"]);
        assert_eq!(tokenize_verse("ab cde", Quadtoken), ["abcd", "bcde"]);
    }

    #[test]
    fn worked_example_counts() {
        let text = "Now in the place where he was crucified there was a garden. \
                    In the garden was a new tomb in which no man had ever yet been laid. \
                    Then because of the Jews' Preparation Day (for the tomb was near at hand) \
                    they laid Jesus there.";
        let toks = tokenize_verse(text, Unigram);
        assert_eq!(toks.len(), 52);
        assert_eq!(toks.iter().collect::<BTreeSet<_>>().len(), 38);
    }

    #[test]
    fn classification_examples() {
        let t = StructureThresholds::default();
        assert_eq!(classify(161, 0, 0, t), ScriptStructure::AlphabetWordMarkers);
        assert_eq!(classify(0, 150, 160, t), ScriptStructure::NonAlphabetic);
        assert_eq!(
            classify(10, 20, 160, t),
            ScriptStructure::AlphabetNoWordMarkers
        );
        assert_eq!(classify(160, 0, 0, t), ScriptStructure::AlphabetWordMarkers);
        assert_eq!(classify(159, 80, 160, t), ScriptStructure::NonAlphabetic);
    }

    fn summary(id: &str, method: TokenizationMethod, tokens: &[&str]) -> ExtractionSummary {
        ExtractionSummary {
            translation_id: id.into(),
            method,
            tokens: tokens.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn detect_binds_v_and_w_to_one_translation() {
        let r = detect_script_structure(
            &[
                summary("a", Unigram, &["x", "y"]),
                summary("b", Unigram, &["x", "y", "z"]),
                summary("a", Unitoken, &["q", "q", "q", "q", "q", "q"]),
                summary("b", Unitoken, &["p", "r", "p", "p", "p"]),
            ],
            StructureThresholds::default(),
        )
        .unwrap();
        assert_eq!((r.u, r.v, r.w), (3, 2, 5));
        assert_eq!(r.unitoken_translation.as_deref(), Some("b"));
        assert_eq!(r.structure, ScriptStructure::AlphabetNoWordMarkers);
        assert_eq!(r.method, Quadtoken);
    }

    #[test]
    fn detect_without_data_fails() {
        assert!(matches!(
            detect_script_structure(&[], StructureThresholds::default()),
            Err(Error::Classification(_))
        ));
        assert!(detect_script_structure(
            &[summary("a", Quadtoken, &["abcd"])],
            StructureThresholds::default()
        )
        .is_err());
    }

    #[test]
    fn structure_method_pairing() {
        assert_eq!(
            ScriptStructure::AlphabetWordMarkers.chosen_method(),
            Unigram
        );
        assert_eq!(ScriptStructure::NonAlphabetic.chosen_method(), Unitoken);
        assert_eq!(
            ScriptStructure::AlphabetNoWordMarkers.chosen_method(),
            Quadtoken
        );
    }

    proptest! {
        #[test]
        fn unitokens_concatenate_to_stripped_text(s in "\\PC{0,40}") {
            let joined: String = tokenize_verse(&s, Unitoken).concat();
            let stripped: String = s.chars().filter(|c| !c.is_whitespace()).collect();
            prop_assert_eq!(joined, stripped);
        }

        #[test]
        fn quadtoken_shape(s in "\\PC{1,40}") {
            let len = s.chars().filter(|c| !c.is_whitespace()).count();
            let toks = tokenize_verse(&s, Quadtoken);
            if len == 0 {
                prop_assert!(toks.is_empty());
            } else {
                prop_assert_eq!(toks.len(), len.saturating_sub(3).max(1));
                if len >= 4 {
                    prop_assert!(toks.iter().all(|t| t.chars().count() == 4));
                }
            }
        }

        #[test]
        fn unigrams_have_no_whitespace(s in "\\PC{0,60}") {
            for t in tokenize_verse(&s, Unigram) {
                prop_assert!(!t.is_empty());
                prop_assert!(!t.chars().any(char::is_whitespace));
            }
        }

        #[test]
        fn unigrams_preserve_content(s in "\\PC{0,60}") {
            let joined: String = tokenize_verse(&s, Unigram).concat();
            let stripped: String = s.chars().filter(|c| !c.is_whitespace()).collect();
            prop_assert_eq!(joined, stripped);
        }
    }
}
