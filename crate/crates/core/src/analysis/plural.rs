use std::collections::BTreeMap;

use serde::Serialize;

use crate::consensus::ConsensusEntry;
use crate::corpus::{Case, Gender, Number};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_DISTANCE_RATIO: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PluralCheck {
    Consistent,
    Suspect,
}

/// Character edit distance over the longer length.
pub fn normalized_distance(a: &str, b: &str) -> f64 {
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return 0.0;
    }
    strsim::levenshtein(a, b) as f64 / longest as f64
}

/// Flags a plural answer that shares too little with its singular.
pub fn plural_consistency(
    singular: &str,
    plural: &str,
    max_distance_ratio: f64,
) -> Result<PluralCheck> {
    if singular.is_empty() || plural.is_empty() {
        return Err(Error::Argument(
            "plural check needs two non-empty tokens".into(),
        ));
    }
    Ok(
        if normalized_distance(singular, plural) > max_distance_ratio {
            PluralCheck::Suspect
        } else {
            PluralCheck::Consistent
        },
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PluralFinding {
    pub language_key: String,
    pub lemma: String,
    pub gender: Gender,
    pub case: Case,
    pub singular: String,
    pub plural: String,
    pub distance_ratio: f64,
    pub check: PluralCheck,
}

/// Pairs singular and plural answers sharing language, lemma, gender and
/// case, and checks each pair.
pub fn plural_findings(entries: &[ConsensusEntry], max_distance_ratio: f64) -> Vec<PluralFinding> {
    type Key<'a> = (&'a str, &'a str, Gender, Case);
    let mut pairs: BTreeMap<Key, (Option<&str>, Option<&str>)> = BTreeMap::new();
    for e in entries {
        let f = &e.lemma_form;
        let slot = pairs
            .entry((&e.language_key, &f.lemma, f.gender, f.case))
            .or_default();
        match f.number {
            Number::Singular => slot.0 = Some(&e.token),
            Number::Plural => slot.1 = Some(&e.token),
        }
    }
    pairs
        .into_iter()
        .filter_map(|((lang, lemma, gender, case), pair)| {
            let (sg, pl) = (pair.0?, pair.1?);
            let check = plural_consistency(sg, pl, max_distance_ratio).ok()?;
            Some(PluralFinding {
                language_key: lang.to_string(),
                lemma: lemma.to_string(),
                gender,
                case,
                singular: sg.to_string(),
                plural: pl.to_string(),
                distance_ratio: normalized_distance(sg, pl),
                check,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shared_stems_pass() {
        assert_eq!(
            plural_consistency("Zeit", "Zeiten", 0.5).unwrap(),
            PluralCheck::Consistent
        );
        assert_eq!(
            plural_consistency("tomb", "tombs", 0.5).unwrap(),
            PluralCheck::Consistent
        );
        assert_eq!(
            plural_consistency("Zeit", "längere", 0.5).unwrap(),
            PluralCheck::Suspect
        );
        assert!(plural_consistency("", "x", 0.5).is_err());
    }

    #[test]
    fn counts_characters_not_bytes() {
        // one substitution over three characters
        assert!((normalized_distance("χρό", "χρα") - 1.0 / 3.0).abs() < 1e-12);
    }
}
