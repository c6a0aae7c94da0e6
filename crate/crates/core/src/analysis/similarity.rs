use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::spearman;
use crate::consensus::ConsensusEntry;
use crate::corpus::LemmaForm;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimilarityEdge {
    pub language_a: String,
    pub language_b: String,
    pub rho: f64,
    /// Lemma forms both languages answered.
    pub n: usize,
}

/// Per-language confidence by lemma form; unbounded values become `+inf`
/// so they take the top ranks.
pub type ConfidenceProfile = BTreeMap<LemmaForm, f64>;

pub fn confidence_profiles(entries: &[ConsensusEntry]) -> BTreeMap<String, ConfidenceProfile> {
    let mut out: BTreeMap<String, ConfidenceProfile> = BTreeMap::new();
    for e in entries {
        out.entry(e.language_key.clone())
            .or_default()
            .insert(e.lemma_form.clone(), e.cumulative_confidence.as_f64());
    }
    out
}

/// Rank correlation over the lemma forms two languages share, with the
/// shared count. `None` when it is undefined.
pub fn pair_similarity(a: &ConfidenceProfile, b: &ConfidenceProfile) -> Option<(f64, usize)> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = a
        .iter()
        .filter_map(|(form, x)| b.get(form).map(|y| (*x, *y)))
        .unzip();
    spearman(&xs, &ys).map(|rho| (rho, xs.len()))
}

/// All-pairs language similarity. Pairs sharing fewer than `min_shared`
/// forms, or with an undefined correlation, get no edge. Edges come back
/// sorted with `language_a < language_b`.
pub fn similarity_graph(entries: &[ConsensusEntry], min_shared: usize) -> Vec<SimilarityEdge> {
    let profiles = confidence_profiles(entries);
    let langs: Vec<(&String, &ConfidenceProfile)> = profiles.iter().collect();
    let pairs: Vec<(usize, usize)> = (0..langs.len())
        .flat_map(|i| (i + 1..langs.len()).map(move |j| (i, j)))
        .collect();
    pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let (rho, n) = pair_similarity(langs[i].1, langs[j].1)?;
            (n >= min_shared).then(|| SimilarityEdge {
                language_a: langs[i].0.clone(),
                language_b: langs[j].0.clone(),
                rho,
                n,
            })
        })
        .collect()
}
