use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::SimilarityEdge;
use crate::consensus::ConsensusEntry;

pub const DEFAULT_TOP_K: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplorerNode {
    pub id: String,
    pub label: String,
    pub lemma_count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplorerLink {
    pub source: String,
    pub target: String,
    pub rho: f64,
    pub n: usize,
}

/// The graph document the web explorer loads.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplorerGraph {
    pub nodes: Vec<ExplorerNode>,
    pub links: Vec<ExplorerLink>,
}

/// One node per language with consensus entries. A link survives when it
/// is among the `top_k` strongest of either endpoint; edges to languages
/// without entries are dropped.
pub fn explorer_graph(
    entries: &[ConsensusEntry],
    edges: &[SimilarityEdge],
    top_k: usize,
) -> ExplorerGraph {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for e in entries {
        *counts.entry(&e.language_key).or_default() += 1;
    }
    let edges: Vec<&SimilarityEdge> = edges
        .iter()
        .filter(|e| {
            counts.contains_key(e.language_a.as_str()) && counts.contains_key(e.language_b.as_str())
        })
        .collect();

    let mut incident: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        incident.entry(&e.language_a).or_default().push(i);
        incident.entry(&e.language_b).or_default().push(i);
    }
    let mut keep = BTreeSet::new();
    for (lang, mut ids) in incident {
        let other = |i: usize| {
            let e = edges[i];
            if e.language_a == lang {
                &e.language_b
            } else {
                &e.language_a
            }
        };
        ids.sort_by(|&a, &b| {
            edges[b]
                .rho
                .total_cmp(&edges[a].rho)
                .then_with(|| other(a).cmp(other(b)))
        });
        keep.extend(ids.into_iter().take(top_k));
    }

    let mut links: Vec<ExplorerLink> = keep
        .into_iter()
        .map(|i| {
            let e = edges[i];
            ExplorerLink {
                source: e.language_a.clone(),
                target: e.language_b.clone(),
                rho: e.rho,
                n: e.n,
            }
        })
        .collect();
    links.sort_by(|a, b| (&a.source, &a.target).cmp(&(&b.source, &b.target)));

    ExplorerGraph {
        nodes: counts
            .into_iter()
            .map(|(id, lemma_count)| ExplorerNode {
                id: id.to_string(),
                label: id.to_string(),
                lemma_count,
            })
            .collect(),
        links,
    }
}
