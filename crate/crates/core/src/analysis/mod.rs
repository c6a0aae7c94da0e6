//! Cross-language comparison and evaluation of consensus vocabularies.

mod evaluation;
mod explorer;
mod plural;
mod similarity;
mod spearman;
mod tradeoff;
mod verdict;

pub use evaluation::{
    evaluation_report, fit_through_origin, EvaluationReport, GroupAccuracy, Grouping, RegressionFit,
};
pub use explorer::{explorer_graph, ExplorerGraph, ExplorerLink, ExplorerNode, DEFAULT_TOP_K};
pub use plural::{
    normalized_distance, plural_consistency, plural_findings, PluralCheck, PluralFinding,
    DEFAULT_MAX_DISTANCE_RATIO,
};
pub use similarity::{
    confidence_profiles, pair_similarity, similarity_graph, ConfidenceProfile, SimilarityEdge,
};
pub use spearman::{average_ranks, spearman};
pub use tradeoff::{threshold_sweep, write_tradeoff_csv, TradeoffPoint};
pub use verdict::{load_verdicts, read_verdicts, EvaluationVerdict};
