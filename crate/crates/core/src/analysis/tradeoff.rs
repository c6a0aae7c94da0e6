use serde::Serialize;

use super::verdict::{tally, EvaluationVerdict};
use crate::consensus::ConsensusEntry;
use crate::extraction::Confidence;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TradeoffPoint {
    /// Entries with cumulative confidence at or above this are kept.
    pub threshold: Confidence,
    pub vocabulary_size: usize,
    /// Verdicts matching a kept entry.
    pub evaluated: usize,
    /// `None` when nothing kept was evaluated.
    pub accuracy: Option<f64>,
}

/// Vocabulary size and accuracy at every distinct confidence cut: zero,
/// each finite value present, then unbounded only.
pub fn threshold_sweep(
    entries: &[ConsensusEntry],
    verdicts: &[EvaluationVerdict],
) -> Vec<TradeoffPoint> {
    let tallies = tally(verdicts);
    let mut cuts = vec![Confidence::Finite(0.0)];
    let mut finite: Vec<Confidence> = entries
        .iter()
        .map(|e| e.cumulative_confidence)
        .filter(|c| !c.is_unbounded())
        .collect();
    finite.sort();
    finite.dedup();
    cuts.extend(finite.into_iter().filter(|c| *c > Confidence::Finite(0.0)));
    cuts.push(Confidence::Unbounded);

    cuts.into_iter()
        .map(|threshold| {
            let (mut size, mut correct, mut evaluated) = (0, 0, 0);
            for e in entries
                .iter()
                .filter(|e| e.cumulative_confidence >= threshold)
            {
                size += 1;
                if let Some(&(c, t)) =
                    tallies.get(&(e.language_key.as_str(), &e.lemma_form, e.token.as_str()))
                {
                    correct += c;
                    evaluated += t;
                }
            }
            TradeoffPoint {
                threshold,
                vocabulary_size: size,
                evaluated,
                accuracy: (evaluated > 0).then(|| correct as f64 / evaluated as f64),
            }
        })
        .collect()
}

pub fn write_tradeoff_csv<W: std::io::Write>(
    out: &mut W,
    points: &[TradeoffPoint],
) -> std::io::Result<()> {
    writeln!(out, "threshold,vocabulary_size,evaluated,accuracy")?;
    for p in points {
        let acc = p.accuracy.map(|a| a.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{}",
            p.threshold, p.vocabulary_size, p.evaluated, acc
        )?;
    }
    Ok(())
}
