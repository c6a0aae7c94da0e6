//! Noun vocabulary extraction from verse-aligned parallel corpora.
//!
//! Each annotated source lemma form is aligned against the target verses
//! that contain it with a one-sided exact binomial test; the token that
//! co-occurs least plausibly by chance is taken as its translation. On top
//! of that sit script-structure detection, multi-translation consensus,
//! accuracy filters and a language similarity graph.

pub mod analysis;
pub mod consensus;
pub mod corpus;
pub mod error;
pub mod extraction;
pub mod synth;
pub mod tokenizer;

pub use error::{Error, Result};
