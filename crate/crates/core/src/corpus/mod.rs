//! Verse-aligned translations, the annotated source treebank, and the
//! selection of lemma forms to align.

mod annotation;
mod io;
mod select;
mod translation;
mod verse;

pub use annotation::{AnnotatedToken, Case, Gender, LemmaForm, Number, NOUN};
pub use io::{
    load_annotations, load_annotations_with, load_corpus, load_corpus_with, read_annotations,
    read_corpus, write_annotations, write_annotations_to, write_corpus, write_corpus_to, Format,
    LoadOptions,
};
pub use select::{select_lemma_forms, FunnelCounts, LemmaOccurrenceIndex, LemmaSelection};
pub use translation::{language_key, Translation};
pub use verse::{Book, VerseRef, GOSPELS, NEW_TESTAMENT};
