use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::{AnnotatedToken, LemmaForm, Number, VerseRef};

/// Verse sets per lemma form and per lemma (union over all of its forms).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LemmaOccurrenceIndex {
    pub form_to_verses: HashMap<LemmaForm, BTreeSet<VerseRef>>,
    pub lemma_to_verses: HashMap<String, BTreeSet<VerseRef>>,
}

impl LemmaOccurrenceIndex {
    /// Indexes every noun token with complete morphology.
    pub fn build(tokens: &[AnnotatedToken]) -> Self {
        let mut index = LemmaOccurrenceIndex::default();
        for t in tokens.iter().filter(|t| t.is_noun()) {
            if let Some(form) = t.lemma_form() {
                index
                    .form_to_verses
                    .entry(form)
                    .or_default()
                    .insert(t.verse);
                index
                    .lemma_to_verses
                    .entry(t.lemma.clone())
                    .or_default()
                    .insert(t.verse);
            }
        }
        index
    }

    pub fn form_verses(&self, form: &LemmaForm) -> Option<&BTreeSet<VerseRef>> {
        self.form_to_verses.get(form)
    }

    pub fn lemma_verses(&self, lemma: &str) -> Option<&BTreeSet<VerseRef>> {
        self.lemma_to_verses.get(lemma)
    }
}

/// Lemma and form counts after each stage of the selection funnel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FunnelCounts {
    pub noun_lemmas: usize,
    pub noun_forms: usize,
    pub common_lemmas: usize,
    pub common_forms: usize,
    pub repeated_lemmas: usize,
    pub repeated_forms: usize,
    pub paired_lemmas: usize,
    pub paired_forms: usize,
}

#[derive(Clone, Debug)]
pub struct LemmaSelection {
    pub forms: Vec<LemmaForm>,
    pub index: LemmaOccurrenceIndex,
    pub funnel: FunnelCounts,
}

impl LemmaSelection {
    pub fn lemmas(&self) -> BTreeSet<&str> {
        self.forms.iter().map(|f| f.lemma.as_str()).collect()
    }
}

fn starts_uppercase(lemma: &str) -> bool {
    lemma.chars().next().is_some_and(char::is_uppercase)
}

fn lemma_count(forms: &BTreeMap<LemmaForm, BTreeSet<VerseRef>>) -> usize {
    forms
        .keys()
        .map(|f| f.lemma.as_str())
        .collect::<BTreeSet<_>>()
        .len()
}

/// Chooses the lemma forms to align:
///
/// 1. nouns only;
/// 2. lemmas starting with an uppercase code point (proper nouns) dropped;
/// 3. forms seen in fewer than two distinct verses dropped;
/// 4. lemmas kept only if a singular and a plural form both survive.
///
/// The occurrence index covers every noun of the input, so verses where a
/// lemma appears in a filtered-out form are still known to contain it.
pub fn select_lemma_forms(tokens: &[AnnotatedToken]) -> LemmaSelection {
    let index = LemmaOccurrenceIndex::build(tokens);

    let mut nouns: BTreeMap<LemmaForm, BTreeSet<VerseRef>> = BTreeMap::new();
    for t in tokens.iter().filter(|t| t.is_noun()) {
        if let Some(form) = t.lemma_form() {
            nouns.entry(form).or_default().insert(t.verse);
        }
    }
    let mut funnel = FunnelCounts {
        noun_lemmas: lemma_count(&nouns),
        noun_forms: nouns.len(),
        ..Default::default()
    };

    let common: BTreeMap<_, _> = nouns
        .into_iter()
        .filter(|(f, _)| !starts_uppercase(&f.lemma))
        .collect();
    funnel.common_lemmas = lemma_count(&common);
    funnel.common_forms = common.len();

    let repeated: BTreeMap<_, _> = common
        .into_iter()
        .filter(|(_, verses)| verses.len() >= 2)
        .collect();
    funnel.repeated_lemmas = lemma_count(&repeated);
    funnel.repeated_forms = repeated.len();

    let mut numbers: HashMap<&str, (bool, bool)> = HashMap::new();
    for f in repeated.keys() {
        let e = numbers.entry(f.lemma.as_str()).or_default();
        match f.number {
            Number::Singular => e.0 = true,
            Number::Plural => e.1 = true,
        }
    }
    let forms: Vec<LemmaForm> = repeated
        .keys()
        .filter(|f| numbers[f.lemma.as_str()] == (true, true))
        .cloned()
        .collect();
    funnel.paired_lemmas = forms
        .iter()
        .map(|f| f.lemma.as_str())
        .collect::<BTreeSet<_>>()
        .len();
    funnel.paired_forms = forms.len();

    LemmaSelection {
        forms,
        index,
        funnel,
    }
}
