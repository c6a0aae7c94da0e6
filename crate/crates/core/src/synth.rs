//! Synthetic parallel corpora with a known lexicon.
//!
//! Each lemma form is assigned a set of verses; the target translation
//! carries the form's word in exactly those verses, padded with
//! Zipf-distributed filler. Noise can drop the word or swap it for a
//! per-form alternate. Separate random streams drive the lexicon, verse
//! assignment, filler and noise, so raising a noise rate leaves everything
//! else unchanged and only grows the set of disturbed occurrences.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};

use crate::corpus::{
    write_annotations, write_corpus, AnnotatedToken, Case, Format, Gender, LemmaForm, Number,
    Translation, VerseRef, NOUN,
};
use crate::error::{Error, Result};
use crate::extraction::ExtractionRecord;
use crate::tokenizer::{ScriptStructure, TokenizationMethod};

const CONSONANTS: &[char] = &[
    'b', 'd', 'g', 'h', 'k', 'l', 'm', 'n', 'p', 'r', 's', 't', 'v', 'z',
];
const VOWELS: &[char] = &['a', 'e', 'i', 'o', 'u', 'y'];
const LOGOGRAM_BASE: u32 = 0x4E00;
const LOGOGRAM_COUNT: u32 = 0x9FFF - 0x4E00 + 1;
const FILLER_ATTEMPTS: usize = 64;

const STREAM_LEXICON: u64 = 1;
const STREAM_ASSIGN: u64 = 2;
const STREAM_FILLER: u64 = 3;
const STREAM_NOISE: u64 = 4;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Noise {
    /// Probability an occurrence loses its word.
    pub paraphrase_rate: f64,
    /// Probability a surviving occurrence uses the form's alternate word.
    pub synonym_rate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthSpec {
    pub seed: u64,
    pub num_verses: usize,
    pub lexicon: BTreeMap<LemmaForm, String>,
    pub verses_per_form: usize,
    pub script: ScriptStructure,
    pub noise: Noise,
    pub filler_vocab_size: usize,
    pub zipf_exponent: f64,
    /// Inclusive range of filler words per verse.
    pub filler_per_verse: (usize, usize),
}

impl SynthSpec {
    /// `lemmas` lemmas in singular and plural with generated target words
    /// suited to `script`.
    pub fn new(seed: u64, num_verses: usize, lemmas: usize, script: ScriptStructure) -> SynthSpec {
        let forms = synthetic_forms(lemmas);
        let mut rng = stream(seed, STREAM_LEXICON);
        let mut used = BTreeSet::new();
        let words = match script {
            ScriptStructure::NonAlphabetic => (0..forms.len()).map(logogram).collect(),
            _ => (0..forms.len())
                .map(|_| fresh_word(&mut rng, 3, 3, &mut used))
                .collect::<Vec<_>>(),
        };
        SynthSpec {
            seed,
            num_verses,
            lexicon: forms.into_iter().zip(words).collect(),
            verses_per_form: 4,
            script,
            noise: Noise::default(),
            filler_vocab_size: 2000,
            zipf_exponent: 1.0,
            filler_per_verse: (6, 14),
        }
    }

    pub fn with_noise(mut self, noise: Noise) -> SynthSpec {
        self.noise = noise;
        self
    }

    fn validate(&self) -> Result<()> {
        let spec = |m: String| Err(Error::Spec(m));
        for (name, p) in [
            ("paraphrase_rate", self.noise.paraphrase_rate),
            ("synonym_rate", self.noise.synonym_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return spec(format!("{name} {p} is outside [0, 1]"));
            }
        }
        if self.verses_per_form < 2 {
            return spec(format!(
                "every form needs at least 2 verses, got {}",
                self.verses_per_form
            ));
        }
        if self.verses_per_form > self.num_verses {
            return spec(format!(
                "{} verses per form exceed the {} verses available",
                self.verses_per_form, self.num_verses
            ));
        }
        if self.lexicon.is_empty() {
            return spec("empty lexicon".into());
        }
        let distinct: BTreeSet<&String> = self.lexicon.values().collect();
        if self.noise.synonym_rate == 0.0 && distinct.len() != self.lexicon.len() {
            return spec("lexicon maps two forms to one word".into());
        }
        for word in self.lexicon.values() {
            let ok = match self.script {
                ScriptStructure::NonAlphabetic => word.chars().count() == 1,
                _ => !word.is_empty() && word.chars().all(|c| c.is_alphabetic()),
            };
            if !ok {
                return spec(format!(
                    "word {word:?} does not fit a {} script",
                    self.script.describe()
                ));
            }
        }
        if self.filler_vocab_size == 0 || self.zipf_exponent.is_nan() || self.zipf_exponent <= 0.0 {
            return spec("filler needs a vocabulary and a positive exponent".into());
        }
        if self.filler_per_verse.0 > self.filler_per_verse.1 {
            return spec("filler range is reversed".into());
        }
        let total = self.lexicon.len() * 2 + self.filler_vocab_size;
        if self.script == ScriptStructure::NonAlphabetic && total > LOGOGRAM_COUNT as usize {
            return spec(format!(
                "{total} logograms requested, only {LOGOGRAM_COUNT} available"
            ));
        }
        Ok(())
    }
}

/// `lemmas` lowercase lemmas, each as nominative singular and plural.
pub fn synthetic_forms(lemmas: usize) -> Vec<LemmaForm> {
    let genders = [Gender::Masculine, Gender::Feminine, Gender::Neuter];
    (0..lemmas)
        .flat_map(|i| {
            let lemma = format!("lemma{i:04}");
            let g = genders[i % 3];
            [Number::Singular, Number::Plural]
                .map(|n| LemmaForm::new(&lemma, g, n, Case::Nominative))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthCorpus {
    pub translation: Translation,
    pub annotations: Vec<AnnotatedToken>,
    /// The ground truth: the word each form should extract to.
    pub lexicon: BTreeMap<LemmaForm, String>,
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn logogram(i: usize) -> String {
    char::from_u32(LOGOGRAM_BASE + i as u32)
        .expect("CJK unified ideograph")
        .to_string()
}

fn fresh_word(
    rng: &mut ChaCha8Rng,
    min_syll: usize,
    max_syll: usize,
    used: &mut BTreeSet<String>,
) -> String {
    loop {
        let n = rng.gen_range(min_syll..=max_syll);
        let w: String = (0..n)
            .flat_map(|_| {
                [
                    *CONSONANTS.choose(rng).unwrap(),
                    *VOWELS.choose(rng).unwrap(),
                ]
            })
            .collect();
        if used.insert(w.clone()) {
            return w;
        }
    }
}

fn verse_ref(i: usize) -> VerseRef {
    VerseRef::new("MAT", (i / 40 + 1) as u32, (i % 40 + 1) as u32).expect("valid reference")
}

/// Distinct verse sets per form, sampled without replacement.
fn assign_verses(spec: &SynthSpec) -> Result<Vec<Vec<usize>>> {
    let mut rng = stream(spec.seed, STREAM_ASSIGN);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(spec.lexicon.len());
    for _ in 0..spec.lexicon.len() {
        let mut tries = 0;
        loop {
            let mut set = rand::seq::index::sample(&mut rng, spec.num_verses, spec.verses_per_form)
                .into_vec();
            set.sort_unstable();
            if seen.insert(set.clone()) {
                out.push(set);
                break;
            }
            tries += 1;
            if tries > 1000 {
                return Err(Error::Spec("too few verses for distinct verse sets".into()));
            }
        }
    }
    Ok(out)
}

/// True when some filler word occurs in every verse of a form and nowhere
/// outside the lemma's verses, which would tie with the true word.
fn filler_ties(filler: &[Vec<usize>], forms: &[&LemmaForm], sets: &[Vec<usize>]) -> bool {
    let mut presence: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    for (v, words) in filler.iter().enumerate() {
        for &w in words {
            presence.entry(w).or_default().insert(v);
        }
    }
    let mut lemma_verses: HashMap<&str, BTreeSet<usize>> = HashMap::new();
    for (f, set) in forms.iter().zip(sets) {
        lemma_verses.entry(&f.lemma).or_default().extend(set);
    }
    forms.iter().zip(sets).any(|(f, set)| {
        let lemma = &lemma_verses[f.lemma.as_str()];
        filler[set[0]].iter().any(|w| {
            let p = &presence[w];
            set.iter().all(|v| p.contains(v)) && p.is_subset(lemma)
        })
    })
}

pub fn generate(spec: &SynthSpec) -> Result<SynthCorpus> {
    spec.validate()?;
    let forms: Vec<&LemmaForm> = spec.lexicon.keys().collect();
    let sets = assign_verses(spec)?;

    // filler and alternates never collide with lexicon words
    let mut lex_rng = stream(spec.seed, STREAM_LEXICON);
    let mut used: BTreeSet<String> = spec.lexicon.values().cloned().collect();
    let (alternates, filler_words): (Vec<String>, Vec<String>) = match spec.script {
        ScriptStructure::NonAlphabetic => {
            let mut pool = (0..LOGOGRAM_COUNT as usize)
                .map(logogram)
                .filter(|c| !used.contains(c));
            let alt = pool.by_ref().take(forms.len()).collect();
            (alt, pool.take(spec.filler_vocab_size).collect())
        }
        _ => {
            let alt = (0..forms.len())
                .map(|_| fresh_word(&mut lex_rng, 3, 3, &mut used))
                .collect();
            let filler = (0..spec.filler_vocab_size)
                .map(|i| fresh_word(&mut lex_rng, 1, if i < 50 { 2 } else { 3 }, &mut used))
                .collect();
            (alt, filler)
        }
    };

    let zipf = Zipf::new(spec.filler_vocab_size as u64, spec.zipf_exponent)
        .map_err(|e| Error::Spec(format!("filler distribution: {e}")))?;
    let mut filler_rng = stream(spec.seed, STREAM_FILLER);
    let mut filler = Vec::new();
    for attempt in 0.. {
        filler = (0..spec.num_verses)
            .map(|_| {
                let n = filler_rng.gen_range(spec.filler_per_verse.0..=spec.filler_per_verse.1);
                (0..n)
                    .map(|_| zipf.sample(&mut filler_rng) as usize - 1)
                    .collect()
            })
            .collect::<Vec<Vec<usize>>>();
        if !filler_ties(&filler, &forms, &sets) {
            break;
        }
        if attempt + 1 == FILLER_ATTEMPTS {
            return Err(Error::Spec(
                "could not draw filler that keeps forms separable".into(),
            ));
        }
    }

    // a fixed number of draws per occurrence, in a fixed order, whatever the rates
    let mut noise_rng = stream(spec.seed, STREAM_NOISE);
    let mut verse_words: Vec<Vec<String>> = filler
        .iter()
        .map(|ws| ws.iter().map(|&w| filler_words[w].clone()).collect())
        .collect();
    let mut annotations = Vec::new();
    let mut next_position = vec![0u32; spec.num_verses];
    for (i, (form, set)) in forms.iter().zip(&sets).enumerate() {
        for &v in set {
            let (drop, swap, place): (f64, f64, f64) =
                (noise_rng.gen(), noise_rng.gen(), noise_rng.gen());
            let word = if drop < spec.noise.paraphrase_rate {
                None
            } else if swap < spec.noise.synonym_rate {
                Some(&alternates[i])
            } else {
                Some(&spec.lexicon[*form])
            };
            if let Some(w) = word {
                let len = verse_words[v].len();
                let slot = ((place * (len + 1) as f64) as usize).min(len);
                verse_words[v].insert(slot, w.clone());
            }
            annotations.push(AnnotatedToken {
                verse: verse_ref(v),
                position: next_position[v],
                surface: form.lemma.clone(),
                lemma: form.lemma.clone(),
                pos: NOUN.to_string(),
                gender: Some(form.gender),
                number: Some(form.number),
                case: Some(form.case),
            });
            next_position[v] += 1;
        }
    }
    annotations.sort_by(|a, b| (&a.verse, a.position).cmp(&(&b.verse, b.position)));

    let separator = match spec.script {
        ScriptStructure::AlphabetWordMarkers => " ",
        _ => "",
    };
    let mut translation = Translation::new("synth", "syn", None);
    for (v, words) in verse_words.iter().enumerate() {
        translation
            .verses
            .insert(verse_ref(v), words.join(separator));
    }
    Ok(SynthCorpus {
        translation,
        annotations,
        lexicon: spec.lexicon.clone(),
    })
}

/// Writes `corpus.tsv`, `annotations.tsv` and `lexicon.tsv` into `dir`.
pub fn write_synth(dir: &Path, corpus: &SynthCorpus) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_corpus(
        &dir.join("corpus.tsv"),
        std::slice::from_ref(&corpus.translation),
        Format::Tsv,
    )?;
    write_annotations(&dir.join("annotations.tsv"), &corpus.annotations)?;
    let path = dir.join("lexicon.tsv");
    let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
    let mut out = BufWriter::new(file);
    for (f, word) in &corpus.lexicon {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            f.lemma, f.gender, f.number, f.case, word
        )
        .map_err(|e| Error::io(&path, e))?;
    }
    out.flush().map_err(|e| Error::io(&path, e))
}

/// Fraction of the lexicon that `records` of `method` translate to the
/// true word. Forms without a record count as misses.
pub fn recovery(
    lexicon: &BTreeMap<LemmaForm, String>,
    records: &[ExtractionRecord],
    method: TokenizationMethod,
) -> f64 {
    let got: HashMap<&LemmaForm, &str> = records
        .iter()
        .filter(|r| r.method == method)
        .map(|r| (&r.lemma_form, r.token.as_str()))
        .collect();
    let hits = lexicon
        .iter()
        .filter(|(f, w)| got.get(f) == Some(&w.as_str()))
        .count();
    hits as f64 / lexicon.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_specs() {
        let base = SynthSpec::new(1, 100, 5, ScriptStructure::AlphabetWordMarkers);
        let mut s = base.clone();
        s.verses_per_form = 1;
        assert!(matches!(generate(&s), Err(Error::Spec(_))));
        let s = base.clone().with_noise(Noise {
            paraphrase_rate: 1.5,
            synonym_rate: 0.0,
        });
        assert!(generate(&s).is_err());
        let mut s = base.clone();
        let first = s.lexicon.values().next().unwrap().clone();
        for w in s.lexicon.values_mut() {
            *w = first.clone();
        }
        assert!(generate(&s).is_err());
        let mut s = base;
        s.script = ScriptStructure::NonAlphabetic;
        assert!(generate(&s).is_err());
    }

    #[test]
    fn every_form_word_sits_in_its_verses() {
        let spec = SynthSpec::new(9, 120, 10, ScriptStructure::AlphabetWordMarkers);
        let c = generate(&spec).unwrap();
        assert_eq!(c.translation.verses.len(), 120);
        for (form, word) in &c.lexicon {
            let verses: BTreeSet<&VerseRef> = c
                .annotations
                .iter()
                .filter(|a| a.lemma_form().as_ref() == Some(form))
                .map(|a| &a.verse)
                .collect();
            assert_eq!(verses.len(), 4);
            let with_word: BTreeSet<&VerseRef> = c
                .translation
                .verses
                .iter()
                .filter(|(_, t)| t.split(' ').any(|w| w == word))
                .map(|(v, _)| v)
                .collect();
            assert_eq!(with_word, verses);
        }
    }
}
