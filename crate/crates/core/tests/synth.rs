use std::time::Instant;

use verselex::corpus::select_lemma_forms;
use verselex::extraction::{
    run_extraction, summarize, ExtractOptions, ExtractionJob, ExtractionRecord,
};
use verselex::synth::{generate, recovery, write_synth, Noise, SynthCorpus, SynthSpec};
use verselex::tokenizer::{
    detect_script_structure, ScriptStructure, StructureThresholds, TokenizationMethod,
};

fn extract_all(c: &SynthCorpus) -> Vec<ExtractionRecord> {
    let sel = select_lemma_forms(&c.annotations);
    assert_eq!(sel.forms.len(), c.lexicon.len());
    let job = ExtractionJob {
        translations: std::slice::from_ref(&c.translation),
        forms: &sel.forms,
        index: &sel.index,
        methods: &[TokenizationMethod::Unigram, TokenizationMethod::Unitoken],
        options: ExtractOptions::default(),
    };
    run_extraction(&job, 4).unwrap()
}

fn detect(records: &[ExtractionRecord]) -> ScriptStructure {
    detect_script_structure(&summarize(records), StructureThresholds::default())
        .unwrap()
        .structure
}

#[test]
fn same_seed_same_bytes() {
    let spec =
        SynthSpec::new(42, 200, 20, ScriptStructure::AlphabetWordMarkers).with_noise(Noise {
            paraphrase_rate: 0.2,
            synonym_rate: 0.1,
        });
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    write_synth(a.path(), &generate(&spec).unwrap()).unwrap();
    write_synth(b.path(), &generate(&spec).unwrap()).unwrap();
    for name in ["corpus.tsv", "annotations.tsv", "lexicon.tsv"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, std::fs::read(b.path().join(name)).unwrap(), "{name}");
    }
    let other = generate(&SynthSpec {
        seed: 43,
        ..spec.clone()
    })
    .unwrap();
    assert_ne!(other.translation, generate(&spec).unwrap().translation);
}

#[test]
fn word_marker_corpus_is_fully_recovered() {
    let start = Instant::now();
    let c = generate(&SynthSpec::new(
        7,
        500,
        80,
        ScriptStructure::AlphabetWordMarkers,
    ))
    .unwrap();
    let records = extract_all(&c);
    assert_eq!(
        recovery(&c.lexicon, &records, TokenizationMethod::Unigram),
        1.0
    );
    assert_eq!(detect(&records), ScriptStructure::AlphabetWordMarkers);
    eprintln!("word markers: {:?}", start.elapsed());
}

#[test]
fn logographic_corpus_is_non_alphabetic() {
    let c = generate(&SynthSpec::new(7, 500, 80, ScriptStructure::NonAlphabetic)).unwrap();
    let records = extract_all(&c);
    assert_eq!(
        recovery(&c.lexicon, &records, TokenizationMethod::Unitoken),
        1.0
    );
    assert_eq!(detect(&records), ScriptStructure::NonAlphabetic);
}

#[test]
fn unspaced_alphabetic_corpus_has_no_word_markers() {
    let c = generate(&SynthSpec::new(
        7,
        500,
        80,
        ScriptStructure::AlphabetNoWordMarkers,
    ))
    .unwrap();
    assert!(c.translation.verses.values().all(|t| !t.contains(' ')));
    let records = extract_all(&c);
    assert_eq!(detect(&records), ScriptStructure::AlphabetNoWordMarkers);
}

#[test]
fn full_paraphrase_removes_the_signal() {
    let spec = SynthSpec::new(3, 300, 30, ScriptStructure::AlphabetWordMarkers).with_noise(Noise {
        paraphrase_rate: 1.0,
        synonym_rate: 0.0,
    });
    let c = generate(&spec).unwrap();
    for word in c.lexicon.values() {
        assert!(c
            .translation
            .verses
            .values()
            .all(|t| t.split(' ').all(|w| w != word)));
    }
    assert_eq!(
        recovery(&c.lexicon, &extract_all(&c), TokenizationMethod::Unigram),
        0.0
    );
}

#[test]
fn synonyms_split_the_vote() {
    let spec = SynthSpec::new(5, 300, 30, ScriptStructure::AlphabetWordMarkers).with_noise(Noise {
        paraphrase_rate: 0.0,
        synonym_rate: 0.5,
    });
    let c = generate(&spec).unwrap();
    let r = recovery(&c.lexicon, &extract_all(&c), TokenizationMethod::Unigram);
    assert!(r < 1.0, "{r}");
}

#[test]
fn recovery_falls_with_paraphrase() {
    let rates = [0.0, 0.2, 0.4, 0.6];
    let mut means = vec![];
    for rate in rates {
        let mut total = 0.0;
        for seed in 0..5 {
            let spec = SynthSpec::new(seed, 300, 40, ScriptStructure::AlphabetWordMarkers)
                .with_noise(Noise {
                    paraphrase_rate: rate,
                    synonym_rate: 0.0,
                });
            let c = generate(&spec).unwrap();
            total += recovery(&c.lexicon, &extract_all(&c), TokenizationMethod::Unigram);
        }
        means.push(total / 5.0);
    }
    assert_eq!(means[0], 1.0);
    assert!(means.windows(2).all(|w| w[0] >= w[1]), "{means:?}");
    assert!(means[3] < means[0]);
}
