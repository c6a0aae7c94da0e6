use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn verselex(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verselex"))
        .current_dir(dir)
        .env("RUST_LOG", "warn")
        .args(args)
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = verselex(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures/mnemeion")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

/// Rewrites the translation id and language columns of a corpus TSV.
fn relabel(corpus: &str, id: &str, lang: &str) -> String {
    corpus
        .lines()
        .map(|l| {
            let rest = l.splitn(3, '\t').nth(2).unwrap();
            format!("{id}\t{lang}\t{rest}\n")
        })
        .collect()
}

#[test]
fn version_names_formats() {
    let dir = tempfile::tempdir().unwrap();
    let v = ok(dir.path(), &["--version"]);
    assert!(v.starts_with("verselex "));
    assert!(v.contains("extraction format"));
}

#[test]
fn fixture_extracts_tomb() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &[
            "extract",
            "--corpus",
            &fixture("corpus.tsv"),
            "--annotations",
            &fixture("annotations.tsv"),
            "--method",
            "unigram",
        ],
    );
    let line = read(dir.path(), "extractions.jsonl")
        .lines()
        .find(|l| l.contains("\"nominative\"") && l.contains("\"singular\""))
        .unwrap()
        .to_string();
    let v: serde_json::Value = serde_json::from_str(&line).unwrap();
    assert_eq!(v["token"], "tomb");
    assert!((v["confidence"].as_f64().unwrap() - 1.3).abs() < 0.05);
}

#[test]
fn synth_extract_detect() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["synth", "--seed", "7", "--verses", "500"]);
    for f in ["corpus.tsv", "annotations.tsv", "lexicon.tsv"] {
        assert!(d.join(f).exists());
    }
    ok(
        d,
        &[
            "extract",
            "--corpus",
            "corpus.tsv",
            "--annotations",
            "annotations.tsv",
        ],
    );
    let out = ok(
        d,
        &[
            "detect-script",
            "--corpus",
            "corpus.tsv",
            "--extractions",
            "extractions.jsonl",
        ],
    );
    assert_eq!(out.trim(), "syn\talphabet, word markers");
    assert!(read(d, "structures.tsv").contains("alphabet_word_markers"));
}

#[test]
fn config_file_supplies_flags() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::create_dir(d.join("proj")).unwrap();
    std::fs::write(
        d.join("proj/run.conf"),
        "# synthetic run\nseed = 5\nverses = 120\nlemmas = 10\nout-dir = data\nworkers = 2\n",
    )
    .unwrap();
    ok(d, &["--config", "proj/run.conf", "synth"]);
    let first = read(d, "proj/data/corpus.tsv");
    ok(d, &["--config", "proj/run.conf", "synth", "--seed", "6"]);
    assert_ne!(read(d, "proj/data/corpus.tsv"), first);
    ok(
        d,
        &[
            "--config",
            "proj/run.conf",
            "--out-dir",
            "elsewhere",
            "synth",
        ],
    );
    assert_eq!(read(d, "elsewhere/corpus.tsv"), first);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("empty.tsv"), "").unwrap();
    std::fs::write(d.join("consensus.jsonl"), "").unwrap();
    let out = verselex(
        d,
        &[
            "evaluate",
            "--consensus",
            "consensus.jsonl",
            "--verdicts",
            "empty.tsv",
        ],
    );
    assert_eq!(out.status.code(), Some(1));

    std::fs::write(
        d.join("bad.tsv"),
        "web\teng\t\tJHN\t1\t1\tok\nweb\teng\t\tJHN\t1\tx\tbad\n",
    )
    .unwrap();
    let out = verselex(
        d,
        &[
            "extract",
            "--corpus",
            "bad.tsv",
            "--annotations",
            &fixture("annotations.tsv"),
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.tsv:2"), "{err}");

    let out = verselex(
        d,
        &[
            "extract",
            "--corpus",
            "missing.tsv",
            "--annotations",
            "x.tsv",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.tsv"));

    assert_eq!(
        verselex(d, &["extract", "--annotations", "x.tsv"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        verselex(d, &["--workers", "0", "synth"]).status.code(),
        Some(2)
    );
    assert_eq!(
        verselex(d, &["synth", "--verses-per-form", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        verselex(d, &["synth", "--script", "runes"]).status.code(),
        Some(2)
    );
    std::fs::write(d.join("x.conf"), "colour = blue\n").unwrap();
    let out = verselex(d, &["--config", "x.conf", "synth"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("x.conf:1"));
    assert_eq!(verselex(d, &["frobnicate"]).status.code(), Some(2));
}

/// Three languages built from one synthetic source with growing noise;
/// the first language has a second, heavily paraphrased translation.
fn multilingual(d: &Path) -> PathBuf {
    let mut corpus = String::new();
    let mut annotations = None;
    for (i, (rate, id, lang)) in [
        ("0", "aa1", "aaa"),
        ("0.7", "aa2", "aaa"),
        ("0.1", "bb1", "bbb"),
        ("0.3", "cc1", "ccc"),
    ]
    .iter()
    .enumerate()
    {
        let sub = format!("gen{i}");
        ok(
            d,
            &[
                "--out-dir",
                &sub,
                "synth",
                "--seed",
                "11",
                "--verses",
                "300",
                "--lemmas",
                "30",
                "--paraphrase-rate",
                rate,
            ],
        );
        corpus.push_str(&relabel(&read(d, &format!("{sub}/corpus.tsv")), id, lang));
        let ann = read(d, &format!("{sub}/annotations.tsv"));
        assert_eq!(annotations.get_or_insert_with(|| ann.clone()), &ann);
    }
    std::fs::write(d.join("corpus.tsv"), corpus).unwrap();
    std::fs::write(d.join("annotations.tsv"), annotations.unwrap()).unwrap();
    d.join("corpus.tsv")
}

#[test]
fn full_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    multilingual(d);
    let summary = ok(
        d,
        &[
            "--out-dir",
            "ing",
            "ingest",
            "--corpus",
            "corpus.tsv",
            "--annotations",
            "annotations.tsv",
        ],
    );
    assert!(
        summary.starts_with("4 translations, 3 languages, 1200 verses"),
        "{summary}"
    );
    let funnel: serde_json::Value = serde_json::from_str(&read(d, "ing/funnel.json")).unwrap();
    assert_eq!(funnel["paired_forms"], 60);
    assert_eq!(read(d, "ing/corpus.normalized.tsv"), read(d, "corpus.tsv"));

    ok(
        d,
        &[
            "extract",
            "--corpus",
            "corpus.tsv",
            "--annotations",
            "annotations.tsv",
        ],
    );
    // 60 forms sit below the default 160 distinct-answer threshold
    ok(
        d,
        &[
            "consensus",
            "--corpus",
            "corpus.tsv",
            "--extractions",
            "extractions.jsonl",
            "--unigram-threshold",
            "50",
        ],
    );
    let para = read(d, "paraphrase.csv");
    assert!(
        para.contains("aaa,aa2,")
            && para
                .lines()
                .any(|l| l.starts_with("aaa,aa2,") && l.ends_with(",paraphrase-suspect")),
        "{para}"
    );
    assert!(para
        .lines()
        .any(|l| l.starts_with("aaa,aa1,") && l.ends_with(",literal")));
    let consensus = read(d, "consensus.jsonl");
    assert!(consensus.lines().count() > 60);

    ok(d, &["similarity", "--consensus", "consensus.jsonl"]);
    let sim = read(d, "similarity.tsv");
    assert!(sim.starts_with("language_a\tlanguage_b\trho\tn\n"));
    assert_eq!(sim.lines().count(), 4, "{sim}");

    ok(
        d,
        &[
            "export-explorer",
            "--consensus",
            "consensus.jsonl",
            "--similarity",
            "similarity.tsv",
            "--top-k",
            "1",
        ],
    );
    let graph: serde_json::Value = serde_json::from_str(&read(d, "explorer.json")).unwrap();
    assert_eq!(graph["nodes"].as_array().unwrap().len(), 3);
    let links = graph["links"].as_array().unwrap();
    assert!(!links.is_empty() && links.len() <= 3);

    // judge every consensus answer against the lexicon
    let lexicon: std::collections::HashMap<String, String> = read(d, "gen0/lexicon.tsv")
        .lines()
        .map(|l| {
            let c: Vec<&str> = l.split('\t').collect();
            (c[..4].join("\t"), c[4].to_string())
        })
        .collect();
    let mut verdicts = String::new();
    for line in consensus.lines() {
        let e: serde_json::Value = serde_json::from_str(line).unwrap();
        let key = ["lemma", "gender", "number", "case"]
            .map(|k| e[k].as_str().unwrap().to_string())
            .join("\t");
        let token = e["token"].as_str().unwrap();
        let verdict = if lexicon[&key] == token {
            "correct"
        } else {
            "incorrect"
        };
        verdicts.push_str(&format!(
            "{}\t{key}\t{token}\t{verdict}\n",
            e["language"].as_str().unwrap()
        ));
    }
    std::fs::write(d.join("verdicts.tsv"), verdicts).unwrap();
    let shown = ok(
        d,
        &[
            "evaluate",
            "--consensus",
            "consensus.jsonl",
            "--verdicts",
            "verdicts.tsv",
        ],
    );
    assert!(
        shown.lines().next().unwrap().contains("100.0 / rank"),
        "{shown}"
    );
    let report: serde_json::Value = serde_json::from_str(&read(d, "evaluation.json")).unwrap();
    assert_eq!(report["per_language"].as_array().unwrap().len(), 3);
    ok(
        d,
        &[
            "evaluate",
            "--consensus",
            "consensus.jsonl",
            "--verdicts",
            "verdicts.tsv",
            "--grouping",
            "lemma",
            "--output",
            "by_lemma.json",
        ],
    );
    assert!(read(d, "by_lemma.json").contains("\"grouping\": \"lemma\""));

    ok(
        d,
        &[
            "tradeoff",
            "--consensus",
            "consensus.jsonl",
            "--verdicts",
            "verdicts.tsv",
        ],
    );
    let curve = read(d, "tradeoff.csv");
    let sizes: Vec<usize> = curve
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(sizes.windows(2).all(|w| w[0] >= w[1]));
    assert_eq!(sizes[0], consensus.lines().count());
}

#[test]
fn structures_file_and_forced_method_agree() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    multilingual(d);
    ok(
        d,
        &[
            "extract",
            "--corpus",
            "corpus.tsv",
            "--annotations",
            "annotations.tsv",
        ],
    );
    let out = ok(
        d,
        &[
            "detect-script",
            "--corpus",
            "corpus.tsv",
            "--extractions",
            "extractions.jsonl",
        ],
    );
    assert!(!out.contains("alphabet, word markers"), "{out}");
    std::fs::write(d.join("run.conf"), "unigram-threshold = 50\n").unwrap();
    let out = ok(
        d,
        &[
            "--config",
            "run.conf",
            "detect-script",
            "--corpus",
            "corpus.tsv",
            "--extractions",
            "extractions.jsonl",
        ],
    );
    assert_eq!(out.matches("alphabet, word markers").count(), 3, "{out}");
    ok(
        d,
        &[
            "consensus",
            "--corpus",
            "corpus.tsv",
            "--extractions",
            "extractions.jsonl",
            "--structures",
            "structures.tsv",
            "--output",
            "a.jsonl",
        ],
    );
    ok(
        d,
        &[
            "consensus",
            "--corpus",
            "corpus.tsv",
            "--extractions",
            "extractions.jsonl",
            "--method",
            "unigram",
            "--output",
            "b.jsonl",
        ],
    );
    ok(
        d,
        &[
            "--config",
            "run.conf",
            "consensus",
            "--corpus",
            "corpus.tsv",
            "--extractions",
            "extractions.jsonl",
            "--output",
            "c.jsonl",
        ],
    );
    assert_eq!(read(d, "a.jsonl"), read(d, "b.jsonl"));
    assert_eq!(read(d, "a.jsonl"), read(d, "c.jsonl"));
}

#[test]
fn all_methods_adds_quadtoken() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (c, a) = (fixture("corpus.tsv"), fixture("annotations.tsv"));
    ok(
        d,
        &[
            "extract",
            "--corpus",
            &c,
            "--annotations",
            &a,
            "--all-methods",
        ],
    );
    let all = read(d, "extractions.jsonl");
    assert!(all.contains("\"quadtoken\""));
    ok(d, &["extract", "--corpus", &c, "--annotations", &a]);
    assert!(!read(d, "extractions.jsonl").contains("\"quadtoken\""));
    let out = verselex(
        d,
        &[
            "extract",
            "--corpus",
            &c,
            "--annotations",
            &a,
            "--all-methods",
            "--method",
            "unigram",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}
