use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context as _};
use log::info;
use verselex::analysis::{
    evaluation_report, explorer_graph, load_verdicts, similarity_graph, threshold_sweep,
    write_tradeoff_csv, Grouping, SimilarityEdge, DEFAULT_TOP_K,
};
use verselex::consensus::{
    consensus as merge, paraphrase_report, read_consensus, write_consensus, ConsensusEntry,
    ParaphraseThresholds, TranslationProfile,
};
use verselex::corpus::{
    load_annotations_with, load_corpus_with, select_lemma_forms, write_annotations, write_corpus,
    Format, LoadOptions, Translation,
};
use verselex::extraction::{
    read_records, run_extraction, summarize, write_records, ExtractOptions, ExtractionJob,
    ExtractionRecord,
};
use verselex::synth::{generate, write_synth, Noise, SynthSpec};
use verselex::tokenizer::{
    detect_script_structure, ScriptStructure, StructureReport, StructureThresholds,
    TokenizationMethod,
};

use crate::config::ProjectConfig;
use crate::{CorpusArgs, Failure};

type Outcome = Result<(), Failure>;

pub struct Context {
    pub cfg: ProjectConfig,
    pub workers: usize,
    pub out_dir: PathBuf,
}

impl Context {
    fn output(&self, flag: Option<PathBuf>, default_name: &str) -> Result<PathBuf, Failure> {
        if let Some(p) = flag {
            return Ok(p);
        }
        std::fs::create_dir_all(&self.out_dir)
            .with_context(|| format!("cannot create {}", self.out_dir.display()))?;
        Ok(self.out_dir.join(default_name))
    }

    fn input(&self, flag: Option<PathBuf>, key: &str) -> Result<PathBuf, Failure> {
        self.cfg
            .path(flag, key)
            .ok_or_else(|| Failure::Config(format!("missing --{key}")))
    }

    fn value<T: std::str::FromStr>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T, Failure>
    where
        T::Err: std::fmt::Display,
    {
        self.cfg
            .pick_or(flag, key, default)
            .map_err(Failure::Config)
    }

    fn pool(&self) -> Result<rayon::ThreadPool, Failure> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Failure::Data(e.into()))
    }
}

fn config_check(ok: bool, message: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::Config(message()))
    }
}

fn load_options(
    ctx: &Context,
    args: &CorpusArgs,
) -> Result<(Option<Format>, LoadOptions), Failure> {
    let format = ctx
        .cfg
        .pick(args.format.clone(), "format")
        .map_err(Failure::Config)?
        .map(|f| f.parse::<Format>().map_err(Failure::Config))
        .transpose()?;
    let nfc = ctx.cfg.switch(args.nfc, "nfc").map_err(Failure::Config)?;
    Ok((format, LoadOptions { nfc }))
}

fn load_translations(ctx: &Context, args: &CorpusArgs) -> Result<Vec<Translation>, Failure> {
    let paths = ctx.cfg.paths(args.corpus.clone(), "corpus");
    config_check(!paths.is_empty(), || "missing --corpus".into())?;
    let (format, opts) = load_options(ctx, args)?;
    let mut out: Vec<Translation> = Vec::new();
    let mut origin: HashMap<String, PathBuf> = HashMap::new();
    for path in paths {
        for t in load_corpus_with(
            &path,
            format.unwrap_or_else(|| Format::from_path(&path)),
            opts,
        )? {
            if let Some(first) = origin.insert(t.translation_id.clone(), path.clone()) {
                return Err(anyhow!(
                    "{}: translation {} already loaded from {}",
                    path.display(),
                    t.translation_id,
                    first.display()
                )
                .into());
            }
            out.push(t);
        }
    }
    info!("loaded {} translations", out.len());
    Ok(out)
}

fn language_of(translations: &[Translation]) -> HashMap<String, String> {
    translations
        .iter()
        .map(|t| (t.translation_id.clone(), t.language_key()))
        .collect()
}

/// Records grouped by language; records of unknown translations are an error.
fn records_by_language<'a>(
    records: &'a [ExtractionRecord],
    languages: &HashMap<String, String>,
    source: &Path,
) -> Result<BTreeMap<String, Vec<&'a ExtractionRecord>>, Failure> {
    let mut out: BTreeMap<String, Vec<&ExtractionRecord>> = BTreeMap::new();
    for r in records {
        let lang = languages.get(&r.translation_id).ok_or_else(|| {
            anyhow!(
                "{}: translation {} is not in the corpus",
                source.display(),
                r.translation_id
            )
        })?;
        out.entry(lang.clone()).or_default().push(r);
    }
    Ok(out)
}

fn structure_thresholds(
    ctx: &Context,
    flags: (Option<usize>, Option<f64>),
) -> Result<StructureThresholds, Failure> {
    let d = StructureThresholds::default();
    let t = StructureThresholds {
        unigram_threshold: ctx.value(flags.0, "unigram-threshold", d.unigram_threshold)?,
        distinctness_ratio: ctx.value(flags.1, "distinctness-ratio", d.distinctness_ratio)?,
    };
    config_check(t.unigram_threshold >= 1, || {
        "unigram threshold must be at least 1".into()
    })?;
    config_check(
        t.distinctness_ratio > 0.0 && t.distinctness_ratio <= 1.0,
        || "distinctness ratio must lie in (0, 1]".into(),
    )?;
    Ok(t)
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    Ok(BufWriter::new(File::create(path).with_context(|| {
        format!("cannot create {}", path.display())
    })?))
}

fn finish(mut out: BufWriter<File>, path: &Path) -> Outcome {
    out.flush()
        .with_context(|| format!("cannot write {}", path.display()))?;
    info!("wrote {}", path.display());
    Ok(())
}

fn tsv_writer(path: &Path) -> Result<csv::Writer<File>, Failure> {
    Ok(csv::WriterBuilder::new()
        .delimiter(b'\t')
        .from_path(path)
        .with_context(|| format!("cannot create {}", path.display()))?)
}

pub fn ingest(ctx: &Context, corpus: CorpusArgs, annotations: Option<PathBuf>) -> Outcome {
    let translations = load_translations(ctx, &corpus)?;
    let verses: usize = translations.iter().map(|t| t.verses.len()).sum();
    let languages: std::collections::BTreeSet<String> =
        translations.iter().map(Translation::language_key).collect();
    let path = ctx.output(None, "corpus.normalized.tsv")?;
    write_corpus(&path, &translations, Format::Tsv)?;
    println!(
        "{} translations, {} languages, {} verses",
        translations.len(),
        languages.len(),
        verses
    );
    if let Some(ann) = ctx.cfg.path(annotations, "annotations") {
        let (_, opts) = load_options(ctx, &corpus)?;
        let tokens = load_annotations_with(&ann, Format::from_path(&ann), opts)?;
        write_annotations(&ctx.output(None, "annotations.normalized.tsv")?, &tokens)?;
        let funnel = select_lemma_forms(&tokens).funnel;
        let path = ctx.output(None, "funnel.json")?;
        let mut out = create(&path)?;
        serde_json::to_writer_pretty(&mut out, &funnel).map_err(anyhow::Error::from)?;
        writeln!(out).map_err(anyhow::Error::from)?;
        finish(out, &path)?;
        println!(
            "{} noun lemmas, {} common, {} lemmas / {} forms repeated, {} lemmas / {} forms paired",
            funnel.noun_lemmas,
            funnel.common_lemmas,
            funnel.repeated_lemmas,
            funnel.repeated_forms,
            funnel.paired_lemmas,
            funnel.paired_forms
        );
    }
    Ok(())
}

pub fn extract(
    ctx: &Context,
    corpus: CorpusArgs,
    annotations: Option<PathBuf>,
    method: Option<String>,
    all_methods: bool,
    count_empty_verses: bool,
    output: Option<PathBuf>,
) -> Outcome {
    let method = ctx
        .cfg
        .pick(method, "method")
        .map_err(Failure::Config)?
        .map(|m| m.parse::<TokenizationMethod>().map_err(Failure::Config))
        .transpose()?;
    let all = ctx
        .cfg
        .switch(all_methods, "all-methods")
        .map_err(Failure::Config)?;
    config_check(!(all && method.is_some()), || {
        "--method and --all-methods conflict".into()
    })?;
    let methods: Vec<TokenizationMethod> = match method {
        Some(m) => vec![m],
        None if all => TokenizationMethod::ALL.to_vec(),
        None => vec![TokenizationMethod::Unigram, TokenizationMethod::Unitoken],
    };
    let options = ExtractOptions {
        count_empty_verses: ctx
            .cfg
            .switch(count_empty_verses, "count-empty-verses")
            .map_err(Failure::Config)?,
    };

    let ann = ctx.input(annotations, "annotations")?;
    let translations = load_translations(ctx, &corpus)?;
    let (_, opts) = load_options(ctx, &corpus)?;
    let tokens = load_annotations_with(&ann, Format::from_path(&ann), opts)?;
    let selection = select_lemma_forms(&tokens);
    info!(
        "{} lemma forms of {} lemmas selected",
        selection.forms.len(),
        selection.lemmas().len()
    );
    let job = ExtractionJob {
        translations: &translations,
        forms: &selection.forms,
        index: &selection.index,
        methods: &methods,
        options,
    };
    let records = run_extraction(&job, ctx.workers)?;
    let path = ctx.output(output, "extractions.jsonl")?;
    write_records(&path, &records)?;
    info!("wrote {} records to {}", records.len(), path.display());
    Ok(())
}

fn detect_languages(
    records: &BTreeMap<String, Vec<&ExtractionRecord>>,
    thresholds: StructureThresholds,
) -> Result<BTreeMap<String, StructureReport>, Failure> {
    records
        .iter()
        .map(|(lang, recs)| {
            let owned: Vec<ExtractionRecord> = recs.iter().map(|r| (*r).clone()).collect();
            let report = detect_script_structure(&summarize(&owned), thresholds)
                .with_context(|| format!("language {lang}"))?;
            Ok((lang.clone(), report))
        })
        .collect()
}

const STRUCTURE_HEADER: [&str; 8] = [
    "language",
    "structure",
    "description",
    "method",
    "u",
    "v",
    "w",
    "unitoken_translation",
];

pub fn detect_script(
    ctx: &Context,
    corpus: CorpusArgs,
    extractions: Option<PathBuf>,
    flags: (Option<usize>, Option<f64>),
    output: Option<PathBuf>,
) -> Outcome {
    let thresholds = structure_thresholds(ctx, flags)?;
    let source = ctx.input(extractions, "extractions")?;
    let translations = load_translations(ctx, &corpus)?;
    let records = read_records(&source)?;
    let grouped = records_by_language(&records, &language_of(&translations), &source)?;
    let reports = detect_languages(&grouped, thresholds)?;

    let path = ctx.output(output, "structures.tsv")?;
    let mut w = tsv_writer(&path)?;
    w.write_record(STRUCTURE_HEADER)
        .map_err(anyhow::Error::from)?;
    for (lang, r) in &reports {
        w.write_record([
            lang.as_str(),
            r.structure.as_str(),
            r.structure.describe(),
            r.method.as_str(),
            &r.u.to_string(),
            &r.v.to_string(),
            &r.w.to_string(),
            r.unitoken_translation.as_deref().unwrap_or(""),
        ])
        .map_err(anyhow::Error::from)?;
        println!("{lang}\t{}", r.structure.describe());
    }
    w.flush()
        .with_context(|| format!("cannot write {}", path.display()))?;
    info!("wrote {}", path.display());
    Ok(())
}

fn read_structures(path: &Path) -> Result<BTreeMap<String, TokenizationMethod>, Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .from_path(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut out = BTreeMap::new();
    for row in reader.records() {
        let row = row.with_context(|| path.display().to_string())?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = |m: String| anyhow!("{}:{line}: {m}", path.display());
        let (Some(lang), Some(method)) = (row.get(0), row.get(3)) else {
            return Err(bad("expected language and method columns".into()).into());
        };
        out.insert(lang.to_string(), method.parse().map_err(bad)?);
    }
    Ok(out)
}

pub struct ConsensusArgs {
    pub corpus: CorpusArgs,
    pub extractions: Option<PathBuf>,
    pub structures: Option<PathBuf>,
    pub method: Option<String>,
    pub structure_thresholds: (Option<usize>, Option<f64>),
    pub paraphrase_thresholds: (Option<f64>, Option<f64>),
    pub output: Option<PathBuf>,
    pub paraphrase_output: Option<PathBuf>,
}

pub fn consensus(ctx: &Context, args: ConsensusArgs) -> Outcome {
    let forced = ctx
        .cfg
        .pick(args.method, "method")
        .map_err(Failure::Config)?
        .map(|m| m.parse::<TokenizationMethod>().map_err(Failure::Config))
        .transpose()?;
    let structure_thresholds = structure_thresholds(ctx, args.structure_thresholds)?;
    let d = ParaphraseThresholds::default();
    let para = ParaphraseThresholds {
        count_ratio: ctx.value(args.paraphrase_thresholds.0, "count-ratio", d.count_ratio)?,
        confidence_ratio: ctx.value(
            args.paraphrase_thresholds.1,
            "confidence-ratio",
            d.confidence_ratio,
        )?,
    };
    for r in [para.count_ratio, para.confidence_ratio] {
        config_check((0.0..=1.0).contains(&r), || {
            "paraphrase ratios must lie in [0, 1]".into()
        })?;
    }

    let source = ctx.input(args.extractions, "extractions")?;
    let translations = load_translations(ctx, &args.corpus)?;
    let languages = language_of(&translations);
    let records = read_records(&source)?;
    let grouped = records_by_language(&records, &languages, &source)?;
    let methods: BTreeMap<String, TokenizationMethod> =
        match (forced, ctx.cfg.path(args.structures, "structures")) {
            (Some(m), _) => grouped.keys().map(|l| (l.clone(), m)).collect(),
            (None, Some(p)) => read_structures(&p)?,
            (None, None) => detect_languages(&grouped, structure_thresholds)?
                .into_iter()
                .map(|(l, r)| (l, r.method))
                .collect(),
        };

    let mut by_language: BTreeMap<String, Vec<&Translation>> = BTreeMap::new();
    for t in &translations {
        by_language.entry(t.language_key()).or_default().push(t);
    }
    let mut entries: Vec<ConsensusEntry> = Vec::new();
    let para_path = ctx.output(args.paraphrase_output, "paraphrase.csv")?;
    let mut para_out = csv::Writer::from_path(&para_path)
        .with_context(|| format!("cannot create {}", para_path.display()))?;
    para_out
        .write_record([
            "language",
            "translation_id",
            "lemma_count",
            "median_confidence",
            "label",
        ])
        .map_err(anyhow::Error::from)?;
    for (lang, members) in &by_language {
        let Some(method) = methods.get(lang).copied() else {
            info!("{lang}: no extractions, skipped");
            continue;
        };
        let recs: Vec<ExtractionRecord> = grouped
            .get(lang)
            .into_iter()
            .flatten()
            .filter(|r| r.method == method)
            .map(|r| (*r).clone())
            .collect();
        let merged = merge(lang, &recs);
        info!(
            "{lang}: {} forms by {method} from {} translations",
            merged.len(),
            members.len()
        );
        entries.extend(merged);
        let profiles: Vec<TranslationProfile> = members
            .iter()
            .map(|t| TranslationProfile::from_records(&t.translation_id, &recs))
            .collect();
        for row in paraphrase_report(&profiles, para) {
            let median = row
                .profile
                .median_confidence
                .map(|c| c.to_string())
                .unwrap_or_default();
            para_out
                .write_record([
                    lang.as_str(),
                    &row.profile.translation_id,
                    &row.profile.lemma_count.to_string(),
                    &median,
                    &row.label.to_string(),
                ])
                .map_err(anyhow::Error::from)?;
        }
    }
    para_out
        .flush()
        .with_context(|| format!("cannot write {}", para_path.display()))?;
    let path = ctx.output(args.output, "consensus.jsonl")?;
    write_consensus(&path, &entries)?;
    info!("wrote {} entries to {}", entries.len(), path.display());
    Ok(())
}

fn min_shared(ctx: &Context, flag: Option<usize>) -> Result<usize, Failure> {
    let n = ctx.value(flag, "min-shared", 3)?;
    config_check(n >= 2, || "--min-shared must be at least 2".into())?;
    Ok(n)
}

fn load_entries(ctx: &Context, flag: Option<PathBuf>) -> Result<Vec<ConsensusEntry>, Failure> {
    Ok(read_consensus(&ctx.input(flag, "consensus")?)?)
}

pub fn similarity(
    ctx: &Context,
    consensus: Option<PathBuf>,
    min: Option<usize>,
    output: Option<PathBuf>,
) -> Outcome {
    let min = min_shared(ctx, min)?;
    let entries = load_entries(ctx, consensus)?;
    let edges = ctx.pool()?.install(|| similarity_graph(&entries, min));
    let path = ctx.output(output, "similarity.tsv")?;
    let mut w = tsv_writer(&path)?;
    w.write_record(["language_a", "language_b", "rho", "n"])
        .map_err(anyhow::Error::from)?;
    for e in &edges {
        w.write_record([
            &e.language_a,
            &e.language_b,
            &e.rho.to_string(),
            &e.n.to_string(),
        ])
        .map_err(anyhow::Error::from)?;
    }
    w.flush()
        .with_context(|| format!("cannot write {}", path.display()))?;
    info!("wrote {} edges to {}", edges.len(), path.display());
    Ok(())
}

fn read_similarity(path: &Path) -> Result<Vec<SimilarityEdge>, Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .from_path(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.with_context(|| path.display().to_string())?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = || {
            anyhow!(
                "{}:{line}: expected language_a, language_b, rho, n",
                path.display()
            )
        };
        if row.len() != 4 {
            return Err(bad().into());
        }
        out.push(SimilarityEdge {
            language_a: row[0].to_string(),
            language_b: row[1].to_string(),
            rho: row[2].parse().map_err(|_| bad())?,
            n: row[3].parse().map_err(|_| bad())?,
        });
    }
    Ok(out)
}

pub fn export_explorer(
    ctx: &Context,
    consensus: Option<PathBuf>,
    similarity: Option<PathBuf>,
    min: Option<usize>,
    top_k: Option<usize>,
    output: Option<PathBuf>,
) -> Outcome {
    let top_k = ctx.value(top_k, "top-k", DEFAULT_TOP_K)?;
    config_check(top_k >= 1, || "--top-k must be at least 1".into())?;
    let min = min_shared(ctx, min)?;
    let entries = load_entries(ctx, consensus)?;
    let edges = match ctx.cfg.path(similarity, "similarity") {
        Some(p) => read_similarity(&p)?,
        None => ctx.pool()?.install(|| similarity_graph(&entries, min)),
    };
    let graph = explorer_graph(&entries, &edges, top_k);
    let path = ctx.output(output, "explorer.json")?;
    let mut out = create(&path)?;
    serde_json::to_writer_pretty(&mut out, &graph).map_err(anyhow::Error::from)?;
    writeln!(out).map_err(anyhow::Error::from)?;
    finish(out, &path)
}

pub fn evaluate(
    ctx: &Context,
    consensus: Option<PathBuf>,
    verdicts: Option<PathBuf>,
    grouping: Option<String>,
    output: Option<PathBuf>,
) -> Outcome {
    let grouping = ctx
        .cfg
        .pick(grouping, "grouping")
        .map_err(Failure::Config)?
        .map(|g| g.parse::<Grouping>().map_err(Failure::Config))
        .transpose()?
        .unwrap_or_default();
    let verdicts = load_verdicts(&ctx.input(verdicts, "verdicts")?)?;
    let entries = load_entries(ctx, consensus)?;
    let report = evaluation_report(&verdicts, &entries, grouping)?;

    let mut top: Vec<_> = report.per_lemma.iter().collect();
    top.sort_by(|a, b| {
        b.proportion
            .total_cmp(&a.proportion)
            .then_with(|| a.key.cmp(&b.key))
    });
    for row in top.iter().take(10) {
        println!("{row}");
    }
    if let Some(fit) = &report.fit {
        println!(
            "proportion correct = {:.3} * ln(median confidence), R2 = {:.3}, p = {:.3e}, {} points",
            fit.coefficient, fit.r_squared, fit.p_value, fit.points
        );
    }
    let path = ctx.output(output, "evaluation.json")?;
    let mut out = create(&path)?;
    serde_json::to_writer_pretty(&mut out, &report).map_err(anyhow::Error::from)?;
    writeln!(out).map_err(anyhow::Error::from)?;
    finish(out, &path)
}

pub fn tradeoff(
    ctx: &Context,
    consensus: Option<PathBuf>,
    verdicts: Option<PathBuf>,
    output: Option<PathBuf>,
) -> Outcome {
    let entries = load_entries(ctx, consensus)?;
    let verdicts = match ctx.cfg.path(verdicts, "verdicts") {
        Some(p) => load_verdicts(&p)?,
        None => Vec::new(),
    };
    let points = threshold_sweep(&entries, &verdicts);
    let path = ctx.output(output, "tradeoff.csv")?;
    let mut out = create(&path)?;
    write_tradeoff_csv(&mut out, &points)
        .with_context(|| format!("cannot write {}", path.display()))?;
    finish(out, &path)
}

pub struct SynthArgs {
    pub seed: Option<u64>,
    pub verses: Option<usize>,
    pub lemmas: Option<usize>,
    pub script: Option<String>,
    pub verses_per_form: Option<usize>,
    pub paraphrase_rate: Option<f64>,
    pub synonym_rate: Option<f64>,
    pub filler_vocab: Option<usize>,
    pub zipf_exponent: Option<f64>,
}

pub fn synth(ctx: &Context, a: SynthArgs) -> Outcome {
    let script: ScriptStructure = ctx
        .value(
            a.script,
            "script",
            ScriptStructure::AlphabetWordMarkers.as_str().to_string(),
        )?
        .parse()
        .map_err(Failure::Config)?;
    let mut spec = SynthSpec::new(
        ctx.value(a.seed, "seed", 0)?,
        ctx.value(a.verses, "verses", 500)?,
        ctx.value(a.lemmas, "lemmas", 80)?,
        script,
    );
    spec.verses_per_form = ctx.value(a.verses_per_form, "verses-per-form", spec.verses_per_form)?;
    spec.filler_vocab_size = ctx.value(a.filler_vocab, "filler-vocab", spec.filler_vocab_size)?;
    spec.zipf_exponent = ctx.value(a.zipf_exponent, "zipf-exponent", spec.zipf_exponent)?;
    spec.noise = Noise {
        paraphrase_rate: ctx.value(a.paraphrase_rate, "paraphrase-rate", 0.0)?,
        synonym_rate: ctx.value(a.synonym_rate, "synonym-rate", 0.0)?,
    };
    let corpus = generate(&spec)?;
    std::fs::create_dir_all(&ctx.out_dir)
        .with_context(|| format!("cannot create {}", ctx.out_dir.display()))?;
    write_synth(&ctx.out_dir, &corpus)?;
    info!(
        "wrote {} verses and {} forms to {}",
        corpus.translation.verses.len(),
        corpus.lexicon.len(),
        ctx.out_dir.display()
    );
    Ok(())
}
