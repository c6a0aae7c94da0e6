mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::ProjectConfig;

const VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    "\ncorpus format: tsv v1, jsonl v1",
    "\nextraction format: jsonl v1",
    "\nexplorer format: json v1"
);

#[derive(Parser, Debug)]
#[command(name = "verselex", version = VERSION, about = "Noun vocabulary extraction from verse-aligned parallel corpora")]
struct Cli {
    /// Project file of `key = value` lines; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads [default: logical CPUs].
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Directory for outputs without an explicit path [default: .].
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
pub struct CorpusArgs {
    /// Corpus files (TSV, or JSONL by extension).
    #[arg(long, num_args = 1..)]
    pub corpus: Vec<PathBuf>,
    /// Force the input format instead of inferring it from the extension.
    #[arg(long)]
    pub format: Option<String>,
    /// NFC-normalize verse text on load.
    #[arg(long)]
    pub nfc: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate corpus and annotations and write normalized copies.
    Ingest {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long)]
        annotations: Option<PathBuf>,
    },
    /// Extract a target word for every selected lemma form.
    Extract {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long)]
        annotations: Option<PathBuf>,
        /// Only this tokenization method.
        #[arg(long, conflicts_with = "all_methods")]
        method: Option<String>,
        /// Unigram, unitoken and quadtoken.
        #[arg(long)]
        all_methods: bool,
        /// Treat verses with empty text as captured.
        #[arg(long)]
        count_empty_verses: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Classify each language's script from its extractions.
    DetectScript {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long)]
        extractions: Option<PathBuf>,
        #[arg(long)]
        unigram_threshold: Option<usize>,
        #[arg(long)]
        distinctness_ratio: Option<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Merge translations of each language and flag paraphrases.
    Consensus {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long)]
        extractions: Option<PathBuf>,
        /// Structure report from detect-script; detected afresh if absent.
        #[arg(long)]
        structures: Option<PathBuf>,
        /// Use this method for every language.
        #[arg(long)]
        method: Option<String>,
        #[arg(long)]
        unigram_threshold: Option<usize>,
        #[arg(long)]
        distinctness_ratio: Option<f64>,
        #[arg(long)]
        count_ratio: Option<f64>,
        #[arg(long)]
        confidence_ratio: Option<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        paraphrase_output: Option<PathBuf>,
    },
    /// Rank-correlate confidences between every pair of languages.
    Similarity {
        #[arg(long)]
        consensus: Option<PathBuf>,
        #[arg(long)]
        min_shared: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write the similarity graph for the web explorer.
    ExportExplorer {
        #[arg(long)]
        consensus: Option<PathBuf>,
        /// Edges from `similarity`; computed if absent.
        #[arg(long)]
        similarity: Option<PathBuf>,
        #[arg(long)]
        min_shared: Option<usize>,
        #[arg(long)]
        top_k: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Accuracy tables and the confidence/accuracy fit.
    Evaluate {
        #[arg(long)]
        consensus: Option<PathBuf>,
        #[arg(long)]
        verdicts: Option<PathBuf>,
        /// `language` or `lemma`.
        #[arg(long)]
        grouping: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Vocabulary size and accuracy across confidence cut-offs.
    Tradeoff {
        #[arg(long)]
        consensus: Option<PathBuf>,
        #[arg(long)]
        verdicts: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Generate a synthetic corpus with a known lexicon.
    Synth {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        verses: Option<usize>,
        #[arg(long)]
        lemmas: Option<usize>,
        /// alphabet_word_markers, non_alphabetic or alphabet_no_word_markers.
        #[arg(long)]
        script: Option<String>,
        #[arg(long)]
        verses_per_form: Option<usize>,
        #[arg(long)]
        paraphrase_rate: Option<f64>,
        #[arg(long)]
        synonym_rate: Option<f64>,
        #[arg(long)]
        filler_vocab: Option<usize>,
        #[arg(long)]
        zipf_exponent: Option<f64>,
    },
}

/// Exit 1 for bad data, 2 for bad configuration.
pub enum Failure {
    Data(anyhow::Error),
    Config(String),
}

impl From<verselex::Error> for Failure {
    fn from(e: verselex::Error) -> Self {
        use verselex::Error::*;
        match e {
            Argument(m) => Failure::Config(m),
            Spec(m) => Failure::Config(format!("invalid synthetic corpus spec: {m}")),
            other => Failure::Data(other.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = match &cli.config {
        Some(p) => ProjectConfig::load(p).map_err(Failure::Config)?,
        None => ProjectConfig::default(),
    };
    let workers = cfg
        .pick(cli.workers, "workers")
        .map_err(Failure::Config)?
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if workers == 0 {
        return Err(Failure::Config("--workers must be at least 1".into()));
    }
    let out_dir = cfg
        .path(cli.out_dir, "out-dir")
        .unwrap_or_else(|| PathBuf::from("."));
    let ctx = commands::Context {
        cfg,
        workers,
        out_dir,
    };
    match cli.command {
        Command::Ingest {
            corpus,
            annotations,
        } => commands::ingest(&ctx, corpus, annotations),
        Command::Extract {
            corpus,
            annotations,
            method,
            all_methods,
            count_empty_verses,
            output,
        } => commands::extract(
            &ctx,
            corpus,
            annotations,
            method,
            all_methods,
            count_empty_verses,
            output,
        ),
        Command::DetectScript {
            corpus,
            extractions,
            unigram_threshold,
            distinctness_ratio,
            output,
        } => commands::detect_script(
            &ctx,
            corpus,
            extractions,
            (unigram_threshold, distinctness_ratio),
            output,
        ),
        Command::Consensus {
            corpus,
            extractions,
            structures,
            method,
            unigram_threshold,
            distinctness_ratio,
            count_ratio,
            confidence_ratio,
            output,
            paraphrase_output,
        } => commands::consensus(
            &ctx,
            commands::ConsensusArgs {
                corpus,
                extractions,
                structures,
                method,
                structure_thresholds: (unigram_threshold, distinctness_ratio),
                paraphrase_thresholds: (count_ratio, confidence_ratio),
                output,
                paraphrase_output,
            },
        ),
        Command::Similarity {
            consensus,
            min_shared,
            output,
        } => commands::similarity(&ctx, consensus, min_shared, output),
        Command::ExportExplorer {
            consensus,
            similarity,
            min_shared,
            top_k,
            output,
        } => commands::export_explorer(&ctx, consensus, similarity, min_shared, top_k, output),
        Command::Evaluate {
            consensus,
            verdicts,
            grouping,
            output,
        } => commands::evaluate(&ctx, consensus, verdicts, grouping, output),
        Command::Tradeoff {
            consensus,
            verdicts,
            output,
        } => commands::tradeoff(&ctx, consensus, verdicts, output),
        Command::Synth {
            seed,
            verses,
            lemmas,
            script,
            verses_per_form,
            paraphrase_rate,
            synonym_rate,
            filler_vocab,
            zipf_exponent,
        } => commands::synth(
            &ctx,
            commands::SynthArgs {
                seed,
                verses,
                lemmas,
                script,
                verses_per_form,
                paraphrase_rate,
                synonym_rate,
                filler_vocab,
                zipf_exponent,
            },
        ),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Data(e)) => {
            let mut message = String::new();
            for cause in e.chain().map(ToString::to_string) {
                if !message.contains(&cause) {
                    if !message.is_empty() {
                        message.push_str(": ");
                    }
                    message.push_str(&cause);
                }
            }
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Config(m)) => {
            eprintln!("configuration error: {m}");
            ExitCode::from(2)
        }
    }
}
