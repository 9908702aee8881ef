use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bimine_core::pipeline::{self, with_jobs, PipelineConfig};
use bimine_core::{
    compare_modes, make_synthetic_benchmark, synthetic_parallel_corpus, tokenize, BenchmarkSpec,
    Error, ErrorClass, Lang, MatchConfig,
};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "bimine",
    version,
    about = "Mine parallel sentence pairs from document-aligned comparable corpora"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every stage in memory and write the extracted pairs, stats and histogram
    Run(PipelineArgs),
    /// Clean, filter and store the input corpus in the work directory
    Ingest(PipelineArgs),
    /// Translate the stored corpus in the directions the mode needs
    Translate(PipelineArgs),
    /// Build and snapshot both inverted indexes
    Index(PipelineArgs),
    /// Score and select pairs from the stage artifacts
    Match(PipelineArgs),
    /// Histogram (and optional gold evaluation) of an extracted TSV
    Report {
        #[command(flatten)]
        args: PipelineArgs,
        /// Gold alignment TSV to score the extraction against
        #[arg(long)]
        gold: Option<PathBuf>,
    },
    /// Compare bidirectional and one-directional matching on a synthetic benchmark
    Bench(BenchArgs),
    /// Print the tokens of a text, one per line
    Tokenize {
        #[arg(long, value_enum, default_value = "src")]
        lang: LangArg,
        /// Text to tokenize; read from stdin when absent
        text: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LangArg {
    Src,
    Tgt,
}

#[derive(Args, Default)]
struct PipelineArgs {
    /// Config file of `key = value` lines; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input corpus, JSON lines of {"id", "src", "tgt"}
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    work_dir: Option<PathBuf>,
    /// Extracted pairs TSV
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    stats: Option<PathBuf>,
    #[arg(long)]
    histogram: Option<PathBuf>,
    #[arg(long)]
    doc_ratio: Option<f64>,
    #[arg(long)]
    min_words: Option<usize>,
    /// Default: mean sentence length of the filtered corpus
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    top_k: Option<usize>,
    /// Maximum pairs accepted per sentence
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    min_score: Option<f64>,
    /// bi | one
    #[arg(long)]
    mode: Option<String>,
    /// original_pair | translation_vs_candidate
    #[arg(long)]
    penalty_source: Option<String>,
    /// Comma-separated ascending histogram edges
    #[arg(long)]
    histogram_edges: Option<String>,
    #[arg(long, conflicts_with = "pretranslated_fwd")]
    phrase_table_fwd: Option<PathBuf>,
    #[arg(long, conflicts_with = "pretranslated_rev")]
    phrase_table_rev: Option<PathBuf>,
    #[arg(long)]
    pretranslated_fwd: Option<PathBuf>,
    #[arg(long)]
    pretranslated_rev: Option<PathBuf>,
    /// Worker threads
    #[arg(long, env = "BIMINE_JOBS")]
    jobs: Option<usize>,
}

impl PipelineArgs {
    fn config(&self) -> Result<PipelineConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => PipelineConfig::from_file(path)?,
            None => PipelineConfig::default(),
        };
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        let overrides = [
            ("input", path(&self.input)),
            ("work_dir", path(&self.work_dir)),
            ("output", path(&self.output)),
            ("stats", path(&self.stats)),
            ("histogram", path(&self.histogram)),
            ("doc_ratio", self.doc_ratio.map(|v| v.to_string())),
            ("min_words", self.min_words.map(|v| v.to_string())),
            ("alpha", self.alpha.map(|v| v.to_string())),
            ("beta", self.beta.map(|v| v.to_string())),
            ("top_k", self.top_k.map(|v| v.to_string())),
            ("cap", self.cap.map(|v| v.to_string())),
            ("min_score", self.min_score.map(|v| v.to_string())),
            ("mode", self.mode.clone()),
            ("penalty_source", self.penalty_source.clone()),
            ("histogram_edges", self.histogram_edges.clone()),
            ("phrase_table_fwd", path(&self.phrase_table_fwd)),
            ("phrase_table_rev", path(&self.phrase_table_rev)),
            ("pretranslated_fwd", path(&self.pretranslated_fwd)),
            ("pretranslated_rev", path(&self.pretranslated_rev)),
            ("jobs", self.jobs.map(|v| v.to_string())),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                cfg.set(key, &v)?;
            }
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// True pairs planted in the corpus
    #[arg(long, default_value_t = 500)]
    n_parallel: usize,
    /// Distractor sentences per side
    #[arg(long, default_value_t = 500)]
    distractors: usize,
    /// Probability of dropping a lexicon entry from each translation table
    #[arg(long, default_value_t = 0.2)]
    dropout: f64,
    /// Sentences per side per document
    #[arg(long, default_value_t = 10)]
    docs: usize,
    /// Vocabulary size of the synthetic seed corpus
    #[arg(long, default_value_t = 2000)]
    vocab: usize,
    /// Write corpus.jsonl, phrase tables and gold.tsv to this directory
    #[arg(long)]
    emit: Option<PathBuf>,
    #[arg(long, env = "BIMINE_JOBS")]
    jobs: Option<usize>,
}

fn write_file(path: &Path, write: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> Result<(), Error> {
    let mut buf = Vec::new();
    write(&mut buf).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    pipeline::write_all_or_nothing(&[(path, &buf)])
}

fn bench(args: &BenchArgs) -> Result<String, Error> {
    if args.jobs == Some(0) {
        return Err(Error::InvalidParam("jobs must be >= 1".into()));
    }
    let spec = BenchmarkSpec {
        n_parallel: args.n_parallel,
        n_distractors_src: args.distractors,
        n_distractors_tgt: args.distractors,
        docs: args.docs,
        dropout: args.dropout,
        seed: args.seed,
    };
    if args.vocab == 0 {
        return Err(Error::InvalidParam("vocab must be >= 1".into()));
    }
    let seed_corpus = synthetic_parallel_corpus(
        spec.n_parallel + spec.n_distractors_src + spec.n_distractors_tgt,
        args.vocab,
        args.seed,
    );
    let bench = make_synthetic_benchmark(&seed_corpus, &spec)?;
    if let Some(dir) = &args.emit {
        fs::create_dir_all(dir).map_err(|e| Error::Io {
            path: dir.clone(),
            source: e,
        })?;
        write_file(&dir.join("corpus.jsonl"), |b| {
            bimine_core::corpus::write_document_pairs(b, &bench.docs)
        })?;
        write_file(&dir.join("phrase-table.fwd.tsv"), |b| bench.table_fwd.write_tsv(b))?;
        write_file(&dir.join("phrase-table.rev.tsv"), |b| bench.table_rev.write_tsv(b))?;
        write_file(&dir.join("gold.tsv"), |b| bench.gold.write_tsv(b))?;
    }
    let cmp = with_jobs(args.jobs, || {
        compare_modes(&bench, &Default::default(), &MatchConfig::default(), None)
    })??;
    Ok(format!(
        "benchmark seed {} parallel {} distractors {} dropout {} docs {}\n{}",
        spec.seed,
        spec.n_parallel,
        args.distractors,
        spec.dropout,
        spec.docs,
        cmp.report()
    ))
}

fn run(cli: Cli) -> Result<(), Error> {
    let mut out = io::stdout().lock();
    let print = |out: &mut io::StdoutLock, s: &str| {
        let _ = out.write_all(s.as_bytes());
    };
    match cli.command {
        Command::Run(args) => {
            let cfg = args.config()?;
            let s = pipeline::run_pipeline(&cfg)?;
            print(
                &mut out,
                &format!(
                    "{}alpha {:.6}\nextracted {}\n",
                    s.stats.report(),
                    s.alpha,
                    s.extracted
                ),
            );
        }
        Command::Ingest(args) => {
            let stats = pipeline::stage_ingest(&args.config()?)?;
            print(&mut out, &stats.report());
        }
        Command::Translate(args) => pipeline::stage_translate(&args.config()?)?,
        Command::Index(args) => pipeline::stage_index(&args.config()?)?,
        Command::Match(args) => {
            let n = pipeline::stage_match(&args.config()?)?;
            print(&mut out, &format!("extracted {n}\n"));
        }
        Command::Report { args, gold } => {
            let report = pipeline::stage_report(&args.config()?, gold.as_deref())?;
            print(&mut out, &report);
        }
        Command::Bench(args) => print(&mut out, &bench(&args)?),
        Command::Tokenize { lang, text } => {
            let text = match text {
                Some(t) => t,
                None => {
                    let mut s = String::new();
                    io::stdin().read_to_string(&mut s).map_err(|e| Error::Io {
                        path: "<stdin>".into(),
                        source: e,
                    })?;
                    s
                }
            };
            let lang = match lang {
                LangArg::Src => Lang::Src,
                LangArg::Tgt => Lang::Tgt,
            };
            for tok in tokenize(&text, lang) {
                print(&mut out, &format!("{tok}\n"));
            }
        }
    }
    Ok(())
}

fn fail(class: ErrorClass, msg: &str) -> ExitCode {
    let msg = msg.split_whitespace().collect::<Vec<_>>().join(" ");
    eprintln!("bimine: error: {}: {msg}", class.as_str());
    ExitCode::from(class.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            return fail(ErrorClass::Usage, first.trim_start_matches("error: "));
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.class(), &e.to_string()),
    }
}
