//! End-to-end orchestration: ingest → translate → index → match → report.
//!
//! Each stage can run on its own against a work directory:
//!
//! | file                  | written by  |
//! |-----------------------|-------------|
//! | `corpus.jsonl`        | ingest      |
//! | `stats.txt`           | ingest      |
//! | `translation.fwd.tsv` | translate   |
//! | `translation.rev.tsv` | translate   |
//! | `index.src.bin`       | index       |
//! | `index.tgt.bin`       | index       |
//! | `manifest.txt`        | every stage |
//!
//! The manifest records the SHA-256 digest of `corpus.jsonl` each later stage
//! was built from, so a re-ingested corpus invalidates stale artifacts.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::corpus::{
    filter_corpus, parse_document_pairs, write_document_pairs, Corpus, CorpusStats, DocumentPair,
    FilterConfig, Lang,
};
use crate::error::{Error, Result};
use crate::eval::{evaluate_pairs, GoldAlignment};
use crate::index::InvertedIndex;
use crate::markup::clean_markup;
use crate::matcher::{
    generate_candidates_traced, select_pairs, CandidateTrace, ExtractedPair, MatchConfig,
    MatchMode,
};
use crate::report::{extracted_tsv, histogram, histogram_scores, parse_extracted_tsv, Histogram, DEFAULT_EDGES};
use crate::synth::Benchmark;
use crate::translate::{
    load_phrase_table, load_pretranslated, translate_corpus, Direction, PhraseTable,
    TranslationSet,
};

#[derive(Debug, Clone, PartialEq)]
pub enum TranslatorSource {
    PhraseTable(PathBuf),
    Pretranslated(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub input: Option<PathBuf>,
    pub work_dir: PathBuf,
    pub output: PathBuf,
    pub stats_output: PathBuf,
    pub histogram_output: PathBuf,
    pub filter: FilterConfig,
    /// `None`: mean sentence length of the filtered corpus.
    pub alpha: Option<f64>,
    pub matching: MatchConfig,
    pub translator_fwd: Option<TranslatorSource>,
    pub translator_rev: Option<TranslatorSource>,
    pub histogram_edges: Vec<f64>,
    pub seed: u64,
    pub jobs: Option<usize>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            input: None,
            work_dir: PathBuf::from("bimine-work"),
            output: PathBuf::from("extracted.tsv"),
            stats_output: PathBuf::from("stats.txt"),
            histogram_output: PathBuf::from("histogram.csv"),
            filter: FilterConfig::default(),
            alpha: None,
            matching: MatchConfig::default(),
            translator_fwd: None,
            translator_rev: None,
            histogram_edges: DEFAULT_EDGES.to_vec(),
            seed: 42,
            jobs: None,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

impl PipelineConfig {
    /// Set one field by its config-file key. Hyphens and underscores are
    /// interchangeable in keys.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let v = value.trim();
        match key.as_str() {
            "input" => self.input = Some(v.into()),
            "work_dir" => self.work_dir = v.into(),
            "output" => self.output = v.into(),
            "stats" | "stats_output" => self.stats_output = v.into(),
            "histogram" | "histogram_output" => self.histogram_output = v.into(),
            "doc_ratio" => self.filter.doc_ratio_threshold = parse_num(&key, v)?,
            "min_words" => self.filter.min_sentence_words = parse_num(&key, v)?,
            "alpha" => self.alpha = Some(parse_num(&key, v)?),
            "beta" => self.matching.beta = parse_num(&key, v)?,
            "top_k" => self.matching.top_k = parse_num(&key, v)?,
            "cap" => self.matching.max_matches_per_sentence = parse_num(&key, v)?,
            "min_score" => self.matching.min_score = parse_num(&key, v)?,
            "mode" => self.matching.mode = v.parse()?,
            "penalty_source" => self.matching.penalty_source = v.parse()?,
            "phrase_table_fwd" => self.translator_fwd = Some(TranslatorSource::PhraseTable(v.into())),
            "phrase_table_rev" => self.translator_rev = Some(TranslatorSource::PhraseTable(v.into())),
            "pretranslated_fwd" => {
                self.translator_fwd = Some(TranslatorSource::Pretranslated(v.into()))
            }
            "pretranslated_rev" => {
                self.translator_rev = Some(TranslatorSource::Pretranslated(v.into()))
            }
            "histogram_edges" => {
                self.histogram_edges = v
                    .split(',')
                    .map(|e| parse_num(&key, e))
                    .collect::<Result<_>>()?
            }
            "seed" => self.seed = parse_num(&key, v)?,
            "jobs" => self.jobs = Some(parse_num(&key, v)?),
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Parse flat `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            let norm = key.trim().replace('-', "_");
            let slot = if let Some(dir) = norm
                .strip_prefix("phrase_table_")
                .or_else(|| norm.strip_prefix("pretranslated_"))
            {
                format!("translator_{dir}")
            } else {
                norm.clone()
            };
            if let Some(prev) = seen.insert(slot, norm.clone()) {
                return Err(Error::Config(format!(
                    "line {}: {norm} conflicts with earlier {prev}",
                    n + 1
                )));
            }
            cfg.set(key, value)
                .map_err(|e| Error::Config(format!("line {}: {e}", n + 1)))?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.filter.validate()?;
        let probe = MatchConfig {
            alpha: self.alpha.unwrap_or(1.0),
            ..self.matching.clone()
        };
        probe.validate()?;
        histogram_scores(std::iter::empty(), &self.histogram_edges)?;
        if self.jobs == Some(0) {
            return Err(Error::Config("jobs must be >= 1".into()));
        }
        Ok(())
    }

    fn translator(&self, dir: Direction) -> Option<&TranslatorSource> {
        match dir {
            Direction::Forward => self.translator_fwd.as_ref(),
            Direction::Reverse => self.translator_rev.as_ref(),
        }
    }

    fn needs_reverse(&self) -> bool {
        self.matching.mode == MatchMode::Bidirectional
    }
}

/// Run `f` on a pool of `jobs` threads, or on the global pool when `None`.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Everything matching needs, held in memory.
pub struct Prepared {
    pub corpus: Corpus,
    pub src_index: InvertedIndex,
    pub tgt_index: InvertedIndex,
    pub trans_fwd: TranslationSet,
    pub trans_rev: TranslationSet,
}

impl Prepared {
    pub fn new(
        corpus: Corpus,
        trans_fwd: TranslationSet,
        trans_rev: Option<TranslationSet>,
    ) -> Result<Self> {
        let (src_index, tgt_index) = rayon::join(
            || InvertedIndex::build(corpus.side(Lang::Src)),
            || InvertedIndex::build(corpus.side(Lang::Tgt)),
        );
        Ok(Self {
            src_index: src_index?,
            tgt_index: tgt_index?,
            corpus,
            trans_fwd,
            trans_rev: trans_rev.unwrap_or_else(|| TranslationSet::new(Direction::Reverse)),
        })
    }

    /// Filter the benchmark documents, which must pass unchanged so that the
    /// gold references stay valid, then translate both sides.
    pub fn from_benchmark(bench: &Benchmark, filter: &FilterConfig) -> Result<Self> {
        let (docs, _) = filter_corpus(&bench.docs, filter)?;
        if docs != bench.docs {
            return Err(Error::InvalidParam(
                "benchmark corpus does not survive the sentence/document filters unchanged".into(),
            ));
        }
        let corpus = Corpus::new(docs)?;
        let fwd = translate_corpus(corpus.side(Lang::Tgt), &bench.table_fwd);
        let rev = translate_corpus(corpus.side(Lang::Src), &bench.table_rev);
        Self::new(corpus, fwd, Some(rev))
    }

    pub fn effective_alpha(&self, alpha: Option<f64>) -> f64 {
        effective_alpha(&self.corpus, alpha)
    }

    pub fn extract(&self, cfg: &MatchConfig) -> Result<(Vec<ExtractedPair>, CandidateTrace)> {
        let (cands, trace) = generate_candidates_traced(
            &self.corpus,
            &self.src_index,
            &self.tgt_index,
            &self.trans_fwd,
            &self.trans_rev,
            cfg,
        )?;
        Ok((select_pairs(&cands, cfg, &self.corpus)?, trace))
    }
}

/// The configured alpha, else the corpus mean sentence length; an empty
/// corpus falls back to the default.
pub fn effective_alpha(corpus: &Corpus, alpha: Option<f64>) -> f64 {
    alpha.unwrap_or_else(|| {
        let mean = corpus.mean_sentence_length();
        if mean > 0.0 {
            mean
        } else {
            MatchConfig::default().alpha
        }
    })
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

/// Read, clean and filter the input corpus.
pub fn ingest(cfg: &PipelineConfig) -> Result<(Vec<DocumentPair>, CorpusStats)> {
    let input = cfg
        .input
        .as_ref()
        .ok_or_else(|| Error::Config("no input corpus given".into()))?;
    let mut docs = parse_document_pairs(open(input)?)?;
    for d in &mut docs {
        for s in d.src_sentences.iter_mut().chain(d.tgt_sentences.iter_mut()) {
            *s = clean_markup(s);
        }
    }
    filter_corpus(&docs, &cfg.filter)
}

pub fn translate(cfg: &PipelineConfig, corpus: &Corpus, dir: Direction) -> Result<TranslationSet> {
    let source = cfg.translator(dir).ok_or_else(|| {
        Error::Config(format!(
            "no translator configured for direction {} (phrase table or pre-translated file)",
            dir.as_str()
        ))
    })?;
    let set = match source {
        TranslatorSource::PhraseTable(path) => {
            let table: PhraseTable = load_phrase_table(open(path)?, dir)?;
            translate_corpus(corpus.side(dir.from_lang()), &table)
        }
        TranslatorSource::Pretranslated(path) => {
            if !path.exists() {
                return Err(Error::TranslationFileMissing(path.clone()));
            }
            load_pretranslated(open(path)?, dir, corpus)?
        }
    };
    set.check_coverage(corpus)?;
    Ok(set)
}

/// Write all files or none: each goes to a temporary sibling first and is
/// renamed into place once every write has succeeded.
pub fn write_all_or_nothing(files: &[(&Path, &[u8])]) -> Result<()> {
    let tmp_of = |p: &Path| {
        let mut name = p.file_name().unwrap_or_default().to_os_string();
        name.push(".partial");
        p.with_file_name(name)
    };
    let mut written: Vec<PathBuf> = Vec::new();
    let cleanup = |paths: &[PathBuf]| {
        for p in paths {
            let _ = fs::remove_file(p);
        }
    };
    for (path, bytes) in files {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            if let Err(e) = fs::create_dir_all(parent) {
                cleanup(&written);
                return Err(Error::io(parent, e));
            }
        }
        let tmp = tmp_of(path);
        if let Err(e) = fs::write(&tmp, bytes) {
            cleanup(&written);
            let _ = fs::remove_file(&tmp);
            return Err(Error::io(&tmp, e));
        }
        written.push(tmp);
    }
    let mut renamed: Vec<PathBuf> = Vec::new();
    for (tmp, (path, _)) in written.iter().zip(files) {
        if let Err(e) = fs::rename(tmp, path) {
            cleanup(&written);
            cleanup(&renamed);
            return Err(Error::io(*path, e));
        }
        renamed.push(path.to_path_buf());
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub stats: CorpusStats,
    pub alpha: f64,
    pub extracted: usize,
    pub histogram: Histogram,
}

fn match_config(cfg: &PipelineConfig, corpus: &Corpus) -> MatchConfig {
    MatchConfig {
        alpha: effective_alpha(corpus, cfg.alpha),
        ..cfg.matching.clone()
    }
}

/// Full in-memory run. Writes the extracted TSV, the stats report and the
/// histogram CSV; on failure none of them is left behind.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunSummary> {
    cfg.validate()?;
    with_jobs(cfg.jobs, || {
        let (docs, stats) = ingest(cfg)?;
        let corpus = Corpus::new(docs)?;
        let fwd = translate(cfg, &corpus, Direction::Forward)?;
        let rev = if cfg.needs_reverse() {
            Some(translate(cfg, &corpus, Direction::Reverse)?)
        } else {
            None
        };
        let prepared = Prepared::new(corpus, fwd, rev)?;
        let mcfg = match_config(cfg, &prepared.corpus);
        let (extracted, _) = prepared.extract(&mcfg)?;
        let hist = histogram(&extracted, &cfg.histogram_edges)?;
        write_all_or_nothing(&[
            (&cfg.output, extracted_tsv(&extracted).as_bytes()),
            (&cfg.stats_output, stats.report().as_bytes()),
            (&cfg.histogram_output, hist.to_csv().as_bytes()),
        ])?;
        Ok(RunSummary {
            stats,
            alpha: mcfg.alpha,
            extracted: extracted.len(),
            histogram: hist,
        })
    })?
}

/// Stage artifacts inside the work directory.
pub struct WorkDir {
    root: PathBuf,
}

impl WorkDir {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn corpus(&self) -> PathBuf {
        self.root.join("corpus.jsonl")
    }

    pub fn stats(&self) -> PathBuf {
        self.root.join("stats.txt")
    }

    pub fn translation(&self, dir: Direction) -> PathBuf {
        self.root.join(format!("translation.{}.tsv", dir.as_str()))
    }

    pub fn index(&self, lang: Lang) -> PathBuf {
        self.root.join(format!("index.{}.bin", lang.as_str()))
    }

    pub fn manifest(&self) -> PathBuf {
        self.root.join("manifest.txt")
    }

    fn read_manifest(&self) -> Result<BTreeMap<String, String>> {
        let path = self.manifest();
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(BTreeMap::new()),
            Err(e) => return Err(Error::io(path, e)),
        };
        Ok(text
            .lines()
            .filter_map(|l| l.split_once('='))
            .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
            .collect())
    }

    fn stamp(&self, updates: &[(&str, &str)], clear: &[&str]) -> Result<()> {
        let mut m = self.read_manifest()?;
        for k in clear {
            m.remove(*k);
        }
        for (k, v) in updates {
            m.insert(k.to_string(), v.to_string());
        }
        let text: String = m.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
        write_all_or_nothing(&[(&self.manifest(), text.as_bytes())])
    }

    /// Load the corpus artifact and its digest, checking the manifest agrees.
    fn load_corpus(&self) -> Result<(Corpus, String)> {
        let path = self.corpus();
        let bytes = fs::read(&path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::StageMismatch {
                path: path.clone(),
                msg: "missing; run the ingest stage first".into(),
            },
            _ => Error::io(&path, e),
        })?;
        let digest = hex::encode(Sha256::digest(&bytes));
        if self.read_manifest()?.get("corpus") != Some(&digest) {
            return Err(Error::StageMismatch {
                path,
                msg: "does not match the manifest; re-run ingest".into(),
            });
        }
        let docs = parse_document_pairs(&bytes[..])?;
        Ok((Corpus::new(docs)?, digest))
    }

    fn require_stamp(&self, key: &str, digest: &str, artifact: &Path) -> Result<()> {
        if !artifact.exists() {
            return Err(Error::StageMismatch {
                path: artifact.to_path_buf(),
                msg: "missing; run the stage that produces it".into(),
            });
        }
        if self.read_manifest()?.get(key).map(String::as_str) != Some(digest) {
            return Err(Error::StageMismatch {
                path: artifact.to_path_buf(),
                msg: "stale: built from a different corpus".into(),
            });
        }
        Ok(())
    }
}

pub fn stage_ingest(cfg: &PipelineConfig) -> Result<CorpusStats> {
    cfg.validate()?;
    with_jobs(cfg.jobs, || {
        let (docs, stats) = ingest(cfg)?;
        let wd = WorkDir::new(&cfg.work_dir);
        let mut bytes = Vec::new();
        write_document_pairs(&mut bytes, &docs).map_err(|e| Error::io(wd.corpus(), e))?;
        let digest = hex::encode(Sha256::digest(&bytes));
        write_all_or_nothing(&[
            (&wd.corpus(), &bytes),
            (&wd.stats(), stats.report().as_bytes()),
        ])?;
        wd.stamp(
            &[("corpus", &digest)],
            &["translate.fwd", "translate.rev", "index"],
        )?;
        Ok(stats)
    })?
}

pub fn stage_translate(cfg: &PipelineConfig) -> Result<()> {
    cfg.validate()?;
    with_jobs(cfg.jobs, || {
        let wd = WorkDir::new(&cfg.work_dir);
        let (corpus, digest) = wd.load_corpus()?;
        let mut dirs = vec![Direction::Forward];
        if cfg.translator_rev.is_some() || cfg.needs_reverse() {
            dirs.push(Direction::Reverse);
        }
        let mut files = Vec::new();
        for dir in dirs {
            let set = translate(cfg, &corpus, dir)?;
            let mut buf = Vec::new();
            set.write_tsv(&mut buf).map_err(|e| Error::io(wd.translation(dir), e))?;
            files.push((dir, buf));
        }
        let paths: Vec<PathBuf> = files.iter().map(|(d, _)| wd.translation(*d)).collect();
        let writes: Vec<(&Path, &[u8])> = paths
            .iter()
            .zip(&files)
            .map(|(p, (_, b))| (p.as_path(), b.as_slice()))
            .collect();
        write_all_or_nothing(&writes)?;
        let keys: Vec<String> = files
            .iter()
            .map(|(d, _)| format!("translate.{}", d.as_str()))
            .collect();
        let updates: Vec<(&str, &str)> = keys.iter().map(|k| (k.as_str(), digest.as_str())).collect();
        wd.stamp(&updates, &[])
    })?
}

pub fn stage_index(cfg: &PipelineConfig) -> Result<()> {
    cfg.validate()?;
    with_jobs(cfg.jobs, || {
        let wd = WorkDir::new(&cfg.work_dir);
        let (corpus, digest) = wd.load_corpus()?;
        let mut blobs = Vec::new();
        for lang in [Lang::Src, Lang::Tgt] {
            let index = InvertedIndex::build(corpus.side(lang))?;
            let mut buf = Vec::new();
            index
                .write_snapshot(&mut buf, &digest)
                .map_err(|e| Error::io(wd.index(lang), e))?;
            blobs.push((wd.index(lang), buf));
        }
        let writes: Vec<(&Path, &[u8])> =
            blobs.iter().map(|(p, b)| (p.as_path(), b.as_slice())).collect();
        write_all_or_nothing(&writes)?;
        wd.stamp(&[("index", &digest)], &[])
    })?
}

fn load_index(path: &Path, digest: &str) -> Result<InvertedIndex> {
    let (index, tag) = InvertedIndex::read_snapshot(open(path)?)?;
    if tag != digest {
        return Err(Error::StageMismatch {
            path: path.to_path_buf(),
            msg: "index snapshot was built from a different corpus".into(),
        });
    }
    Ok(index)
}

/// Match from stage artifacts and write the extracted TSV.
pub fn stage_match(cfg: &PipelineConfig) -> Result<usize> {
    cfg.validate()?;
    with_jobs(cfg.jobs, || {
        let wd = WorkDir::new(&cfg.work_dir);
        let (corpus, digest) = wd.load_corpus()?;
        for lang in [Lang::Src, Lang::Tgt] {
            wd.require_stamp("index", &digest, &wd.index(lang))?;
        }
        let mut dirs = vec![Direction::Forward];
        if cfg.needs_reverse() {
            dirs.push(Direction::Reverse);
        }
        let mut sets = Vec::new();
        for &dir in &dirs {
            let path = wd.translation(dir);
            wd.require_stamp(&format!("translate.{}", dir.as_str()), &digest, &path)?;
            let set = load_pretranslated(open(&path)?, dir, &corpus)?;
            set.check_coverage(&corpus)?;
            sets.push(set);
        }
        let src_index = load_index(&wd.index(Lang::Src), &digest)?;
        let tgt_index = load_index(&wd.index(Lang::Tgt), &digest)?;
        let trans_rev = if sets.len() > 1 { sets.pop() } else { None };
        let trans_fwd = sets.pop().expect("forward translation loaded");
        let prepared = Prepared {
            corpus,
            src_index,
            tgt_index,
            trans_fwd,
            trans_rev: trans_rev.unwrap_or_else(|| TranslationSet::new(Direction::Reverse)),
        };
        let mcfg = match_config(cfg, &prepared.corpus);
        let (extracted, _) = prepared.extract(&mcfg)?;
        write_all_or_nothing(&[(&cfg.output, extracted_tsv(&extracted).as_bytes())])?;
        Ok(extracted.len())
    })?
}

/// Histogram CSV (and optional gold evaluation) from an extracted TSV.
/// Returns the text report.
pub fn stage_report(cfg: &PipelineConfig, gold: Option<&Path>) -> Result<String> {
    cfg.validate()?;
    let rows = parse_extracted_tsv(open(&cfg.output)?)?;
    let hist = histogram_scores(rows.iter().map(|r| r.bisim), &cfg.histogram_edges)?;
    write_all_or_nothing(&[(&cfg.histogram_output, hist.to_csv().as_bytes())])?;
    let label = if cfg.histogram_edges == DEFAULT_EDGES {
        "default"
    } else {
        "custom"
    };
    let mut report = format!("extracted pairs {}\n", rows.len());
    report.push_str(&hist.render(label));
    if let Some(path) = gold {
        let gold = GoldAlignment::read_tsv(open(path)?)?;
        let s = evaluate_pairs(rows.iter().map(|r| (&r.src, &r.tgt)), &gold);
        report.push_str(&format!(
            "gold pairs {}\nprecision {:.4}\nrecall {:.4}\nf1 {:.4}\n",
            s.gold_count, s.precision, s.recall, s.f1
        ));
    }
    Ok(report)
}
