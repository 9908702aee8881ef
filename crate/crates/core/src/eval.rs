//! Extraction quality against a gold alignment, and the side-by-side
//! comparison of bidirectional and one-directional matching.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::corpus::{Corpus, FilterConfig, Lang, SentenceRef};
use crate::error::{Error, Result};
use crate::matcher::{CandidateTrace, ExtractedPair, MatchConfig, MatchMode};
use crate::pipeline::Prepared;
use crate::synth::Benchmark;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GoldAlignment {
    pub pairs: BTreeSet<(SentenceRef, SentenceRef)>,
}

impl GoldAlignment {
    /// Read `src_doc TAB src_idx TAB tgt_doc TAB tgt_idx` lines.
    pub fn read_tsv<R: BufRead>(input: R) -> Result<Self> {
        let mut pairs = BTreeSet::new();
        for (n, line) in input.lines().enumerate() {
            let lineno = n + 1;
            let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 4 {
                return Err(Error::parse(lineno, "expected 4 tab-separated fields"));
            }
            let idx = |s: &str| {
                s.parse::<u32>()
                    .map_err(|_| Error::parse(lineno, format!("bad sentence index {s:?}")))
            };
            pairs.insert((
                SentenceRef::new(f[0], idx(f[1])?, Lang::Src),
                SentenceRef::new(f[2], idx(f[3])?, Lang::Tgt),
            ));
        }
        Ok(Self { pairs })
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (s, t) in &self.pairs {
            writeln!(out, "{}\t{}\t{}\t{}", s.doc_id, s.index, t.doc_id, t.index)?;
        }
        Ok(())
    }

    pub fn validate(&self, corpus: &Corpus) -> Result<()> {
        for (s, t) in &self.pairs {
            for r in [s, t] {
                if !corpus.contains(r) {
                    return Err(Error::UnknownRef(r.clone()));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub extracted_count: usize,
    pub gold_count: usize,
}

pub fn evaluate_pairs<'a>(
    extracted: impl IntoIterator<Item = (&'a SentenceRef, &'a SentenceRef)>,
    gold: &GoldAlignment,
) -> ExtractionScore {
    let extracted: BTreeSet<(&SentenceRef, &SentenceRef)> = extracted.into_iter().collect();
    let correct = extracted
        .iter()
        .filter(|(s, t)| gold.pairs.contains(&((*s).clone(), (*t).clone())))
        .count();
    let ratio = |n: usize, d: usize| if d == 0 { 0.0 } else { n as f64 / d as f64 };
    let precision = ratio(correct, extracted.len());
    let recall = ratio(correct, gold.pairs.len());
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    ExtractionScore {
        precision,
        recall,
        f1,
        extracted_count: extracted.len(),
        gold_count: gold.pairs.len(),
    }
}

pub fn evaluate_against_gold(extracted: &[ExtractedPair], gold: &GoldAlignment) -> ExtractionScore {
    evaluate_pairs(extracted.iter().map(|x| (&x.pair.src, &x.pair.tgt)), gold)
}

#[derive(Debug, Clone)]
pub struct ModeRun {
    pub score: ExtractionScore,
    pub extracted: Vec<ExtractedPair>,
    pub trace: CandidateTrace,
}

#[derive(Debug, Clone)]
pub struct ModeComparison {
    pub bidirectional: ModeRun,
    pub one_directional: ModeRun,
    pub alpha: f64,
}

impl ModeComparison {
    pub fn report(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "alpha {:.6}", self.alpha);
        let _ = writeln!(
            s,
            "{:<16} {:>10} {:>10} {:>10} {:>10} {:>10}",
            "mode", "extracted", "gold", "precision", "recall", "f1"
        );
        for (name, run) in [
            ("bidirectional", &self.bidirectional),
            ("one-directional", &self.one_directional),
        ] {
            let sc = &run.score;
            let _ = writeln!(
                s,
                "{:<16} {:>10} {:>10} {:>10.4} {:>10.4} {:>10.4}",
                name, sc.extracted_count, sc.gold_count, sc.precision, sc.recall, sc.f1
            );
        }
        s
    }
}

/// Run extraction in both modes over one shared set of indexes and
/// translations. `alpha = None` uses the filtered corpus mean sentence length.
pub fn compare_modes(
    bench: &Benchmark,
    filter: &FilterConfig,
    cfg: &MatchConfig,
    alpha: Option<f64>,
) -> Result<ModeComparison> {
    let prepared = Prepared::from_benchmark(bench, filter)?;
    bench.gold.validate(&prepared.corpus)?;
    let alpha = prepared.effective_alpha(alpha);
    let run = |mode: MatchMode| -> Result<ModeRun> {
        let cfg = MatchConfig {
            mode,
            alpha,
            ..cfg.clone()
        };
        let (extracted, trace) = prepared.extract(&cfg)?;
        Ok(ModeRun {
            score: evaluate_against_gold(&extracted, &bench.gold),
            extracted,
            trace,
        })
    };
    let (bi, one) = rayon::join(
        || run(MatchMode::Bidirectional),
        || run(MatchMode::OneDirectional),
    );
    Ok(ModeComparison {
        bidirectional: bi?,
        one_directional: one?,
        alpha,
    })
}
