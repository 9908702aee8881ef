//! Bidirectional candidate generation, pair scoring and capped selection.
//!
//! A pair `(e, p)` of a source sentence `e` and a target sentence `p` gets two
//! retrieval scores: `sim_fwd` compares `e` against the translation of `p`
//! into the source language, `sim_rev` compares `p` against the translation
//! of `e`. They are combined as
//!
//! ```text
//! bisim = alpha / (alpha + penalty) * (beta * sim_fwd + sim_rev) / (beta + 1)
//! ```
//!
//! where `penalty` is the token-count difference and `beta` weights the more
//! trusted forward translator.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;

use crate::corpus::{Corpus, Lang, SentenceRef};
use crate::error::{Error, Result};
use crate::index::{InvertedIndex, SearchScratch, DEFAULT_TOP_K};
use crate::text::TokenizedSentence;
use crate::translate::TranslationSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchMode {
    Bidirectional,
    OneDirectional,
}

impl std::str::FromStr for MatchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bi" | "bidirectional" => Ok(MatchMode::Bidirectional),
            "one" | "one-directional" | "onedirectional" => Ok(MatchMode::OneDirectional),
            _ => Err(Error::InvalidParam(format!("unknown mode {s:?} (expected bi|one)"))),
        }
    }
}

/// Which sentence lengths the penalty compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PenaltySource {
    /// The two original sentences of the pair.
    OriginalPair,
    /// Each original against the translation of its candidate; the larger
    /// of the two differences in bidirectional mode, the forward one alone in
    /// one-directional mode.
    TranslationVsCandidate,
}

impl std::str::FromStr for PenaltySource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "original_pair" => Ok(PenaltySource::OriginalPair),
            "translation_vs_candidate" => Ok(PenaltySource::TranslationVsCandidate),
            _ => Err(Error::InvalidParam(format!("unknown penalty source {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchConfig {
    pub alpha: f64,
    pub beta: f64,
    pub top_k: usize,
    pub max_matches_per_sentence: usize,
    pub min_score: f64,
    pub mode: MatchMode,
    pub penalty_source: PenaltySource,
}

impl Default for MatchConfig {
    fn default() -> Self {
        Self {
            alpha: 22.0,
            beta: 1.5,
            top_k: DEFAULT_TOP_K,
            max_matches_per_sentence: 2,
            min_score: 0.0,
            mode: MatchMode::Bidirectional,
            penalty_source: PenaltySource::OriginalPair,
        }
    }
}

impl MatchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParam(m));
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be > 0, got {}", self.alpha));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return bad(format!("beta must be > 0, got {}", self.beta));
        }
        if self.top_k < 1 {
            return bad("top_k must be >= 1".into());
        }
        if self.max_matches_per_sentence < 1 {
            return bad("max matches per sentence must be >= 1".into());
        }
        if self.min_score.is_nan() || self.min_score < 0.0 {
            return bad(format!("min_score must be >= 0, got {}", self.min_score));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidatePair {
    pub src: SentenceRef,
    pub tgt: SentenceRef,
    pub sim_fwd: f64,
    pub sim_rev: f64,
    pub penalty: u32,
    pub bisim: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractedPair {
    pub pair: CandidatePair,
    pub src_text: String,
    pub tgt_text: String,
    pub rank: usize,
}

fn check_inputs(sim_fwd: f64, sim_rev: f64, alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParam(format!("alpha must be > 0, got {alpha}")));
    }
    for (name, v) in [("sim_fwd", sim_fwd), ("sim_rev", sim_rev)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::InvalidParam(format!("{name} must be >= 0, got {v}")));
        }
    }
    Ok(())
}

pub fn bisimilarity(sim_fwd: f64, sim_rev: f64, penalty: u32, alpha: f64, beta: f64) -> Result<f64> {
    check_inputs(sim_fwd, sim_rev, alpha)?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParam(format!("beta must be > 0, got {beta}")));
    }
    let length_factor = alpha / (alpha + penalty as f64);
    Ok(length_factor * (beta * sim_fwd + sim_rev) / (beta + 1.0))
}

/// Baseline score: the forward similarity under the same length factor.
pub fn one_directional_score(sim_fwd: f64, penalty: u32, alpha: f64) -> Result<f64> {
    check_inputs(sim_fwd, 0.0, alpha)?;
    Ok(alpha / (alpha + penalty as f64) * sim_fwd)
}

/// Translator weight from the two BLEU scores (in percentage points).
pub fn compute_beta(bleu_fwd: f64, bleu_rev: f64) -> Result<f64> {
    if !(bleu_fwd > 1.0 && bleu_rev > 1.0) {
        return Err(Error::InvalidParam(format!(
            "BLEU scores must both exceed 1, got {bleu_fwd} and {bleu_rev}"
        )));
    }
    Ok(bleu_fwd.ln() / bleu_rev.ln())
}

pub fn compute_penalty(src: &TokenizedSentence, tgt: &TokenizedSentence) -> u32 {
    src.len().abs_diff(tgt.len()) as u32
}

/// Directional retrieval hits, recorded for inspection.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CandidateTrace {
    /// `(src, tgt, sim_fwd)` from querying the source index with forward
    /// translations, in target-sentence order then rank order.
    pub forward: Vec<(SentenceRef, SentenceRef, f64)>,
    /// `(src, tgt, sim_rev)` from the reverse direction (bidirectional only).
    pub reverse: Vec<(SentenceRef, SentenceRef, f64)>,
}

/// Query `index` with the translation of every sentence on `queries`,
/// returning hits per query in query order.
fn retrieve(
    index: &InvertedIndex,
    queries: &[TokenizedSentence],
    trans: &TranslationSet,
    k: usize,
) -> Result<Vec<Vec<(SentenceRef, SentenceRef, f64)>>> {
    queries
        .par_iter()
        .map_init(SearchScratch::default, |scratch, s| {
            let q = trans.require(&s.sref)?;
            Ok(index
                .search_top_k_with(scratch, q, k)
                .into_iter()
                .map(|h| (s.sref.clone(), h.doc, h.score))
                .collect())
        })
        .collect()
}

pub fn generate_candidates(
    corpus: &Corpus,
    src_index: &InvertedIndex,
    tgt_index: &InvertedIndex,
    trans_fwd: &TranslationSet,
    trans_rev: &TranslationSet,
    cfg: &MatchConfig,
) -> Result<Vec<CandidatePair>> {
    generate_candidates_traced(corpus, src_index, tgt_index, trans_fwd, trans_rev, cfg)
        .map(|(c, _)| c)
}

/// Candidates sorted by `(src, tgt)`, together with the raw directional hits.
pub fn generate_candidates_traced(
    corpus: &Corpus,
    src_index: &InvertedIndex,
    tgt_index: &InvertedIndex,
    trans_fwd: &TranslationSet,
    trans_rev: &TranslationSet,
    cfg: &MatchConfig,
) -> Result<(Vec<CandidatePair>, CandidateTrace)> {
    cfg.validate()?;
    let bidirectional = cfg.mode == MatchMode::Bidirectional;
    trans_fwd.check_coverage(corpus)?;
    if bidirectional {
        trans_rev.check_coverage(corpus)?;
    }

    let mut trace = CandidateTrace::default();
    for hits in retrieve(src_index, corpus.side(Lang::Tgt), trans_fwd, cfg.top_k)? {
        trace
            .forward
            .extend(hits.into_iter().map(|(p, e, s)| (e, p, s)));
    }
    if bidirectional {
        for hits in retrieve(tgt_index, corpus.side(Lang::Src), trans_rev, cfg.top_k)? {
            trace.reverse.extend(hits);
        }
    }

    type Sims = (Option<f64>, Option<f64>);
    let mut union: BTreeMap<(&SentenceRef, &SentenceRef), Sims> = BTreeMap::new();
    for (e, p, s) in &trace.forward {
        union.entry((e, p)).or_default().0 = Some(*s);
    }
    for (e, p, s) in &trace.reverse {
        union.entry((e, p)).or_default().1 = Some(*s);
    }

    let entries: Vec<_> = union.into_iter().collect();
    let pairs = entries
        .into_par_iter()
        .map(|((e, p), (fwd, rev))| {
            let src = corpus.get(e).ok_or_else(|| Error::UnknownRef(e.clone()))?;
            let tgt = corpus.get(p).ok_or_else(|| Error::UnknownRef(p.clone()))?;
            let sim_fwd = match fwd {
                Some(s) => s,
                None => src_index.score_pair(trans_fwd.require(p)?, e)?,
            };
            let sim_rev = match (bidirectional, rev) {
                (false, _) => 0.0,
                (true, Some(s)) => s,
                (true, None) => tgt_index.score_pair(trans_rev.require(e)?, p)?,
            };
            let penalty = match cfg.penalty_source {
                PenaltySource::OriginalPair => compute_penalty(src, tgt),
                PenaltySource::TranslationVsCandidate => {
                    let fwd_diff = trans_fwd.require(p)?.len().abs_diff(src.len());
                    if bidirectional {
                        let rev_diff = trans_rev.require(e)?.len().abs_diff(tgt.len());
                        fwd_diff.max(rev_diff) as u32
                    } else {
                        fwd_diff as u32
                    }
                }
            };
            let bisim = if bidirectional {
                bisimilarity(sim_fwd, sim_rev, penalty, cfg.alpha, cfg.beta)?
            } else {
                one_directional_score(sim_fwd, penalty, cfg.alpha)?
            };
            Ok(CandidatePair {
                src: e.clone(),
                tgt: p.clone(),
                sim_fwd,
                sim_rev,
                penalty,
                bisim,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((pairs, trace))
}

/// Greedy selection in score order: a pair is accepted while both of its
/// sentences are below the per-sentence cap and its score reaches
/// `min_score`.
pub fn select_pairs(
    candidates: &[CandidatePair],
    cfg: &MatchConfig,
    corpus: &Corpus,
) -> Result<Vec<ExtractedPair>> {
    cfg.validate()?;
    let mut seen = HashSet::with_capacity(candidates.len());
    for c in candidates {
        if !seen.insert((&c.src, &c.tgt)) {
            return Err(Error::DuplicatePair(c.src.clone(), c.tgt.clone()));
        }
    }
    let mut order: Vec<&CandidatePair> = candidates.iter().collect();
    order.sort_by(|a, b| {
        b.bisim
            .total_cmp(&a.bisim)
            .then_with(|| a.src.cmp(&b.src))
            .then_with(|| a.tgt.cmp(&b.tgt))
    });

    let cap = cfg.max_matches_per_sentence;
    let mut used: HashMap<&SentenceRef, usize> = HashMap::new();
    let mut out = Vec::new();
    for c in order {
        if c.bisim < cfg.min_score {
            break;
        }
        let src_n = used.get(&c.src).copied().unwrap_or(0);
        let tgt_n = used.get(&c.tgt).copied().unwrap_or(0);
        if src_n >= cap || tgt_n >= cap {
            continue;
        }
        used.insert(&c.src, src_n + 1);
        used.insert(&c.tgt, tgt_n + 1);
        let text = |r: &SentenceRef| {
            corpus
                .get(r)
                .map(|s| s.raw.clone())
                .ok_or_else(|| Error::UnknownRef(r.clone()))
        };
        out.push(ExtractedPair {
            pair: c.clone(),
            src_text: text(&c.src)?,
            tgt_text: text(&c.tgt)?,
            rank: out.len() + 1,
        });
    }
    Ok(out)
}
