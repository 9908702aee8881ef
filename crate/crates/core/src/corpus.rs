//! Document-aligned corpus loading and the document/sentence filters.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{word_count, TokenizedSentence};

/// Which side of the bilingual corpus a sentence belongs to. `Src` plays the
/// English role, `Tgt` the Persian role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Lang {
    Src,
    Tgt,
}

impl Lang {
    pub fn other(self) -> Lang {
        match self {
            Lang::Src => Lang::Tgt,
            Lang::Tgt => Lang::Src,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Lang::Src => "src",
            Lang::Tgt => "tgt",
        }
    }
}

/// Corpus-wide address of a sentence. `index` is the position within the
/// document's sentence list after filtering.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SentenceRef {
    pub doc_id: String,
    pub index: u32,
    pub lang: Lang,
}

impl SentenceRef {
    pub fn new(doc_id: impl Into<String>, index: u32, lang: Lang) -> Self {
        Self {
            doc_id: doc_id.into(),
            index,
            lang,
        }
    }
}

impl fmt::Display for SentenceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.doc_id, self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentPair {
    #[serde(rename = "id")]
    pub doc_id: String,
    #[serde(rename = "src")]
    pub src_sentences: Vec<String>,
    #[serde(rename = "tgt")]
    pub tgt_sentences: Vec<String>,
}

impl DocumentPair {
    pub fn sentences(&self, lang: Lang) -> &[String] {
        match lang {
            Lang::Src => &self.src_sentences,
            Lang::Tgt => &self.tgt_sentences,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterConfig {
    pub doc_ratio_threshold: f64,
    pub min_sentence_words: usize,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            doc_ratio_threshold: 0.3,
            min_sentence_words: 8,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        let r = self.doc_ratio_threshold;
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::InvalidParam(format!(
                "doc ratio threshold must be in (0, 1], got {r}"
            )));
        }
        if self.min_sentence_words < 1 {
            return Err(Error::InvalidParam("min sentence words must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CorpusStats {
    pub doc_pairs_before: usize,
    pub doc_pairs_after: usize,
    pub sentences_before: (usize, usize),
    pub sentences_after: (usize, usize),
    /// Mean token count over every surviving sentence of both sides.
    pub mean_sentence_length: f64,
}

impl CorpusStats {
    /// Plain-text report: documents and sentences per side, before and
    /// after filtering.
    pub fn report(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "{:<8} {:>12} {:>12} {:>12} {:>12}\n",
            "", "docs_src", "docs_tgt", "sents_src", "sents_tgt"
        ));
        s.push_str(&format!(
            "{:<8} {:>12} {:>12} {:>12} {:>12}\n",
            "before",
            self.doc_pairs_before,
            self.doc_pairs_before,
            self.sentences_before.0,
            self.sentences_before.1
        ));
        s.push_str(&format!(
            "{:<8} {:>12} {:>12} {:>12} {:>12}\n",
            "after",
            self.doc_pairs_after,
            self.doc_pairs_after,
            self.sentences_after.0,
            self.sentences_after.1
        ));
        s.push_str(&format!(
            "mean_sentence_length {:.6}\n",
            self.mean_sentence_length
        ));
        s
    }
}

/// Read one JSON record per line. Blank lines are skipped but still counted
/// for error line numbers.
pub fn parse_document_pairs<R: BufRead>(input: R) -> Result<Vec<DocumentPair>> {
    let mut pairs = Vec::new();
    let mut seen = HashSet::new();
    for (n, line) in input.lines().enumerate() {
        let lineno = n + 1;
        let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: DocumentPair =
            serde_json::from_str(&line).map_err(|e| Error::parse(lineno, e.to_string()))?;
        if !seen.insert(doc.doc_id.clone()) {
            return Err(Error::DuplicateDocId(doc.doc_id));
        }
        pairs.push(doc);
    }
    Ok(pairs)
}

pub fn write_document_pairs<W: Write>(mut out: W, pairs: &[DocumentPair]) -> std::io::Result<()> {
    for p in pairs {
        serde_json::to_writer(&mut out, p)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn ratio_ok(a: usize, b: usize, threshold: f64) -> bool {
    let (lo, hi) = (a.min(b) as f64, a.max(b) as f64);
    // 1e-9 relative slack keeps exact-boundary ratios (3 of 10 at 0.3) in.
    lo > 0.0 && lo >= threshold * hi * (1.0 - 1e-9)
}

/// Apply the sentence-length filter, then the document ratio filter, to
/// every document. Surviving documents and sentences keep their order.
pub fn filter_corpus(
    pairs: &[DocumentPair],
    cfg: &FilterConfig,
) -> Result<(Vec<DocumentPair>, CorpusStats)> {
    cfg.validate()?;
    let min_words = cfg.min_sentence_words;
    let filtered: Vec<Option<(DocumentPair, usize)>> = pairs
        .par_iter()
        .map(|doc| {
            let mut tokens = 0usize;
            let mut keep = |sentences: &[String], lang: Lang| -> Vec<String> {
                sentences
                    .iter()
                    .filter_map(|s| {
                        let n = word_count(s, lang);
                        (n >= min_words).then(|| {
                            tokens += n;
                            s.clone()
                        })
                    })
                    .collect()
            };
            let src = keep(&doc.src_sentences, Lang::Src);
            let tgt = keep(&doc.tgt_sentences, Lang::Tgt);
            ratio_ok(src.len(), tgt.len(), cfg.doc_ratio_threshold).then(|| {
                (
                    DocumentPair {
                        doc_id: doc.doc_id.clone(),
                        src_sentences: src,
                        tgt_sentences: tgt,
                    },
                    tokens,
                )
            })
        })
        .collect();

    let mut stats = CorpusStats {
        doc_pairs_before: pairs.len(),
        sentences_before: pairs.iter().fold((0, 0), |(s, t), d| {
            (s + d.src_sentences.len(), t + d.tgt_sentences.len())
        }),
        ..CorpusStats::default()
    };
    let mut total_tokens = 0usize;
    let mut kept = Vec::new();
    for (doc, tokens) in filtered.into_iter().flatten() {
        stats.sentences_after.0 += doc.src_sentences.len();
        stats.sentences_after.1 += doc.tgt_sentences.len();
        total_tokens += tokens;
        kept.push(doc);
    }
    stats.doc_pairs_after = kept.len();
    let n_sent = stats.sentences_after.0 + stats.sentences_after.1;
    if n_sent > 0 {
        stats.mean_sentence_length = total_tokens as f64 / n_sent as f64;
    }
    Ok((kept, stats))
}

/// A filtered corpus with both sides tokenized and addressable by
/// [`SentenceRef`].
#[derive(Debug, Clone)]
pub struct Corpus {
    pub docs: Vec<DocumentPair>,
    src: Vec<TokenizedSentence>,
    tgt: Vec<TokenizedSentence>,
    lookup: HashMap<SentenceRef, usize>,
}

impl Corpus {
    pub fn new(docs: Vec<DocumentPair>) -> Result<Self> {
        let mut seen = HashSet::new();
        for d in &docs {
            if !seen.insert(d.doc_id.as_str()) {
                return Err(Error::DuplicateDocId(d.doc_id.clone()));
            }
        }
        let side = |lang: Lang| -> Vec<TokenizedSentence> {
            let refs: Vec<(SentenceRef, &str)> = docs
                .iter()
                .flat_map(|d| {
                    d.sentences(lang).iter().enumerate().map(move |(i, s)| {
                        (SentenceRef::new(d.doc_id.clone(), i as u32, lang), s.as_str())
                    })
                })
                .collect();
            refs.into_par_iter()
                .map(|(r, s)| TokenizedSentence::new(r, s))
                .collect()
        };
        let src = side(Lang::Src);
        let tgt = side(Lang::Tgt);
        let lookup = src
            .iter()
            .enumerate()
            .chain(tgt.iter().enumerate())
            .map(|(i, s)| (s.sref.clone(), i))
            .collect();
        Ok(Self {
            docs,
            src,
            tgt,
            lookup,
        })
    }

    pub fn side(&self, lang: Lang) -> &[TokenizedSentence] {
        match lang {
            Lang::Src => &self.src,
            Lang::Tgt => &self.tgt,
        }
    }

    pub fn get(&self, r: &SentenceRef) -> Option<&TokenizedSentence> {
        self.lookup.get(r).map(|&i| &self.side(r.lang)[i])
    }

    pub fn contains(&self, r: &SentenceRef) -> bool {
        self.lookup.contains_key(r)
    }

    /// Mean token count over all sentences of both sides; 0 when empty.
    pub fn mean_sentence_length(&self) -> f64 {
        let n = self.src.len() + self.tgt.len();
        if n == 0 {
            return 0.0;
        }
        let total: usize = self.src.iter().chain(&self.tgt).map(|s| s.len()).sum();
        total as f64 / n as f64
    }
}
