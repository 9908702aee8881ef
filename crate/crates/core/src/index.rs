//! Inverted index with classic TF-IDF scoring.
//!
//! Score of document `d` for query `q`:
//!
//! ```text
//! coord(q,d) * Σ_{t ∈ q ∩ d} qf(t) * sqrt(tf(t,d)) * idf(t)² * 1/sqrt(len(d))
//! idf(t)     = max(0, 1 + ln(n_docs / (df(t) + 1)))
//! coord(q,d) = |distinct q terms in d| / |distinct q terms|
//! ```
//!
//! Query terms are visited in sorted order by both [`InvertedIndex::score_pair`]
//! and [`InvertedIndex::search_top_k`], so the two produce bit-identical scores.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use crate::corpus::{Lang, SentenceRef};
use crate::error::{Error, Result};
use crate::text::TokenizedSentence;

pub const DEFAULT_TOP_K: usize = 10;

const SNAPSHOT_MAGIC: &[u8; 8] = b"BIMINEIX";
const SNAPSHOT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Posting {
    pub doc: u32,
    pub tf: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredHit {
    pub doc: SentenceRef,
    pub ordinal: u32,
    pub score: f64,
}

#[derive(Debug, Clone, Default)]
pub struct InvertedIndex {
    term_ids: HashMap<String, u32>,
    terms: Vec<String>,
    postings: Vec<Vec<Posting>>,
    idf: Vec<f64>,
    doc_len: Vec<u32>,
    doc_refs: Vec<SentenceRef>,
    ref_ordinals: HashMap<SentenceRef, u32>,
}

pub fn idf(n_docs: usize, doc_freq: usize) -> f64 {
    (1.0 + (n_docs as f64 / (doc_freq as f64 + 1.0)).ln()).max(0.0)
}

#[inline]
/// `qf * sqrt(tf) * idf^2 / sqrt(len)`, with tf and len under one root so
/// equal tf/len ratios give bit-identical weights and ties stay exact.
fn term_weight(qf: u32, tf: u32, idf: f64, len: u32) -> f64 {
    qf as f64 * idf * idf * (tf as f64 / len as f64).sqrt()
}

#[inline]
fn finish(sum: f64, matched: u32, distinct: usize) -> f64 {
    if matched == 0 {
        return 0.0;
    }
    snap((matched as f64 / distinct as f64) * sum)
}

/// Round to 40 significant bits (about 1e-12 relative). Documents whose
/// scores agree mathematically but differ in the last bits of a float sum
/// then compare equal and fall through to the ordinal tie-break.
fn snap(x: f64) -> f64 {
    const DROP: u32 = 12;
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    let bits = x.to_bits();
    let half = 1u64 << (DROP - 1);
    f64::from_bits((bits + half) & !((1u64 << DROP) - 1))
}

/// Distinct query terms in sorted order with their query frequency.
struct PreparedQuery {
    terms: Vec<(Option<u32>, u32)>,
}

/// Reusable per-thread accumulators for [`InvertedIndex::search_top_k_with`].
#[derive(Debug, Default)]
pub struct SearchScratch {
    acc: Vec<f64>,
    matched: Vec<u32>,
    touched: Vec<u32>,
}

impl InvertedIndex {
    pub fn build(sentences: &[TokenizedSentence]) -> Result<Self> {
        let mut index = InvertedIndex::default();
        for s in sentences {
            index.add(s)?;
        }
        index.refresh_idf();
        Ok(index)
    }

    fn add(&mut self, s: &TokenizedSentence) -> Result<()> {
        let ord = self.doc_refs.len() as u32;
        if self.ref_ordinals.insert(s.sref.clone(), ord).is_some() {
            return Err(Error::DuplicateRef(s.sref.clone()));
        }
        self.doc_refs.push(s.sref.clone());
        self.doc_len.push(s.tokens.len() as u32);

        let mut counts: BTreeMap<&str, u32> = BTreeMap::new();
        for t in &s.tokens {
            *counts.entry(t).or_default() += 1;
        }
        for (term, tf) in counts {
            let id = match self.term_ids.get(term) {
                Some(&id) => id,
                None => {
                    let id = self.terms.len() as u32;
                    self.term_ids.insert(term.to_string(), id);
                    self.terms.push(term.to_string());
                    self.postings.push(Vec::new());
                    id
                }
            };
            self.postings[id as usize].push(Posting { doc: ord, tf });
        }
        Ok(())
    }

    fn refresh_idf(&mut self) {
        let n = self.doc_refs.len();
        self.idf = self.postings.iter().map(|p| idf(n, p.len())).collect();
    }

    pub fn n_docs(&self) -> usize {
        self.doc_refs.len()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn doc_freq(&self, term: &str) -> usize {
        self.term_ids
            .get(term)
            .map_or(0, |&id| self.postings[id as usize].len())
    }

    pub fn postings(&self, term: &str) -> &[Posting] {
        self.term_ids
            .get(term)
            .map_or(&[], |&id| &self.postings[id as usize])
    }

    pub fn doc_len(&self, ordinal: u32) -> u32 {
        self.doc_len[ordinal as usize]
    }

    pub fn doc_ref(&self, ordinal: u32) -> &SentenceRef {
        &self.doc_refs[ordinal as usize]
    }

    pub fn ordinal(&self, r: &SentenceRef) -> Option<u32> {
        self.ref_ordinals.get(r).copied()
    }

    pub fn idf_of(&self, term: &str) -> f64 {
        self.term_ids
            .get(term)
            .map_or_else(|| idf(self.n_docs(), 0), |&id| self.idf[id as usize])
    }

    fn prepare(&self, query: &[String]) -> PreparedQuery {
        let mut counts: BTreeMap<&str, u32> = BTreeMap::new();
        for t in query {
            *counts.entry(t).or_default() += 1;
        }
        PreparedQuery {
            terms: counts
                .into_iter()
                .map(|(t, qf)| (self.term_ids.get(t).copied(), qf))
                .collect(),
        }
    }

    /// Score one document directly, without touching any other posting.
    pub fn score_pair(&self, query: &[String], doc: &SentenceRef) -> Result<f64> {
        let ord = self
            .ordinal(doc)
            .ok_or_else(|| Error::UnknownRef(doc.clone()))?;
        Ok(self.score_ordinal(query, ord))
    }

    pub fn score_ordinal(&self, query: &[String], ord: u32) -> f64 {
        let q = self.prepare(query);
        if q.terms.is_empty() {
            return 0.0;
        }
        let len = self.doc_len[ord as usize];
        let mut sum = 0.0;
        let mut matched = 0u32;
        for &(id, qf) in &q.terms {
            let Some(id) = id else { continue };
            let plist = &self.postings[id as usize];
            if let Ok(pos) = plist.binary_search_by_key(&ord, |p| p.doc) {
                sum += term_weight(qf, plist[pos].tf, self.idf[id as usize], len);
                matched += 1;
            }
        }
        finish(sum, matched, q.terms.len())
    }

    pub fn search_top_k(&self, query: &[String], k: usize) -> Vec<ScoredHit> {
        self.search_top_k_with(&mut SearchScratch::default(), query, k)
    }

    /// Top `k` documents by descending score, ties by ascending ordinal.
    /// Documents scoring zero are never returned.
    pub fn search_top_k_with(
        &self,
        scratch: &mut SearchScratch,
        query: &[String],
        k: usize,
    ) -> Vec<ScoredHit> {
        let q = self.prepare(query);
        if k == 0 || q.terms.is_empty() {
            return Vec::new();
        }
        let n = self.n_docs();
        if scratch.acc.len() != n {
            scratch.acc = vec![0.0; n];
            scratch.matched = vec![0; n];
        }
        scratch.touched.clear();
        for &(id, qf) in &q.terms {
            let Some(id) = id else { continue };
            let idf = self.idf[id as usize];
            for p in &self.postings[id as usize] {
                let d = p.doc as usize;
                if scratch.matched[d] == 0 {
                    scratch.touched.push(p.doc);
                }
                scratch.acc[d] += term_weight(qf, p.tf, idf, self.doc_len[d]);
                scratch.matched[d] += 1;
            }
        }
        let mut hits: Vec<(f64, u32)> = Vec::with_capacity(scratch.touched.len());
        for &d in &scratch.touched {
            let score = finish(scratch.acc[d as usize], scratch.matched[d as usize], q.terms.len());
            if score > 0.0 {
                hits.push((score, d));
            }
            scratch.acc[d as usize] = 0.0;
            scratch.matched[d as usize] = 0;
        }
        let by_rank = |a: &(f64, u32), b: &(f64, u32)| -> Ordering {
            b.0.total_cmp(&a.0).then(a.1.cmp(&b.1))
        };
        if hits.len() > k {
            hits.select_nth_unstable_by(k - 1, by_rank);
            hits.truncate(k);
        }
        hits.sort_unstable_by(by_rank);
        hits.into_iter()
            .map(|(score, ordinal)| ScoredHit {
                doc: self.doc_refs[ordinal as usize].clone(),
                ordinal,
                score,
            })
            .collect()
    }

    /// Check the structural invariants; returns a description of the first
    /// violation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut tf_sum = vec![0u64; self.n_docs()];
        for (id, plist) in self.postings.iter().enumerate() {
            if plist.is_empty() {
                return Err(format!("term {:?} has no postings", self.terms[id]));
            }
            for w in plist.windows(2) {
                if w[0].doc >= w[1].doc {
                    return Err(format!("postings of {:?} not ascending", self.terms[id]));
                }
            }
            for p in plist {
                if p.tf == 0 || p.doc as usize >= self.n_docs() {
                    return Err(format!("bad posting {p:?}"));
                }
                tf_sum[p.doc as usize] += p.tf as u64;
            }
        }
        for (d, (&sum, &len)) in tf_sum.iter().zip(&self.doc_len).enumerate() {
            if sum != len as u64 {
                return Err(format!("doc {d}: tf sum {sum} != length {len}"));
            }
        }
        Ok(())
    }

    /// Binary snapshot. `tag` is an opaque caller string (the pipeline
    /// stores the corpus digest there).
    ///
    /// Layout, little endian, strings as `u32 byte length + UTF-8`:
    /// magic `BIMINEIX`, `u32` version, tag, `u64` n_docs, per document
    /// (doc_id, `u32` index, `u8` lang, `u32` length), `u64` n_terms, per
    /// term in sorted order (term, `u32` df, df × (`u32` ordinal, `u32` tf)).
    pub fn write_snapshot<W: Write>(&self, mut w: W, tag: &str) -> std::io::Result<()> {
        w.write_all(SNAPSHOT_MAGIC)?;
        w.write_u32::<LittleEndian>(SNAPSHOT_VERSION)?;
        write_str(&mut w, tag)?;
        w.write_u64::<LittleEndian>(self.n_docs() as u64)?;
        for (r, &len) in self.doc_refs.iter().zip(&self.doc_len) {
            write_str(&mut w, &r.doc_id)?;
            w.write_u32::<LittleEndian>(r.index)?;
            w.write_u8(match r.lang {
                Lang::Src => 0,
                Lang::Tgt => 1,
            })?;
            w.write_u32::<LittleEndian>(len)?;
        }
        let mut order: Vec<usize> = (0..self.terms.len()).collect();
        order.sort_by(|&a, &b| self.terms[a].cmp(&self.terms[b]));
        w.write_u64::<LittleEndian>(order.len() as u64)?;
        for id in order {
            write_str(&mut w, &self.terms[id])?;
            let plist = &self.postings[id];
            w.write_u32::<LittleEndian>(plist.len() as u32)?;
            for p in plist {
                w.write_u32::<LittleEndian>(p.doc)?;
                w.write_u32::<LittleEndian>(p.tf)?;
            }
        }
        w.flush()
    }

    pub fn read_snapshot<R: Read>(mut r: R) -> Result<(Self, String)> {
        let bad = |e: std::io::Error| Error::Snapshot(e.to_string());
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic).map_err(bad)?;
        if &magic != SNAPSHOT_MAGIC {
            return Err(Error::Snapshot("bad magic".into()));
        }
        let version = r.read_u32::<LittleEndian>().map_err(bad)?;
        if version != SNAPSHOT_VERSION {
            return Err(Error::Snapshot(format!("unsupported version {version}")));
        }
        let tag = read_str(&mut r)?;
        let n_docs = r.read_u64::<LittleEndian>().map_err(bad)? as usize;
        let mut index = InvertedIndex::default();
        for ord in 0..n_docs {
            let doc_id = read_str(&mut r)?;
            let sidx = r.read_u32::<LittleEndian>().map_err(bad)?;
            let lang = match r.read_u8().map_err(bad)? {
                0 => Lang::Src,
                1 => Lang::Tgt,
                x => return Err(Error::Snapshot(format!("bad language tag {x}"))),
            };
            let len = r.read_u32::<LittleEndian>().map_err(bad)?;
            let sref = SentenceRef::new(doc_id, sidx, lang);
            if index.ref_ordinals.insert(sref.clone(), ord as u32).is_some() {
                return Err(Error::Snapshot(format!("duplicate document {sref}")));
            }
            index.doc_refs.push(sref);
            index.doc_len.push(len);
        }
        let n_terms = r.read_u64::<LittleEndian>().map_err(bad)? as usize;
        for id in 0..n_terms {
            let term = read_str(&mut r)?;
            let df = r.read_u32::<LittleEndian>().map_err(bad)? as usize;
            let mut plist = Vec::with_capacity(df.min(n_docs));
            for _ in 0..df {
                let doc = r.read_u32::<LittleEndian>().map_err(bad)?;
                let tf = r.read_u32::<LittleEndian>().map_err(bad)?;
                plist.push(Posting { doc, tf });
            }
            if index.term_ids.insert(term.clone(), id as u32).is_some() {
                return Err(Error::Snapshot(format!("duplicate term {term:?}")));
            }
            index.terms.push(term);
            index.postings.push(plist);
        }
        let mut trailing = [0u8; 1];
        if r.read(&mut trailing).map_err(bad)? != 0 {
            return Err(Error::Snapshot("trailing bytes".into()));
        }
        index.check_invariants().map_err(Error::Snapshot)?;
        index.refresh_idf();
        Ok((index, tag))
    }
}

fn write_str<W: Write>(w: &mut W, s: &str) -> std::io::Result<()> {
    w.write_u32::<LittleEndian>(s.len() as u32)?;
    w.write_all(s.as_bytes())
}

fn read_str<R: Read>(r: &mut R) -> Result<String> {
    let len = r
        .read_u32::<LittleEndian>()
        .map_err(|e| Error::Snapshot(e.to_string()))? as usize;
    let mut buf = Vec::new();
    r.take(len as u64)
        .read_to_end(&mut buf)
        .map_err(|e| Error::Snapshot(e.to_string()))?;
    if buf.len() != len {
        return Err(Error::Snapshot("truncated string".into()));
    }
    String::from_utf8(buf).map_err(|e| Error::Snapshot(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sentences(docs: &[&[&str]]) -> Vec<TokenizedSentence> {
        docs.iter()
            .enumerate()
            .map(|(i, toks)| TokenizedSentence {
                sref: SentenceRef::new(format!("d{}", i + 1), 0, Lang::Src),
                tokens: toks.iter().map(|t| t.to_string()).collect(),
                raw: toks.join(" "),
            })
            .collect()
    }

    fn q(toks: &[&str]) -> Vec<String> {
        toks.iter().map(|t| t.to_string()).collect()
    }

    fn r(i: usize) -> SentenceRef {
        SentenceRef::new(format!("d{i}"), 0, Lang::Src)
    }

    #[test]
    fn build_counts() {
        let idx = InvertedIndex::build(&sentences(&[&["a", "b"], &["b", "c"]])).unwrap();
        assert_eq!(idx.n_docs(), 2);
        assert_eq!(idx.doc_freq("b"), 2);
        assert_eq!(idx.doc_freq("a"), 1);
        assert_eq!(
            idx.postings("b"),
            [Posting { doc: 0, tf: 1 }, Posting { doc: 1, tf: 1 }]
        );
        idx.check_invariants().unwrap();

        let empty = InvertedIndex::build(&[]).unwrap();
        assert_eq!(empty.n_docs(), 0);
        assert!(empty.search_top_k(&q(&["a"]), 3).is_empty());

        let idx = InvertedIndex::build(&sentences(&[&["a", "a", "b"]])).unwrap();
        assert_eq!(idx.postings("a"), [Posting { doc: 0, tf: 2 }]);
        assert_eq!(idx.doc_len(0), 3);
    }

    #[test]
    fn duplicate_ref_rejected() {
        let mut s = sentences(&[&["a"], &["b"]]);
        s[1].sref = s[0].sref.clone();
        assert!(matches!(InvertedIndex::build(&s), Err(Error::DuplicateRef(_))));
    }

    #[test]
    fn empty_sentence_counted_never_returned() {
        let idx = InvertedIndex::build(&sentences(&[&[], &["a"]])).unwrap();
        assert_eq!(idx.n_docs(), 2);
        assert_eq!(idx.doc_len(0), 0);
        let hits = idx.search_top_k(&q(&["a"]), 10);
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].doc, r(2));
    }

    #[test]
    fn score_pair_worked_example() {
        let idx =
            InvertedIndex::build(&sentences(&[&["a", "b"], &["b", "c"], &["c", "d"]])).unwrap();
        let idf_a = 1.0 + (3.0f64 / 2.0).ln();
        let expected = (idf_a * idf_a + 1.0) / 2f64.sqrt();
        let got = idx.score_pair(&q(&["a", "b"]), &r(1)).unwrap();
        assert!((got - expected).abs() < 1e-12);
        assert!((got - 2.1039).abs() < 1e-4);

        assert_eq!(idx.score_pair(&q(&["a"]), &r(2)).unwrap(), 0.0);
        assert_eq!(idx.score_pair(&[], &r(3)).unwrap(), 0.0);
        assert!(idx.score_pair(&q(&["a"]), &r(9)).is_err());
    }

    #[test]
    fn tie_broken_by_ordinal() {
        let idx = InvertedIndex::build(&sentences(&[&["a", "b"], &["b", "c"]])).unwrap();
        let hits = idx.search_top_k(&q(&["b"]), 2);
        let idf_b = 1.0 + (2.0f64 / 3.0).ln();
        let expected = idf_b * idf_b / 2f64.sqrt();
        assert_eq!(hits.len(), 2);
        assert_eq!(hits[0].doc, r(1));
        assert_eq!(hits[1].doc, r(2));
        for h in &hits {
            assert!((h.score - expected).abs() < 1e-12);
            assert!((h.score - 0.2499).abs() < 1e-4);
        }
    }

    #[test]
    fn unknown_terms_and_large_k() {
        let idx = InvertedIndex::build(&sentences(&[&["a", "b"], &["b", "c"], &["x"]])).unwrap();
        assert!(idx.search_top_k(&q(&["zzz", "yyy"]), 5).is_empty());
        let hits = idx.search_top_k(&q(&["b", "c"]), 100);
        assert_eq!(hits.len(), 2);
    }

    #[test]
    fn snap_merges_last_bit_differences() {
        let a = 1.8232424710443367f64;
        let b = 1.8232424710443365f64;
        assert_ne!(a, b);
        assert_eq!(snap(a), snap(b));
        assert!((snap(a) - a).abs() <= a * 1e-12);
        assert_eq!(snap(0.0), 0.0);
        assert_eq!(snap(0.5), 0.5);
    }

    #[test]
    fn idf_clamped_at_zero() {
        // n=2, df=2: 1 + ln(2/3) > 0; n=1, df=1: 1 + ln(1/2) > 0; clamp hits
        // only when n/(df+1) < 1/e.
        assert!(idf(2, 2) > 0.0);
        assert_eq!(idf(1, 5), 0.0);
    }

    #[test]
    fn snapshot_roundtrip() {
        let idx = InvertedIndex::build(&sentences(&[&["a", "b", "a"], &["b", "c"], &[]])).unwrap();
        let mut buf = Vec::new();
        idx.write_snapshot(&mut buf, "tag-1").unwrap();
        let (back, tag) = InvertedIndex::read_snapshot(&buf[..]).unwrap();
        assert_eq!(tag, "tag-1");
        let mut again = Vec::new();
        back.write_snapshot(&mut again, "tag-1").unwrap();
        assert_eq!(buf, again);
        for query in [q(&["a"]), q(&["b", "c"]), q(&["a", "b", "c", "z"])] {
            assert_eq!(idx.search_top_k(&query, 3), back.search_top_k(&query, 3));
        }

        buf.truncate(buf.len() - 3);
        assert!(InvertedIndex::read_snapshot(&buf[..]).is_err());
        assert!(InvertedIndex::read_snapshot(&b"NOTANIDX"[..]).is_err());
    }

    fn corpus_strategy() -> impl Strategy<Value = Vec<Vec<u8>>> {
        prop::collection::vec(prop::collection::vec(0u8..12, 0..8), 1..40)
    }

    fn to_sentences(raw: &[Vec<u8>]) -> Vec<TokenizedSentence> {
        raw.iter()
            .enumerate()
            .map(|(i, toks)| TokenizedSentence {
                sref: SentenceRef::new(format!("d{i:03}"), 0, Lang::Tgt),
                tokens: toks.iter().map(|t| format!("t{t}")).collect(),
                raw: String::new(),
            })
            .collect()
    }

    proptest! {
        #[test]
        fn search_agrees_with_score_pair(raw in corpus_strategy(), query in prop::collection::vec(0u8..14, 0..6), k in 1usize..8) {
            let sents = to_sentences(&raw);
            let idx = InvertedIndex::build(&sents).unwrap();
            idx.check_invariants().unwrap();
            let query: Vec<String> = query.iter().map(|t| format!("t{t}")).collect();
            let hits = idx.search_top_k(&query, k);
            prop_assert!(hits.len() <= k);
            for h in &hits {
                prop_assert!(h.score > 0.0);
                prop_assert_eq!(h.score, idx.score_pair(&query, &h.doc).unwrap());
            }
            for w in hits.windows(2) {
                prop_assert!(w[0].score > w[1].score || (w[0].score == w[1].score && w[0].ordinal < w[1].ordinal));
            }
        }

        #[test]
        fn extra_occurrence_never_lowers_score(raw in corpus_strategy(), pick in 0usize..1000) {
            // Replace a non-query token with a query token: same length, one more match.
            let mut sents = to_sentences(&raw);
            let d = pick % sents.len();
            let query = vec!["t0".to_string(), "t1".to_string()];
            let Some(slot) = sents[d].tokens.iter().position(|t| t != "t0" && t != "t1") else {
                return Ok(());
            };
            if !sents[d].tokens.iter().any(|t| t == "t0") {
                return Ok(());
            }
            let before_idx = InvertedIndex::build(&sents).unwrap();
            let before = before_idx.score_ordinal(&query, d as u32);
            sents[d].tokens[slot] = "t0".into();
            let after_idx = InvertedIndex::build(&sents).unwrap();
            // idf of t0 is unchanged since d already contained it.
            prop_assert_eq!(before_idx.idf_of("t0"), after_idx.idf_of("t0"));
            let after = after_idx.score_ordinal(&query, d as u32);
            prop_assert!(after >= before);
        }

        #[test]
        fn insertion_order_does_not_change_scores(raw in corpus_strategy(), query in prop::collection::vec(0u8..12, 1..5)) {
            let sents = to_sentences(&raw);
            let mut rev = sents.clone();
            rev.reverse();
            let a = InvertedIndex::build(&sents).unwrap();
            let b = InvertedIndex::build(&rev).unwrap();
            let query: Vec<String> = query.iter().map(|t| format!("t{t}")).collect();
            for s in &sents {
                prop_assert_eq!(a.score_pair(&query, &s.sref).unwrap(), b.score_pair(&query, &s.sref).unwrap());
            }
            let mut ha = a.search_top_k(&query, sents.len());
            let mut hb = b.search_top_k(&query, sents.len());
            for h in ha.iter_mut().chain(hb.iter_mut()) { h.ordinal = 0; }
            let key = |h: &ScoredHit| (std::cmp::Reverse(ordered(h.score)), h.doc.clone());
            ha.sort_by_key(key);
            hb.sort_by_key(key);
            prop_assert_eq!(ha, hb);
        }
    }

    fn ordered(x: f64) -> u64 {
        x.to_bits()
    }
}
