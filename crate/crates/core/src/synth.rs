//! Seeded synthetic comparable corpora with known gold alignments.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};

use crate::corpus::{DocumentPair, Lang, SentenceRef};
use crate::error::{Error, Result};
use crate::eval::GoldAlignment;
use crate::text::tokenize;
use crate::translate::{Direction, PhraseTable};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSpec {
    pub n_parallel: usize,
    pub n_distractors_src: usize,
    pub n_distractors_tgt: usize,
    /// Sentences per side per document.
    pub docs: usize,
    /// Probability of dropping each lexicon entry from a translation table.
    pub dropout: f64,
    pub seed: u64,
}

impl Default for BenchmarkSpec {
    fn default() -> Self {
        Self {
            n_parallel: 500,
            n_distractors_src: 500,
            n_distractors_tgt: 500,
            docs: 10,
            dropout: 0.2,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Benchmark {
    pub docs: Vec<DocumentPair>,
    /// Target-to-source table (translates the target side).
    pub table_fwd: PhraseTable,
    /// Source-to-target table.
    pub table_rev: PhraseTable,
    pub gold: GoldAlignment,
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Parallel(usize),
    Distractor(usize),
}

pub fn make_synthetic_benchmark(
    seed_corpus: &[(String, String)],
    spec: &BenchmarkSpec,
) -> Result<Benchmark> {
    if !(0.0..1.0).contains(&spec.dropout) {
        return Err(Error::InvalidParam(format!(
            "dropout must be in [0, 1), got {}",
            spec.dropout
        )));
    }
    if spec.docs == 0 {
        return Err(Error::InvalidParam("sentences per document must be >= 1".into()));
    }
    let needed = spec.n_parallel + spec.n_distractors_src + spec.n_distractors_tgt;
    if seed_corpus.len() < needed {
        return Err(Error::InvalidParam(format!(
            "seed corpus has {} pairs, benchmark needs {needed}",
            seed_corpus.len()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut perm: Vec<usize> = (0..seed_corpus.len()).collect();
    perm.shuffle(&mut rng);
    let (parallel, rest) = perm.split_at(spec.n_parallel);
    let (dis_src, rest) = rest.split_at(spec.n_distractors_src);
    let dis_tgt = &rest[..spec.n_distractors_tgt];

    let per_side = spec.n_parallel + spec.n_distractors_src.max(spec.n_distractors_tgt);
    let n_docs = per_side.div_ceil(spec.docs);
    let mut src_slots: Vec<Vec<Slot>> = vec![Vec::new(); n_docs];
    let mut tgt_slots: Vec<Vec<Slot>> = vec![Vec::new(); n_docs];
    for i in 0..spec.n_parallel {
        src_slots[i % n_docs].push(Slot::Parallel(i));
        tgt_slots[i % n_docs].push(Slot::Parallel(i));
    }
    for j in 0..spec.n_distractors_src {
        src_slots[(spec.n_parallel + j) % n_docs].push(Slot::Distractor(j));
    }
    for j in 0..spec.n_distractors_tgt {
        tgt_slots[(spec.n_parallel + j) % n_docs].push(Slot::Distractor(j));
    }

    let mut docs = Vec::with_capacity(n_docs);
    let mut gold_src: BTreeMap<usize, SentenceRef> = BTreeMap::new();
    let mut gold_tgt: BTreeMap<usize, SentenceRef> = BTreeMap::new();
    for (d, (mut srcs, mut tgts)) in src_slots.into_iter().zip(tgt_slots).enumerate() {
        srcs.shuffle(&mut rng);
        tgts.shuffle(&mut rng);
        let doc_id = format!("doc{d:05}");
        let place = |slots: &[Slot], lang: Lang, gold: &mut BTreeMap<usize, SentenceRef>| {
            slots
                .iter()
                .enumerate()
                .map(|(k, slot)| match (*slot, lang) {
                    (Slot::Parallel(i), _) => {
                        gold.insert(i, SentenceRef::new(doc_id.clone(), k as u32, lang));
                        let pair = &seed_corpus[parallel[i]];
                        if lang == Lang::Src { pair.0.clone() } else { pair.1.clone() }
                    }
                    (Slot::Distractor(j), Lang::Src) => seed_corpus[dis_src[j]].0.clone(),
                    (Slot::Distractor(j), Lang::Tgt) => seed_corpus[dis_tgt[j]].1.clone(),
                })
                .collect::<Vec<_>>()
        };
        let src_sentences = place(&srcs, Lang::Src, &mut gold_src);
        let tgt_sentences = place(&tgts, Lang::Tgt, &mut gold_tgt);
        docs.push(DocumentPair {
            doc_id,
            src_sentences,
            tgt_sentences,
        });
    }
    let gold = GoldAlignment {
        pairs: gold_src
            .into_iter()
            .map(|(i, s)| (s, gold_tgt[&i].clone()))
            .collect(),
    };

    let (src_to_tgt, tgt_to_src) = align_lexicon(seed_corpus);
    let table_fwd = degrade(&tgt_to_src, Direction::Forward, spec.dropout, &mut rng);
    let table_rev = degrade(&src_to_tgt, Direction::Reverse, spec.dropout, &mut rng);
    Ok(Benchmark {
        docs,
        table_fwd,
        table_rev,
        gold,
    })
}

type Lexicon = BTreeMap<String, String>;

/// Position-wise word alignment of the seed corpus; each word keeps its most
/// frequent partner (ties to the lexicographically smallest).
fn align_lexicon(seed_corpus: &[(String, String)]) -> (Lexicon, Lexicon) {
    let mut s2t: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    let mut t2s: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    for (src, tgt) in seed_corpus {
        let s = tokenize(src, Lang::Src);
        let t = tokenize(tgt, Lang::Tgt);
        for (a, b) in s.iter().zip(&t) {
            *s2t.entry(a.clone()).or_default().entry(b.clone()).or_default() += 1;
            *t2s.entry(b.clone()).or_default().entry(a.clone()).or_default() += 1;
        }
    }
    let best = |m: BTreeMap<String, BTreeMap<String, usize>>| -> Lexicon {
        m.into_iter()
            .map(|(w, partners)| {
                let mut top: Option<(&String, usize)> = None;
                for (p, &n) in &partners {
                    if top.is_none_or(|(_, best)| n > best) {
                        top = Some((p, n));
                    }
                }
                let partner = top.expect("non-empty partner map").0.clone();
                (w, partner)
            })
            .collect()
    };
    (best(s2t), best(t2s))
}

fn degrade(lex: &Lexicon, direction: Direction, dropout: f64, rng: &mut ChaCha8Rng) -> PhraseTable {
    let mut table = PhraseTable::new(direction);
    for (w, t) in lex {
        if rng.random::<f64>() >= dropout {
            table.insert(vec![w.clone()], vec![t.clone()], 1.0);
        }
    }
    table
}

const CONSONANTS: &[&str] = &[
    "b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "sh", "ch", "kh",
];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u", "ai", "ou"];
const PERSIAN_LETTERS: &[char] = &[
    'ا', 'ب', 'پ', 'ت', 'ج', 'چ', 'خ', 'د', 'ر', 'ز', 'س', 'ش', 'ف', 'ق', 'ک', 'گ', 'ل', 'م',
    'ن', 'و', 'ه', 'ی',
];

fn fresh_word<R: Rng>(rng: &mut R, seen: &mut HashSet<String>, make: impl Fn(&mut R) -> String) -> String {
    loop {
        let w = make(rng);
        if seen.insert(w.clone()) {
            return w;
        }
    }
}

/// Word-aligned synthetic parallel corpus: a bijective lexicon between a
/// Latin-script and a Persian-script vocabulary, Zipf-distributed word
/// choice, and sentences of 8 to 24 tokens whose target side is the
/// position-wise translation of the source side.
pub fn synthetic_parallel_corpus(n: usize, vocab: usize, seed: u64) -> Vec<(String, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_c0de);
    let mut seen_src = HashSet::new();
    let mut seen_tgt = HashSet::new();
    let src_vocab: Vec<String> = (0..vocab)
        .map(|_| {
            fresh_word(&mut rng, &mut seen_src, |r| {
                let syllables = r.random_range(2..=4);
                (0..syllables)
                    .map(|_| {
                        format!(
                            "{}{}",
                            CONSONANTS.choose(r).expect("non-empty"),
                            VOWELS.choose(r).expect("non-empty")
                        )
                    })
                    .collect()
            })
        })
        .collect();
    let tgt_vocab: Vec<String> = (0..vocab)
        .map(|_| {
            fresh_word(&mut rng, &mut seen_tgt, |r| {
                let len = r.random_range(3..=7);
                (0..len)
                    .map(|_| *PERSIAN_LETTERS.choose(r).expect("non-empty"))
                    .collect()
            })
        })
        .collect();

    let zipf = Zipf::new(vocab as f64, 1.0).expect("valid zipf parameters");
    let mut seen_sentences = BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let len = rng.random_range(8..=24);
        let ids: Vec<usize> = (0..len)
            .map(|_| zipf.sample(&mut rng) as usize - 1)
            .collect();
        if !seen_sentences.insert(ids.clone()) {
            continue;
        }
        let src = ids.iter().map(|&i| src_vocab[i].as_str()).collect::<Vec<_>>().join(" ");
        let tgt = ids.iter().map(|&i| tgt_vocab[i].as_str()).collect::<Vec<_>>().join(" ");
        out.push((src, tgt));
    }
    out
}
