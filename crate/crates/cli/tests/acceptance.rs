//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use bimine_core::corpus::{write_document_pairs, DocumentPair};
use bimine_core::index::idf;
use bimine_core::pipeline::{effective_alpha, Prepared};
use bimine_core::{
    bisimilarity, compare_modes, evaluate_against_gold, filter_corpus, make_synthetic_benchmark,
    synthetic_parallel_corpus, translate_corpus, Benchmark, BenchmarkSpec, Corpus, Direction,
    FilterConfig, GoldAlignment, InvertedIndex, Lang, MatchConfig, PhraseTable, SentenceRef,
    TokenizedSentence,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Regression baselines for the frozen benchmark, measured once with this harness.
const FROZEN_F1_BI: f64 = 0.4182;
const FROZEN_F1_ONE: f64 = 0.4396;
const F1_TOLERANCE: f64 = 0.01;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_bimine")
}

fn secs(d: Duration) -> String {
    format!("{:.3}s", d.as_secs_f64())
}

// 1. Combined score against an independently written oracle.

fn oracle_bisim(f: f64, r: f64, pen: u32, alpha: f64, beta: f64) -> f64 {
    alpha * (beta * f + r) / ((alpha + pen as f64) * (beta + 1.0))
}

fn criterion_score_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    let mut errors = 0;
    for _ in 0..10_000 {
        let f = rng.random_range(0.0..=10.0);
        let r = rng.random_range(0.0..=10.0);
        let pen = rng.random_range(0..=50u32);
        let alpha = rng.random_range(1.0..=50.0);
        let beta = rng.random_range(0.1..=5.0);
        match bisimilarity(f, r, pen, alpha, beta) {
            Ok(v) => worst = worst.max((v - oracle_bisim(f, r, pen, alpha, beta)).abs()),
            Err(_) => errors += 1,
        }
    }
    let fixed_a = bisimilarity(2.0, 1.0, 3, 22.0, 1.5).map_or(f64::NAN, |v| v);
    let fixed_b = bisimilarity(1.0, 1.0, 22, 22.0, 1.5).map_or(f64::NAN, |v| v);
    let elapsed = start.elapsed();
    let pass = errors == 0
        && worst <= 1e-12
        && (fixed_a - 1.408).abs() <= 1e-12
        && (fixed_b - 0.5).abs() <= 1e-12
        && elapsed < Duration::from_secs(1);
    outcome(
        pass,
        format!(
            "10000 tuples, max |diff| {worst:.2e}, errors {errors}; fixed cases {fixed_a} and {fixed_b}; {}",
            secs(elapsed)
        ),
    )
}

// 2. Top-k retrieval against brute-force scoring of every document.

fn brute_force_scores(docs: &[Vec<String>], query: &[String]) -> Vec<f64> {
    let n = docs.len();
    let mut qf: BTreeMap<&str, u32> = BTreeMap::new();
    for t in query {
        *qf.entry(t.as_str()).or_default() += 1;
    }
    let df: BTreeMap<&str, usize> = qf
        .keys()
        .map(|t| (*t, docs.iter().filter(|d| d.iter().any(|w| w == t)).count()))
        .collect();
    docs.iter()
        .map(|d| {
            let mut sum = 0.0;
            let mut matched = 0;
            for (t, &q) in &qf {
                let tf = d.iter().filter(|w| w == t).count();
                if tf > 0 {
                    let w = idf(n, df[t]);
                    sum += q as f64 * (tf as f64).sqrt() * w * w / (d.len() as f64).sqrt();
                    matched += 1;
                }
            }
            if matched == 0 {
                0.0
            } else {
                sum * matched as f64 / qf.len() as f64
            }
        })
        .collect()
}

/// Descending score, ascending ordinal; scores within 1e-12 relative count as
/// tied so that rounding in the oracle cannot reorder true ties.
fn brute_force_ranking(scores: &[f64], k: usize) -> Vec<(usize, f64)> {
    let mut all: Vec<(usize, f64)> = scores
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, s)| s > 0.0)
        .collect();
    all.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut i = 0;
    while i < all.len() {
        let mut j = i + 1;
        while j < all.len() && (all[i].1 - all[j].1).abs() <= 1e-12 * all[i].1 {
            j += 1;
        }
        all[i..j].sort_by_key(|e| e.0);
        i = j;
    }
    all.truncate(k);
    all
}

fn criterion_retrieval_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut mismatches = 0;
    let mut hits = 0;
    for c in 0..100 {
        let n_docs = rng.random_range(1..=500);
        let vocab = rng.random_range(1..=50);
        let docs: Vec<Vec<String>> = (0..n_docs)
            .map(|_| {
                let len = rng.random_range(1..=20);
                (0..len)
                    .map(|_| format!("t{}", rng.random_range(0..vocab)))
                    .collect()
            })
            .collect();
        let sentences: Vec<TokenizedSentence> = docs
            .iter()
            .enumerate()
            .map(|(i, d)| {
                TokenizedSentence::new(SentenceRef::new(format!("c{c}"), i as u32, Lang::Src), d.join(" "))
            })
            .collect();
        let index = InvertedIndex::build(&sentences).expect("index builds");
        for _ in 0..20 {
            let qlen = rng.random_range(1..=12);
            let query: Vec<String> = (0..qlen)
                .map(|_| format!("t{}", rng.random_range(0..vocab + 5)))
                .collect();
            let k = rng.random_range(1..=15);
            let got = index.search_top_k(&query, k);
            let want = brute_force_ranking(&brute_force_scores(&docs, &query), k);
            hits += got.len();
            let same = got.len() == want.len()
                && got.iter().zip(&want).all(|(g, &(ord, score))| {
                    g.doc == sentences[ord].sref
                        && g.ordinal as usize == ord
                        && (g.score - score).abs() <= 1e-9
                });
            if !same {
                mismatches += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches == 0 && elapsed < Duration::from_secs(30),
        format!(
            "100 corpora x 20 queries, {hits} hits compared, {mismatches} mismatching queries; {}",
            secs(elapsed)
        ),
    )
}

// 3. Identity recovery.

fn criterion_identity_recovery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let letters: Vec<char> = ('a'..='z').collect();
    let sentences: Vec<String> = (0..200)
        .map(|i| {
            let pool: Vec<String> = (0..6)
                .map(|j| {
                    let stem: String = (0..rng.random_range(2..6))
                        .map(|_| letters[rng.random_range(0..letters.len())])
                        .collect();
                    format!("{stem}{i}x{j}")
                })
                .collect();
            let len = rng.random_range(8..=16);
            (0..len)
                .map(|_| pool[rng.random_range(0..pool.len())].as_str())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    let docs: Vec<DocumentPair> = sentences
        .chunks(10)
        .enumerate()
        .map(|(d, chunk)| {
            let mut tgt = chunk.to_vec();
            tgt.reverse();
            DocumentPair {
                doc_id: format!("d{d:02}"),
                src_sentences: chunk.to_vec(),
                tgt_sentences: tgt,
            }
        })
        .collect();
    let gold = GoldAlignment {
        pairs: docs
            .iter()
            .flat_map(|d| {
                let n = d.src_sentences.len() as u32;
                (0..n).map(move |i| {
                    (
                        SentenceRef::new(d.doc_id.clone(), i, Lang::Src),
                        SentenceRef::new(d.doc_id.clone(), n - 1 - i, Lang::Tgt),
                    )
                })
            })
            .collect(),
    };
    let vocab: Vec<&str> = sentences.iter().flat_map(|s| s.split(' ')).collect();
    let fwd_table = PhraseTable::identity(Direction::Forward, vocab.iter().copied());
    let rev_table = PhraseTable::identity(Direction::Reverse, vocab.iter().copied());

    let run = || -> bimine_core::Result<Outcome> {
        let (kept, _) = filter_corpus(&docs, &FilterConfig::default())?;
        let corpus = Corpus::new(kept)?;
        let fwd = translate_corpus(corpus.side(Lang::Tgt), &fwd_table);
        let rev = translate_corpus(corpus.side(Lang::Src), &rev_table);
        let prepared = Prepared::new(corpus, fwd, Some(rev))?;
        let cfg = MatchConfig {
            alpha: effective_alpha(&prepared.corpus, None),
            ..MatchConfig::default()
        };
        let (extracted, _) = prepared.extract(&cfg)?;
        let score = evaluate_against_gold(&extracted, &gold);
        let mut bad = 0;
        for x in &extracted {
            let src = prepared.corpus.get(&x.pair.src).expect("extracted ref exists");
            let self_score = prepared.src_index.score_pair(&src.tokens, &x.pair.src)?;
            if x.pair.penalty != 0 || (x.pair.bisim - self_score).abs() > 1e-12 * self_score {
                bad += 1;
            }
        }
        Ok(outcome(
            extracted.len() == 200 && score.precision == 1.0 && score.recall == 1.0 && bad == 0,
            format!(
                "{} pairs, precision {}, recall {}, {bad} pairs off penalty 0 / self-score",
                extracted.len(),
                score.precision,
                score.recall
            ),
        ))
    };
    run().unwrap_or_else(|e| outcome(false, format!("error: {e}")))
}

// 4. Bidirectional against one-directional matching on the frozen benchmark.

fn frozen_benchmark() -> Benchmark {
    let spec = BenchmarkSpec::default();
    let seed = synthetic_parallel_corpus(
        spec.n_parallel + spec.n_distractors_src + spec.n_distractors_tgt,
        2000,
        spec.seed,
    );
    make_synthetic_benchmark(&seed, &spec).expect("benchmark builds")
}

fn criterion_mode_comparison() -> Outcome {
    let bench = frozen_benchmark();
    let cmp = match compare_modes(&bench, &FilterConfig::default(), &MatchConfig::default(), None) {
        Ok(c) => c,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let bi = cmp.bidirectional.score;
    let one = cmp.one_directional.score;
    let checks = [
        ("bi F1 >= one F1", bi.f1 >= one.f1),
        ("bi count >= one count", bi.extracted_count >= one.extracted_count),
        ("bi F1 baseline", (bi.f1 - FROZEN_F1_BI).abs() <= F1_TOLERANCE),
        ("one F1 baseline", (one.f1 - FROZEN_F1_ONE).abs() <= F1_TOLERANCE),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    let n_gold = bench.gold.pairs.len();
    let top = |run: &bimine_core::eval::ModeRun| {
        evaluate_against_gold(&run.extracted[..n_gold.min(run.extracted.len())], &bench.gold).precision
    };
    outcome(
        failed.is_empty(),
        format!(
            "alpha {:.4}; bi F1 {:.4} (P {:.4} R {:.4}, {} pairs); one F1 {:.4} (P {:.4} R {:.4}, {} pairs); \
             precision of top {n_gold} rows bi {:.4} one {:.4}; failed: {}",
            cmp.alpha,
            bi.f1,
            bi.precision,
            bi.recall,
            bi.extracted_count,
            one.f1,
            one.precision,
            one.recall,
            one.extracted_count,
            top(&cmp.bidirectional),
            top(&cmp.one_directional),
            if failed.is_empty() { "none".to_string() } else { failed.join(", ") }
        ),
    )
}

// 5. Sentence and document filters.

fn sentence(n: usize, tag: &str) -> String {
    (0..n).map(|i| format!("{tag}w{i}")).collect::<Vec<_>>().join(" ")
}

fn sentences(count: usize, n: usize, tag: &str) -> Vec<String> {
    (0..count).map(|i| sentence(n, &format!("{tag}{i}"))).collect()
}

fn criterion_filter_conformance() -> Outcome {
    let doc = |id: &str, src: Vec<String>, tgt: Vec<String>| DocumentPair {
        doc_id: id.into(),
        src_sentences: src,
        tgt_sentences: tgt,
    };
    let boundary = sentence(8, "boundary");
    let short = sentence(7, "short");
    let input = vec![
        doc(
            "at_ratio",
            sentences(10, 9, "a"),
            vec![boundary.clone(), sentence(9, "b0"), short.clone(), sentence(9, "b1")],
        ),
        doc(
            "below_after_sentence_filter",
            sentences(10, 9, "c"),
            vec![sentence(9, "d0"), short.clone(), sentence(9, "d1"), short.clone()],
        ),
        doc("just_below", sentences(31, 9, "e"), sentences(9, 9, "f")),
        doc("reverse_at_ratio", sentences(3, 9, "g"), sentences(10, 9, "h")),
        doc("all_short", vec![short.clone(); 3], sentences(3, 9, "i")),
    ];
    let expected = vec![
        doc(
            "at_ratio",
            sentences(10, 9, "a"),
            vec![boundary, sentence(9, "b0"), sentence(9, "b1")],
        ),
        doc("reverse_at_ratio", sentences(3, 9, "g"), sentences(10, 9, "h")),
    ];
    match filter_corpus(&input, &FilterConfig::default()) {
        Ok((kept, stats)) => {
            let ids: Vec<&str> = kept.iter().map(|d| d.doc_id.as_str()).collect();
            outcome(
                kept == expected && stats.doc_pairs_before == 5 && stats.doc_pairs_after == 2,
                format!("survivors {ids:?}"),
            )
        }
        Err(e) => outcome(false, format!("error: {e}")),
    }
}

// 6. Determinism across worker counts, and the report files.

fn emit_benchmark(bench: &Benchmark, dir: &Path) {
    let mut buf = Vec::new();
    write_document_pairs(&mut buf, &bench.docs).unwrap();
    fs::write(dir.join("corpus.jsonl"), buf).unwrap();
    let mut buf = Vec::new();
    bench.table_fwd.write_tsv(&mut buf).unwrap();
    fs::write(dir.join("fwd.tsv"), buf).unwrap();
    let mut buf = Vec::new();
    bench.table_rev.write_tsv(&mut buf).unwrap();
    fs::write(dir.join("rev.tsv"), buf).unwrap();
}

fn run_cli(dir: &Path, tag: &str, jobs: usize) -> Result<Duration, String> {
    let start = Instant::now();
    let out = Command::new(bin())
        .current_dir(dir)
        .args(["run", "--input", "corpus.jsonl"])
        .args(["--phrase-table-fwd", "fwd.tsv", "--phrase-table-rev", "rev.tsv"])
        .args(["--output", &format!("{tag}.tsv")])
        .args(["--stats", &format!("{tag}.stats.txt")])
        .args(["--histogram", &format!("{tag}.histogram.csv")])
        .args(["--jobs", &jobs.to_string()])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).trim().to_string());
    }
    Ok(start.elapsed())
}

fn criterion_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    emit_benchmark(&frozen_benchmark(), dir.path());
    for (tag, jobs) in [("j1", 1), ("j8", 8)] {
        if let Err(e) = run_cli(dir.path(), tag, jobs) {
            return outcome(false, format!("run --jobs {jobs} failed: {e}"));
        }
    }
    let read = |name: &str| fs::read(dir.path().join(name)).unwrap();
    let identical = ["tsv", "stats.txt", "histogram.csv"]
        .iter()
        .all(|ext| read(&format!("j1.{ext}")) == read(&format!("j8.{ext}")));
    let tsv = String::from_utf8(read("j1.tsv")).unwrap();
    let scores: Vec<f64> = tsv
        .lines()
        .map(|l| l.split('\t').next().unwrap().parse().unwrap())
        .collect();
    let monotone = scores.windows(2).all(|w| w[0] >= w[1]);
    let csv = String::from_utf8(read("j1.histogram.csv")).unwrap();
    let counts: Vec<usize> = csv
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    let total: usize = counts.iter().sum();
    outcome(
        identical && monotone && total == scores.len() && counts.len() == 6 && !scores.is_empty(),
        format!(
            "jobs 1 vs 8 identical: {identical}; {} rows, monotone: {monotone}; histogram {} intervals summing to {total}",
            scores.len(),
            counts.len()
        ),
    )
}

// 7. Full bidirectional run on a 10,000 x 10,000 sentence corpus.

fn children_peak_rss_bytes() -> u64 {
    let mut usage: libc::rusage = unsafe { std::mem::zeroed() };
    // SAFETY: `usage` is a valid, writable rusage struct.
    let rc = unsafe { libc::getrusage(libc::RUSAGE_CHILDREN, &mut usage) };
    if rc != 0 {
        return u64::MAX;
    }
    usage.ru_maxrss as u64 * 1024
}

fn criterion_performance() -> Outcome {
    let spec = BenchmarkSpec {
        n_parallel: 5000,
        n_distractors_src: 5000,
        n_distractors_tgt: 5000,
        ..BenchmarkSpec::default()
    };
    let seed = synthetic_parallel_corpus(15_000, 10_000, spec.seed);
    let bench = make_synthetic_benchmark(&seed, &spec).expect("benchmark builds");
    let dir = tempfile::tempdir().unwrap();
    emit_benchmark(&bench, dir.path());
    let elapsed = match run_cli(dir.path(), "perf", 4) {
        Ok(d) => d,
        Err(e) => return outcome(false, format!("run failed: {e}")),
    };
    let rss = children_peak_rss_bytes();
    let rows = fs::read_to_string(dir.path().join("perf.tsv")).unwrap().lines().count();
    outcome(
        elapsed < Duration::from_secs(60) && rss < 2 << 30,
        format!(
            "10000 x 10000 sentences, 4 jobs, {rows} pairs in {}; peak RSS {:.0} MiB",
            secs(elapsed),
            rss as f64 / (1 << 20) as f64
        ),
    )
}

fn main() {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Check); 7] = [
        ("combined score oracle", criterion_score_oracle),
        ("retrieval oracle", criterion_retrieval_oracle),
        ("identity recovery", criterion_identity_recovery),
        ("mode comparison", criterion_mode_comparison),
        ("filter conformance", criterion_filter_conformance),
        ("determinism and reporting", criterion_determinism),
        ("performance", criterion_performance),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} criterion {} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            n + 1,
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
