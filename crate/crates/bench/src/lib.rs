//! Fixtures shared by the criterion benchmarks.

use bimine_core::pipeline::Prepared;
use bimine_core::{
    make_synthetic_benchmark, synthetic_parallel_corpus, BenchmarkSpec, FilterConfig, Lang,
    MatchConfig, MatchMode,
};

/// A prepared synthetic corpus with `per_side` sentences on each side, half
/// of them true pairs.
pub fn prepared(per_side: usize, seed: u64) -> Prepared {
    let half = per_side / 2;
    let spec = BenchmarkSpec {
        n_parallel: per_side - half,
        n_distractors_src: half,
        n_distractors_tgt: half,
        seed,
        ..BenchmarkSpec::default()
    };
    let corpus = synthetic_parallel_corpus(per_side + half, per_side.max(100), seed);
    let bench = make_synthetic_benchmark(&corpus, &spec).expect("valid benchmark spec");
    Prepared::from_benchmark(&bench, &FilterConfig::default()).expect("synthetic corpus passes filters")
}

pub fn match_config(prepared: &Prepared, mode: MatchMode) -> MatchConfig {
    MatchConfig {
        alpha: prepared.effective_alpha(None),
        mode,
        ..MatchConfig::default()
    }
}

/// Forward-translated target sentences, used as retrieval queries.
pub fn queries(prepared: &Prepared) -> Vec<Vec<String>> {
    prepared
        .corpus
        .side(Lang::Tgt)
        .iter()
        .map(|s| prepared.trans_fwd.get(&s.sref).expect("translated").to_vec())
        .collect()
}
