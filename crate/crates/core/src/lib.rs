//! Parallel sentence mining from document-aligned comparable corpora.
//!
//! Both sides of a bilingual corpus are translated into the other language,
//! each translation is used as a TF-IDF query against the opposite side, and
//! the two directional retrieval scores are combined into one length-penalized,
//! translator-weighted similarity. The best pairs are selected greedily with a
//! per-sentence cap and written out sorted by score.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod index;
pub mod markup;
pub mod matcher;
pub mod pipeline;
pub mod report;
pub mod synth;
pub mod text;
pub mod translate;

pub use corpus::{
    filter_corpus, parse_document_pairs, Corpus, CorpusStats, DocumentPair, FilterConfig, Lang,
    SentenceRef,
};
pub use error::{Error, ErrorClass, Result};
pub use eval::{compare_modes, evaluate_against_gold, ExtractionScore, GoldAlignment, ModeComparison};
pub use index::{InvertedIndex, ScoredHit};
pub use markup::clean_markup;
pub use matcher::{
    bisimilarity, compute_beta, compute_penalty, generate_candidates, select_pairs, CandidatePair,
    ExtractedPair, MatchConfig, MatchMode, PenaltySource,
};
pub use pipeline::{run_pipeline, PipelineConfig, TranslatorSource};
pub use report::{histogram, Histogram, DEFAULT_EDGES};
pub use synth::{make_synthetic_benchmark, synthetic_parallel_corpus, Benchmark, BenchmarkSpec};
pub use text::{tokenize, word_count, TokenizedSentence};
pub use translate::{
    load_phrase_table, load_pretranslated, translate_corpus, translate_sentence, Direction,
    PhraseTable, TranslationSet,
};
