//! Tokenization shared by filtering, indexing and length penalties.
//!
//! Every "word" counted anywhere in the pipeline is a token produced by
//! [`tokenize`], so the sentence-length filter, the mean sentence length and
//! the pair length penalty all agree with what the index matches on.

use serde::{Deserialize, Serialize};

use crate::corpus::{Lang, SentenceRef};

const ARABIC_YEH: char = '\u{064A}';
const PERSIAN_YEH: char = '\u{06CC}';
const ARABIC_KAF: char = '\u{0643}';
const PERSIAN_KAF: char = '\u{06A9}';
pub const ZWNJ: char = '\u{200C}';

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizedSentence {
    pub sref: SentenceRef,
    pub tokens: Vec<String>,
    pub raw: String,
}

impl TokenizedSentence {
    pub fn new(sref: SentenceRef, raw: impl Into<String>) -> Self {
        let raw = raw.into();
        let tokens = tokenize(&raw, sref.lang);
        Self { sref, tokens, raw }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Combining marks that may legitimately end a token (Latin diacritics,
/// Arabic-script harakat, superscript alef, Quranic marks) plus ZWJ.
fn is_combining_mark(c: char) -> bool {
    matches!(c,
        '\u{0300}'..='\u{036F}'
        | '\u{0610}'..='\u{061A}'
        | '\u{064B}'..='\u{065F}'
        | '\u{0670}'
        | '\u{06D6}'..='\u{06DC}'
        | '\u{06DF}'..='\u{06E4}'
        | '\u{06E7}'..='\u{06E8}'
        | '\u{06EA}'..='\u{06ED}'
        | '\u{200D}')
}

/// Anything that is neither a letter, a digit nor a combining mark is
/// stripped from token edges. ZWNJ falls in this class, so it survives only
/// between two word characters.
fn is_edge_junk(c: char) -> bool {
    !(c.is_alphanumeric() || is_combining_mark(c))
}

fn unify(c: char, lang: Lang) -> char {
    match (lang, c) {
        (Lang::Tgt, ARABIC_YEH) => PERSIAN_YEH,
        (Lang::Tgt, ARABIC_KAF) => PERSIAN_KAF,
        _ => c,
    }
}

pub fn tokenize(text: &str, lang: Lang) -> Vec<String> {
    text.split(char::is_whitespace)
        .filter_map(|piece| {
            let trimmed = piece.trim_matches(is_edge_junk);
            if trimmed.is_empty() {
                return None;
            }
            let token: String = trimmed
                .chars()
                .flat_map(char::to_lowercase)
                .map(|c| unify(c, lang))
                .collect();
            // Lowercasing can expose new edge characters (rare, e.g. U+0130).
            let token = token.trim_matches(is_edge_junk);
            (!token.is_empty()).then(|| token.to_string())
        })
        .collect()
}

pub fn word_count(text: &str, lang: Lang) -> usize {
    tokenize(text, lang).len()
}
