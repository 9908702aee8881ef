//! Translation boundary: a greedy phrase-table translator and loading of
//! externally produced translations.

use std::collections::{BTreeMap, HashMap};
use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::corpus::{Corpus, Lang, SentenceRef};
use crate::error::{Error, Result};
use crate::text::{tokenize, TokenizedSentence};

/// Translation direction, named by the side whose sentences are translated.
///
/// `Forward` translates target-side (Persian-role) sentences into the source
/// language so they can be queried against the source index; `Reverse`
/// translates source-side sentences into the target language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Reverse,
}

impl Direction {
    /// Language of the sentences being translated.
    pub fn from_lang(self) -> Lang {
        match self {
            Direction::Forward => Lang::Tgt,
            Direction::Reverse => Lang::Src,
        }
    }

    pub fn to_lang(self) -> Lang {
        self.from_lang().other()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Forward => "fwd",
            Direction::Reverse => "rev",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhraseEntry {
    pub target: Vec<String>,
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct PhraseTable {
    direction: Direction,
    entries: HashMap<Vec<String>, PhraseEntry>,
    max_phrase_len: usize,
}

impl PhraseTable {
    pub fn new(direction: Direction) -> Self {
        Self {
            direction,
            entries: HashMap::new(),
            max_phrase_len: 0,
        }
    }

    /// Table mapping every given token to itself.
    pub fn identity<'a>(direction: Direction, vocab: impl IntoIterator<Item = &'a str>) -> Self {
        let mut t = Self::new(direction);
        for w in vocab {
            t.insert(vec![w.to_string()], vec![w.to_string()], 1.0);
        }
        t
    }

    /// Insert an entry; a strictly heavier duplicate replaces the existing one.
    /// Empty phrases are ignored.
    pub fn insert(&mut self, source: Vec<String>, target: Vec<String>, weight: f64) {
        if source.is_empty() || target.is_empty() {
            return;
        }
        let len = source.len();
        match self.entries.get_mut(&source) {
            Some(existing) if existing.weight >= weight => {}
            Some(existing) => *existing = PhraseEntry { target, weight },
            None => {
                self.entries.insert(source, PhraseEntry { target, weight });
            }
        }
        self.max_phrase_len = self.max_phrase_len.max(len);
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn max_phrase_len(&self) -> usize {
        self.max_phrase_len
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, source: &[String]) -> Option<&PhraseEntry> {
        self.entries.get(source)
    }

    /// Serialize as `source TAB target TAB weight`, sorted by source phrase.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let mut rows: Vec<_> = self.entries.iter().collect();
        rows.sort_by(|a, b| a.0.cmp(b.0));
        for (src, e) in rows {
            writeln!(out, "{}\t{}\t{}", src.join(" "), e.target.join(" "), e.weight)?;
        }
        Ok(())
    }
}

impl PartialEq for PhraseTable {
    fn eq(&self, other: &Self) -> bool {
        let rows = |t: &PhraseTable| {
            let mut b = Vec::new();
            t.write_tsv(&mut b).expect("in-memory write");
            b
        };
        self.direction() == other.direction() && rows(self) == rows(other)
    }
}

/// Parse a `source TAB target [TAB weight]` phrase table. Both phrases are
/// normalized with the tokenizer of their language.
pub fn load_phrase_table<R: BufRead>(input: R, direction: Direction) -> Result<PhraseTable> {
    let mut table = PhraseTable::new(direction);
    for (n, line) in input.lines().enumerate() {
        let lineno = n + 1;
        let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 2 {
            return Err(Error::parse(lineno, "expected at least 2 tab-separated fields"));
        }
        let weight = match fields.get(2).map(|w| w.trim()) {
            None | Some("") => 1.0,
            Some(w) => match w.parse::<f64>() {
                Ok(v) if v.is_finite() => v,
                _ => return Err(Error::parse(lineno, format!("non-numeric weight {w:?}"))),
            },
        };
        let source = tokenize(fields[0], direction.from_lang());
        let target = tokenize(fields[1], direction.to_lang());
        if source.is_empty() || target.is_empty() {
            return Err(Error::parse(lineno, "empty source or target phrase"));
        }
        table.insert(source, target, weight);
    }
    Ok(table)
}

/// Greedy left-to-right longest-match decoding with OOV passthrough.
pub fn translate_sentence(tokens: &[String], table: &PhraseTable) -> Vec<String> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        let longest = table.max_phrase_len.min(tokens.len() - i);
        let hit = (1..=longest)
            .rev()
            .find_map(|n| table.get(&tokens[i..i + n]).map(|e| (n, e)));
        match hit {
            Some((n, entry)) => {
                out.extend(entry.target.iter().cloned());
                i += n;
            }
            None => {
                out.push(tokens[i].clone());
                i += 1;
            }
        }
    }
    out
}

/// Translated token streams for one whole corpus side.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslationSet {
    pub direction: Direction,
    pub translations: BTreeMap<SentenceRef, Vec<String>>,
}

impl TranslationSet {
    pub fn new(direction: Direction) -> Self {
        Self {
            direction,
            translations: BTreeMap::new(),
        }
    }

    pub fn get(&self, r: &SentenceRef) -> Option<&[String]> {
        self.translations.get(r).map(Vec::as_slice)
    }

    pub fn require(&self, r: &SentenceRef) -> Result<&[String]> {
        self.get(r).ok_or_else(|| Error::MissingTranslations {
            count: 1,
            sample: vec![r.clone()],
        })
    }

    pub fn len(&self) -> usize {
        self.translations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.translations.is_empty()
    }

    /// Every sentence on the translated side must have an entry.
    pub fn check_coverage(&self, corpus: &Corpus) -> Result<()> {
        let missing: Vec<&SentenceRef> = corpus
            .side(self.direction.from_lang())
            .iter()
            .map(|s| &s.sref)
            .filter(|r| !self.translations.contains_key(*r))
            .collect();
        if missing.is_empty() {
            return Ok(());
        }
        Err(Error::MissingTranslations {
            count: missing.len(),
            sample: missing.into_iter().take(10).cloned().collect(),
        })
    }

    /// Write in the pre-translated TSV format with tokens space-joined.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (r, toks) in &self.translations {
            writeln!(out, "{}\t{}\t{}", r.doc_id, r.index, toks.join(" "))?;
        }
        Ok(())
    }
}

/// Load `doc_id TAB index TAB text` lines produced by an external
/// translator. Every reference must name a sentence of the translated side.
pub fn load_pretranslated<R: BufRead>(
    input: R,
    direction: Direction,
    corpus: &Corpus,
) -> Result<TranslationSet> {
    let lang = direction.from_lang();
    let mut set = TranslationSet::new(direction);
    for (n, line) in input.lines().enumerate() {
        let lineno = n + 1;
        let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
        if line.is_empty() {
            continue;
        }
        let mut fields = line.splitn(3, '\t');
        let (Some(doc_id), Some(index), Some(text)) = (fields.next(), fields.next(), fields.next())
        else {
            return Err(Error::parse(lineno, "expected doc_id TAB index TAB text"));
        };
        let index: u32 = index
            .trim()
            .parse()
            .map_err(|_| Error::parse(lineno, format!("bad sentence index {index:?}")))?;
        let r = SentenceRef::new(doc_id, index, lang);
        if !corpus.contains(&r) {
            return Err(Error::UnknownRef(r));
        }
        let tokens = tokenize(text, direction.to_lang());
        if set.translations.insert(r.clone(), tokens).is_some() {
            return Err(Error::DuplicateRef(r));
        }
    }
    Ok(set)
}

pub fn translate_corpus(side: &[TokenizedSentence], table: &PhraseTable) -> TranslationSet {
    let translated: Vec<(SentenceRef, Vec<String>)> = side
        .par_iter()
        .map(|s| (s.sref.clone(), translate_sentence(&s.tokens, table)))
        .collect();
    TranslationSet {
        direction: table.direction,
        translations: translated.into_iter().collect(),
    }
}
