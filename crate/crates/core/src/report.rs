//! Score histograms and the extracted-corpus TSV.

use std::fmt::Write as _;
use std::io::BufRead;

use crate::corpus::{Lang, SentenceRef};
use crate::error::{Error, Result};
use crate::matcher::ExtractedPair;

/// Six intervals: [0,0.1) [0.1,0.2) [0.2,0.3) [0.3,0.4) [0.4,0.5) [0.5,∞).
pub const DEFAULT_EDGES: [f64; 6] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5];

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `(start, end)` of each interval; the last end is `+∞`.
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.edges.iter().enumerate().map(|(i, &lo)| {
            (lo, self.edges.get(i + 1).copied().unwrap_or(f64::INFINITY))
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("interval_start,interval_end,count\n");
        for ((lo, hi), n) in self.intervals().zip(&self.counts) {
            let hi = if hi.is_infinite() { "inf".to_string() } else { hi.to_string() };
            let _ = writeln!(s, "{lo},{hi},{n}");
        }
        s
    }

    pub fn render(&self, edges_label: &str) -> String {
        let mut s = format!("score histogram ({edges_label} edges)\n");
        let total = self.total().max(1) as f64;
        for ((lo, hi), &n) in self.intervals().zip(&self.counts) {
            let hi = if hi.is_infinite() { "inf".to_string() } else { format!("{hi}") };
            let _ = writeln!(
                s,
                "  [{lo}, {hi}){:>w$} {n:>10} {:>6.2}%",
                "",
                100.0 * n as f64 / total,
                w = 12usize.saturating_sub(format!("[{lo}, {hi})").len())
            );
        }
        s
    }
}

pub fn histogram_scores(scores: impl IntoIterator<Item = f64>, edges: &[f64]) -> Result<Histogram> {
    if edges.len() < 2 {
        return Err(Error::InvalidParam("histogram needs at least 2 edges".into()));
    }
    if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParam(format!(
            "histogram edges must be finite and strictly ascending: {edges:?}"
        )));
    }
    let mut counts = vec![0usize; edges.len()];
    for s in scores {
        if s.is_nan() || s < edges[0] {
            return Err(Error::InvalidParam(format!(
                "score {s} lies below the first histogram edge {}",
                edges[0]
            )));
        }
        // index of the last edge <= s
        let bin = edges.partition_point(|&e| e <= s) - 1;
        counts[bin] += 1;
    }
    Ok(Histogram {
        edges: edges.to_vec(),
        counts,
    })
}

pub fn histogram(pairs: &[ExtractedPair], edges: &[f64]) -> Result<Histogram> {
    histogram_scores(pairs.iter().map(|p| p.pair.bisim), edges)
}

fn clean_field(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

/// Extracted corpus as TSV: `bisim, sim_fwd, sim_rev, src_doc:idx,
/// tgt_doc:idx, src_text, tgt_text`, one pair per line in rank order.
pub fn extracted_tsv(pairs: &[ExtractedPair]) -> String {
    let mut s = String::new();
    for x in pairs {
        let p = &x.pair;
        let _ = writeln!(
            s,
            "{:.6}\t{:.6}\t{:.6}\t{}\t{}\t{}\t{}",
            p.bisim,
            p.sim_fwd,
            p.sim_rev,
            p.src,
            p.tgt,
            clean_field(&x.src_text),
            clean_field(&x.tgt_text)
        );
    }
    s
}

/// One row of an extracted-corpus TSV read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractedRow {
    pub bisim: f64,
    pub sim_fwd: f64,
    pub sim_rev: f64,
    pub src: SentenceRef,
    pub tgt: SentenceRef,
}

pub fn parse_ref(s: &str, lang: Lang) -> Option<SentenceRef> {
    let (doc, idx) = s.rsplit_once(':')?;
    Some(SentenceRef::new(doc, idx.parse().ok()?, lang))
}

pub fn parse_extracted_tsv<R: BufRead>(input: R) -> Result<Vec<ExtractedRow>> {
    let mut rows = Vec::new();
    for (n, line) in input.lines().enumerate() {
        let lineno = n + 1;
        let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() < 5 {
            return Err(Error::parse(lineno, "expected at least 5 tab-separated columns"));
        }
        let num = |i: usize| -> Result<f64> {
            f[i].parse()
                .map_err(|_| Error::parse(lineno, format!("bad number {:?}", f[i])))
        };
        let sref = |i: usize, lang| {
            parse_ref(f[i], lang)
                .ok_or_else(|| Error::parse(lineno, format!("bad sentence ref {:?}", f[i])))
        };
        rows.push(ExtractedRow {
            bisim: num(0)?,
            sim_fwd: num(1)?,
            sim_rev: num(2)?,
            src: sref(3, Lang::Src)?,
            tgt: sref(4, Lang::Tgt)?,
        });
    }
    Ok(rows)
}
