use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Name similarity on a 0–100 scale.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct SimilarityScore(f64);

impl SimilarityScore {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Uppercases, turns every non-alphanumeric character into a space and
/// collapses runs of whitespace.
pub fn normalize_name(name: &str) -> String {
    let mapped: String = name
        .chars()
        .map(|c| {
            if c.is_alphanumeric() {
                c.to_ascii_uppercase()
            } else {
                ' '
            }
        })
        .collect();
    mapped.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Edit distance with unit-cost insertions, deletions and substitutions.
pub fn levenshtein(a: &[char], b: &[char]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// `100 · (1 − d / max(|a|, |b|))`.
pub fn ratio(a: &[char], b: &[char]) -> f64 {
    let longest = a.len().max(b.len());
    if longest == 0 {
        return 100.0;
    }
    100.0 * (1.0 - levenshtein(a, b) as f64 / longest as f64)
}

/// Best [`ratio`] of the shorter string against every equal-length window
/// of the longer one.
pub fn partial_ratio(a: &[char], b: &[char]) -> f64 {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if short.len() == long.len() {
        return ratio(short, long);
    }
    if short.is_empty() {
        return 0.0;
    }
    let mut best = 0.0f64;
    for start in 0..=long.len() - short.len() {
        let window = &long[start..start + short.len()];
        if window == short {
            return 100.0;
        }
        best = best.max(ratio(short, window));
    }
    best
}

fn sorted_tokens(s: &str) -> Vec<char> {
    let mut tokens: Vec<&str> = s.split_whitespace().collect();
    tokens.sort_unstable();
    tokens.join(" ").chars().collect()
}

pub fn partial_token_sort_ratio(a: &str, b: &str) -> f64 {
    partial_ratio(&sorted_tokens(a), &sorted_tokens(b))
}

/// Maximum of the normal, partial and partial token-sort ratios of the
/// normalized names.
pub fn similarity(a: &str, b: &str) -> Result<SimilarityScore> {
    let na = normalize_name(a);
    let nb = normalize_name(b);
    if na.is_empty() || nb.is_empty() {
        return Err(Error::invalid("similarity of an empty name"));
    }
    Ok(SimilarityScore(similarity_normalized(&na, &nb)))
}

/// [`similarity`] for names already passed through [`normalize_name`].
pub(crate) fn similarity_normalized(na: &str, nb: &str) -> f64 {
    if na == nb {
        return 100.0;
    }
    let ca: Vec<char> = na.chars().collect();
    let cb: Vec<char> = nb.chars().collect();
    let partial = partial_ratio(&ca, &cb);
    if partial >= 100.0 {
        return 100.0;
    }
    ratio(&ca, &cb)
        .max(partial)
        .max(partial_token_sort_ratio(na, nb))
}
