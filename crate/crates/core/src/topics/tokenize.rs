use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;

use rayon::prelude::*;

use crate::ingest::PatentRecord;
use crate::{Error, Result};

pub const MIN_TOKEN_LEN: usize = 3;

const DEFAULT_STOPWORDS: &str = include_str!("stopwords_en.txt");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stopwords(HashSet<String>);

impl Default for Stopwords {
    fn default() -> Self {
        Self::parse(DEFAULT_STOPWORDS)
    }
}

impl Stopwords {
    /// One word per line; blank lines and `#` comments ignored.
    pub fn parse(text: &str) -> Self {
        Self(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text))
    }

    pub fn empty() -> Self {
        Self(HashSet::new())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Distinct lowercase alphanumeric tokens of at least three characters that
/// are neither numbers nor stopwords.
pub fn tokenize_text(text: &str, stopwords: &Stopwords) -> BTreeSet<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.chars().count() >= MIN_TOKEN_LEN)
        .filter(|t| !t.chars().all(|c| c.is_numeric()))
        .filter(|t| !stopwords.contains(t))
        .map(str::to_string)
        .collect()
}

/// Documents as sorted word-id sets plus document frequencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedCorpus {
    pub doc_ids: Vec<String>,
    pub docs: Vec<Vec<u32>>,
    /// Sorted vocabulary; word ids index into it.
    pub vocab: Vec<String>,
    /// `doc_freq[w]` = number of documents containing word `w`.
    pub doc_freq: Vec<u32>,
}

impl TokenizedCorpus {
    pub fn from_token_sets(doc_ids: Vec<String>, sets: Vec<BTreeSet<String>>) -> Self {
        assert_eq!(doc_ids.len(), sets.len());
        let vocab: Vec<String> = sets
            .iter()
            .flat_map(|s| s.iter())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .cloned()
            .collect();
        let index: BTreeMap<&str, u32> = vocab
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_str(), i as u32))
            .collect();
        let docs: Vec<Vec<u32>> = sets
            .iter()
            .map(|s| s.iter().map(|w| index[w.as_str()]).collect())
            .collect();
        let doc_freq = docs
            .par_iter()
            .fold(
                || vec![0u32; vocab.len()],
                |mut acc, d| {
                    for &w in d {
                        acc[w as usize] += 1;
                    }
                    acc
                },
            )
            .reduce(
                || vec![0u32; vocab.len()],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        Self {
            doc_ids,
            docs,
            vocab,
            doc_freq,
        }
    }

    pub fn n_docs(&self) -> usize {
        self.docs.len()
    }

    pub fn word_id(&self, word: &str) -> Option<u32> {
        self.vocab
            .binary_search_by(|w| w.as_str().cmp(word))
            .ok()
            .map(|i| i as u32)
    }

    pub fn doc_freq_of(&self, word: &str) -> u32 {
        self.word_id(word).map_or(0, |w| self.doc_freq[w as usize])
    }

    pub fn tokens(&self, doc: usize) -> impl Iterator<Item = &str> {
        self.docs[doc]
            .iter()
            .map(|&w| self.vocab[w as usize].as_str())
    }
}

/// Title and abstract of every application, in input order.
pub fn tokenize(apps: &[PatentRecord], stopwords: &Stopwords) -> TokenizedCorpus {
    let sets: Vec<BTreeSet<String>> = apps
        .par_iter()
        .map(|a| {
            let mut s = tokenize_text(&a.title, stopwords);
            s.extend(tokenize_text(&a.abstract_text, stopwords));
            s
        })
        .collect();
    TokenizedCorpus::from_token_sets(
        apps.iter().map(|a| a.application_id.clone()).collect(),
        sets,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn title_tokens() {
        let t = tokenize_text(
            "Conducting polymer-transition metal electro-catalyst compositions for fuel cells",
            &Stopwords::default(),
        );
        for w in [
            "conducting",
            "polymer",
            "transition",
            "metal",
            "electro",
            "catalyst",
            "compositions",
            "fuel",
            "cells",
        ] {
            assert!(t.contains(w), "{w}");
        }
        assert!(!t.contains("for"));
    }

    #[test]
    fn drops_short_numeric_and_stopwords() {
        let sw = Stopwords::default();
        assert!(tokenize_text("", &sw).is_empty());
        assert!(tokenize_text("the and of", &sw).is_empty());
        assert_eq!(
            tokenize_text("Li 2017 H01M 300nm graphene GRAPHENE", &sw)
                .into_iter()
                .collect::<Vec<_>>(),
            vec!["300nm", "graphene", "h01m"]
        );
        assert!(sw.len() > 300);
    }

    #[test]
    fn doc_freq_counts_presence() {
        let sw = Stopwords::empty();
        let c = TokenizedCorpus::from_token_sets(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                tokenize_text("oxide oxide film", &sw),
                tokenize_text("oxide", &sw),
                tokenize_text("", &sw),
            ],
        );
        assert_eq!(c.doc_freq_of("oxide"), 2);
        assert_eq!(c.doc_freq_of("film"), 1);
        assert_eq!(c.doc_freq_of("nothing"), 0);
        assert_eq!(c.docs[2], Vec::<u32>::new());
        for &f in &c.doc_freq {
            assert!(f >= 1 && f as usize <= c.n_docs());
        }
    }
}
