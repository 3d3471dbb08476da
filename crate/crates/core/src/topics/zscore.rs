use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::TokenizedCorpus;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeywordScore {
    pub word: String,
    pub cluster: usize,
    /// Documents in the cluster containing the word.
    #[serde(rename = "M")]
    pub m_in: u32,
    pub mu: f64,
    pub sigma: f64,
    pub z: f64,
    /// `sigma = 0`: the word is in every document or in none.
    pub degenerate: bool,
}

/// `(mu, sigma, z, degenerate)` for a word in `m_k` of `n` documents,
/// `big_m` of them inside a cluster of `cluster_size`.
pub fn zscore_counts(
    n: usize,
    cluster_size: usize,
    m_k: usize,
    big_m: usize,
) -> (f64, f64, f64, bool) {
    let n = n as f64;
    let c = cluster_size as f64;
    let m = m_k as f64;
    let p = m / n;
    let mu = c * m / n;
    let sigma = (c * p * (1.0 - p)).sqrt();
    if sigma > 0.0 {
        (mu, sigma, (big_m as f64 - mu) / sigma, false)
    } else {
        (mu, 0.0, 0.0, true)
    }
}

/// Per-cluster document frequency of every word; `labels[d]` is the cluster
/// of document `d`.
pub fn cluster_word_counts(
    corpus: &TokenizedCorpus,
    labels: &[usize],
    g: usize,
) -> Vec<HashMap<u32, u32>> {
    assert_eq!(labels.len(), corpus.n_docs(), "one label per document");
    (0..g)
        .into_par_iter()
        .map(|k| {
            let mut counts = HashMap::new();
            for (d, doc) in corpus.docs.iter().enumerate() {
                if labels[d] == k {
                    for &w in doc {
                        *counts.entry(w).or_insert(0) += 1;
                    }
                }
            }
            counts
        })
        .collect()
}

fn cluster_size(labels: &[usize], cluster: usize) -> usize {
    labels.iter().filter(|&&l| l == cluster).count()
}

pub fn zscore(
    word: &str,
    cluster: usize,
    corpus: &TokenizedCorpus,
    labels: &[usize],
) -> Result<KeywordScore> {
    let w = corpus
        .word_id(word)
        .ok_or_else(|| Error::invalid(format!("word {word:?} occurs in no document")))?;
    let size = cluster_size(labels, cluster);
    let big_m = corpus
        .docs
        .iter()
        .zip(labels)
        .filter(|(d, &l)| l == cluster && d.binary_search(&w).is_ok())
        .count();
    let (mu, sigma, z, degenerate) = zscore_counts(
        corpus.n_docs(),
        size,
        corpus.doc_freq[w as usize] as usize,
        big_m,
    );
    Ok(KeywordScore {
        word: word.to_string(),
        cluster,
        m_in: big_m as u32,
        mu,
        sigma,
        z,
        degenerate,
    })
}

fn rank(mut scores: Vec<KeywordScore>, k: usize) -> Vec<KeywordScore> {
    scores.retain(|s| !s.degenerate);
    scores.sort_by(|a, b| {
        b.z.total_cmp(&a.z)
            .then(b.m_in.cmp(&a.m_in))
            .then_with(|| a.word.cmp(&b.word))
    });
    scores.truncate(k);
    scores
}

fn score_cluster(
    corpus: &TokenizedCorpus,
    counts: &HashMap<u32, u32>,
    cluster: usize,
    size: usize,
    k: usize,
) -> Vec<KeywordScore> {
    if size == 0 || k == 0 {
        return Vec::new();
    }
    let n = corpus.n_docs();
    let scores: Vec<KeywordScore> = (0..corpus.vocab.len() as u32)
        .into_par_iter()
        .map(|w| {
            let big_m = counts.get(&w).copied().unwrap_or(0);
            let (mu, sigma, z, degenerate) = zscore_counts(
                n,
                size,
                corpus.doc_freq[w as usize] as usize,
                big_m as usize,
            );
            KeywordScore {
                word: corpus.vocab[w as usize].clone(),
                cluster,
                m_in: big_m,
                mu,
                sigma,
                z,
                degenerate,
            }
        })
        .collect();
    rank(scores, k)
}

/// The `k` highest-z words of one cluster: z descending, then larger `M`,
/// then alphabetical. Degenerate scores are left out.
pub fn top_keywords(
    cluster: usize,
    corpus: &TokenizedCorpus,
    labels: &[usize],
    g: usize,
    k: usize,
) -> Vec<KeywordScore> {
    let counts = cluster_word_counts(corpus, labels, g);
    match counts.get(cluster) {
        Some(c) => score_cluster(corpus, c, cluster, cluster_size(labels, cluster), k),
        None => Vec::new(),
    }
}

/// [`top_keywords`] for clusters `0..g`.
pub fn all_top_keywords(
    corpus: &TokenizedCorpus,
    labels: &[usize],
    g: usize,
    k: usize,
) -> Vec<Vec<KeywordScore>> {
    let counts = cluster_word_counts(corpus, labels, g);
    counts
        .iter()
        .enumerate()
        .map(|(c, cnt)| score_cluster(corpus, cnt, c, cluster_size(labels, c), k))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topics::{tokenize_text, Stopwords};
    use proptest::prelude::*;

    fn corpus(texts: &[&str]) -> TokenizedCorpus {
        let sw = Stopwords::empty();
        TokenizedCorpus::from_token_sets(
            (0..texts.len()).map(|i| i.to_string()).collect(),
            texts.iter().map(|t| tokenize_text(t, &sw)).collect(),
        )
    }

    #[test]
    fn worked_example() {
        let (mu, sigma, z, deg) = zscore_counts(100, 50, 10, 10);
        assert_eq!(mu, 5.0);
        assert!((sigma - 4.5f64.sqrt()).abs() < 1e-12);
        assert!((sigma - 2.1213).abs() < 1e-4);
        assert!((z - 2.357).abs() < 1e-3);
        assert!(!deg);
        let (_, _, z, _) = zscore_counts(100, 50, 10, 5);
        assert_eq!(z, 0.0);
        assert!(zscore_counts(10, 4, 10, 4).3);
    }

    #[test]
    fn confined_word_matches_oracle() {
        // "lithium" sits in exactly the 3 documents of cluster 1
        let texts = [
            "lithium anode",
            "lithium cathode",
            "lithium salt",
            "sensor",
            "sensor gas",
            "film",
            "film oxide",
            "gas",
        ];
        let labels = [1, 1, 1, 0, 0, 0, 0, 0];
        let c = corpus(&texts);
        let s = zscore("lithium", 1, &c, &labels).unwrap();
        let (n, size, m) = (8.0f64, 3.0f64, 3.0f64);
        let p = m / n;
        let mu = size * p;
        let sigma = (size * p * (1.0 - p)).sqrt();
        assert_eq!(s.m_in, 3);
        assert!((s.mu - mu).abs() < 1e-12);
        assert!((s.z - (3.0 - mu) / sigma).abs() < 1e-12);
        assert!(s.z > 0.0);
        let top = top_keywords(1, &c, &labels, 2, 3);
        assert_eq!(top[0].word, "lithium");
        assert!(top_keywords(1, &c, &labels, 2, 0).is_empty());
        assert!(zscore("absent", 0, &c, &labels).is_err());
    }

    #[test]
    fn ubiquitous_word_is_excluded() {
        let c = corpus(&["graphene oxide", "graphene film", "graphene"]);
        let labels = [0, 0, 1];
        let s = zscore("graphene", 0, &c, &labels).unwrap();
        assert!(s.degenerate);
        assert!(top_keywords(0, &c, &labels, 2, 10)
            .iter()
            .all(|k| k.word != "graphene"));
    }

    #[test]
    fn empty_cluster_gives_nothing() {
        let c = corpus(&["graphene oxide", "graphene film"]);
        assert!(top_keywords(2, &c, &[0, 0], 3, 5).is_empty());
    }

    proptest! {
        #[test]
        fn conservation_and_sign(
            docs in proptest::collection::vec(proptest::collection::btree_set(0u8..12, 0..6), 2..40),
            seed_labels in proptest::collection::vec(0usize..4, 40),
        ) {
            let sets = docs.iter().map(|d| d.iter().map(|w| format!("w{w:02}x")).collect()).collect();
            let c = TokenizedCorpus::from_token_sets((0..docs.len()).map(|i| i.to_string()).collect(), sets);
            let labels: Vec<usize> = seed_labels[..docs.len()].to_vec();
            let counts = cluster_word_counts(&c, &labels, 4);
            for w in 0..c.vocab.len() as u32 {
                let total: u32 = counts.iter().map(|m| m.get(&w).copied().unwrap_or(0)).sum();
                prop_assert_eq!(total, c.doc_freq[w as usize]);
                for k in 0..4 {
                    let s = zscore(&c.vocab[w as usize], k, &c, &labels).unwrap();
                    if !s.degenerate {
                        let diff = s.m_in as f64 - s.mu;
                        prop_assert_eq!(s.z > 0.0, diff > 0.0);
                        prop_assert_eq!(s.z < 0.0, diff < 0.0);
                    }
                }
                // single cluster: z is exactly zero
                let one = vec![0usize; docs.len()];
                let s = zscore(&c.vocab[w as usize], 0, &c, &one).unwrap();
                prop_assert_eq!(s.z, 0.0);
            }
        }
    }
}
