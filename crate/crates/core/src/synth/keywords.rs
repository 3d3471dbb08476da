use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::corpus::AREA_WORDS;
use super::words::pseudo_word;
use crate::topics::TokenizedCorpus;

/// Tokenized documents with cluster labels and the word planted in each
/// cluster (empty for null corpora).
#[derive(Debug, Clone)]
pub struct KeywordCorpus {
    pub corpus: TokenizedCorpus,
    pub labels: Vec<usize>,
    pub g: usize,
    pub signatures: Vec<String>,
}

fn vocabulary<R: Rng>(rng: &mut R, size: usize, avoid: &BTreeSet<String>) -> Vec<String> {
    let mut v = BTreeSet::new();
    while v.len() < size {
        let w = pseudo_word(rng, 2, 4).to_lowercase();
        if !avoid.contains(&w) {
            v.insert(w);
        }
    }
    v.into_iter().collect()
}

fn build(
    n_docs: usize,
    g: usize,
    vocab: usize,
    words_per_doc: usize,
    plant: Option<(f64, f64)>,
    seed: u64,
) -> KeywordCorpus {
    assert!(
        g >= 1 && words_per_doc <= vocab,
        "need g >= 1 and words_per_doc <= vocab"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let signatures: Vec<String> = match plant {
        None => Vec::new(),
        Some(_) => (0..g)
            .map(|k| match AREA_WORDS.get(k) {
                Some(ws) => ws[0].to_string(),
                None => format!("signature{k}"),
            })
            .collect(),
    };
    let words = vocabulary(&mut rng, vocab, &signatures.iter().cloned().collect());
    let labels: Vec<usize> = (0..n_docs).map(|_| rng.gen_range(0..g)).collect();
    let sets = labels
        .iter()
        .map(|&k| {
            let mut s: BTreeSet<String> = sample(&mut rng, vocab, words_per_doc)
                .into_iter()
                .map(|i| words[i].clone())
                .collect();
            if let Some((rate, leak)) = plant {
                for (c, sig) in signatures.iter().enumerate() {
                    let p = if c == k { rate } else { leak };
                    if rng.gen_bool(p) {
                        s.insert(sig.clone());
                    }
                }
            }
            s
        })
        .collect();
    let doc_ids = (0..n_docs).map(|d| format!("D{d:06}")).collect();
    KeywordCorpus {
        corpus: TokenizedCorpus::from_token_sets(doc_ids, sets),
        labels,
        g,
        signatures,
    }
}

/// Words placed uniformly at random, independent of the cluster labels.
pub fn null_keyword_corpus(
    n_docs: usize,
    g: usize,
    vocab: usize,
    words_per_doc: usize,
    seed: u64,
) -> KeywordCorpus {
    build(n_docs, g, vocab, words_per_doc, None, seed)
}

/// Random placement plus one signature word per cluster, present in a
/// `rate` share of that cluster's documents and a `leak` share elsewhere.
pub fn signature_keyword_corpus(
    n_docs: usize,
    g: usize,
    vocab: usize,
    words_per_doc: usize,
    rate: f64,
    leak: f64,
    seed: u64,
) -> KeywordCorpus {
    build(n_docs, g, vocab, words_per_doc, Some((rate, leak)), seed)
}
