//! Cluster labeling by over-represented words.
//!
//! Each document is reduced to its set of distinct tokens. For a word found
//! in `m` of `n` documents, a cluster of `c` documents is expected to hold
//! `mu = c·m/n` of them with standard deviation `sqrt(c·p·(1−p))`, `p = m/n`;
//! the z-score compares the observed count `M` against that.

mod tokenize;
mod zscore;

pub use tokenize::{tokenize, tokenize_text, Stopwords, TokenizedCorpus, MIN_TOKEN_LEN};
pub use zscore::{
    all_top_keywords, cluster_word_counts, top_keywords, zscore, zscore_counts, KeywordScore,
};
