//! Labels clusters with the words most over-represented in their titles
//! and abstracts, scored against random placement of documents.

use patlas::coclus::{fit, FitParams};
use patlas::ingest::{filter_and_build_matrix, merge_applications};
use patlas::report::{keywords, ClusterFile, Meta};
use patlas::synth::{generate_corpus, signature_keyword_corpus, CorpusSpec};
use patlas::topics::{all_top_keywords, Stopwords};

fn main() -> patlas::Result<()> {
    // one planted signature word per cluster
    let kc = signature_keyword_corpus(1400, 7, 400, 12, 0.6, 0.02, 5);
    let top = all_top_keywords(&kc.corpus, &kc.labels, kc.g, 3);
    for (k, list) in top.iter().enumerate() {
        let words: Vec<String> = list
            .iter()
            .map(|s| format!("{} ({:.1})", s.word, s.z))
            .collect();
        println!(
            "cluster {k}: planted {}, found {}",
            kc.signatures[k],
            words.join(", ")
        );
    }

    // the same scoring on a fitted synthetic corpus
    let apps = merge_applications(&generate_corpus(&CorpusSpec::default())?.records);
    let m = filter_and_build_matrix(&apps)?;
    let c = fit(&m, &FitParams::default())?;
    let clusters = ClusterFile::new(&m, &c, 0, 10, Meta::new("example"));
    let kw = keywords(&apps, &clusters, &Stopwords::default(), 5)?;
    for list in &kw {
        let words: Vec<&str> = list.iter().map(|s| s.word.as_str()).collect();
        if let Some(first) = list.first() {
            println!("area {}: {}", first.cluster, words.join(" "));
        }
    }
    Ok(())
}
