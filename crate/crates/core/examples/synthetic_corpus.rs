//! Generates a seeded corpus with planted areas, names and transactions,
//! writes it as JSON Lines and prints what was planted.
//!
//! ```text
//! cargo run --example synthetic_corpus -- /tmp/corpus.jsonl
//! ```

use std::path::PathBuf;

use patlas::ingest::{write_records, InputFormat};
use patlas::synth::{generate_corpus, CorpusSpec};

fn main() -> patlas::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("patlas_corpus.jsonl"));
    let spec = CorpusSpec {
        n_patents: 1500,
        seed: 3,
        ..CorpusSpec::default()
    };
    let corpus = generate_corpus(&spec)?;
    write_records(&out, &corpus.records, InputFormat::Jsonl)?;

    let t = &corpus.truth;
    println!(
        "{} publications, {} applications",
        t.publications, t.applications
    );
    println!(
        "{} planted areas over {} subclasses",
        t.g,
        t.code_blocks.len()
    );
    println!("{} planted assignee identities", t.identities.len());
    let mut sizes = vec![0usize; t.g];
    for &b in t.labels.values() {
        sizes[b] += 1;
    }
    println!("applications per area: {sizes:?}");
    println!("written to {}", out.display());
    Ok(())
}
