//! Parses raw publications, merges them into applications, builds the
//! patent × subclass matrix and fits power laws to its degree distributions.

use patlas::ingest::{
    degree_distribution, filter_and_build_matrix, merge_applications, read_corpus, write_corpus,
    Axis,
};
use patlas::synth::{generate_corpus, CorpusSpec};

fn main() -> patlas::Result<()> {
    let corpus = generate_corpus(&CorpusSpec::default())?;
    let apps = merge_applications(&corpus.records);
    println!(
        "{} publications merged into {} applications",
        corpus.records.len(),
        apps.len()
    );

    let m = filter_and_build_matrix(&apps)?;
    println!(
        "matrix {} x {}, {} nonzeros",
        m.n_rows(),
        m.n_cols(),
        m.nnz()
    );

    for (name, axis) in [("patents", Axis::Rows), ("subclasses", Axis::Cols)] {
        let d = degree_distribution(&m, axis);
        let head: Vec<String> = d
            .points
            .iter()
            .take(6)
            .map(|(k, n)| format!("{k}:{n}"))
            .collect();
        match d.slope {
            Some(s) => println!("{name}: slope {s:.3}, degree:count {}", head.join(" ")),
            None => println!("{name}: single degree, no slope"),
        }
    }

    // the binary corpus round-trips exactly
    let dir = tempdir();
    let path = dir.join("corpus.bin");
    write_corpus(&path, &apps)?;
    assert_eq!(read_corpus(&path)?, apps);
    println!("corpus cache at {}", path.display());
    Ok(())
}

fn tempdir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join("patlas_ingest_example");
    std::fs::create_dir_all(&d).expect("temp dir is writable");
    d
}
