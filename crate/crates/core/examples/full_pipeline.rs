//! Runs every stage on a synthetic corpus and lists the artifacts written.
//!
//! ```text
//! cargo run --release --example full_pipeline -- /tmp/patlas_run
//! ```

use std::path::PathBuf;

use patlas::ingest::{write_records, InputFormat};
use patlas::report::{run_pipeline, PipelineConfig};
use patlas::synth::{generate_corpus, CorpusSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("patlas_run"));
    std::fs::create_dir_all(&out)?;

    let input = out.join("records.jsonl");
    let corpus = generate_corpus(&CorpusSpec::default())?;
    write_records(&input, &corpus.records, InputFormat::Jsonl)?;

    let config = PipelineConfig {
        input,
        g_max: 10,
        ..PipelineConfig::default()
    };
    let run = run_pipeline(&config, &out.join("report"))?;
    println!("{}", serde_json::to_string_pretty(&run.summary)?);
    for (name, hash) in &run.manifest.artifacts {
        println!("{hash:.12}  {name}");
    }
    Ok(())
}
