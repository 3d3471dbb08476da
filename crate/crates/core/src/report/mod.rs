//! Configuration, orchestration and file outputs of a full analysis run.
//!
//! [`run_pipeline`] chains every stage and writes CSV, JSON and SVG files
//! plus a `manifest.json` of content hashes. The stage functions are public
//! so single steps can be rerun on their own.

mod config;
mod output;
mod pipeline;
pub mod svg;

pub use config::{config_help, PipelineConfig, CONFIG_KEYS};
pub use output::{
    csv_records, csv_string, json_string, sha256_hex, write_file, ArtifactDir, ClusterFile,
    Manifest, Meta, CLUSTER_FILE_VERSION,
};
pub use pipeline::{
    credits_csv, curve, curve_csv, degree_rows, events_csv, ingest, keywords, keywords_csv,
    portfolio_data, portfolio_outputs, resolve, run_pipeline, transactions, AtStage,
    PortfolioParams, Resolution, RunOutput, RunSummary, Stage, StageError,
};
