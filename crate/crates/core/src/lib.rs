//! Patent-portfolio analytics.
//!
//! The crate turns merged patent records into a patent × IPC-subclass incidence
//! matrix, finds technology areas by diagonal block co-clustering, labels them
//! with over-represented title/abstract words, resolves assignee names into
//! entities, and measures how entity portfolios diversify over time.
//!
//! | module | what it does |
//! |---|---|
//! | [`ingest`] | record parsing, application merging, incidence matrix, degree statistics |
//! | [`coclus`] | modularity, co-cluster fitting, modularity curves, overlaps, subsampling |
//! | [`topics`] | tokenization and null-model keyword z-scores |
//! | [`entity`] | name similarity, code splitting, Otsu thresholds, categories, credits |
//! | [`portfolio`] | entropy, proportions, rankings, quartiles, vector fields, heat maps |
//! | [`transactions`] | US reassignment field parsing, reassignment and licensing statistics |
//! | [`report`] | pipeline configuration, orchestration, CSV/JSON/SVG outputs |
//! | [`synth`] | seeded generators with planted ground truth |
//!
//! Runnable walkthroughs live in `examples/`; `cargo run --example` lists them.

pub mod coclus;
pub mod entity;
mod error;
mod fsutil;
pub mod ingest;
pub mod portfolio;
pub mod report;
pub mod stats;
pub mod synth;
pub mod topics;
pub mod transactions;

pub use error::{Error, Result};

/// Crate version, stamped into every output header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
