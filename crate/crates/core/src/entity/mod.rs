//! Assignee name resolution, categories and patent credits.
//!
//! Names filed under the same assignee code are linked by pairwise
//! similarity; edges below a global percentile are dropped and each
//! remaining connected component becomes one entity.

mod category;
mod credits;
mod graph;
mod otsu;
mod registry;
mod similarity;

pub use category::{categorize_name, majority_category, Category, Lexicon};
pub use credits::{allocate_credits, region_from_address, CreditLedger, CreditRow, UNKNOWN_REGION};
pub use graph::{
    build_name_graphs, components_at, edge_threshold, resolve_name, split_code, Component,
    NameGraph,
};
pub use otsu::{otsu_threshold, Histogram};
pub use registry::{
    build_registry, collect_dwpi_pairs, match_original_names, same_record_histogram, EntityInfo,
    IdentityRegistry, MatchStage, MatchSummary, NameMatcher, PatentEntities, DEFAULT_P0,
    GLOBAL_CANDIDATES, ORIGINAL_CODE, REGISTRY_VERSION,
};
pub use similarity::{
    levenshtein, normalize_name, partial_ratio, partial_token_sort_ratio, ratio, similarity,
    SimilarityScore,
};
