//! Seeded generators with planted ground truth, used by the tests, the
//! examples and `patlas generate`.

mod corpus;
mod keywords;
mod matrix;
mod names;
mod portfolio;
mod transactions;
mod words;

pub use corpus::{
    duplicate_publications, generate_corpus, CorpusSpec, GroundTruth, SyntheticCorpus,
    TransactionTruth, LICENSEES,
};
pub use keywords::{null_keyword_corpus, signature_keyword_corpus, KeywordCorpus};
pub use matrix::{block_labels, planted_block_matrix, power_law_matrix, PlantedMatrix};
pub use names::{
    planted_name_families, resolution_accuracy, NameFamilySpec, PlantedIdentity, PlantedNames,
};
pub use portfolio::{
    area_ramp_data, diverse_portfolios, entity_population, portfolio_with_entropy,
    region_crossover_data, region_total_data, PopulationSpec,
};
pub use transactions::{
    reference_plans, reference_transaction_fixture, OriginPlan, TransactionFixture,
    INTERNAL_FAMILY, INTERNAL_TRANSFERS, REFERENCE_CORPORATE_LICENSORS, REFERENCE_LICENSEES,
    REFERENCE_UNIVERSITY_LICENSORS,
};
