//! Patent record ingestion.
//!
//! Raw publication records are read from CSV or JSONL, merged into one
//! [`PatentRecord`] per application, and turned into the binary
//! patent × subclass incidence matrix used by [`crate::coclus`].

mod corpus_file;
mod matrix;
mod merge;
mod parse;

pub use corpus_file::{read_corpus, write_corpus, CORPUS_MAGIC, CORPUS_VERSION};
pub use matrix::{
    degree_distribution, filter_and_build_matrix, Axis, DegreeDistribution, SparseBinaryMatrix,
};
pub use merge::merge_applications;
pub use parse::{normalize_ipc, parse_records, parse_records_from_str, write_records, InputFormat};

use serde::{Deserialize, Serialize};

/// Largest number of subclasses observed on a single application in the
/// reference data; larger sets are accepted but logged.
pub const MAX_EXPECTED_SUBCLASSES: usize = 19;

/// A DWPI assignee name together with its assignee code (e.g. `UYHE|N`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DwpiAssignee {
    pub name: String,
    pub code: String,
}

/// An original assignee as printed on the publication.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OriginalAssignee {
    pub name: String,
    pub address: String,
}

/// One publication record as exported.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRecord {
    pub publication_id: String,
    pub application_id: String,
    pub application_year: i32,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    #[serde(rename = "ipc")]
    pub ipc_subclasses: Vec<String>,
    pub dwpi_assignees: Vec<DwpiAssignee>,
    pub original_assignees: Vec<OriginalAssignee>,
    #[serde(rename = "us_reassignment", default)]
    pub us_reassignment_field: Option<String>,
}

/// A distinct patent application, merged from all of its publications.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatentRecord {
    pub application_id: String,
    /// Earliest application year among the merged publications.
    pub year: i32,
    /// Sorted, deduplicated 4-character subclasses.
    pub ipc_subclasses: Vec<String>,
    pub merged_publication_ids: Vec<String>,
    pub title: String,
    pub abstract_text: String,
    /// Original assignees in printed order.
    pub original_assignees: Vec<OriginalAssignee>,
    /// Every DWPI (name, code) pair seen on any merged publication, sorted.
    pub assignee_name_pool: Vec<DwpiAssignee>,
    pub us_reassignment_field: Option<String>,
}

impl PatentRecord {
    pub fn first_assignee_names(&self) -> Vec<&str> {
        self.original_assignees
            .iter()
            .map(|a| a.name.as_str())
            .collect()
    }

    /// Address of the first original assignee, empty when there is none.
    pub fn first_assignee_address(&self) -> &str {
        self.original_assignees
            .first()
            .map(|a| a.address.as_str())
            .unwrap_or("")
    }

    /// Expands the merged record back into one raw record per publication.
    pub fn to_raw_records(&self) -> Vec<RawRecord> {
        self.merged_publication_ids
            .iter()
            .map(|pid| RawRecord {
                publication_id: pid.clone(),
                application_id: self.application_id.clone(),
                application_year: self.year,
                title: self.title.clone(),
                abstract_text: self.abstract_text.clone(),
                ipc_subclasses: self.ipc_subclasses.clone(),
                dwpi_assignees: self.assignee_name_pool.clone(),
                original_assignees: self.original_assignees.clone(),
                us_reassignment_field: self.us_reassignment_field.clone(),
            })
            .collect()
    }
}
