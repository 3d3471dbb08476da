//! Diagonal block co-clustering of a binary incidence matrix.
//!
//! Rows and columns are split jointly into `g` paired clusters. The
//! objective is the bipartite modularity
//!
//! ```text
//! Q = (1/T) Σ_ij (a_ij − r_i c_j / T) · [row_cluster(i) == col_cluster(j)]
//! ```
//!
//! with `T` the number of nonzero entries and `r_i`, `c_j` the row and
//! column degrees. [`fit`] maximizes it by alternating exact row and column
//! updates from several seeded random starts.

mod analysis;
mod fit;
mod modularity;

pub use analysis::{
    adjusted_rand_index, modularity_curve, overlap, sensitivity_subsample, ModularityCurve,
    OverlapMatrix, SensitivityParams, SensitivityTrial,
};
pub use fit::{fit, fit_traced, FitParams, SweepRecord};
pub use modularity::modularity_of;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoClustering {
    pub g: usize,
    /// Cluster id in `[0, g)` for every matrix row.
    pub row_assignment: Vec<usize>,
    /// Cluster id in `[0, g)` for every matrix column.
    pub col_assignment: Vec<usize>,
    pub modularity: f64,
}

impl CoClustering {
    /// Row indices belonging to each cluster.
    pub fn row_members(&self) -> Vec<Vec<usize>> {
        members(&self.row_assignment, self.g)
    }

    pub fn col_members(&self) -> Vec<Vec<usize>> {
        members(&self.col_assignment, self.g)
    }
}

pub(crate) fn members(assignment: &[usize], g: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); g];
    for (i, &k) in assignment.iter().enumerate() {
        out[k].push(i);
    }
    out
}
