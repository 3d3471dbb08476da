use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::PatentRecord;
use crate::{stats, Error, Result};

/// Binary incidence matrix stored in both row-major and column-major
/// adjacency form. Rows and columns are never empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseBinaryMatrix {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    rows: Vec<Vec<u32>>,
    cols: Vec<Vec<u32>>,
    nnz: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Rows,
    Cols,
}

impl std::str::FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rows" => Ok(Axis::Rows),
            "cols" => Ok(Axis::Cols),
            _ => Err(Error::Config(format!("unknown axis `{s}`"))),
        }
    }
}

impl SparseBinaryMatrix {
    /// Builds a matrix from per-row column indices. Duplicate indices collapse.
    /// Fails when a row or a column ends up with no entries.
    pub fn from_rows(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        mut rows: Vec<Vec<u32>>,
    ) -> Result<Self> {
        if rows.is_empty() || col_labels.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        if rows.len() != row_labels.len() {
            return Err(Error::invalid("row label count differs from row count"));
        }
        let n_cols = col_labels.len();
        let mut cols = vec![Vec::new(); n_cols];
        let mut nnz = 0;
        for (i, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            row.dedup();
            if row.is_empty() {
                return Err(Error::invalid(format!("row {i} has no entries")));
            }
            for &j in row.iter() {
                let j = j as usize;
                if j >= n_cols {
                    return Err(Error::invalid(format!("column index {j} out of range")));
                }
                cols[j].push(i as u32);
            }
            nnz += row.len();
        }
        if let Some(j) = cols.iter().position(Vec::is_empty) {
            return Err(Error::invalid(format!("column {j} has no entries")));
        }
        Ok(Self {
            row_labels,
            col_labels,
            rows,
            cols,
            nnz,
        })
    }

    /// Convenience constructor from a dense 0/1 pattern with generated labels.
    pub fn from_dense(pattern: &[Vec<u8>]) -> Result<Self> {
        let n_cols = pattern.first().map_or(0, Vec::len);
        let rows = pattern
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(j, _)| j as u32)
                    .collect()
            })
            .collect();
        Self::from_rows(
            (0..pattern.len()).map(|i| format!("r{i}")).collect(),
            (0..n_cols).map(|j| format!("c{j}")).collect(),
            rows,
        )
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    /// Number of nonzero entries.
    pub fn nnz(&self) -> usize {
        self.nnz
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.rows[i]
    }

    pub fn col(&self, j: usize) -> &[u32] {
        &self.cols[j]
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn row_degrees(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn col_degrees(&self) -> Vec<usize> {
        self.cols.iter().map(Vec::len).collect()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.rows[i].binary_search(&(j as u32)).is_ok()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&j| (i, j as usize)))
    }

    /// Keeps the listed rows and columns (in the given order), then drops any
    /// row or column left without entries. Returns the submatrix together
    /// with the original indices of the surviving rows and columns.
    pub fn submatrix(
        &self,
        keep_rows: &[usize],
        keep_cols: &[usize],
    ) -> Result<(Self, Vec<usize>, Vec<usize>)> {
        let mut col_map = vec![u32::MAX; self.n_cols()];
        for (new, &old) in keep_cols.iter().enumerate() {
            col_map[old] = new as u32;
        }
        let mut col_used = vec![false; keep_cols.len()];
        let mut rows = Vec::new();
        let mut surviving_rows = Vec::new();
        for &i in keep_rows {
            let r: Vec<u32> = self.rows[i]
                .iter()
                .map(|&j| col_map[j as usize])
                .filter(|&j| j != u32::MAX)
                .collect();
            if !r.is_empty() {
                for &j in &r {
                    col_used[j as usize] = true;
                }
                rows.push(r);
                surviving_rows.push(i);
            }
        }
        let mut remap = vec![u32::MAX; keep_cols.len()];
        let mut surviving_cols = Vec::new();
        for (new, used) in col_used.iter().enumerate() {
            if *used {
                remap[new] = surviving_cols.len() as u32;
                surviving_cols.push(keep_cols[new]);
            }
        }
        if rows.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        for r in &mut rows {
            for j in r.iter_mut() {
                *j = remap[*j as usize];
            }
        }
        let m = Self::from_rows(
            surviving_rows
                .iter()
                .map(|&i| self.row_labels[i].clone())
                .collect(),
            surviving_cols
                .iter()
                .map(|&j| self.col_labels[j].clone())
                .collect(),
            rows,
        )?;
        Ok((m, surviving_rows, surviving_cols))
    }
}

/// Builds the patent × subclass matrix. Patents without subclasses are
/// skipped; columns are the subclasses in lexicographic order.
pub fn filter_and_build_matrix(apps: &[PatentRecord]) -> Result<SparseBinaryMatrix> {
    let mut codes: BTreeMap<&str, u32> = BTreeMap::new();
    for app in apps {
        for c in &app.ipc_subclasses {
            codes.insert(c.as_str(), 0);
        }
    }
    if codes.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    for (idx, v) in codes.values_mut().enumerate() {
        *v = idx as u32;
    }
    let mut row_labels = Vec::new();
    let mut rows = Vec::new();
    for app in apps.iter().filter(|a| !a.ipc_subclasses.is_empty()) {
        row_labels.push(app.application_id.clone());
        rows.push(
            app.ipc_subclasses
                .iter()
                .map(|c| codes[c.as_str()])
                .collect(),
        );
    }
    SparseBinaryMatrix::from_rows(
        row_labels,
        codes.keys().map(|s| s.to_string()).collect(),
        rows,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    /// `(degree, number of rows or columns with that degree)`, ascending.
    pub points: Vec<(usize, usize)>,
    /// Least-squares slope of ln(frequency) on ln(degree); absent with fewer
    /// than two distinct degrees.
    pub slope: Option<f64>,
}

pub fn degree_distribution(m: &SparseBinaryMatrix, axis: Axis) -> DegreeDistribution {
    let degrees = match axis {
        Axis::Rows => m.row_degrees(),
        Axis::Cols => m.col_degrees(),
    };
    let mut freq: BTreeMap<usize, usize> = BTreeMap::new();
    for d in degrees {
        *freq.entry(d).or_default() += 1;
    }
    let points: Vec<(usize, usize)> = freq.into_iter().collect();
    let slope = if points.len() < 2 {
        None
    } else {
        let logs: Vec<(f64, f64)> = points
            .iter()
            .map(|&(d, f)| ((d as f64).ln(), (f as f64).ln()))
            .collect();
        stats::ols_slope(&logs)
    };
    DegreeDistribution { points, slope }
}
