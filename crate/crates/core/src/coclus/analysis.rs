use std::ops::RangeInclusive;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{fit, CoClustering, FitParams};
use crate::ingest::{Axis, SparseBinaryMatrix};
use crate::{Error, Result};

/// Best modularity found for each cluster count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModularityCurve {
    pub points: Vec<(usize, f64)>,
}

impl ModularityCurve {
    pub fn at(&self, g: usize) -> Option<f64> {
        self.points.iter().find(|p| p.0 == g).map(|p| p.1)
    }

    /// First `g` whose successor improves modularity by less than `min_gain`.
    pub fn first_plateau(&self, min_gain: f64) -> Option<usize> {
        self.points
            .windows(2)
            .find(|w| w[1].1 - w[0].1 < min_gain)
            .map(|w| w[0].0)
    }
}

pub fn modularity_curve(
    m: &SparseBinaryMatrix,
    g_range: RangeInclusive<usize>,
    params: &FitParams,
) -> Result<ModularityCurve> {
    let limit = m.n_rows().min(m.n_cols());
    if *g_range.start() < 2 || *g_range.end() > limit || g_range.is_empty() {
        return Err(Error::invalid(format!(
            "cluster range {}..={} outside [2, {limit}]",
            g_range.start(),
            g_range.end()
        )));
    }
    let points = g_range
        .map(|g| fit(m, &FitParams { g, ..*params }).map(|c| (g, c.modularity)))
        .collect::<Result<_>>()?;
    Ok(ModularityCurve { points })
}

/// Pairwise cluster overlaps `|L ∩ R| / max(|L|, |R|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapMatrix {
    pub left_sizes: Vec<usize>,
    pub right_sizes: Vec<usize>,
    pub intersections: Vec<Vec<usize>>,
    pub values: Vec<Vec<f64>>,
}

impl OverlapMatrix {
    /// Greedy one-to-one matching, largest overlap first. Returns
    /// `(left, right, value)` triples ordered by left cluster.
    pub fn best_matching(&self) -> Vec<(usize, usize, f64)> {
        let mut cells: Vec<(usize, usize, f64)> = self
            .values
            .iter()
            .enumerate()
            .flat_map(|(l, row)| row.iter().enumerate().map(move |(r, &v)| (l, r, v)))
            .collect();
        cells.sort_by(|a, b| b.2.total_cmp(&a.2).then((a.0, a.1).cmp(&(b.0, b.1))));
        let mut used_l = vec![false; self.left_sizes.len()];
        let mut used_r = vec![false; self.right_sizes.len()];
        let mut out = Vec::new();
        for (l, r, v) in cells {
            if !used_l[l] && !used_r[r] {
                used_l[l] = true;
                used_r[r] = true;
                out.push((l, r, v));
            }
        }
        out.sort_by_key(|t| t.0);
        out
    }
}

pub fn overlap(l: &CoClustering, r: &CoClustering, side: Axis) -> Result<OverlapMatrix> {
    let (a, b) = match side {
        Axis::Rows => (&l.row_assignment, &r.row_assignment),
        Axis::Cols => (&l.col_assignment, &r.col_assignment),
    };
    overlap_of_assignments(a, l.g, b, r.g)
}

pub(crate) fn overlap_of_assignments(
    a: &[usize],
    ga: usize,
    b: &[usize],
    gb: usize,
) -> Result<OverlapMatrix> {
    if a.len() != b.len() {
        return Err(Error::invalid(format!(
            "partitions cover {} and {} items",
            a.len(),
            b.len()
        )));
    }
    let mut left_sizes = vec![0usize; ga];
    let mut right_sizes = vec![0usize; gb];
    let mut inter = vec![vec![0usize; gb]; ga];
    for (&x, &y) in a.iter().zip(b) {
        left_sizes[x] += 1;
        right_sizes[y] += 1;
        inter[x][y] += 1;
    }
    let values = inter
        .iter()
        .enumerate()
        .map(|(x, row)| {
            row.iter()
                .enumerate()
                .map(|(y, &n)| {
                    let denom = left_sizes[x].max(right_sizes[y]);
                    if denom == 0 {
                        0.0
                    } else {
                        n as f64 / denom as f64
                    }
                })
                .collect()
        })
        .collect();
    Ok(OverlapMatrix {
        left_sizes,
        right_sizes,
        intersections: inter,
        values,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityParams {
    pub axis: Axis,
    pub fraction: f64,
    pub trials: usize,
    /// Cluster count compared against the full fit.
    pub g: usize,
    pub g_range: RangeInclusive<usize>,
    pub seed: u64,
    pub restarts: usize,
    pub max_iter: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityTrial {
    /// Original indices of the rows present in the subsample.
    pub surviving_rows: Vec<usize>,
    pub surviving_cols: Vec<usize>,
    pub curve: ModularityCurve,
    /// Modularity of the subsample fit at `g`.
    pub modularity_at_g: f64,
    /// Row-cluster overlaps of the subsample fit (left) against the full fit
    /// restricted to surviving rows (right).
    pub overlap: OverlapMatrix,
}

/// Refits after dropping a random `1 − fraction` share of rows or columns.
pub fn sensitivity_subsample(
    m: &SparseBinaryMatrix,
    p: &SensitivityParams,
) -> Result<Vec<SensitivityTrial>> {
    if !(p.fraction > 0.0 && p.fraction < 1.0) {
        return Err(Error::invalid(format!(
            "fraction {} outside (0, 1)",
            p.fraction
        )));
    }
    if p.trials == 0 {
        return Ok(Vec::new());
    }
    let base = FitParams {
        g: p.g,
        seed: p.seed,
        max_iter: p.max_iter,
        restarts: p.restarts,
    };
    let full = fit(m, &base)?;
    let n_axis = match p.axis {
        Axis::Rows => m.n_rows(),
        Axis::Cols => m.n_cols(),
    };
    let keep = ((p.fraction * n_axis as f64).round() as usize).clamp(1, n_axis);
    let all_rows: Vec<usize> = (0..m.n_rows()).collect();
    let all_cols: Vec<usize> = (0..m.n_cols()).collect();

    let mut out = Vec::with_capacity(p.trials);
    for trial in 0..p.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
        rng.set_stream(1 << 32 | trial as u64);
        let mut picked = sample(&mut rng, n_axis, keep).into_vec();
        picked.sort_unstable();
        let (sub, rows, cols) = match p.axis {
            Axis::Rows => m.submatrix(&picked, &all_cols)?,
            Axis::Cols => m.submatrix(&all_rows, &picked)?,
        };
        let curve = modularity_curve(&sub, p.g_range.clone(), &base)?;
        let trial_fit = fit(&sub, &base)?;
        let restricted: Vec<usize> = rows.iter().map(|&i| full.row_assignment[i]).collect();
        let overlap = overlap_of_assignments(&trial_fit.row_assignment, p.g, &restricted, p.g)?;
        out.push(SensitivityTrial {
            surviving_rows: rows,
            surviving_cols: cols,
            curve,
            modularity_at_g: trial_fit.modularity,
            overlap,
        });
    }
    Ok(out)
}

/// Adjusted Rand index between two labelings of the same items.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len(), "labelings differ in length");
    let n = a.len();
    if n < 2 {
        return 1.0;
    }
    let ka = a.iter().max().unwrap() + 1;
    let kb = b.iter().max().unwrap() + 1;
    let mut table = vec![vec![0u64; kb]; ka];
    for (&x, &y) in a.iter().zip(b) {
        table[x][y] += 1;
    }
    let c2 = |v: u64| (v * v.saturating_sub(1)) as f64 / 2.0;
    let index: f64 = table.iter().flatten().map(|&v| c2(v)).sum();
    let sa: f64 = table.iter().map(|r| c2(r.iter().sum())).sum();
    let sb: f64 = (0..kb).map(|y| c2(table.iter().map(|r| r[y]).sum())).sum();
    let total = c2(n as u64);
    let expected = sa * sb / total;
    let max = (sa + sb) / 2.0;
    if max == expected {
        return 1.0;
    }
    (index - expected) / (max - expected)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clustering(rows: Vec<usize>, g: usize) -> CoClustering {
        CoClustering {
            g,
            col_assignment: vec![0; 1],
            row_assignment: rows,
            modularity: 0.0,
        }
    }

    #[test]
    fn identical_partitions_have_unit_diagonal() {
        let c = clustering(vec![0, 0, 1, 1, 2, 2, 2], 3);
        let o = overlap(&c, &c, Axis::Rows).unwrap();
        for k in 0..3 {
            assert_eq!(o.values[k][k], 1.0);
            for j in (0..3).filter(|&j| j != k) {
                assert!(o.values[k][j] < 1.0);
            }
        }
        assert!(o.best_matching().iter().all(|t| t.0 == t.1 && t.2 == 1.0));
    }

    #[test]
    fn overlap_set_arithmetic() {
        // left cluster 0 = {0,1,2,3}; right cluster 0 = {0..8}
        let l = clustering(vec![0, 0, 0, 0, 1, 1, 1, 1, 1, 1], 2);
        let r = clustering(vec![0, 0, 0, 0, 0, 0, 0, 0, 1, 1], 2);
        let o = overlap(&l, &r, Axis::Rows).unwrap();
        assert_eq!(o.values[0][0], 0.5);
        // left 0 and right 1 are disjoint
        assert_eq!(o.values[0][1], 0.0);
        let short = clustering(vec![0, 1], 2);
        assert!(overlap(&l, &short, Axis::Rows).is_err());
    }

    #[test]
    fn ari_known_values() {
        assert_eq!(adjusted_rand_index(&[0, 0, 1, 1], &[1, 1, 0, 0]), 1.0);
        let a = [0, 0, 0, 1, 1, 1];
        let b = [0, 0, 1, 1, 2, 2];
        // table rows: [2,1,0], [0,1,2]; index = 1+1 = 2; sa = 3+3 = 6; sb = 1+1+1 = 3
        // expected = 6*3/15 = 1.2; max = 4.5; ari = 0.8/3.3
        let ari = adjusted_rand_index(&a, &b);
        assert!((ari - 0.8 / 3.3).abs() < 1e-12);
    }

    #[test]
    fn zero_trials_is_empty() {
        let m = SparseBinaryMatrix::from_dense(&[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let p = SensitivityParams {
            axis: Axis::Rows,
            fraction: 0.9,
            trials: 0,
            g: 2,
            g_range: 2..=2,
            seed: 0,
            restarts: 2,
            max_iter: 10,
        };
        assert!(sensitivity_subsample(&m, &p).unwrap().is_empty());
        assert!(sensitivity_subsample(&m, &SensitivityParams { fraction: 1.0, ..p }).is_err());
    }

    #[test]
    fn near_full_fraction_keeps_everything() {
        let m =
            SparseBinaryMatrix::from_dense(&[vec![1, 1, 0], vec![1, 1, 0], vec![0, 0, 1]]).unwrap();
        let p = SensitivityParams {
            axis: Axis::Rows,
            fraction: 0.999,
            trials: 2,
            g: 2,
            g_range: 2..=2,
            seed: 4,
            restarts: 3,
            max_iter: 20,
        };
        for t in sensitivity_subsample(&m, &p).unwrap() {
            assert_eq!(t.surviving_rows, vec![0, 1, 2]);
            assert_eq!(t.curve.points.len(), 1);
            assert!(t.overlap.best_matching().iter().all(|x| x.2 == 1.0));
        }
    }

    #[test]
    fn plateau_detection() {
        let c = ModularityCurve {
            points: vec![(2, 0.2), (3, 0.3), (4, 0.31), (5, 0.2)],
        };
        assert_eq!(c.first_plateau(0.02), Some(3));
        assert_eq!(c.at(4), Some(0.31));
    }
}
