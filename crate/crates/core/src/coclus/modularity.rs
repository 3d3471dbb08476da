use crate::ingest::SparseBinaryMatrix;
use crate::{Error, Result};

/// Bipartite modularity of a joint row/column assignment.
///
/// Evaluated in integer arithmetic as `(T·in_block − Σ_k R_k C_k) / T²`,
/// where `R_k`, `C_k` are the summed row and column degrees of cluster `k`,
/// so relabeling clusters gives bit-identical results.
pub fn modularity_of(m: &SparseBinaryMatrix, rows: &[usize], cols: &[usize]) -> Result<f64> {
    if m.nnz() == 0 {
        return Err(Error::EmptyMatrix);
    }
    if rows.len() != m.n_rows() || cols.len() != m.n_cols() {
        return Err(Error::invalid(
            "assignment does not cover every row and column",
        ));
    }
    let k = rows.iter().chain(cols).copied().max().unwrap_or(0) + 1;
    let mut row_mass = vec![0u64; k];
    let mut col_mass = vec![0u64; k];
    let mut in_block = 0u64;
    for (i, &ci) in rows.iter().enumerate() {
        let r = m.row(i);
        row_mass[ci] += r.len() as u64;
        in_block += r.iter().filter(|&&j| cols[j as usize] == ci).count() as u64;
    }
    for (j, &cj) in cols.iter().enumerate() {
        col_mass[cj] += m.col(j).len() as u64;
    }
    let t = m.nnz() as i128;
    let expected: i128 = row_mass
        .iter()
        .zip(&col_mass)
        .map(|(&a, &b)| a as i128 * b as i128)
        .sum();
    let num = t * in_block as i128 - expected;
    Ok(num as f64 / (t * t) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct evaluation of the double sum, term by term.
    fn oracle(pattern: &[Vec<u8>], rows: &[usize], cols: &[usize]) -> f64 {
        let t: f64 = pattern.iter().flatten().map(|&v| v as f64).sum();
        let r: Vec<f64> = pattern
            .iter()
            .map(|row| row.iter().map(|&v| v as f64).sum())
            .collect();
        let c: Vec<f64> = (0..pattern[0].len())
            .map(|j| pattern.iter().map(|row| row[j] as f64).sum())
            .collect();
        let mut q = 0.0;
        for i in 0..pattern.len() {
            for j in 0..pattern[0].len() {
                if rows[i] == cols[j] {
                    q += pattern[i][j] as f64 - r[i] * c[j] / t;
                }
            }
        }
        q / t
    }

    #[test]
    fn identity_pattern_diagonal_and_crossed() {
        let p = vec![vec![1, 0], vec![0, 1]];
        let m = SparseBinaryMatrix::from_dense(&p).unwrap();
        assert_eq!(oracle(&p, &[0, 1], &[0, 1]), 0.5);
        assert_eq!(modularity_of(&m, &[0, 1], &[0, 1]).unwrap(), 0.5);
        assert_eq!(oracle(&p, &[0, 1], &[1, 0]), -0.5);
        assert_eq!(modularity_of(&m, &[0, 1], &[1, 0]).unwrap(), -0.5);
    }

    #[test]
    fn single_cluster_is_zero() {
        let p = vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]];
        let m = SparseBinaryMatrix::from_dense(&p).unwrap();
        assert_eq!(modularity_of(&m, &[0, 0, 0], &[0, 0, 0]).unwrap(), 0.0);
    }

    #[test]
    fn agrees_with_term_by_term_sum() {
        let p = vec![vec![1, 1, 0, 0], vec![1, 0, 1, 0], vec![0, 0, 1, 1]];
        let m = SparseBinaryMatrix::from_dense(&p).unwrap();
        for (rows, cols) in [
            (vec![0, 0, 1], vec![0, 0, 1, 1]),
            (vec![0, 1, 2], vec![2, 1, 0, 2]),
            (vec![1, 1, 0], vec![0, 1, 0, 1]),
        ] {
            let q = modularity_of(&m, &rows, &cols).unwrap();
            assert!((q - oracle(&p, &rows, &cols)).abs() < 1e-15);
        }
    }

    #[test]
    fn mismatched_assignment_is_error() {
        let m = SparseBinaryMatrix::from_dense(&[vec![1, 1]]).unwrap();
        assert!(modularity_of(&m, &[0, 0], &[0, 0]).is_err());
    }
}
