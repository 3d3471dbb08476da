use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ingest::SparseBinaryMatrix;

/// A matrix with its planted block labels.
#[derive(Debug, Clone)]
pub struct PlantedMatrix {
    pub matrix: SparseBinaryMatrix,
    pub row_labels: Vec<usize>,
    pub col_labels: Vec<usize>,
}

/// Even split of `n` items over `g` contiguous blocks.
pub fn block_labels(n: usize, g: usize) -> Vec<usize> {
    (0..n).map(|i| i * g / n).collect()
}

/// `g` diagonal blocks: an entry is present with probability `p_in` inside
/// a block and `p_out` outside. Rows or columns left empty get one entry
/// inside their own block.
///
/// # Panics
/// When a density lies outside `[0, 1]` or `g` exceeds either dimension.
pub fn planted_block_matrix(
    g: usize,
    n_rows: usize,
    n_cols: usize,
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> PlantedMatrix {
    assert!(
        (0.0..=1.0).contains(&p_in) && (0.0..=1.0).contains(&p_out),
        "densities must lie in [0, 1]"
    );
    assert!(
        g >= 1 && g <= n_rows && g <= n_cols,
        "block count must fit both dimensions"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let row_labels = block_labels(n_rows, g);
    let col_labels = block_labels(n_cols, g);
    let block_cols: Vec<Vec<u32>> = (0..g)
        .map(|k| {
            (0..n_cols as u32)
                .filter(|&j| col_labels[j as usize] == k)
                .collect()
        })
        .collect();
    let block_rows: Vec<Vec<usize>> = (0..g)
        .map(|k| (0..n_rows).filter(|&i| row_labels[i] == k).collect())
        .collect();

    let mut rows: Vec<Vec<u32>> = (0..n_rows)
        .map(|i| {
            (0..n_cols as u32)
                .filter(|&j| {
                    let p = if row_labels[i] == col_labels[j as usize] {
                        p_in
                    } else {
                        p_out
                    };
                    rng.gen_bool(p)
                })
                .collect()
        })
        .collect();
    for (i, row) in rows.iter_mut().enumerate() {
        if row.is_empty() {
            row.push(
                *block_cols[row_labels[i]]
                    .choose(&mut rng)
                    .expect("block has columns"),
            );
        }
    }
    let mut col_deg = vec![0usize; n_cols];
    for r in &rows {
        for &j in r {
            col_deg[j as usize] += 1;
        }
    }
    for j in 0..n_cols {
        if col_deg[j] == 0 {
            let i = *block_rows[col_labels[j]]
                .choose(&mut rng)
                .expect("block has rows");
            rows[i].push(j as u32);
        }
    }
    let matrix = SparseBinaryMatrix::from_rows(
        (0..n_rows).map(|i| format!("r{i}")).collect(),
        (0..n_cols).map(|j| format!("c{j}")).collect(),
        rows,
    )
    .expect("every row and column has an entry");
    PlantedMatrix {
        matrix,
        row_labels,
        col_labels,
    }
}

/// Column degrees drawn from `P(k) ∝ k^exponent` on `1..=k_max`, each column
/// linked to that many distinct random rows. Rows that receive no entry are
/// dropped.
pub fn power_law_matrix(
    n_rows: usize,
    n_cols: usize,
    exponent: f64,
    k_max: usize,
    seed: u64,
) -> SparseBinaryMatrix {
    assert!(
        k_max >= 1 && k_max <= n_rows,
        "k_max must lie in 1..=n_rows"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (1..=k_max).map(|k| (k as f64).powf(exponent)).collect();
    let dist = rand::distributions::WeightedIndex::new(&weights).expect("positive weights");
    let all_rows: Vec<u32> = (0..n_rows as u32).collect();
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); n_rows];
    for j in 0..n_cols {
        let k = rng.sample(&dist) + 1;
        for &i in all_rows.choose_multiple(&mut rng, k) {
            rows[i as usize].push(j as u32);
        }
    }
    let kept: Vec<(usize, Vec<u32>)> = rows
        .into_iter()
        .enumerate()
        .filter(|(_, r)| !r.is_empty())
        .collect();
    SparseBinaryMatrix::from_rows(
        kept.iter().map(|(i, _)| format!("r{i}")).collect(),
        (0..n_cols).map(|j| format!("c{j}")).collect(),
        kept.into_iter().map(|(_, r)| r).collect(),
    )
    .expect("every column has at least one row")
}
