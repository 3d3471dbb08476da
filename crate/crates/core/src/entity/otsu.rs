use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Equal-width histogram over `[lo, hi]`; the top edge falls in the last bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Self {
        assert!(bins > 0 && hi > lo, "degenerate histogram range");
        Self {
            lo,
            hi,
            counts: vec![0; bins],
        }
    }

    /// The 100-bin layout used for similarity scores.
    pub fn similarity() -> Self {
        Self::new(0.0, 100.0, 100)
    }

    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn add(&mut self, value: f64) {
        let b = ((value - self.lo) / self.bin_width()).floor();
        let b = (b.max(0.0) as usize).min(self.counts.len() - 1);
        self.counts[b] += 1;
    }

    /// Upper edge of bin `b`.
    pub fn upper_edge(&self, b: usize) -> f64 {
        self.lo + (b + 1) as f64 * (self.hi - self.lo) / self.counts.len() as f64
    }
}

/// Between-class variance of the cut after bin `k`, up to the constant
/// factor `1/N²`, as an exact fraction `num / den`. `None` when a class is
/// empty.
fn cut_variance(n0: u64, s0: u64, n1: u64, s1: u64) -> Option<(u128, u128)> {
    if n0 == 0 || n1 == 0 {
        return None;
    }
    let diff = s0 as i128 * n1 as i128 - s1 as i128 * n0 as i128;
    Some(((diff * diff) as u128, n0 as u128 * n1 as u128))
}

fn cmp_fraction(a: (u128, u128), b: (u128, u128)) -> Ordering {
    (a.0 * b.1).cmp(&(b.0 * a.1))
}

/// Otsu's threshold: the cut maximizing `ω0·ω1·(μ0 − μ1)²`, returned as the
/// upper edge of the last bin of the lower class. Class means use bin
/// indices, and the comparison is exact. When several cuts tie, the result
/// is the midpoint of the lowest and highest tied edges.
pub fn otsu_threshold(h: &Histogram) -> Result<f64> {
    if h.counts.iter().filter(|&&c| c > 0).count() < 2 {
        return Err(Error::Unimodal);
    }
    let n: u64 = h.counts.iter().sum();
    let s: u64 = h
        .counts
        .iter()
        .enumerate()
        .map(|(b, &c)| b as u64 * c)
        .sum();
    let mut n0 = 0u64;
    let mut s0 = 0u64;
    let mut best: Option<(u128, u128)> = None;
    let mut tied = (0usize, 0usize);
    for k in 0..h.counts.len() - 1 {
        n0 += h.counts[k];
        s0 += k as u64 * h.counts[k];
        let Some(v) = cut_variance(n0, s0, n - n0, s - s0) else {
            continue;
        };
        match best.map(|b| cmp_fraction(v, b)) {
            None | Some(Ordering::Greater) => {
                best = Some(v);
                tied = (k, k);
            }
            Some(Ordering::Equal) => tied.1 = k,
            Some(Ordering::Less) => {}
        }
    }
    Ok((h.upper_edge(tied.0) + h.upper_edge(tied.1)) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hist(counts: &[u64]) -> Histogram {
        Histogram {
            lo: 0.0,
            hi: counts.len() as f64,
            counts: counts.to_vec(),
        }
    }

    /// Recomputes every cut from scratch and applies the same tie rule.
    pub(crate) fn brute_force(h: &Histogram) -> Option<f64> {
        let nb = h.counts.len();
        let mut scored = Vec::new();
        for k in 0..nb - 1 {
            let (lo, hi) = h.counts.split_at(k + 1);
            let n0: u64 = lo.iter().sum();
            let n1: u64 = hi.iter().sum();
            let s0: u64 = lo.iter().enumerate().map(|(b, &c)| b as u64 * c).sum();
            let s1: u64 = hi
                .iter()
                .enumerate()
                .map(|(b, &c)| (b + k + 1) as u64 * c)
                .sum();
            if let Some(v) = cut_variance(n0, s0, n1, s1) {
                scored.push((k, v));
            }
        }
        let best = scored
            .iter()
            .map(|x| x.1)
            .max_by(|a, b| cmp_fraction(*a, *b))?;
        let ties: Vec<usize> = scored
            .iter()
            .filter(|x| cmp_fraction(x.1, best) == Ordering::Equal)
            .map(|x| x.0)
            .collect();
        Some((h.upper_edge(ties[0]) + h.upper_edge(*ties.last().unwrap())) / 2.0)
    }

    #[test]
    fn two_spikes_cut_in_the_middle_bin() {
        let h = hist(&[10, 0, 0, 0, 10]);
        let t = otsu_threshold(&h).unwrap();
        assert_eq!(t, 2.5);
        assert!((2.0..3.0).contains(&t));
        assert_eq!(brute_force(&h), Some(t));
    }

    #[test]
    fn symmetric_bimodal_cuts_at_center() {
        let h = hist(&[1, 5, 9, 5, 1, 0, 1, 5, 9, 5, 1]);
        assert_eq!(otsu_threshold(&h).unwrap(), 5.5);
    }

    #[test]
    fn adjacent_bins_are_separated() {
        let h = hist(&[0, 0, 0, 5, 7, 0, 0]);
        assert_eq!(otsu_threshold(&h).unwrap(), 4.0);
        assert_eq!(brute_force(&h), Some(4.0));
    }

    #[test]
    fn single_bin_is_unimodal() {
        assert!(matches!(
            otsu_threshold(&hist(&[0, 3, 0])),
            Err(Error::Unimodal)
        ));
        assert!(matches!(
            otsu_threshold(&hist(&[0, 0])),
            Err(Error::Unimodal)
        ));
    }

    #[test]
    fn values_land_in_bins() {
        let mut h = Histogram::similarity();
        h.add(100.0);
        h.add(0.0);
        h.add(55.5);
        assert_eq!(h.counts[99], 1);
        assert_eq!(h.counts[0], 1);
        assert_eq!(h.counts[55], 1);
    }

    proptest! {
        #[test]
        fn matches_brute_force(counts in proptest::collection::vec(0u64..50, 2..40)) {
            let h = hist(&counts);
            match otsu_threshold(&h) {
                Ok(t) => prop_assert_eq!(Some(t), brute_force(&h)),
                Err(_) => prop_assert!(counts.iter().filter(|&&c| c > 0).count() < 2),
            }
        }
    }
}
