use crate::{Error, Result};

/// Shares of an entity's credit per technology area.
#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioVector(Vec<f64>);

impl PortfolioVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::invalid("portfolio shares must be nonnegative"));
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "portfolio shares sum to {s}, not 1"
            )));
        }
        Ok(Self(p))
    }

    /// Normalizes per-area credit; `None` when everything is zero.
    pub fn from_credits(credits: &[f64]) -> Option<Self> {
        let s: f64 = credits.iter().sum();
        (s > 0.0).then(|| Self(credits.iter().map(|c| c / s).collect()))
    }

    pub fn shares(&self) -> &[f64] {
        &self.0
    }

    pub fn entropy(&self) -> f64 {
        entropy(&self.0)
    }
}

/// `−Σ p ln p`, zero shares contributing nothing.
pub fn entropy(p: &[f64]) -> f64 {
    let s: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum();
    if s == 0.0 {
        0.0
    } else {
        -s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_values() {
        assert_eq!(entropy(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]), 0.0);
        assert!((entropy(&[1.0 / 7.0; 7]) - 7f64.ln()).abs() < 1e-12);
        assert!((entropy(&[0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0]) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        assert!(PortfolioVector::new(vec![0.5, 0.6]).is_err());
        assert!(PortfolioVector::new(vec![1.5, -0.5]).is_err());
        assert!(PortfolioVector::from_credits(&[0.0, 0.0]).is_none());
        let p = PortfolioVector::from_credits(&[1.0, 3.0]).unwrap();
        assert_eq!(p.shares(), &[0.25, 0.75]);
    }

    // one more patent on an n = 20 portfolio over 7 areas, averaged over every
    // composition and every target area
    #[test]
    fn finite_size_entropy_step() {
        fn compositions(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k == 1 {
                cur.push(n);
                out.push(cur.clone());
                cur.pop();
                return;
            }
            for i in 0..=n {
                cur.push(i);
                compositions(n - i, k - 1, cur, out);
                cur.pop();
            }
        }
        let mut all = Vec::new();
        compositions(20, 7, &mut Vec::new(), &mut all);
        let ent = |c: &[usize]| {
            let n: usize = c.iter().sum();
            entropy(&c.iter().map(|&x| x as f64 / n as f64).collect::<Vec<_>>())
        };
        let (mut total, mut count) = (0.0, 0usize);
        for c in &all {
            let s0 = ent(c);
            for j in 0..7 {
                let mut d = c.clone();
                d[j] += 1;
                total += (ent(&d) - s0).abs();
                count += 1;
            }
        }
        let mean = total / count as f64;
        assert!((mean - 0.051129).abs() < 1e-5, "{mean}");
    }

    proptest! {
        #[test]
        fn permutation_invariant_and_bounded(raw in proptest::collection::vec(0.0f64..10.0, 1..12), rot in 0usize..12) {
            prop_assume!(raw.iter().sum::<f64>() > 0.0);
            let p = PortfolioVector::from_credits(&raw).unwrap();
            let mut q = p.shares().to_vec();
            let r = rot % q.len();
            q.rotate_left(r);
            q.reverse();
            let (a, b) = (entropy(p.shares()), entropy(&q));
            prop_assert!((a - b).abs() < 1e-12);
            prop_assert!(a >= 0.0 && a <= (raw.len() as f64).ln() + 1e-12);
        }
    }
}
