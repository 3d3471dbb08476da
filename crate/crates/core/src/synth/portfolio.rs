use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::entity::Category;
use crate::portfolio::{entropy, CreditedPatent, PortfolioData};

fn patent(
    id: String,
    year: i32,
    area: usize,
    region: &str,
    category: Category,
    entity: &str,
) -> CreditedPatent {
    CreditedPatent {
        application_id: id,
        year,
        area,
        region: region.to_string(),
        category,
        credits: vec![(entity.to_string(), 1.0)],
    }
}

/// Area `area` holds 5% of every year's patents until `start`, then its
/// share climbs linearly to 50% in `end`. Counts are exact, not sampled.
pub fn area_ramp_data(
    g: usize,
    area: usize,
    start: i32,
    end: i32,
    per_year: usize,
    seed: u64,
) -> PortfolioData {
    assert!(g >= 2 && area < g && start < end);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut patents = Vec::new();
    for year in start - 4..=end {
        let share = if year <= start {
            0.05
        } else {
            0.05 + 0.45 * (year - start) as f64 / (end - start) as f64
        };
        let in_area = (share * per_year as f64).round() as usize;
        for i in 0..per_year {
            let a = if i < in_area {
                area
            } else {
                let mut a = rng.gen_range(0..g - 1);
                if a >= area {
                    a += 1;
                }
                a
            };
            patents.push(patent(
                format!("R{year}{i:05}"),
                year,
                a,
                "CN",
                Category::Corporation,
                &format!("E{}", i % 50),
            ));
        }
    }
    PortfolioData { g, patents }
}

/// Region `a` files fewer patents than `b` every year before `cross` and
/// more from `cross` on.
pub fn region_crossover_data(a: &str, b: &str, first: i32, last: i32, cross: i32) -> PortfolioData {
    assert!(first < cross && cross <= last);
    let mut patents = Vec::new();
    for year in first..=last {
        let nb = 40;
        let na = (40 + 6 * (year - cross) + 3).max(1) as usize;
        for (region, n) in [(a, na), (b, nb)] {
            for i in 0..n {
                patents.push(patent(
                    format!("{region}{year}{i:04}"),
                    year,
                    i % 3,
                    region,
                    Category::Corporation,
                    &format!("{region}-E{}", i % 7),
                ));
            }
        }
    }
    PortfolioData { g: 3, patents }
}

/// One patent per listed region count, spread over years and areas.
pub fn region_total_data(totals: &[(&str, usize)], g: usize) -> PortfolioData {
    let mut patents = Vec::new();
    for (region, n) in totals {
        for i in 0..*n {
            patents.push(patent(
                format!("{region}{i:06}"),
                2004 + (i % 14) as i32,
                i % g,
                region,
                Category::Corporation,
                region,
            ));
        }
    }
    PortfolioData { g, patents }
}

/// Integer patent counts over `g` areas whose entropy is close to
/// `target`: a mix of a one-area portfolio and the uniform one, scaled to
/// `size` patents.
pub fn portfolio_with_entropy(target: f64, g: usize, size: usize) -> Vec<f64> {
    assert!(g >= 2 && target > 0.0 && target < (g as f64).ln());
    let mix = |lam: f64| -> Vec<f64> {
        (0..g)
            .map(|k| (1.0 - lam) * f64::from(k == 0) + lam / g as f64)
            .collect()
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..100 {
        let mid = (lo + hi) / 2.0;
        if entropy(&mix(mid)) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    mix((lo + hi) / 2.0)
        .iter()
        .map(|p| (p * size as f64).round())
        .collect()
}

/// Patent-count portfolios with entropies drawn uniformly from `[lo, hi]`,
/// areas shuffled.
pub fn diverse_portfolios(n: usize, lo: f64, hi: f64, g: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut v = portfolio_with_entropy(rng.gen_range(lo..=hi), g, 5000);
            v.shuffle(&mut rng);
            v
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationSpec {
    pub g: usize,
    pub year_start: i32,
    pub year_end: i32,
    pub large_corporations: usize,
    pub large_universities: usize,
    pub small_entities: usize,
    /// Chance that a large corporation files in its focus area.
    pub corporate_focus: f64,
    pub seed: u64,
}

impl Default for PopulationSpec {
    fn default() -> Self {
        Self {
            g: 7,
            year_start: 2004,
            year_end: 2017,
            large_corporations: 150,
            large_universities: 60,
            small_entities: 210,
            corporate_focus: 0.6,
            seed: 0,
        }
    }
}

/// Entity population with planted dynamics.
///
/// Small entities file a two-area burst in their first year and then only
/// in their focus area, so their entropy falls. Large universities pick
/// areas uniformly and diversify quickly; large corporations keep a focus
/// area.
pub fn entity_population(spec: &PopulationSpec) -> PortfolioData {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let g = spec.g;
    let regions = ["CN", "US", "KR", "JP", "DE", "GB"];
    let mut patents = Vec::new();
    let mut serial = 0usize;
    let mut push =
        |patents: &mut Vec<CreditedPatent>, year, area, region: &str, cat, entity: &str| {
            serial += 1;
            patents.push(patent(
                format!("P{serial:07}"),
                year,
                area,
                region,
                cat,
                entity,
            ));
        };
    let last = spec.year_end;
    for e in 0..spec.large_corporations + spec.large_universities {
        let univ = e >= spec.large_corporations;
        let (cat, name) = if univ {
            (Category::University, format!("UNIV-{e:04}"))
        } else {
            (Category::Corporation, format!("CORP-{e:04}"))
        };
        let region = regions[e % regions.len()];
        let focus = rng.gen_range(0..g);
        let first = rng.gen_range(spec.year_start..=spec.year_start + 4);
        let rate = rng.gen_range(4..=12);
        let weights: Vec<f64> = (0..g)
            .map(|k| {
                if univ {
                    1.0
                } else if k == focus {
                    spec.corporate_focus
                } else {
                    (1.0 - spec.corporate_focus) / (g - 1) as f64
                }
            })
            .collect();
        let pick = WeightedIndex::new(&weights).expect("positive weights");
        for year in first..=last {
            for _ in 0..rate {
                push(
                    &mut patents,
                    year,
                    pick.sample(&mut rng),
                    region,
                    cat,
                    &name,
                );
            }
        }
    }
    for e in 0..spec.small_entities {
        let cat = if e % 10 < 7 {
            Category::Corporation
        } else {
            Category::University
        };
        let name = format!("SMALL-{e:04}");
        let region = regions[e % regions.len()];
        let focus = rng.gen_range(0..g);
        let other = (focus + rng.gen_range(1..g)) % g;
        let first = rng.gen_range(spec.year_start..=last - 3);
        push(&mut patents, first, focus, region, cat, &name);
        push(&mut patents, first, other, region, cat, &name);
        for year in first + 1..=last {
            if rng.gen_bool(0.5) {
                push(&mut patents, year, focus, region, cat, &name);
            }
        }
    }
    PortfolioData { g, patents }
}
