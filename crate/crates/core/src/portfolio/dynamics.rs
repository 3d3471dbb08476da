use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::aggregate::PortfolioData;
use super::entropy::entropy;
use crate::entity::{majority_category, Category};
use crate::stats;
use crate::{Error, Result};

pub const BASE_YEAR: i32 = 2004;
/// Added to entropy before taking logs so zero-entropy entities stay finite.
pub const ENTROPY_EPS: f64 = 1e-3;

pub fn log_entropy(s: f64, eps: f64) -> f64 {
    (s + eps).log10()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub year: i32,
    /// Accumulated credit up to and including `year`.
    pub credit: f64,
    pub entropy: f64,
    pub credits_by_area: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PortfolioTrajectory {
    pub entity: String,
    /// One point per year from the first credited year to the last year in the data.
    pub points: Vec<TrajectoryPoint>,
}

impl PortfolioTrajectory {
    /// Latest point at or before `year`.
    pub fn at(&self, year: i32) -> Option<&TrajectoryPoint> {
        self.points.iter().take_while(|p| p.year <= year).last()
    }
}

/// Accumulated credit and entropy of every entity, year by year, sorted by
/// entity id.
pub fn trajectories(data: &PortfolioData) -> Vec<PortfolioTrajectory> {
    let Some(last_year) = data.patents.iter().map(|p| p.year).max() else {
        return Vec::new();
    };
    let mut yearly: BTreeMap<&str, BTreeMap<i32, Vec<f64>>> = BTreeMap::new();
    for p in &data.patents {
        for (e, c) in &p.credits {
            yearly
                .entry(e.as_str())
                .or_default()
                .entry(p.year)
                .or_insert_with(|| vec![0.0; data.g])[p.area] += c;
        }
    }
    let yearly: Vec<(&str, BTreeMap<i32, Vec<f64>>)> = yearly.into_iter().collect();
    yearly
        .into_par_iter()
        .map(|(entity, by_year)| {
            let first = *by_year.keys().next().expect("entity has a credited year");
            let mut acc = vec![0.0; data.g];
            let points = (first..=last_year)
                .map(|year| {
                    if let Some(add) = by_year.get(&year) {
                        acc.iter_mut().zip(add).for_each(|(a, b)| *a += b);
                    }
                    let credit: f64 = acc.iter().sum();
                    let shares: Vec<f64> = acc.iter().map(|c| c / credit).collect();
                    TrajectoryPoint {
                        year,
                        credit,
                        entropy: entropy(&shares),
                        credits_by_area: acc.clone(),
                    }
                })
                .collect();
            PortfolioTrajectory {
                entity: entity.to_string(),
                points,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuartileGroup {
    Lower,
    Inter,
    Upper,
}

impl QuartileGroup {
    pub const ALL: [QuartileGroup; 3] = [
        QuartileGroup::Lower,
        QuartileGroup::Inter,
        QuartileGroup::Upper,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            QuartileGroup::Lower => "lower",
            QuartileGroup::Inter => "inter",
            QuartileGroup::Upper => "upper",
        }
    }
}

/// Lower quartile below the 25th percentile, upper above the 75th,
/// everything else (boundaries included) interquartile.
pub fn quartile_groups_of(credits: &[(String, f64)]) -> Result<BTreeMap<String, QuartileGroup>> {
    let positive: Vec<&(String, f64)> = credits.iter().filter(|c| c.1 > 0.0).collect();
    if positive.len() < 4 {
        return Err(Error::invalid(format!(
            "quartile groups need at least 4 entities with positive credit, got {}",
            positive.len()
        )));
    }
    let mut v: Vec<f64> = positive.iter().map(|c| c.1).collect();
    v.sort_by(f64::total_cmp);
    let q25 = stats::percentile_sorted(&v, 25.0);
    let q75 = stats::percentile_sorted(&v, 75.0);
    Ok(positive
        .into_iter()
        .map(|(e, c)| {
            let g = if *c < q25 {
                QuartileGroup::Lower
            } else if *c > q75 {
                QuartileGroup::Upper
            } else {
                QuartileGroup::Inter
            };
            (e.clone(), g)
        })
        .collect())
}

/// Quartile groups by accumulated credit at `as_of_year`.
pub fn quartile_groups(
    trajs: &[PortfolioTrajectory],
    as_of_year: i32,
) -> Result<BTreeMap<String, QuartileGroup>> {
    let credits: Vec<(String, f64)> = trajs
        .iter()
        .filter_map(|t| t.at(as_of_year).map(|p| (t.entity.clone(), p.credit)))
        .collect();
    quartile_groups_of(&credits)
}

/// Entity category as the majority over the categories of its patents.
pub fn entity_categories(data: &PortfolioData) -> BTreeMap<String, Category> {
    let mut seen: BTreeMap<&str, Vec<Category>> = BTreeMap::new();
    for p in &data.patents {
        for (e, _) in &p.credits {
            seen.entry(e.as_str()).or_default().push(p.category);
        }
    }
    seen.into_iter()
        .map(|(e, cats)| {
            (
                e.to_string(),
                majority_category(cats).unwrap_or(Category::Others),
            )
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityClass {
    Low,
    Intermediate,
    High,
}

impl DensityClass {
    pub fn as_str(self) -> &'static str {
        match self {
            DensityClass::Low => "low",
            DensityClass::Intermediate => "intermediate",
            DensityClass::High => "high",
        }
    }

    /// Blue, green, red.
    pub fn color(self) -> &'static str {
        match self {
            DensityClass::Low => "#2b6cb0",
            DensityClass::Intermediate => "#2f855a",
            DensityClass::High => "#c53030",
        }
    }
}

/// Tercile classes of nonzero bin counts.
pub fn density_classes(counts: &[u64]) -> Vec<DensityClass> {
    let nonzero: Vec<f64> = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| c as f64)
        .collect();
    if nonzero.is_empty() {
        return vec![DensityClass::Low; counts.len()];
    }
    let mut s = nonzero;
    s.sort_by(f64::total_cmp);
    let q1 = stats::percentile_sorted(&s, 100.0 / 3.0);
    let q2 = stats::percentile_sorted(&s, 200.0 / 3.0);
    counts
        .iter()
        .map(|&c| {
            let c = c as f64;
            if c <= q1 {
                DensityClass::Low
            } else if c > q2 {
                DensityClass::High
            } else {
                DensityClass::Intermediate
            }
        })
        .collect()
}

fn axis_edges(values: impl Iterator<Item = f64>, bins: usize) -> Vec<f64> {
    let (mut lo, mut hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
        (a.min(v), b.max(v))
    });
    if !lo.is_finite() {
        lo = 0.0;
        hi = 1.0;
    }
    if hi <= lo {
        lo -= 0.5;
        hi += 0.5;
    }
    let w = (hi - lo) / bins as f64;
    (0..=bins)
        .map(|i| if i == bins { hi } else { lo + i as f64 * w })
        .collect()
}

fn bin_of(edges: &[f64], v: f64) -> usize {
    let bins = edges.len() - 1;
    let w = (edges[bins] - edges[0]) / bins as f64;
    (((v - edges[0]) / w).floor().max(0.0) as usize).min(bins - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XAxis {
    LogCredit,
    RelativeYear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YAxis {
    Entropy,
    LogEntropy,
}

impl XAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            XAxis::LogCredit => "log_credit",
            XAxis::RelativeYear => "relative_year",
        }
    }

    fn value(self, p: &TrajectoryPoint, base_year: i32) -> f64 {
        match self {
            XAxis::LogCredit => p.credit.log10(),
            XAxis::RelativeYear => (p.year - base_year) as f64,
        }
    }
}

impl YAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            YAxis::Entropy => "entropy",
            YAxis::LogEntropy => "log_entropy",
        }
    }

    fn value(self, p: &TrajectoryPoint) -> f64 {
        match self {
            YAxis::Entropy => p.entropy,
            YAxis::LogEntropy => log_entropy(p.entropy, ENTROPY_EPS),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VectorCell {
    pub bin_x: usize,
    pub bin_y: usize,
    pub x_center: f64,
    pub y_center: f64,
    pub dx: f64,
    pub dy: f64,
    pub count: u64,
    pub density: DensityClass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VectorField {
    pub x_axis: XAxis,
    pub y_axis: YAxis,
    pub x_edges: Vec<f64>,
    pub y_edges: Vec<f64>,
    /// Nonempty bins only, in (bin_x, bin_y) order.
    pub cells: Vec<VectorCell>,
    pub total_vectors: u64,
}

/// Year-over-year displacements binned by their start point, averaged per
/// bin.
pub fn vector_field<'a>(
    trajs: impl IntoIterator<Item = &'a PortfolioTrajectory>,
    x_axis: XAxis,
    y_axis: YAxis,
    bins: usize,
    base_year: i32,
) -> VectorField {
    let bins = bins.max(1);
    let trajs: Vec<&PortfolioTrajectory> = trajs.into_iter().collect();
    let vectors: Vec<[f64; 4]> = trajs
        .par_iter()
        .flat_map_iter(|t| {
            t.points.windows(2).map(move |w| {
                let (x0, y0) = (x_axis.value(&w[0], base_year), y_axis.value(&w[0]));
                let (x1, y1) = (x_axis.value(&w[1], base_year), y_axis.value(&w[1]));
                [x0, y0, x1 - x0, y1 - y0]
            })
        })
        .collect();
    let x_edges = axis_edges(vectors.iter().map(|v| v[0]), bins);
    let y_edges = axis_edges(vectors.iter().map(|v| v[1]), bins);
    let mut sums: BTreeMap<(usize, usize), (f64, f64, u64)> = BTreeMap::new();
    for v in &vectors {
        let e = sums
            .entry((bin_of(&x_edges, v[0]), bin_of(&y_edges, v[1])))
            .or_insert((0.0, 0.0, 0));
        e.0 += v[2];
        e.1 += v[3];
        e.2 += 1;
    }
    let counts: Vec<u64> = sums.values().map(|s| s.2).collect();
    let classes = density_classes(&counts);
    let cells = sums
        .into_iter()
        .zip(classes)
        .map(|(((bx, by), (sx, sy, n)), density)| VectorCell {
            bin_x: bx,
            bin_y: by,
            x_center: (x_edges[bx] + x_edges[bx + 1]) / 2.0,
            y_center: (y_edges[by] + y_edges[by + 1]) / 2.0,
            dx: sx / n as f64,
            dy: sy / n as f64,
            count: n,
            density,
        })
        .collect();
    VectorField {
        x_axis,
        y_axis,
        x_edges,
        y_edges,
        cells,
        total_vectors: vectors.len() as u64,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Heatmap2D {
    pub x_edges: Vec<f64>,
    pub y_edges: Vec<f64>,
    /// `counts[ix][iy]`.
    pub counts: Vec<Vec<u64>>,
}

impl Heatmap2D {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Nonempty cells with their density class.
    pub fn cells(&self) -> Vec<(usize, usize, u64, DensityClass)> {
        let flat: Vec<(usize, usize, u64)> = self
            .counts
            .iter()
            .enumerate()
            .flat_map(|(ix, col)| {
                col.iter()
                    .enumerate()
                    .filter(|c| *c.1 > 0)
                    .map(move |(iy, &c)| (ix, iy, c))
            })
            .collect();
        let classes = density_classes(&flat.iter().map(|c| c.2).collect::<Vec<_>>());
        flat.into_iter()
            .zip(classes)
            .map(|((x, y, c), d)| (x, y, c, d))
            .collect()
    }
}

/// Counts of `(credit, entropy)` points over `log10(credit)` ×
/// `log10(entropy + eps)`.
pub fn heatmap(points: &[(f64, f64)], bins: usize, eps: f64) -> Result<Heatmap2D> {
    if points.is_empty() {
        return Err(Error::invalid("heat map needs at least one point"));
    }
    if let Some(p) = points.iter().find(|p| !(p.0 > 0.0)) {
        return Err(Error::invalid(format!(
            "credit must be positive on a log axis, got {}",
            p.0
        )));
    }
    let bins = bins.max(1);
    let xy: Vec<(f64, f64)> = points
        .iter()
        .map(|&(c, s)| (c.log10(), log_entropy(s, eps)))
        .collect();
    let x_edges = axis_edges(xy.iter().map(|p| p.0), bins);
    let y_edges = axis_edges(xy.iter().map(|p| p.1), bins);
    let mut counts = vec![vec![0u64; bins]; bins];
    for &(x, y) in &xy {
        counts[bin_of(&x_edges, x)][bin_of(&y_edges, y)] += 1;
    }
    Ok(Heatmap2D {
        x_edges,
        y_edges,
        counts,
    })
}

/// Mean of `log10(entropy + eps)` per group and year over entities with
/// positive credit that year. Group-years with nobody alive are absent.
pub fn avg_log_entropy_curves<K: Ord + Clone>(
    trajs: &[PortfolioTrajectory],
    groups: &BTreeMap<String, K>,
    years: &[i32],
    eps: f64,
) -> BTreeMap<K, BTreeMap<i32, f64>> {
    let mut acc: BTreeMap<K, BTreeMap<i32, (f64, usize)>> = BTreeMap::new();
    for t in trajs {
        let Some(k) = groups.get(&t.entity) else {
            continue;
        };
        for p in &t.points {
            if p.credit > 0.0 && years.contains(&p.year) {
                let e = acc
                    .entry(k.clone())
                    .or_default()
                    .entry(p.year)
                    .or_insert((0.0, 0));
                e.0 += log_entropy(p.entropy, eps);
                e.1 += 1;
            }
        }
    }
    acc.into_iter()
        .map(|(k, ys)| {
            (
                k,
                ys.into_iter()
                    .map(|(y, (s, n))| (y, s / n as f64))
                    .collect(),
            )
        })
        .collect()
}
