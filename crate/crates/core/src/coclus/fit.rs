use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{modularity_of, CoClustering};
use crate::ingest::SparseBinaryMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitParams {
    pub g: usize,
    pub seed: u64,
    pub max_iter: usize,
    pub restarts: usize,
}

impl Default for FitParams {
    fn default() -> Self {
        Self {
            g: 7,
            seed: 0,
            max_iter: 100,
            restarts: 10,
        }
    }
}

/// Modularity before and after one row+column sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub before: f64,
    pub after: f64,
    /// An emptied cluster was refilled during this sweep; refilling may lower
    /// the objective, so ascent only holds for sweeps where this is false.
    pub reseeded: bool,
}

pub fn fit(m: &SparseBinaryMatrix, params: &FitParams) -> Result<CoClustering> {
    fit_traced(m, params).map(|(c, _)| c)
}

type Run = (CoClustering, Vec<SweepRecord>);

/// Like [`fit`], also returning the sweep history of the winning restart.
pub fn fit_traced(m: &SparseBinaryMatrix, params: &FitParams) -> Result<Run> {
    let g = params.g;
    if g == 0 || g > m.n_rows().min(m.n_cols()) {
        return Err(Error::invalid(format!(
            "g = {g} outside [1, {}]",
            m.n_rows().min(m.n_cols())
        )));
    }
    if m.nnz() == 0 {
        return Err(Error::EmptyMatrix);
    }
    if g == 1 {
        let rows = vec![0; m.n_rows()];
        let cols = vec![0; m.n_cols()];
        let q = modularity_of(m, &rows, &cols)?;
        return Ok((
            CoClustering {
                g,
                row_assignment: rows,
                col_assignment: cols,
                modularity: q,
            },
            vec![],
        ));
    }
    let n = m.n_rows();
    let restarts = params.restarts.max(1);
    let state = State {
        m,
        g,
        total: m.nnz() as i64,
        row_deg: m.row_degrees().into_iter().map(|d| d as i64).collect(),
        col_deg: m.col_degrees().into_iter().map(|d| d as i64).collect(),
        par: m.nnz() >= PAR_MIN_NNZ,
    };

    // Each restart tries a uniform draw and then a spread-out seeding. A start
    // seen before would end the same way and is dropped.
    let mut seeder = Seeder::new(m);
    let mut starts: Vec<usize> = Vec::with_capacity(2 * restarts * n);
    for r in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(r as u64);
        let at = starts.len();
        starts.extend((0..n).map(|_| rng.gen_range(0..g)));
        keep_if_new(&mut starts, at);
        let at = starts.len();
        starts.resize(at + n, 0);
        seeder.seed_rows(g, &mut rng, &mut starts[at..]);
        keep_if_new(&mut starts, at);
    }

    // the earliest start wins ties
    let best = if state.par {
        starts
            .par_chunks(n)
            .map_init(
                || state.scratch(),
                |sc, init| {
                    state.start(init, sc);
                    let q = state.climb(params.max_iter, sc);
                    sc.result(g, q)
                },
            )
            .collect::<Vec<_>>()
            .into_iter()
            .reduce(|a, b| {
                if b.0.modularity > a.0.modularity {
                    b
                } else {
                    a
                }
            })
    } else {
        let mut sc = state.scratch();
        let mut best: Option<Run> = None;
        for init in starts.chunks(n) {
            state.start(init, &mut sc);
            let q = state.climb(params.max_iter, &mut sc);
            if best.as_ref().map_or(true, |b| q > b.0.modularity) {
                best = Some(sc.result(g, q));
            }
        }
        best
    };
    Ok(best.expect("at least one start"))
}

/// Drops the start beginning at `at` if an earlier one matches it.
fn keep_if_new(starts: &mut Vec<usize>, at: usize) {
    let (seen, new) = starts.split_at(at);
    if seen.chunks(new.len()).any(|c| c == new) {
        starts.truncate(at);
    }
}

/// Below this many nonzeros the thread pool costs more than it saves.
const PAR_MIN_NNZ: usize = 1 << 14;

struct State<'a> {
    m: &'a SparseBinaryMatrix,
    g: usize,
    total: i64,
    row_deg: Vec<i64>,
    col_deg: Vec<i64>,
    par: bool,
}

#[derive(Clone, Copy)]
enum Side {
    Rows,
    Cols,
}

/// Buffers reused across ascents. After [`State::ascend`] returns, `rows`,
/// `cols` and `trace` hold its outcome.
struct Scratch {
    hits: Vec<i64>,
    row_mass: Vec<i64>,
    col_mass: Vec<i64>,
    zero_cols: Vec<usize>,
    rows: Vec<usize>,
    cols: Vec<usize>,
    new_rows: Vec<usize>,
    new_cols: Vec<usize>,
    trace: Vec<SweepRecord>,
}

impl Scratch {
    fn result(&self, g: usize, q: f64) -> Run {
        (
            CoClustering {
                g,
                row_assignment: self.rows.clone(),
                col_assignment: self.cols.clone(),
                modularity: q,
            },
            self.trace.clone(),
        )
    }
}

impl<'a> State<'a> {
    fn scratch(&self) -> Scratch {
        let (n, c) = (self.m.n_rows(), self.m.n_cols());
        Scratch {
            hits: vec![0; self.g],
            row_mass: vec![0; self.g],
            col_mass: vec![0; self.g],
            zero_cols: vec![0; c],
            rows: Vec::with_capacity(n),
            cols: Vec::with_capacity(c),
            new_rows: Vec::with_capacity(n),
            new_cols: Vec::with_capacity(c),
            trace: Vec::new(),
        }
    }

    /// Degree mass per cluster.
    fn mass(&self, assignment: &[usize], deg: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.g];
        fill_mass(assignment, deg, &mut out);
        out
    }

    fn neighbours(&self, side: Side, x: usize) -> &'a [u32] {
        match side {
            Side::Rows => self.m.row(x),
            Side::Cols => self.m.col(x),
        }
    }

    fn degrees(&self, side: Side) -> &[i64] {
        match side {
            Side::Rows => &self.row_deg,
            Side::Cols => &self.col_deg,
        }
    }

    /// Fills `hits` with the item's neighbour count per cluster on the other side.
    fn count_hits(neighbours: &[u32], other: &[usize], hits: &mut [i64]) {
        for h in hits.iter_mut() {
            *h = 0;
        }
        for &n in neighbours {
            hits[other[n as usize]] += 1;
        }
    }

    /// Cluster with the highest scaled contribution `T·a_ik − d_i·M_k`, where
    /// `a_ik` counts neighbours in `k` and `M_k` is the other side's degree
    /// mass. The current cluster wins a tie, otherwise the lowest id.
    fn best_of(&self, hits: &[i64], deg: i64, other_mass: &[i64], current: usize) -> usize {
        let score = |k: usize| self.total * hits[k] - deg * other_mass[k];
        let (mut best, mut top) = (current, score(current));
        for k in 0..self.g {
            let s = score(k);
            if s > top {
                best = k;
                top = s;
            }
        }
        best
    }

    /// Best cluster for every item of `side` given the other side's clusters.
    fn best_side(
        &self,
        side: Side,
        own: &[usize],
        other: &[usize],
        out: &mut Vec<usize>,
        hits: &mut [i64],
        other_mass: &mut [i64],
    ) {
        let other_deg = match side {
            Side::Rows => &self.col_deg,
            Side::Cols => &self.row_deg,
        };
        fill_mass(other, other_deg, other_mass);
        let other_mass = &*other_mass;
        let deg = self.degrees(side);
        out.clear();
        if self.par {
            (0..own.len())
                .into_par_iter()
                .map_init(
                    || vec![0i64; self.g],
                    |hits, x| {
                        Self::count_hits(self.neighbours(side, x), other, hits);
                        self.best_of(hits, deg[x], other_mass, own[x])
                    },
                )
                .collect_into_vec(out);
        } else {
            for x in 0..own.len() {
                Self::count_hits(self.neighbours(side, x), other, hits);
                out.push(self.best_of(hits, deg[x], other_mass, own[x]));
            }
        }
    }

    /// Same value as [`modularity_of`].
    fn modularity(
        &self,
        rows: &[usize],
        cols: &[usize],
        row_mass: &mut [i64],
        col_mass: &mut [i64],
    ) -> f64 {
        fill_mass(rows, &self.row_deg, row_mass);
        fill_mass(cols, &self.col_deg, col_mass);
        let in_block = (0..rows.len())
            .map(|i| {
                self.m
                    .row(i)
                    .iter()
                    .filter(|&&j| cols[j as usize] == rows[i])
                    .count() as i64
            })
            .sum::<i64>();
        let t = self.total;
        if t < 1 << 31 {
            let expected: i64 = row_mass.iter().zip(&*col_mass).map(|(&a, &b)| a * b).sum();
            (t * in_block - expected) as f64 / (t * t) as f64
        } else {
            let expected: i128 = row_mass
                .iter()
                .zip(&*col_mass)
                .map(|(&a, &b)| a as i128 * b as i128)
                .sum();
            let t = t as i128;
            (t * in_block as i128 - expected) as f64 / (t * t) as f64
        }
    }

    /// Refills empty clusters of `side` with the worst-placed item of a
    /// cluster that can spare one. Returns whether anything moved.
    fn reseed_side(&self, side: Side, own: &mut [usize], other: &[usize]) -> bool {
        if all_used(own, self.g) {
            return false;
        }
        let other_mass = match side {
            Side::Rows => self.mass(other, &self.col_deg),
            Side::Cols => self.mass(other, &self.row_deg),
        };
        let deg = self.degrees(side);
        let mut hits = vec![0i64; self.g];
        let contrib: Vec<i64> = (0..own.len())
            .map(|x| {
                Self::count_hits(self.neighbours(side, x), other, &mut hits);
                self.total * hits[own[x]] - deg[x] * other_mass[own[x]]
            })
            .collect();
        reseed(own, &contrib, self.g)
    }

    /// Row clusters `init` with columns placed against them: the state the
    /// ascent starts from, left in `sc.rows` and `sc.cols`.
    fn start(&self, init: &[usize], sc: &mut Scratch) {
        let Scratch {
            hits,
            row_mass,
            zero_cols,
            rows,
            cols,
            ..
        } = sc;
        rows.clear();
        rows.extend_from_slice(init);
        // any column placement works as the tie reference for the first pass
        self.reseed_side(Side::Rows, rows, zero_cols);
        self.best_side(Side::Cols, zero_cols, rows, cols, hits, row_mass);
        self.reseed_side(Side::Cols, cols, rows);
    }

    /// Alternating ascent from the state in `sc`. Leaves the outcome there
    /// and returns its modularity.
    fn climb(&self, max_iter: usize, sc: &mut Scratch) -> f64 {
        let Scratch {
            hits,
            row_mass,
            col_mass,
            rows,
            cols,
            new_rows,
            new_cols,
            trace,
            ..
        } = sc;
        trace.clear();
        let mut q = self.modularity(rows, cols, row_mass, col_mass);
        for _ in 0..max_iter {
            self.best_side(Side::Rows, rows, cols, new_rows, hits, col_mass);
            let mut reseeded = self.reseed_side(Side::Rows, new_rows, cols);
            self.best_side(Side::Cols, cols, new_rows, new_cols, hits, row_mass);
            reseeded |= self.reseed_side(Side::Cols, new_cols, new_rows);
            let changed = new_rows != rows || new_cols != cols;
            let q_new = if changed {
                self.modularity(new_rows, new_cols, row_mass, col_mass)
            } else {
                q
            };
            trace.push(SweepRecord {
                before: q,
                after: q_new,
                reseeded,
            });
            std::mem::swap(rows, new_rows);
            std::mem::swap(cols, new_cols);
            q = q_new;
            if !changed {
                break;
            }
        }
        q
    }
}

fn fill_mass(assignment: &[usize], deg: &[i64], out: &mut [i64]) {
    for o in out.iter_mut() {
        *o = 0;
    }
    for (x, &k) in assignment.iter().enumerate() {
        out[k] += deg[x];
    }
}

fn all_used(assignment: &[usize], g: usize) -> bool {
    if g <= 64 {
        let seen = assignment.iter().fold(0u64, |s, &k| s | 1 << k);
        return seen.count_ones() as usize == g;
    }
    let mut v = vec![false; g];
    assignment.iter().for_each(|&k| v[k] = true);
    v.into_iter().all(|b| b)
}

fn reseed(assignment: &mut [usize], contrib: &[i64], g: usize) -> bool {
    let mut sizes = vec![0usize; g];
    for &k in assignment.iter() {
        sizes[k] += 1;
    }
    let mut moved = false;
    for k in 0..g {
        if sizes[k] > 0 {
            continue;
        }
        let victim = (0..assignment.len())
            .filter(|&x| sizes[assignment[x]] > 1)
            .min_by_key(|&x| (contrib[x], x));
        if let Some(x) = victim {
            sizes[assignment[x]] -= 1;
            assignment[x] = k;
            sizes[k] = 1;
            moved = true;
        }
    }
    moved
}

fn d2_sample<R: Rng>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return rng.gen_range(0..weights.len());
    }
    let mut x = rng.gen_range(0.0..total);
    for (i, w) in weights.iter().enumerate() {
        if x < *w {
            return i;
        }
        x -= w;
    }
    weights.len() - 1
}

/// Spread-out initial row clusters, with buffers kept across restarts.
struct Seeder<'a> {
    m: &'a SparseBinaryMatrix,
    mark: Vec<bool>,
    best_sim: Vec<f64>,
    rows: Vec<usize>,
    weights: Vec<f64>,
    sims: Vec<f64>,
    cand_sims: Vec<f64>,
}

impl<'a> Seeder<'a> {
    fn new(m: &'a SparseBinaryMatrix) -> Self {
        let n = m.n_rows();
        Self {
            m,
            mark: vec![false; m.n_cols()],
            best_sim: vec![0.0; n],
            rows: vec![usize::MAX; n],
            weights: Vec::with_capacity(n),
            sims: Vec::with_capacity(n),
            cand_sims: Vec::with_capacity(n),
        }
    }

    /// Cosine similarity of every row to row `seed`.
    fn similarities(m: &SparseBinaryMatrix, seed: usize, mark: &mut [bool], out: &mut Vec<f64>) {
        let s = m.row(seed);
        for &j in s {
            mark[j as usize] = true;
        }
        out.clear();
        out.extend((0..m.n_rows()).map(|i| {
            let r = m.row(i);
            let shared = r.iter().filter(|&&j| mark[j as usize]).count();
            shared as f64 / ((r.len() * s.len()) as f64).sqrt()
        }));
        for &j in s {
            mark[j as usize] = false;
        }
    }

    /// Row clusters grown from `g` seed rows chosen by greedy D² sampling on
    /// cosine distance. Each row joins its most similar seed; rows sharing no
    /// column with any seed join a uniformly random cluster.
    fn seed_rows<R: Rng>(&mut self, g: usize, rng: &mut R, out: &mut [usize]) {
        let (m, n) = (self.m, self.m.n_rows());
        let trials = 2 + (g as f64).ln() as usize;
        self.best_sim.fill(0.0);
        self.rows.fill(usize::MAX);
        let mut seed = rng.gen_range(0..n);
        Self::similarities(m, seed, &mut self.mark, &mut self.sims);
        for k in 0..g {
            for i in 0..n {
                let s = self.sims[i];
                if s > 0.0 && (self.rows[i] == usize::MAX || s > self.best_sim[i]) {
                    self.best_sim[i] = s;
                    self.rows[i] = k;
                }
            }
            self.rows[seed] = k;
            self.best_sim[seed] = 1.0;
            if k + 1 == g {
                break;
            }
            self.weights.clear();
            self.weights
                .extend(self.best_sim.iter().map(|&b| (1.0 - b).max(0.0).powi(2)));
            let mut best: Option<(f64, usize)> = None;
            for _ in 0..trials {
                let cand = d2_sample(&self.weights, rng);
                Self::similarities(m, cand, &mut self.mark, &mut self.cand_sims);
                let potential: f64 = self
                    .best_sim
                    .iter()
                    .zip(&self.cand_sims)
                    .map(|(&b, &c)| (1.0 - b.max(c)).max(0.0).powi(2))
                    .sum();
                if best.map_or(true, |(p, _)| potential < p) {
                    best = Some((potential, cand));
                    std::mem::swap(&mut self.sims, &mut self.cand_sims);
                }
            }
            seed = best.expect("at least two trials").1;
        }
        for (o, &r) in out.iter_mut().zip(&self.rows) {
            *o = if r == usize::MAX {
                rng.gen_range(0..g)
            } else {
                r
            };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::planted_block_matrix;
    use proptest::prelude::*;

    #[test]
    fn g_out_of_range_is_error() {
        let m = SparseBinaryMatrix::from_dense(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(fit(
            &m,
            &FitParams {
                g: 3,
                ..Default::default()
            }
        )
        .is_err());
        assert!(fit(
            &m,
            &FitParams {
                g: 0,
                ..Default::default()
            }
        )
        .is_err());
    }

    #[test]
    fn g_one_is_zero_modularity() {
        let m = SparseBinaryMatrix::from_dense(&[vec![1, 1], vec![0, 1]]).unwrap();
        let c = fit(
            &m,
            &FitParams {
                g: 1,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(c.modularity, 0.0);
    }

    #[test]
    fn planted_two_blocks_reach_planted_modularity() {
        let p = planted_block_matrix(2, 60, 12, 0.7, 0.05, 5);
        let planted = modularity_of(&p.matrix, &p.row_labels, &p.col_labels).unwrap();
        let c = fit(
            &p.matrix,
            &FitParams {
                g: 2,
                seed: 1,
                max_iter: 100,
                restarts: 5,
            },
        )
        .unwrap();
        assert!(
            c.modularity >= planted - 1e-9,
            "{} < {}",
            c.modularity,
            planted
        );
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let p = planted_block_matrix(4, 80, 20, 0.6, 0.05, 9);
        let params = FitParams {
            g: 4,
            seed: 42,
            max_iter: 100,
            restarts: 4,
        };
        assert_eq!(
            fit(&p.matrix, &params).unwrap(),
            fit(&p.matrix, &params).unwrap()
        );
    }

    #[test]
    fn every_cluster_keeps_members() {
        let p = planted_block_matrix(3, 30, 9, 0.8, 0.02, 3);
        let c = fit(
            &p.matrix,
            &FitParams {
                g: 6,
                seed: 2,
                max_iter: 100,
                restarts: 3,
            },
        )
        .unwrap();
        assert!(c.row_members().iter().all(|m| !m.is_empty()));
        assert!(c.col_members().iter().all(|m| !m.is_empty()));
    }

    proptest! {
        #[test]
        fn sweeps_never_lower_modularity(seed in 0u64..500, g in 2usize..5) {
            let p = planted_block_matrix(3, 24, 9, 0.5, 0.1, seed);
            let params = FitParams { g, seed, max_iter: 100, restarts: 1 };
            let (c, trace) = fit_traced(&p.matrix, &params).unwrap();
            for s in trace.iter().filter(|s| !s.reseeded) {
                prop_assert!(s.after >= s.before - 1e-12);
            }
            let q = modularity_of(&p.matrix, &c.row_assignment, &c.col_assignment).unwrap();
            prop_assert_eq!(q, c.modularity);
            prop_assert!((-1.0..=1.0).contains(&c.modularity));
        }

        #[test]
        fn relabeling_preserves_modularity(seed in 0u64..200) {
            let p = planted_block_matrix(3, 20, 6, 0.6, 0.1, seed);
            let c = fit(&p.matrix, &FitParams { g: 3, seed, max_iter: 50, restarts: 1 }).unwrap();
            let perm = [2usize, 0, 1];
            let rows: Vec<_> = c.row_assignment.iter().map(|&k| perm[k]).collect();
            let cols: Vec<_> = c.col_assignment.iter().map(|&k| perm[k]).collect();
            prop_assert_eq!(modularity_of(&p.matrix, &rows, &cols).unwrap(), c.modularity);
        }
    }
}
