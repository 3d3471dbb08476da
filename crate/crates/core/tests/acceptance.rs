//! Acceptance suite. Runs every criterion, prints one line each and exits
//! nonzero when any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::{Duration, Instant};

use patlas::coclus::{adjusted_rand_index, fit, modularity_curve, modularity_of, FitParams};
use patlas::entity::Category;
use patlas::entity::{
    build_registry, otsu_threshold, CreditLedger, EntityInfo, Histogram, IdentityRegistry, Lexicon,
    PatentEntities,
};
use patlas::ingest::{degree_distribution, Axis, SparseBinaryMatrix};
use patlas::portfolio::entropy;
use patlas::report::{run_pipeline, PipelineConfig};
use patlas::synth::{
    diverse_portfolios, null_keyword_corpus, planted_block_matrix, planted_name_families,
    power_law_matrix, reference_transaction_fixture, resolution_accuracy, signature_keyword_corpus,
    NameFamilySpec,
};
use patlas::topics::{all_top_keywords, TokenizedCorpus};
use patlas::transactions::{patent_origins, resolve_events, transaction_stats};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// Best modularity over all 2^(r+c) two-cluster assignments, straight from
/// the definition in floating point. For each row assignment the per-column
/// sums of `a_ij - r_i c_j / T` over each row cluster are formed once, then
/// every column assignment picks one of the two sums per column.
fn exhaustive_best(dense: &[Vec<u8>]) -> f64 {
    let (r, c) = (dense.len(), dense[0].len());
    let t: f64 = dense.iter().flatten().map(|&a| a as f64).sum();
    let rdeg: Vec<f64> = dense
        .iter()
        .map(|r| r.iter().map(|&a| a as f64).sum())
        .collect();
    let cdeg: Vec<f64> = (0..c)
        .map(|j| dense.iter().map(|r| r[j] as f64).sum())
        .collect();
    let mut best = f64::NEG_INFINITY;
    let mut sums = vec![[0.0f64; 2]; c];
    for rm in 0u32..1 << r {
        for (j, s) in sums.iter_mut().enumerate() {
            *s = [0.0; 2];
            for i in 0..r {
                s[(rm >> i & 1) as usize] += dense[i][j] as f64 - rdeg[i] * cdeg[j] / t;
            }
        }
        for cm in 0u32..1 << c {
            let q: f64 = (0..c).map(|j| sums[j][(cm >> j & 1) as usize]).sum();
            best = best.max(q / t);
        }
    }
    best
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut fit_time = Duration::ZERO;
    let mut checked = 0usize;
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for r in 2..=4usize {
        for c in 2..=4usize {
            for bits in 0u32..1 << (r * c) {
                let dense: Vec<Vec<u8>> = (0..r)
                    .map(|i| (0..c).map(|j| (bits >> (i * c + j) & 1) as u8).collect())
                    .collect();
                let nonempty_rows = dense.iter().all(|row| row.contains(&1));
                let nonempty_cols = (0..c).all(|j| dense.iter().any(|row| row[j] == 1));
                if !nonempty_rows || !nonempty_cols {
                    continue;
                }
                let m = SparseBinaryMatrix::from_dense(&dense).map_err(|e| e.to_string())?;
                let t0 = Instant::now();
                let got = fit(
                    &m,
                    &FitParams {
                        g: 2,
                        seed: 0,
                        max_iter: 100,
                        restarts: 10,
                    },
                )
                .map_err(|e| e.to_string())?
                .modularity;
                fit_time += t0.elapsed();
                let want = exhaustive_best(&dense);
                let err = (got - want).abs();
                worst = worst.max(err);
                if err > 1e-12 && failures.len() < 3 {
                    failures.push(format!(
                        "{r}x{c} pattern {bits:#x}: fit {got} vs exhaustive {want}"
                    ));
                }
                checked += 1;
            }
        }
    }
    let t = start.elapsed();
    check(
        failures.is_empty() && fit_time < Duration::from_secs(1),
        format!(
            "{checked} matrices, max |fit - exhaustive| = {worst:.1e}, {:.3} s fitting ({:.3} s with the oracle){}",
            secs(fit_time),
            secs(t),
            failures
                .iter()
                .map(|f| format!("; {f}"))
                .collect::<String>()
        ),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let p = planted_block_matrix(7, 700, 70, 0.8, 0.02, 2024);
    let params = FitParams {
        g: 7,
        seed: 42,
        max_iter: 100,
        restarts: 10,
    };
    let c = fit(&p.matrix, &params).map_err(|e| e.to_string())?;
    let ari = adjusted_rand_index(&c.row_assignment, &p.row_labels);
    let curve = modularity_curve(&p.matrix, 2..=12, &params).map_err(|e| e.to_string())?;
    let plateau = curve.first_plateau(0.02);
    let rising = curve
        .points
        .windows(2)
        .take_while(|w| w[0].0 < 7)
        .all(|w| w[1].1 > w[0].1);
    let t = start.elapsed();
    let shape: Vec<String> = curve
        .points
        .iter()
        .map(|(g, q)| format!("{g}:{q:.3}"))
        .collect();
    check(
        ari >= 0.9 && plateau == Some(7) && rising && t < Duration::from_secs(10),
        format!(
            "ARI {ari:.4}, first plateau {plateau:?}, curve [{}], {:.2} s",
            shape.join(" "),
            secs(t)
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut g1_nonzero = 0;
    for s in 0..20u64 {
        let p = planted_block_matrix(3, 60, 20, 0.5, 0.1, s);
        let c = fit(
            &p.matrix,
            &FitParams {
                g: 1,
                seed: s,
                max_iter: 100,
                restarts: 3,
            },
        )
        .map_err(|e| e.to_string())?;
        let direct =
            modularity_of(&p.matrix, &vec![0; 60], &vec![0; 20]).map_err(|e| e.to_string())?;
        if c.modularity != 0.0 || direct != 0.0 {
            g1_nonzero += 1;
        }
    }
    let p = planted_block_matrix(5, 200, 40, 0.6, 0.05, 9);
    let c = fit(
        &p.matrix,
        &FitParams {
            g: 5,
            seed: 1,
            max_iter: 100,
            restarts: 5,
        },
    )
    .map_err(|e| e.to_string())?;
    let base = modularity_of(&p.matrix, &c.row_assignment, &c.col_assignment)
        .map_err(|e| e.to_string())?;
    let mut unequal = 0;
    for _ in 0..100 {
        let mut perm: Vec<usize> = (0..5).collect();
        perm.shuffle(&mut rng);
        let rows: Vec<usize> = c.row_assignment.iter().map(|&k| perm[k]).collect();
        let cols: Vec<usize> = c.col_assignment.iter().map(|&k| perm[k]).collect();
        if modularity_of(&p.matrix, &rows, &cols).map_err(|e| e.to_string())? != base {
            unequal += 1;
        }
    }
    check(
        g1_nonzero == 0 && unequal == 0 && base == c.modularity,
        format!("g = 1 nonzero in {g1_nonzero}/20 matrices; {unequal}/100 permutations changed Q = {base}"),
    )
}

/// `(mu, sigma, z)` computed from scratch for every (cluster, word) pair.
fn z_oracle(corpus: &TokenizedCorpus, labels: &[usize], g: usize) -> Vec<f64> {
    let n = corpus.n_docs() as f64;
    let mut df: BTreeMap<&str, f64> = BTreeMap::new();
    let mut inside: Vec<BTreeMap<&str, f64>> = vec![BTreeMap::new(); g];
    let mut sizes = vec![0.0; g];
    for (d, &k) in labels.iter().enumerate() {
        sizes[k] += 1.0;
        for w in corpus.tokens(d) {
            *df.entry(w).or_default() += 1.0;
            *inside[k].entry(w).or_default() += 1.0;
        }
    }
    let mut zs = Vec::new();
    for k in 0..g {
        for (&w, &m) in &df {
            let p = m / n;
            let mu = sizes[k] * p;
            let sigma = (sizes[k] * p * (1.0 - p)).sqrt();
            if sigma > 0.0 {
                zs.push((inside[k].get(w).copied().unwrap_or(0.0) - mu) / sigma);
            }
        }
    }
    zs
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut worst_mean = 0.0f64;
    let mut worst_tail = 0.0f64;
    let mut failures = Vec::new();
    for seed in 0..20u64 {
        let kc = null_keyword_corpus(10_000, 7, 300, 30, seed);
        let zs = z_oracle(&kc.corpus, &kc.labels, kc.g);
        // the library's z for the top word of cluster 0 must agree with the oracle's maximum there
        let lib = all_top_keywords(&kc.corpus, &kc.labels, kc.g, 1);
        let oracle_max0 = zs[..zs.len() / kc.g]
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        if (lib[0][0].z - oracle_max0).abs() > 1e-9 {
            failures.push(format!(
                "seed {seed}: library top z {} vs oracle {oracle_max0}",
                lib[0][0].z
            ));
        }
        let mean = zs.iter().sum::<f64>() / zs.len() as f64;
        let tail = zs.iter().filter(|z| z.abs() > 3.0).count() as f64 / zs.len() as f64;
        worst_mean = worst_mean.max(mean.abs());
        worst_tail = worst_tail.max(tail);
        if !(-0.1..=0.1).contains(&mean) || tail >= 0.01 {
            failures.push(format!(
                "seed {seed}: mean z {mean:.4}, |z|>3 share {tail:.4}"
            ));
        }
    }
    let mut first = 0;
    for seed in 0..20u64 {
        let kc = signature_keyword_corpus(10_000, 7, 300, 30, 0.3, 0.03, seed);
        let top = all_top_keywords(&kc.corpus, &kc.labels, kc.g, 1);
        if (0..kc.g).all(|k| top[k][0].word == kc.signatures[k]) {
            first += 1;
        }
    }
    check(
        failures.is_empty() && first == 20,
        format!(
            "null: max |mean z| {worst_mean:.4}, max |z|>3 share {worst_tail:.4} over 20 seeds; signatures first in {first}/20 seeds; {:.1} s{}",
            secs(start.elapsed()),
            failures.iter().map(|f| format!("; {f}")).collect::<String>()
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let len = rng.gen_range(1..=20);
        let raw: Vec<f64> = (0..len).map(|_| rng.gen_range(0.0..1.0) + 1e-9).collect();
        let total: f64 = raw.iter().sum();
        let mut p: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let h = entropy(&p);
        p.shuffle(&mut rng);
        worst = worst.max((entropy(&p) - h).abs());
    }
    let uniform = entropy(&[1.0 / 7.0; 7]);
    let u_err = (uniform - 7f64.ln()).abs();
    let mut outside = 0;
    let mut range = (f64::INFINITY, f64::NEG_INFINITY);
    for counts in diverse_portfolios(200, 1.26, 1.77, 7, 55) {
        let total: f64 = counts.iter().sum();
        let s = entropy(&counts.iter().map(|c| c / total).collect::<Vec<_>>());
        range = (range.0.min(s), range.1.max(s));
        if !(1.26..=1.77).contains(&s) {
            outside += 1;
        }
    }
    check(
        worst <= 1e-12 && u_err <= 1e-12 && outside == 0,
        format!(
            "max permutation drift {worst:.1e} over 1000 vectors; |H(uniform 7) - ln 7| = {u_err:.1e}; 200 fixture portfolios span [{:.4}, {:.4}], {outside} outside [1.26, 1.77]",
            range.0, range.1
        ),
    )
}

/// Scans every cut with the textbook form `(N·s0 − S·n0)² / (n0·n1)`,
/// ties resolved to the midpoint of the extreme tied edges.
fn otsu_oracle(h: &Histogram) -> Option<f64> {
    let nb = h.counts.len();
    let n: u128 = h.counts.iter().map(|&c| c as u128).sum();
    let s: u128 = h
        .counts
        .iter()
        .enumerate()
        .map(|(b, &c)| b as u128 * c as u128)
        .sum();
    let mut scores: Vec<(usize, u128, u128)> = Vec::new();
    for k in 0..nb - 1 {
        let n0: u128 = h.counts[..=k].iter().map(|&c| c as u128).sum();
        let s0: u128 = h.counts[..=k]
            .iter()
            .enumerate()
            .map(|(b, &c)| b as u128 * c as u128)
            .sum();
        if n0 == 0 || n0 == n {
            continue;
        }
        let d = (n * s0) as i128 - (s * n0) as i128;
        scores.push((k, (d * d) as u128, n0 * (n - n0)));
    }
    let best = scores
        .iter()
        .copied()
        .reduce(|a, b| if b.1 * a.2 > a.1 * b.2 { b } else { a })?;
    let tied: Vec<usize> = scores
        .iter()
        .filter(|x| x.1 * best.2 == best.1 * x.2)
        .map(|x| x.0)
        .collect();
    let edge = |k: usize| h.lo + (k + 1) as f64 * (h.hi - h.lo) / nb as f64;
    Some((edge(tied[0]) + edge(*tied.last().unwrap())) / 2.0)
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut agree, mut unimodal) = (0, 0);
    let mut mismatch = Vec::new();
    for i in 0..1000 {
        let bins = rng.gen_range(2..=100);
        let mut h = Histogram::new(0.0, 100.0, bins);
        let sparse = rng.gen_bool(0.3);
        for c in h.counts.iter_mut() {
            *c = if sparse && rng.gen_bool(0.7) {
                0
            } else {
                rng.gen_range(0..1000)
            };
        }
        match (otsu_threshold(&h), otsu_oracle(&h)) {
            (Ok(a), Some(b)) if a == b => agree += 1,
            (Err(_), None) => unimodal += 1,
            (got, want) => {
                if mismatch.len() < 3 {
                    mismatch.push(format!("histogram {i}: {got:?} vs {want:?}"));
                }
            }
        }
    }
    check(
        mismatch.is_empty(),
        format!(
            "{agree} exact agreements, {unimodal} unimodal on both sides{}",
            mismatch
                .iter()
                .map(|m| format!("; {m}"))
                .collect::<String>()
        ),
    )
}

/// Every entity at `fine` lies inside one entity at `coarse`.
fn refines(fine: &IdentityRegistry, coarse: &IdentityRegistry) -> bool {
    fine.entities.values().all(|e| {
        let parents: BTreeSet<&str> = e.names.iter().filter_map(|n| coarse.entity_of(n)).collect();
        parents.len() == 1
    })
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let lex = Lexicon::default();
    let mut lines = Vec::new();
    let mut ok = true;
    for seed in [0u64, 1] {
        let spec = NameFamilySpec {
            seed,
            ..NameFamilySpec::default()
        };
        let planted = planted_name_families(&spec).map_err(|e| e.to_string())?;
        let r99 = build_registry(&planted.pairs, 99.0, &lex).map_err(|e| e.to_string())?;
        let r90 = build_registry(&planted.pairs, 90.0, &lex).map_err(|e| e.to_string())?;
        let truth: BTreeMap<String, usize> = planted
            .identity_of
            .iter()
            .map(|(n, &id)| (n.clone(), id))
            .collect();
        let acc = resolution_accuracy(&truth, &r99.names);
        let refined = refines(&r99, &r90);
        ok &= acc >= 0.95 && refined;
        lines.push(format!(
            "seed {seed}: {} identities, {} names, accuracy {:.2}% at p0 = 99, p99 refines p90: {refined}",
            planted.identities.len(),
            truth.len(),
            100.0 * acc
        ));
    }
    let small = NameFamilySpec {
        identities: 120,
        crowded_codes: 2,
        names_per_crowded_code: 80,
        seed: 7,
        ..NameFamilySpec::default()
    };
    let planted = planted_name_families(&small).map_err(|e| e.to_string())?;
    let regs: Vec<IdentityRegistry> = [99.0, 97.0, 95.0, 90.0, 85.0]
        .iter()
        .map(|&p| build_registry(&planted.pairs, p, &lex))
        .collect::<patlas::Result<_>>()
        .map_err(|e| e.to_string())?;
    let chain = regs.windows(2).all(|w| refines(&w[0], &w[1]));
    ok &= chain;
    lines.push(format!("p0 chain 99 > 97 > 95 > 90 > 85 refines: {chain}"));
    check(
        ok,
        format!("{}; {:.1} s", lines.join("; "), secs(start.elapsed())),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let lex = Lexicon::default();
    let mut reg = IdentityRegistry::from_components(&[], &lex);
    let n_entities = 5000;
    for e in 0..n_entities {
        reg.entities.insert(
            format!("E{e}"),
            EntityInfo {
                code: format!("E{e}"),
                names: vec![format!("ENTITY {e}")],
                category: Category::Corporation,
                region: "US".into(),
            },
        );
    }
    for p in 0..100_000 {
        let k = rng.gen_range(1..=4);
        let entities: Vec<String> = (0..k)
            .map(|_| format!("E{}", rng.gen_range(0..n_entities)))
            .collect();
        reg.patents.insert(
            format!("P{p:06}"),
            PatentEntities {
                entities,
                region: "US".into(),
                year: 2010,
            },
        );
    }
    let ledger = CreditLedger::from_registry(&reg).map_err(|e| e.to_string())?;
    let total: f64 = ledger.entity_totals().values().sum();
    let drift = (total - ledger.credited_patents() as f64).abs();

    let mut small = IdentityRegistry::from_components(&[], &lex);
    for e in ["PLANTED", "PARTNER"] {
        small.entities.insert(
            e.into(),
            EntityInfo {
                code: e.into(),
                names: vec![e.into()],
                category: Category::University,
                region: "KR".into(),
            },
        );
    }
    for p in 0..111 {
        small.patents.insert(
            format!("S{p}"),
            PatentEntities {
                entities: vec!["PLANTED".into()],
                region: "KR".into(),
                year: 2012,
            },
        );
    }
    small.patents.insert(
        "SHARED".into(),
        PatentEntities {
            entities: vec!["PLANTED".into(), "PARTNER".into()],
            region: "KR".into(),
            year: 2013,
        },
    );
    let planted = CreditLedger::from_registry(&small)
        .map_err(|e| e.to_string())?
        .entity_totals()["PLANTED"];
    check(
        drift <= 1e-6 && (planted - 111.5).abs() <= 1e-9,
        format!(
            "{} patents: |sum of credits - patents| = {drift:.1e}; planted entity credit {planted}",
            ledger.credited_patents()
        ),
    )
}

fn pct1(x: f64) -> String {
    format!("{x:.1}")
}

fn criterion_9() -> Outcome {
    let fx = reference_transaction_fixture(9);
    let lex = Lexicon::default();
    let mut reg = fx.registry.clone();
    let start = Instant::now();
    let events = resolve_events(&fx.records, &mut reg, 90.0, &lex, &fx.aliases)
        .map_err(|e| e.to_string())?;
    let origins = patent_origins(&reg, &fx.records);
    let stats = transaction_stats(&events, &origins, &reg, 10);
    let t = start.elapsed();
    let r = &stats.all.reassignment;
    let l = &stats.all.licensing;
    let share = |o: Category, to: Category| {
        r.origin(o)
            .pairs
            .iter()
            .find(|p| p.to == to)
            .map_or(0.0, |p| p.pct)
    };
    let got = [
        (
            "corporate changed",
            pct1(r.origin(Category::Corporation).changed_pct),
            "18.3",
        ),
        (
            "university unchanged",
            pct1(r.origin(Category::University).unchanged_pct),
            "82.6",
        ),
        (
            "corporation to corporation",
            pct1(share(Category::Corporation, Category::Corporation)),
            "81.9",
        ),
        (
            "corporation to university",
            pct1(share(Category::Corporation, Category::University)),
            "13.6",
        ),
        (
            "university to corporation",
            pct1(share(Category::University, Category::Corporation)),
            "45.5",
        ),
        (
            "university to university",
            pct1(share(Category::University, Category::University)),
            "36.3",
        ),
        (
            "corporate licensed",
            pct1(l.origin(Category::Corporation).licensed_pct),
            "2.9",
        ),
        (
            "university licensed",
            pct1(l.origin(Category::University).licensed_pct),
            "16.3",
        ),
        ("license instances", l.total_instances.to_string(), "1244"),
    ];
    let wrong: Vec<String> = got
        .iter()
        .filter(|g| g.1 != g.2)
        .map(|g| format!("{} = {} (want {})", g.0, g.1, g.2))
        .collect();
    let listing: Vec<String> = got.iter().map(|g| format!("{} {}", g.0, g.1)).collect();
    check(
        wrong.is_empty() && t < Duration::from_secs(1),
        format!(
            "{}; resolve + stats {:.3} s{}",
            listing.join(", "),
            secs(t),
            wrong.iter().map(|w| format!("; {w}")).collect::<String>()
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut slopes = Vec::new();
    for seed in 0..5u64 {
        let m = power_law_matrix(3000, 20_000, -1.0, 100, seed);
        slopes.push(
            degree_distribution(&m, Axis::Cols)
                .slope
                .ok_or("no slope")?,
        );
    }
    let worst = slopes.iter().map(|s| (s + 1.0).abs()).fold(0.0, f64::max);
    let listing: Vec<String> = slopes.iter().map(|s| format!("{s:.3}")).collect();
    check(
        worst <= 0.1,
        format!(
            "slopes [{}] for planted -1.0, max deviation {worst:.3}",
            listing.join(", ")
        ),
    )
}

fn criterion_11() -> Outcome {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/patlas.toml");
    let cfg = PipelineConfig::load(&fixture).map_err(|e| e.to_string())?;
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut times = Vec::new();
    let mut manifests = Vec::new();
    for run in ["a", "b"] {
        let start = Instant::now();
        let out = run_pipeline(&cfg, &tmp.path().join(run)).map_err(|e| e.to_string())?;
        times.push(start.elapsed());
        manifests.push(out.manifest);
    }
    let mut differing = Vec::new();
    let mut csvs = 0;
    for name in manifests[0].artifacts.keys() {
        let a = std::fs::read(tmp.path().join("a").join(name)).map_err(|e| e.to_string())?;
        let b = std::fs::read(tmp.path().join("b").join(name)).map_err(|e| e.to_string())?;
        csvs += usize::from(name.ends_with(".csv"));
        if a != b {
            differing.push(name.clone());
        }
    }
    let slowest = times.iter().max().copied().unwrap_or_default();
    check(
        differing.is_empty()
            && manifests[0] == manifests[1]
            && csvs > 0
            && slowest < Duration::from_secs(60),
        format!(
            "{} artifacts ({csvs} CSV) byte-identical across runs: {}; slowest run {:.2} s{}",
            manifests[0].artifacts.len(),
            differing.is_empty(),
            secs(slowest),
            if differing.is_empty() {
                String::new()
            } else {
                format!("; differing: {}", differing.join(", "))
            }
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        (
            "modularity matches exhaustive search on small matrices",
            criterion_1,
        ),
        (
            "planted co-clusters recovered, curve plateaus at g = 7",
            criterion_2,
        ),
        (
            "g = 1 gives zero modularity, relabeling keeps it",
            criterion_3,
        ),
        (
            "keyword z-scores under the null and planted signatures",
            criterion_4,
        ),
        (
            "entropy invariance, uniform value and fixture range",
            criterion_5,
        ),
        ("Otsu threshold equals a brute-force scan", criterion_6),
        (
            "entity resolution accuracy and threshold refinement",
            criterion_7,
        ),
        ("credit conservation and fractional credit", criterion_8),
        (
            "transaction fixture percentages and license count",
            criterion_9,
        ),
        ("degree-distribution exponent recovered", criterion_10),
        (
            "pipeline determinism and runtime on the bundled fixture",
            criterion_11,
        ),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(d) => println!("PASS [{:>2}] {name}: {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {d}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
