use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Serialize;

use super::config::PipelineConfig;
use super::output::{csv_string, ArtifactDir, ClusterFile, Manifest, Meta};
use super::svg;
use crate::coclus::{fit, modularity_curve, CoClustering, FitParams, ModularityCurve};
use crate::entity::{
    build_registry, collect_dwpi_pairs, match_original_names, otsu_threshold,
    same_record_histogram, CreditLedger, IdentityRegistry, Lexicon, MatchSummary,
};
use crate::ingest::{
    degree_distribution, filter_and_build_matrix, merge_applications, parse_records, write_corpus,
    Axis, InputFormat, PatentRecord, SparseBinaryMatrix,
};
use crate::portfolio::{
    avg_log_entropy_curves, entity_categories, heatmap, join_credits, proportions_timeseries,
    quartile_groups, region_rankings, trajectories, vector_field, GroupBy, PortfolioData,
    PortfolioTrajectory, QuartileGroup, XAxis, YAxis, ENTROPY_EPS,
};
use crate::topics::{all_top_keywords, tokenize, KeywordScore, Stopwords};
use crate::transactions::{
    patent_origins, resolve_events, transaction_stats, write_events_csv, AliasMap,
    TransactionEvent, TransactionStats,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Config,
    Ingest,
    Cluster,
    Keywords,
    Resolve,
    Credits,
    Portfolio,
    Transactions,
    Report,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Config => "config",
            Stage::Ingest => "ingest",
            Stage::Cluster => "cluster",
            Stage::Keywords => "keywords",
            Stage::Resolve => "resolve",
            Stage::Credits => "credits",
            Stage::Portfolio => "portfolio",
            Stage::Transactions => "transactions",
            Stage::Report => "report",
        }
    }
}

/// An error tagged with the stage that raised it.
#[derive(Debug)]
pub struct StageError {
    pub stage: Stage,
    pub source: Error,
}

impl StageError {
    /// 2 for unreadable inputs, 3 for bad configuration, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self.source {
            Error::Io { .. } => 2,
            Error::Config(_) => 3,
            _ => 1,
        }
    }
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage {}: {}", self.stage.as_str(), self.source)
    }
}

impl std::error::Error for StageError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

pub trait AtStage<T> {
    fn at(self, stage: Stage) -> std::result::Result<T, StageError>;
}

impl<T> AtStage<T> for Result<T> {
    fn at(self, stage: Stage) -> std::result::Result<T, StageError> {
        self.map_err(|source| StageError { stage, source })
    }
}

/// Parses raw records and merges them into applications.
pub fn ingest(input: &Path, format: InputFormat) -> Result<Vec<PatentRecord>> {
    let raw = parse_records(input, format)?;
    let merged = merge_applications(&raw);
    log::info!(
        "{} publications merged into {} applications",
        raw.len(),
        merged.len()
    );
    Ok(merged)
}

#[derive(Serialize)]
struct DegreeRow {
    axis: &'static str,
    degree: usize,
    frequency: usize,
}

pub fn degree_rows(m: &SparseBinaryMatrix, meta: &Meta) -> Result<String> {
    let mut rows = Vec::new();
    for (axis, name) in [(Axis::Rows, "rows"), (Axis::Cols, "cols")] {
        for (degree, frequency) in degree_distribution(m, axis).points {
            rows.push(DegreeRow {
                axis: name,
                degree,
                frequency,
            });
        }
    }
    csv_string(meta, rows)
}

/// Restricts the curve's range to what the matrix allows.
pub fn curve(
    m: &SparseBinaryMatrix,
    g_min: usize,
    g_max: usize,
    params: &FitParams,
) -> Result<ModularityCurve> {
    let hi = g_max.min(m.n_rows().min(m.n_cols()));
    if hi < g_min {
        return Err(Error::invalid(format!(
            "matrix too small for g_min = {g_min}"
        )));
    }
    modularity_curve(m, g_min..=hi, params)
}

pub fn curve_csv(c: &ModularityCurve, meta: &Meta) -> Result<String> {
    #[derive(Serialize)]
    struct Row {
        g: usize,
        modularity: f64,
    }
    csv_string(
        meta,
        c.points
            .iter()
            .map(|&(g, modularity)| Row { g, modularity }),
    )
}

/// Top keywords of every cluster, documents taken in matrix row order.
pub fn keywords(
    records: &[PatentRecord],
    clusters: &ClusterFile,
    stopwords: &Stopwords,
    top_k: usize,
) -> Result<Vec<Vec<KeywordScore>>> {
    let docs: Vec<PatentRecord> = records
        .iter()
        .filter(|r| clusters.rows.contains_key(&r.application_id))
        .cloned()
        .collect();
    if docs.is_empty() {
        return Err(Error::invalid(
            "no clustered application found in the corpus",
        ));
    }
    let labels: Vec<usize> = docs
        .iter()
        .map(|r| clusters.rows[&r.application_id])
        .collect();
    let corpus = tokenize(&docs, stopwords);
    Ok(all_top_keywords(&corpus, &labels, clusters.g, top_k))
}

pub fn keywords_csv(kw: &[Vec<KeywordScore>], meta: &Meta) -> Result<String> {
    #[derive(Serialize)]
    struct Row<'a> {
        cluster: usize,
        rank: usize,
        word: &'a str,
        #[serde(rename = "M")]
        m: u32,
        mu: f64,
        sigma: f64,
        z: f64,
    }
    let rows = kw.iter().flat_map(|list| {
        list.iter().enumerate().map(|(i, k)| Row {
            cluster: k.cluster,
            rank: i + 1,
            word: &k.word,
            m: k.m_in,
            mu: k.mu,
            sigma: k.sigma,
            z: k.z,
        })
    });
    csv_string(meta, rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolution {
    pub p0: f64,
    pub edge_threshold: f64,
    pub match_threshold: f64,
    /// `otsu`, `config` or `edge` (Otsu found a unimodal histogram).
    pub threshold_source: String,
    pub dwpi_pairs: usize,
    pub entities: usize,
    pub summary: MatchSummary,
}

/// Builds the registry from DWPI names and links the original names to it.
pub fn resolve(
    records: &[PatentRecord],
    p0: f64,
    match_threshold: Option<f64>,
    lexicon: &Lexicon,
) -> Result<(IdentityRegistry, Resolution)> {
    let pairs = collect_dwpi_pairs(records);
    let mut reg = build_registry(&pairs, p0, lexicon)?;
    let (threshold, source) = match match_threshold {
        Some(t) => (t, "config"),
        None => match otsu_threshold(&same_record_histogram(records)) {
            Ok(t) => (t, "otsu"),
            Err(Error::Unimodal) => {
                log::warn!("same-record similarities are unimodal; using the edge threshold");
                (reg.edge_threshold, "edge")
            }
            Err(e) => return Err(e),
        },
    };
    let summary = match_original_names(records, &mut reg, threshold, lexicon);
    log::info!(
        "{} entities, match threshold {threshold:.2} ({source})",
        reg.entities.len()
    );
    let res = Resolution {
        p0,
        edge_threshold: reg.edge_threshold,
        match_threshold: threshold,
        threshold_source: source.into(),
        dwpi_pairs: pairs.len(),
        entities: reg.entities.len(),
        summary,
    };
    Ok((reg, res))
}

pub fn credits_csv(ledger: &CreditLedger, meta: &Meta) -> Result<String> {
    let mut buf = meta.csv_header().into_bytes();
    ledger.write_csv(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// Area and year of every clustered patent, ready for the portfolio stage.
pub fn portfolio_data(
    ledger: &CreditLedger,
    clusters: &ClusterFile,
    years: &BTreeMap<String, i32>,
) -> Result<PortfolioData> {
    join_credits(ledger, &clusters.rows, years, clusters.g)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortfolioParams {
    pub base_year: i32,
    pub bins: usize,
    pub heatmap_bins: usize,
    pub top_n: usize,
}

impl From<&PipelineConfig> for PortfolioParams {
    fn from(c: &PipelineConfig) -> Self {
        Self {
            base_year: c.base_year,
            bins: c.bins,
            heatmap_bins: c.heatmap_bins,
            top_n: c.top_n,
        }
    }
}

const FIELDS: [(XAxis, YAxis); 4] = [
    (XAxis::LogCredit, YAxis::Entropy),
    (XAxis::LogCredit, YAxis::LogEntropy),
    (XAxis::RelativeYear, YAxis::Entropy),
    (XAxis::RelativeYear, YAxis::LogEntropy),
];

fn vector_rows(
    group: &str,
    trajs: &[&PortfolioTrajectory],
    p: &PortfolioParams,
    rows: &mut Vec<Vec<String>>,
) {
    for (xa, ya) in FIELDS {
        let vf = vector_field(trajs.iter().copied(), xa, ya, p.bins, p.base_year);
        for c in vf.cells {
            rows.push(vec![
                group.to_string(),
                xa.as_str().into(),
                ya.as_str().into(),
                c.bin_x.to_string(),
                c.bin_y.to_string(),
                c.x_center.to_string(),
                c.y_center.to_string(),
                c.dx.to_string(),
                c.dy.to_string(),
                c.count.to_string(),
                c.density.as_str().into(),
            ]);
        }
    }
}

/// Every portfolio table and chart.
pub fn portfolio_outputs(
    data: &PortfolioData,
    p: &PortfolioParams,
    out: &mut ArtifactDir,
) -> Result<()> {
    if data.patents.is_empty() {
        return Err(Error::invalid(
            "no credited patent has both an area and a year",
        ));
    }
    for gb in GroupBy::ALL {
        let mut rows = Vec::new();
        for r in proportions_timeseries(data, gb) {
            for (area, (c, s)) in r.counts.iter().zip(&r.proportions).enumerate() {
                rows.push(vec![
                    r.group.clone(),
                    r.year.to_string(),
                    area.to_string(),
                    c.to_string(),
                    s.to_string(),
                ]);
            }
        }
        out.write_records(
            &format!("proportions_{}.csv", gb.as_str()),
            &["group", "year", "area", "count", "proportion"],
            &rows,
        )?;
    }

    let all = region_rankings(data, None, p.top_n);
    out.write_csv("rankings_all.csv", &all)?;
    out.write(
        "rankings_all.svg",
        svg::bump_chart(&all, "Top regions by applications").as_bytes(),
    )?;
    for area in 0..data.g {
        let r = region_rankings(data, Some(area), p.top_n);
        out.write_csv(&format!("rankings_area{area}.csv"), &r)?;
    }

    let trajs = trajectories(data);
    let mut points = Vec::new();
    let mut rows = Vec::new();
    for t in &trajs {
        for q in t.points.iter().filter(|q| q.credit > 0.0) {
            points.push((q.credit, q.entropy));
            rows.push(vec![
                t.entity.clone(),
                q.year.to_string(),
                q.credit.to_string(),
                q.entropy.to_string(),
            ]);
        }
    }
    out.write_records(
        "entropy_points.csv",
        &["entity", "year", "credit", "entropy"],
        &rows,
    )?;

    let hm = heatmap(&points, p.heatmap_bins, ENTROPY_EPS)?;
    let rows: Vec<Vec<String>> = hm
        .cells()
        .into_iter()
        .map(|(ix, iy, n, d)| {
            vec![
                ix.to_string(),
                iy.to_string(),
                hm.x_edges[ix].to_string(),
                hm.x_edges[ix + 1].to_string(),
                hm.y_edges[iy].to_string(),
                hm.y_edges[iy + 1].to_string(),
                n.to_string(),
                d.as_str().into(),
            ]
        })
        .collect();
    out.write_records(
        "heatmap.csv",
        &[
            "bin_x", "bin_y", "x_lo", "x_hi", "y_lo", "y_hi", "count", "density",
        ],
        &rows,
    )?;
    out.write(
        "heatmap.svg",
        svg::heatmap_svg(&hm, "Portfolio states", "log10 credit", "log10 entropy").as_bytes(),
    )?;

    let last_year = data.patents.iter().map(|q| q.year).max().expect("nonempty");
    let first_year = data.patents.iter().map(|q| q.year).min().expect("nonempty");
    let years: Vec<i32> = (first_year..=last_year).collect();
    let mut vrows = Vec::new();
    let everyone: Vec<&PortfolioTrajectory> = trajs.iter().collect();
    vector_rows("all", &everyone, p, &mut vrows);
    out.write(
        "vector_field.svg",
        svg::vector_field_svg(
            &vector_field(
                everyone.iter().copied(),
                XAxis::LogCredit,
                YAxis::Entropy,
                p.bins,
                p.base_year,
            ),
            "Portfolio dynamics",
        )
        .as_bytes(),
    )?;

    let mut curves = Vec::new();
    let mut chart = Vec::new();
    match quartile_groups(&trajs, last_year) {
        Ok(groups) => {
            for q in QuartileGroup::ALL {
                let members: Vec<&PortfolioTrajectory> = trajs
                    .iter()
                    .filter(|t| groups.get(&t.entity) == Some(&q))
                    .collect();
                vector_rows(q.as_str(), &members, p, &mut vrows);
            }
            for (q, ys) in avg_log_entropy_curves(&trajs, &groups, &years, ENTROPY_EPS) {
                chart.push((
                    q.as_str().to_string(),
                    ys.iter().map(|(&y, &v)| (y as f64, v)).collect(),
                ));
                curves.extend(ys.into_iter().map(|(y, v)| {
                    vec![
                        "quartile".into(),
                        q.as_str().into(),
                        y.to_string(),
                        v.to_string(),
                    ]
                }));
            }
        }
        Err(e) => log::warn!("quartile outputs skipped: {e}"),
    }
    let cats = entity_categories(data);
    for (c, ys) in avg_log_entropy_curves(&trajs, &cats, &years, ENTROPY_EPS) {
        chart.push((
            c.as_str().to_string(),
            ys.iter().map(|(&y, &v)| (y as f64, v)).collect(),
        ));
        curves.extend(ys.into_iter().map(|(y, v)| {
            vec![
                "category".into(),
                c.as_str().into(),
                y.to_string(),
                v.to_string(),
            ]
        }));
    }
    out.write_records(
        "vector_field.csv",
        &[
            "group", "x_axis", "y_axis", "bin_x", "bin_y", "x_center", "y_center", "dx", "dy",
            "count", "density",
        ],
        &vrows,
    )?;
    out.write_records(
        "avg_log_entropy.csv",
        &["grouping", "group", "year", "avg_log_entropy"],
        &curves,
    )?;
    out.write(
        "avg_log_entropy.svg",
        svg::line_chart(&chart, "Mean log10 entropy", "year", "log10 entropy").as_bytes(),
    )?;
    Ok(())
}

/// Resolves transaction parties and tabulates both statistics blocks.
pub fn transactions(
    records: &[PatentRecord],
    registry: &mut IdentityRegistry,
    lexicon: &Lexicon,
    aliases: &AliasMap,
    top_k: usize,
) -> Result<(Vec<TransactionEvent>, TransactionStats)> {
    let threshold = registry.match_threshold.unwrap_or(registry.edge_threshold);
    let origins = patent_origins(registry, records);
    let events = resolve_events(records, registry, threshold, lexicon, aliases)?;
    log::info!(
        "{} transactions over {} US-filed patents",
        events.len(),
        origins.len()
    );
    let stats = transaction_stats(&events, &origins, registry, top_k);
    Ok((events, stats))
}

pub fn events_csv(events: &[TransactionEvent], meta: &Meta) -> Result<String> {
    let mut buf = meta.csv_header().into_bytes();
    write_events_csv(events, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub applications: usize,
    pub matrix_rows: usize,
    pub matrix_cols: usize,
    pub nonzeros: usize,
    pub row_degree_slope: Option<f64>,
    pub col_degree_slope: Option<f64>,
    pub g: usize,
    pub modularity: f64,
    pub resolution: Resolution,
    pub credited_patents: usize,
    pub transactions: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub summary: RunSummary,
    pub manifest: Manifest,
}

fn cluster(m: &SparseBinaryMatrix, config: &PipelineConfig) -> Result<CoClustering> {
    let params = FitParams {
        g: config.g,
        seed: config.seed,
        max_iter: config.max_iter,
        restarts: config.restarts,
    };
    if config.g > m.n_rows().min(m.n_cols()) {
        return Err(Error::Config(format!(
            "g = {} exceeds the matrix size {}x{}",
            config.g,
            m.n_rows(),
            m.n_cols()
        )));
    }
    fit(m, &params)
}

/// Runs every stage and writes all outputs plus `manifest.json` into `out_dir`.
pub fn run_pipeline(
    config: &PipelineConfig,
    out_dir: &Path,
) -> std::result::Result<RunOutput, StageError> {
    config.validate().at(Stage::Config)?;
    let meta = Meta::new(config.hash());
    let mut out = ArtifactDir::create(out_dir, meta.clone()).at(Stage::Report)?;

    let records = ingest(&config.input, config.format).at(Stage::Ingest)?;
    let corpus_path = out.path("corpus.bin");
    write_corpus(&corpus_path, &records).at(Stage::Ingest)?;
    let bytes = std::fs::read(&corpus_path)
        .map_err(|e| Error::io(&corpus_path, e))
        .at(Stage::Ingest)?;
    out.write("corpus.bin", &bytes).at(Stage::Ingest)?;
    let m = filter_and_build_matrix(&records).at(Stage::Ingest)?;
    out.write(
        "degree_distribution.csv",
        degree_rows(&m, &meta).at(Stage::Ingest)?.as_bytes(),
    )
    .at(Stage::Ingest)?;

    let c = cluster(&m, config).at(Stage::Cluster)?;
    let clusters = ClusterFile::new(&m, &c, config.seed, config.restarts, meta.clone());
    out.write(
        "clusters.json",
        clusters.to_json().at(Stage::Cluster)?.as_bytes(),
    )
    .at(Stage::Cluster)?;
    let params = FitParams {
        g: config.g,
        seed: config.seed,
        max_iter: config.max_iter,
        restarts: config.restarts,
    };
    match curve(&m, config.g_min, config.g_max, &params) {
        Ok(cv) => {
            out.write(
                "modularity_curve.csv",
                curve_csv(&cv, &meta).at(Stage::Cluster)?.as_bytes(),
            )
            .at(Stage::Cluster)?;
        }
        Err(e) => log::warn!("modularity curve skipped: {e}"),
    }

    let stopwords = match &config.stopwords {
        Some(p) => Stopwords::load(p).at(Stage::Keywords)?,
        None => Stopwords::default(),
    };
    let kw = keywords(&records, &clusters, &stopwords, config.top_k).at(Stage::Keywords)?;
    out.write(
        "keywords.csv",
        keywords_csv(&kw, &meta).at(Stage::Keywords)?.as_bytes(),
    )
    .at(Stage::Keywords)?;

    let lexicon = match &config.lexicon {
        Some(p) => Lexicon::load(p).at(Stage::Resolve)?,
        None => Lexicon::default(),
    };
    let (mut registry, resolution) =
        resolve(&records, config.p0, config.match_threshold, &lexicon).at(Stage::Resolve)?;
    out.write(
        "registry.json",
        registry.to_json().at(Stage::Resolve)?.as_bytes(),
    )
    .at(Stage::Resolve)?;
    out.write_json("resolution.json", &resolution)
        .at(Stage::Resolve)?;

    let ledger = CreditLedger::from_registry(&registry).at(Stage::Credits)?;
    out.write(
        "credits.csv",
        credits_csv(&ledger, &meta).at(Stage::Credits)?.as_bytes(),
    )
    .at(Stage::Credits)?;

    let years: BTreeMap<String, i32> = records
        .iter()
        .map(|r| (r.application_id.clone(), r.year))
        .collect();
    let data = portfolio_data(&ledger, &clusters, &years).at(Stage::Portfolio)?;
    portfolio_outputs(&data, &PortfolioParams::from(config), &mut out).at(Stage::Portfolio)?;

    let aliases = match &config.aliases {
        Some(p) => AliasMap::load(p).at(Stage::Transactions)?,
        None => AliasMap::default(),
    };
    let (events, stats) = transactions(
        &records,
        &mut registry,
        &lexicon,
        &aliases,
        config.licensor_top_k,
    )
    .at(Stage::Transactions)?;
    out.write(
        "transactions.csv",
        events_csv(&events, &meta)
            .at(Stage::Transactions)?
            .as_bytes(),
    )
    .at(Stage::Transactions)?;
    out.write_json("stats.json", &stats)
        .at(Stage::Transactions)?;

    let summary = RunSummary {
        applications: records.len(),
        matrix_rows: m.n_rows(),
        matrix_cols: m.n_cols(),
        nonzeros: m.nnz(),
        row_degree_slope: degree_distribution(&m, Axis::Rows).slope,
        col_degree_slope: degree_distribution(&m, Axis::Cols).slope,
        g: c.g,
        modularity: c.modularity,
        resolution,
        credited_patents: ledger.credited_patents(),
        transactions: events.len(),
    };
    out.write_json("summary.json", &summary).at(Stage::Report)?;
    let manifest = out.finish().at(Stage::Report)?;
    Ok(RunOutput { summary, manifest })
}
