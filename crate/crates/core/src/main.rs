use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand};

use patlas::coclus::{fit, sensitivity_subsample, FitParams, SensitivityParams};
use patlas::entity::{CreditLedger, IdentityRegistry, Lexicon};
use patlas::ingest::{
    filter_and_build_matrix, read_corpus, write_corpus, write_records, Axis, InputFormat,
};
use patlas::report::{
    self, ArtifactDir, AtStage, ClusterFile, Meta, PipelineConfig, PortfolioParams, Stage,
    StageError,
};
use patlas::synth::{generate_corpus, CorpusSpec};
use patlas::topics::Stopwords;
use patlas::transactions::AliasMap;
use patlas::{Error, Result};

#[derive(Parser)]
#[command(name = "patlas", version, about = "Patent-portfolio analytics")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, clap::Args)]
struct FitArgs {
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse raw records, merge publications per application, write a corpus file.
    Ingest {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "jsonl")]
        format: InputFormat,
        #[arg(long)]
        out: PathBuf,
        /// Also write row and column degree frequencies.
        #[arg(long)]
        degrees: Option<PathBuf>,
    },
    /// Co-cluster the patent x subclass matrix.
    Cluster {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 7)]
        g: usize,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Best modularity for every cluster count in a range, as CSV (g, modularity).
    ClusterCurve {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 2)]
        g_min: usize,
        #[arg(long, default_value_t = 20)]
        g_max: usize,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Refit on random subsamples of rows or columns; writes JSON.
    ClusterSensitivity {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value = "rows")]
        axis: Axis,
        #[arg(long, default_value_t = 0.9)]
        fraction: f64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        g: usize,
        #[arg(long, default_value_t = 2)]
        g_min: usize,
        #[arg(long, default_value_t = 12)]
        g_max: usize,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Top over-represented words per cluster.
    Keywords {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        clusters: PathBuf,
        #[arg(long, default_value_t = 25)]
        top: usize,
        #[arg(long)]
        stopwords: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Resolve assignee names into entities.
    Resolve {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 99.0)]
        p0: f64,
        /// Fixed name-matching threshold; Otsu's threshold when absent.
        #[arg(long)]
        match_threshold: Option<f64>,
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Split every resolved patent's credit across its first assignees.
    Credits {
        #[arg(long)]
        registry: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Portfolio tables and charts.
    Portfolio {
        #[arg(long)]
        credits: PathBuf,
        #[arg(long)]
        clusters: PathBuf,
        /// Source of application years; defaults to registry.json or corpus.bin next to the credits file.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, conflicts_with = "corpus")]
        registry: Option<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = patlas::portfolio::BASE_YEAR)]
        base_year: i32,
        #[arg(long, default_value_t = 20)]
        bins: usize,
        #[arg(long, default_value_t = 50)]
        heatmap_bins: usize,
        #[arg(long, default_value_t = 10)]
        top_n: usize,
    },
    /// Reassignment and licensing statistics of US-filed patents.
    Transactions {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        registry: PathBuf,
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        aliases: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        top_k: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        stats: PathBuf,
    },
    /// Run every stage from a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Write a synthetic corpus with its planted answers and a matching config.
    Generate {
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 2000)]
        patents: usize,
        #[arg(long, default_value_t = 7)]
        g: usize,
        #[arg(long, default_value_t = 70)]
        codes: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

type CmdResult = std::result::Result<(), StageError>;

fn write(path: &Path, text: &str) -> Result<()> {
    report::write_file(path, text.as_bytes())
}

fn load_matrix(corpus: &Path) -> Result<patlas::ingest::SparseBinaryMatrix> {
    filter_and_build_matrix(&read_corpus(corpus)?)
}

fn years_for(
    credits: &Path,
    corpus: Option<PathBuf>,
    registry: Option<PathBuf>,
) -> Result<BTreeMap<String, i32>> {
    let dir = credits.parent().unwrap_or(Path::new(""));
    let registry = registry.or_else(|| {
        (corpus.is_none())
            .then(|| dir.join("registry.json"))
            .filter(|p| p.exists())
    });
    if let Some(r) = registry {
        let reg = IdentityRegistry::load(&r)?;
        return Ok(reg
            .patents
            .iter()
            .map(|(id, p)| (id.clone(), p.year))
            .collect());
    }
    let corpus = corpus.unwrap_or_else(|| dir.join("corpus.bin"));
    Ok(read_corpus(&corpus)?
        .into_iter()
        .map(|r| (r.application_id, r.year))
        .collect())
}

fn run(cmd: Cmd, meta: Meta) -> CmdResult {
    match cmd {
        Cmd::Ingest {
            input,
            format,
            out,
            degrees,
        } => {
            let records = report::ingest(&input, format).at(Stage::Ingest)?;
            write_corpus(&out, &records).at(Stage::Ingest)?;
            if let Some(d) = degrees {
                let m = filter_and_build_matrix(&records).at(Stage::Ingest)?;
                write(&d, &report::degree_rows(&m, &meta).at(Stage::Ingest)?).at(Stage::Ingest)?;
            }
        }
        Cmd::Cluster {
            corpus,
            g,
            fit: f,
            out,
        } => {
            let m = load_matrix(&corpus).at(Stage::Ingest)?;
            let params = FitParams {
                g,
                seed: f.seed,
                max_iter: f.max_iter,
                restarts: f.restarts,
            };
            let c = fit(&m, &params).at(Stage::Cluster)?;
            log::info!("g = {g}, modularity {:.4}", c.modularity);
            ClusterFile::new(&m, &c, f.seed, f.restarts, meta)
                .save(&out)
                .at(Stage::Cluster)?;
        }
        Cmd::ClusterCurve {
            corpus,
            g_min,
            g_max,
            fit: f,
            out,
        } => {
            let m = load_matrix(&corpus).at(Stage::Ingest)?;
            let params = FitParams {
                g: g_min,
                seed: f.seed,
                max_iter: f.max_iter,
                restarts: f.restarts,
            };
            let cv = report::curve(&m, g_min, g_max, &params).at(Stage::Cluster)?;
            write(&out, &report::curve_csv(&cv, &meta).at(Stage::Cluster)?).at(Stage::Cluster)?;
        }
        Cmd::ClusterSensitivity {
            corpus,
            axis,
            fraction,
            trials,
            g,
            g_min,
            g_max,
            fit: f,
            out,
        } => {
            let m = load_matrix(&corpus).at(Stage::Ingest)?;
            let p = SensitivityParams {
                axis,
                fraction,
                trials,
                g,
                g_range: g_min..=g_max,
                seed: f.seed,
                restarts: f.restarts,
                max_iter: f.max_iter,
            };
            let t = sensitivity_subsample(&m, &p).at(Stage::Cluster)?;
            #[derive(serde::Serialize)]
            struct Out<'a> {
                params: &'a SensitivityParams,
                trials: &'a [patlas::coclus::SensitivityTrial],
            }
            let text = report::json_string(
                &meta,
                &Out {
                    params: &p,
                    trials: &t,
                },
            )
            .at(Stage::Cluster)?;
            write(&out, &text).at(Stage::Cluster)?;
        }
        Cmd::Keywords {
            corpus,
            clusters,
            top,
            stopwords,
            out,
        } => {
            let records = read_corpus(&corpus).at(Stage::Ingest)?;
            let cf = ClusterFile::load(&clusters).at(Stage::Keywords)?;
            let sw = match stopwords {
                Some(p) => Stopwords::load(&p).at(Stage::Keywords)?,
                None => Stopwords::default(),
            };
            let kw = report::keywords(&records, &cf, &sw, top).at(Stage::Keywords)?;
            write(&out, &report::keywords_csv(&kw, &meta).at(Stage::Keywords)?)
                .at(Stage::Keywords)?;
        }
        Cmd::Resolve {
            corpus,
            p0,
            match_threshold,
            lexicon,
            out,
        } => {
            let records = read_corpus(&corpus).at(Stage::Ingest)?;
            let lex = match lexicon {
                Some(p) => Lexicon::load(&p).at(Stage::Resolve)?,
                None => Lexicon::default(),
            };
            if !(85.0..=99.0).contains(&p0) {
                return Err(Error::Config(format!("p0 = {p0} outside [85, 99]")))
                    .at(Stage::Resolve);
            }
            let (reg, res) =
                report::resolve(&records, p0, match_threshold, &lex).at(Stage::Resolve)?;
            log::info!("{}", serde_json::to_string(&res).unwrap_or_default());
            reg.save(&out).at(Stage::Resolve)?;
        }
        Cmd::Credits { registry, out } => {
            let reg = IdentityRegistry::load(&registry).at(Stage::Credits)?;
            let ledger = CreditLedger::from_registry(&reg).at(Stage::Credits)?;
            write(
                &out,
                &report::credits_csv(&ledger, &meta).at(Stage::Credits)?,
            )
            .at(Stage::Credits)?;
        }
        Cmd::Portfolio {
            credits,
            clusters,
            corpus,
            registry,
            out_dir,
            base_year,
            bins,
            heatmap_bins,
            top_n,
        } => {
            let file = std::fs::File::open(&credits)
                .map_err(|e| Error::io(&credits, e))
                .at(Stage::Portfolio)?;
            let ledger = CreditLedger::read_csv(file).at(Stage::Portfolio)?;
            let cf = ClusterFile::load(&clusters).at(Stage::Portfolio)?;
            let years = years_for(&credits, corpus, registry).at(Stage::Portfolio)?;
            let data = report::portfolio_data(&ledger, &cf, &years).at(Stage::Portfolio)?;
            let mut out = ArtifactDir::create(&out_dir, meta).at(Stage::Report)?;
            let p = PortfolioParams {
                base_year,
                bins,
                heatmap_bins,
                top_n,
            };
            report::portfolio_outputs(&data, &p, &mut out).at(Stage::Portfolio)?;
            out.finish().at(Stage::Report)?;
        }
        Cmd::Transactions {
            corpus,
            registry,
            lexicon,
            aliases,
            top_k,
            out,
            stats,
        } => {
            let records = read_corpus(&corpus).at(Stage::Ingest)?;
            let mut reg = IdentityRegistry::load(&registry).at(Stage::Transactions)?;
            let lex = match lexicon {
                Some(p) => Lexicon::load(&p).at(Stage::Transactions)?,
                None => Lexicon::default(),
            };
            let al = match aliases {
                Some(p) => AliasMap::load(&p).at(Stage::Transactions)?,
                None => AliasMap::default(),
            };
            let (events, st) = report::transactions(&records, &mut reg, &lex, &al, top_k)
                .at(Stage::Transactions)?;
            write(
                &out,
                &report::events_csv(&events, &meta).at(Stage::Transactions)?,
            )
            .at(Stage::Transactions)?;
            write(
                &stats,
                &report::json_string(&meta, &st).at(Stage::Transactions)?,
            )
            .at(Stage::Transactions)?;
        }
        Cmd::Run { config, out_dir } => {
            let cfg = PipelineConfig::load(&config).at(Stage::Config)?;
            let r = report::run_pipeline(&cfg, &out_dir)?;
            log::info!(
                "{} applications, modularity {:.4}, {} entities, {} artifacts",
                r.summary.applications,
                r.summary.modularity,
                r.summary.resolution.entities,
                r.manifest.artifacts.len()
            );
        }
        Cmd::Generate {
            out_dir,
            patents,
            g,
            codes,
            seed,
        } => {
            let spec = CorpusSpec {
                n_patents: patents,
                g,
                n_codes: codes,
                seed,
                ..CorpusSpec::default()
            };
            let c = generate_corpus(&spec).at(Stage::Config)?;
            std::fs::create_dir_all(&out_dir)
                .map_err(|e| Error::io(&out_dir, e))
                .at(Stage::Report)?;
            write_records(
                &out_dir.join("records.jsonl"),
                &c.records,
                InputFormat::Jsonl,
            )
            .at(Stage::Report)?;
            write(
                &out_dir.join("truth.json"),
                &c.truth.to_json().at(Stage::Report)?,
            )
            .at(Stage::Report)?;
            let cfg = PipelineConfig {
                input: "records.jsonl".into(),
                g,
                seed,
                ..PipelineConfig::default()
            };
            write(&out_dir.join("patlas.toml"), &cfg.to_toml()).at(Stage::Report)?;
            log::info!(
                "{} publications of {} applications",
                c.truth.publications,
                c.truth.applications
            );
        }
    }
    Ok(())
}

fn set_threads() {
    let Ok(v) = std::env::var("PATLAS_THREADS") else {
        return;
    };
    match v.parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
            {
                log::warn!("PATLAS_THREADS ignored: {e}");
            }
        }
        _ => log::warn!("PATLAS_THREADS = {v:?} is not a positive integer"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    set_threads();
    let help = report::config_help() + "\nPATLAS_THREADS caps the number of worker threads.";
    let matches = Cli::command()
        .mut_subcommand("run", |c| c.after_help(help))
        .get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(cli.cmd, Meta::from_args(&args)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
