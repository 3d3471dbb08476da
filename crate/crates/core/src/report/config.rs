use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::entity::DEFAULT_P0;
use crate::ingest::InputFormat;
use crate::portfolio::BASE_YEAR;
use crate::{Error, Result};

/// Every config key with its default and meaning, as shown by `--help`.
pub const CONFIG_KEYS: &[(&str, &str, &str)] = &[
    (
        "input",
        "(required)",
        "raw publication records, relative to the config file",
    ),
    ("format", "jsonl", "input format: csv or jsonl"),
    ("g", "7", "number of technology areas (co-clusters), 1..=64"),
    (
        "restarts",
        "10",
        "random restarts per co-clustering fit, 1..=1000",
    ),
    ("max_iter", "100", "sweep limit per restart, 1..=10000"),
    ("seed", "42", "seed for every random choice"),
    (
        "g_min",
        "2",
        "smallest cluster count on the modularity curve",
    ),
    (
        "g_max",
        "12",
        "largest cluster count on the modularity curve",
    ),
    ("top_k", "25", "keywords reported per cluster, 1..=1000"),
    (
        "stopwords",
        "(built-in)",
        "stopword list, one word per line",
    ),
    (
        "p0",
        "99",
        "percentile of name-edge weights used as the split threshold, 85..=99",
    ),
    (
        "match_threshold",
        "(Otsu)",
        "similarity needed to link an original name, 0..=100",
    ),
    ("lexicon", "(built-in)", "category keyword lexicon"),
    (
        "aliases",
        "(none)",
        "entity families, lines of `FAMILY = NAME; NAME`",
    ),
    ("base_year", "2004", "year zero of the relative-year axis"),
    ("bins", "20", "bins per axis for vector fields, 1..=500"),
    ("heatmap_bins", "50", "bins per axis for heat maps, 1..=500"),
    ("top_n", "10", "regions per year in ranking tables, 1..=100"),
    (
        "licensor_top_k",
        "10",
        "rows in the top licensor tables, 1..=1000",
    ),
];

/// Flat key/value configuration of a full run; see [`CONFIG_KEYS`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub format: InputFormat,
    pub g: usize,
    pub restarts: usize,
    pub max_iter: usize,
    pub seed: u64,
    pub g_min: usize,
    pub g_max: usize,
    pub top_k: usize,
    pub stopwords: Option<PathBuf>,
    pub p0: f64,
    pub match_threshold: Option<f64>,
    pub lexicon: Option<PathBuf>,
    pub aliases: Option<PathBuf>,
    pub base_year: i32,
    pub bins: usize,
    pub heatmap_bins: usize,
    pub top_n: usize,
    pub licensor_top_k: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            input: PathBuf::new(),
            format: InputFormat::Jsonl,
            g: 7,
            restarts: 10,
            max_iter: 100,
            seed: 42,
            g_min: 2,
            g_max: 12,
            top_k: 25,
            stopwords: None,
            p0: DEFAULT_P0,
            match_threshold: None,
            lexicon: None,
            aliases: None,
            base_year: BASE_YEAR,
            bins: 20,
            heatmap_bins: 50,
            top_n: 10,
            licensor_top_k: 10,
        }
    }
}

fn in_range<T: PartialOrd + std::fmt::Display>(key: &str, v: T, lo: T, hi: T) -> Result<()> {
    if v < lo || v > hi {
        return Err(Error::Config(format!("{key} = {v} outside [{lo}, {hi}]")));
    }
    Ok(())
}

impl PipelineConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let c: Self = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        c.validate()?;
        Ok(c)
    }

    /// Reads a config file; relative paths inside it are taken relative to
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut c = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() && !p.as_os_str().is_empty() {
                *p = base.join(&*p);
            }
        };
        rebase(&mut c.input);
        for p in [&mut c.stopwords, &mut c.lexicon, &mut c.aliases]
            .into_iter()
            .flatten()
        {
            rebase(p);
        }
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        in_range("g", self.g, 1, 64)?;
        in_range("restarts", self.restarts, 1, 1000)?;
        in_range("max_iter", self.max_iter, 1, 10_000)?;
        in_range("g_min", self.g_min, 2, 64)?;
        in_range("g_max", self.g_max, self.g_min, 64)?;
        in_range("top_k", self.top_k, 1, 1000)?;
        in_range("p0", self.p0, 85.0, 99.0)?;
        if let Some(t) = self.match_threshold {
            in_range("match_threshold", t, 0.0, 100.0)?;
        }
        in_range("base_year", self.base_year, 1900, 2100)?;
        in_range("bins", self.bins, 1, 500)?;
        in_range("heatmap_bins", self.heatmap_bins, 1, 500)?;
        in_range("top_n", self.top_n, 1, 100)?;
        in_range("licensor_top_k", self.licensor_top_k, 1, 1000)?;
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the serialized config, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }
}

/// Multi-line description of every key, for `--help`.
pub fn config_help() -> String {
    let mut s = String::from("Config keys (flat TOML, `key = value`):\n");
    for (k, d, what) in CONFIG_KEYS {
        s.push_str(&format!("  {k:<16} {what} [default: {d}]\n"));
    }
    s
}
