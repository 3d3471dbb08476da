use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::category::{majority_category, Category, Lexicon};
use super::credits::{region_from_address, UNKNOWN_REGION};
use super::graph::{build_name_graphs, components_at, edge_threshold, resolve_name, Component};
use super::otsu::Histogram;
use super::similarity::{normalize_name, similarity_normalized};
use crate::ingest::{DwpiAssignee, PatentRecord};
use crate::{Error, Result};

pub const DEFAULT_P0: f64 = 99.0;
pub const REGISTRY_VERSION: u32 = 1;
/// How many global candidates are considered when a name has no same-record match.
pub const GLOBAL_CANDIDATES: usize = 5;
/// Code given to entities created for unmatched original names.
pub const ORIGINAL_CODE: &str = "ORIG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntityInfo {
    pub code: String,
    pub names: Vec<String>,
    pub category: Category,
    /// Two-letter region, `??` when unknown.
    pub region: String,
}

/// Resolved first assignees of one patent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatentEntities {
    pub entities: Vec<String>,
    pub region: String,
    pub year: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityRegistry {
    pub version: u32,
    pub p0: f64,
    pub edge_threshold: f64,
    pub match_threshold: Option<f64>,
    pub names: BTreeMap<String, String>,
    pub entities: BTreeMap<String, EntityInfo>,
    #[serde(default)]
    pub patents: BTreeMap<String, PatentEntities>,
}

fn check_p0(p0: f64) -> Result<()> {
    if !(85.0..=99.0).contains(&p0) {
        return Err(Error::invalid(format!("p0 must lie in [85, 99], got {p0}")));
    }
    Ok(())
}

impl IdentityRegistry {
    pub fn entity_of(&self, name: &str) -> Option<&str> {
        self.names.get(name).map(String::as_str)
    }

    pub fn category_of(&self, entity: &str) -> Option<Category> {
        self.entities.get(entity).map(|e| e.category)
    }

    pub fn component(&self, entity: &str) -> Option<Component> {
        self.entities.get(entity).map(|e| Component {
            entity_id: entity.to_string(),
            code: e.code.clone(),
            names: e.names.clone(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(text)?;
        if r.version != REGISTRY_VERSION {
            return Err(Error::CorpusFormat(format!(
                "unsupported registry version {}",
                r.version
            )));
        }
        Ok(r)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        use std::io::Write;
        crate::fsutil::create_file(path)?
            .write_all(self.to_json()?.as_bytes())
            .map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    /// Registry from already split components. A name found in several
    /// components is kept only in the one [`resolve_name`] picks; components
    /// left without names are dropped.
    pub fn from_components(components: &[Component], lexicon: &Lexicon) -> Self {
        let mut candidates: BTreeMap<&str, Vec<&Component>> = BTreeMap::new();
        for c in components {
            for n in &c.names {
                candidates.entry(n.as_str()).or_default().push(c);
            }
        }
        let mut names = BTreeMap::new();
        let mut members: BTreeMap<&str, Vec<String>> = BTreeMap::new();
        for (name, cands) in &candidates {
            let chosen = resolve_name(name, cands).expect("name has a component");
            names.insert(name.to_string(), chosen.entity_id.clone());
            members
                .entry(chosen.entity_id.as_str())
                .or_default()
                .push(name.to_string());
        }
        let mut entities = BTreeMap::new();
        for c in components {
            if let Some(ns) = members.remove(c.entity_id.as_str()) {
                let category = majority_category(ns.iter().map(|n| lexicon.categorize_name(n)))
                    .unwrap_or(Category::Others);
                entities.insert(
                    c.entity_id.clone(),
                    EntityInfo {
                        code: c.code.clone(),
                        names: ns,
                        category,
                        region: UNKNOWN_REGION.to_string(),
                    },
                );
            }
        }
        Self {
            version: REGISTRY_VERSION,
            p0: 0.0,
            edge_threshold: 0.0,
            match_threshold: None,
            names,
            entities,
            patents: BTreeMap::new(),
        }
    }

    /// Total credit per entity over the resolved patents.
    pub fn entity_credit_totals(&self) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        for p in self.patents.values() {
            let k = p.entities.len() as f64;
            for e in &p.entities {
                *out.entry(e.clone()).or_insert(0.0) += 1.0 / k;
            }
        }
        out
    }

    /// Sets each entity's region to its most frequent known patent region,
    /// smallest code on ties.
    pub fn assign_entity_regions(&mut self) {
        let mut counts: BTreeMap<&str, BTreeMap<&str, usize>> = BTreeMap::new();
        for p in self.patents.values() {
            if p.region == UNKNOWN_REGION {
                continue;
            }
            for e in &p.entities {
                *counts
                    .entry(e.as_str())
                    .or_default()
                    .entry(p.region.as_str())
                    .or_default() += 1;
            }
        }
        let regions: Vec<(String, String)> = counts
            .into_iter()
            .filter_map(|(e, by_region)| {
                let best = by_region
                    .iter()
                    .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))?;
                Some((e.to_string(), best.0.to_string()))
            })
            .collect();
        for (e, r) in regions {
            if let Some(info) = self.entities.get_mut(&e) {
                info.region = r;
            }
        }
    }
}

/// Splits every code's name graph at the `p0`-th percentile of the global
/// edge weights and assigns each name to one entity.
pub fn build_registry(
    pairs: &[DwpiAssignee],
    p0: f64,
    lexicon: &Lexicon,
) -> Result<IdentityRegistry> {
    check_p0(p0)?;
    let graphs = build_name_graphs(pairs);
    let t = edge_threshold(&graphs, p0);
    log::info!("{} codes, edge threshold {t:.2} at p0 = {p0}", graphs.len());
    let components = components_at(&graphs, t);
    let mut reg = IdentityRegistry::from_components(&components, lexicon);
    reg.p0 = p0;
    reg.edge_threshold = t;
    Ok(reg)
}

/// Every DWPI (name, code) pair in a corpus.
pub fn collect_dwpi_pairs(records: &[PatentRecord]) -> Vec<DwpiAssignee> {
    let set: BTreeSet<&DwpiAssignee> = records
        .iter()
        .flat_map(|r| r.assignee_name_pool.iter())
        .collect();
    set.into_iter().cloned().collect()
}

fn best_same_record<'r>(orig: &str, record: &'r PatentRecord) -> Option<(f64, &'r str)> {
    let mut best: Option<(f64, &'r str)> = None;
    for d in &record.assignee_name_pool {
        let s = similarity_normalized(orig, &normalize_name(&d.name));
        let better = match best {
            None => true,
            Some((bs, bn)) => s > bs || (s == bs && d.name.as_str() < bn),
        };
        if better {
            best = Some((s, d.name.as_str()));
        }
    }
    best
}

/// Histogram of the best same-record similarity of every original
/// assignee name, the input to the Otsu match threshold.
pub fn same_record_histogram(records: &[PatentRecord]) -> Histogram {
    let scores: Vec<f64> = records
        .par_iter()
        .flat_map_iter(|r| {
            r.original_assignees.iter().filter_map(move |a| {
                let n = normalize_name(&a.name);
                if n.is_empty() {
                    return None;
                }
                best_same_record(&n, r).map(|b| b.0)
            })
        })
        .collect();
    let mut h = Histogram::similarity();
    for s in scores {
        h.add(s);
    }
    h
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchSummary {
    pub same_record: usize,
    pub global: usize,
    pub singleton: usize,
    /// Patents without original names, credited through their DWPI names.
    pub from_dwpi_pool: usize,
    /// Patents left with no entity at all.
    pub unresolved: usize,
}

/// Which stage linked a name to its entity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchStage {
    SameRecord,
    Global,
    Singleton,
}

/// Resolves free-text assignee names against a registry's DWPI names.
///
/// A name is matched against the DWPI names of its own record first;
/// failing that, against the best global DWPI names; failing that, it
/// becomes a new single-name entity.
pub struct NameMatcher<'l> {
    dwpi: Vec<(String, String)>,
    global_cache: HashMap<String, Option<String>>,
    threshold: f64,
    lexicon: &'l Lexicon,
}

impl<'l> NameMatcher<'l> {
    pub fn new(registry: &IdentityRegistry, threshold: f64, lexicon: &'l Lexicon) -> Self {
        let dwpi = registry
            .names
            .iter()
            .filter(|(_, e)| !e.starts_with(ORIGINAL_CODE))
            .map(|(n, _)| (normalize_name(n), n.clone()))
            .collect();
        Self {
            dwpi,
            global_cache: HashMap::new(),
            threshold,
            lexicon,
        }
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// `None` only for names with no alphanumeric content.
    pub fn resolve(
        &mut self,
        name: &str,
        record: Option<&PatentRecord>,
        registry: &mut IdentityRegistry,
    ) -> Option<(String, MatchStage)> {
        let norm = normalize_name(name);
        if norm.is_empty() {
            return None;
        }
        if let Some((s, dn)) = record.and_then(|r| best_same_record(&norm, r)) {
            if s >= self.threshold {
                if let Some(e) = registry.names.get(dn) {
                    return Some((e.clone(), MatchStage::SameRecord));
                }
            }
        }
        let (dwpi, threshold) = (&self.dwpi, self.threshold);
        let found = self
            .global_cache
            .entry(norm.clone())
            .or_insert_with(|| global_match(name, &norm, dwpi, registry, threshold))
            .clone();
        if let Some(e) = found {
            return Some((e, MatchStage::Global));
        }
        let id = format!("{ORIGINAL_CODE}#{norm}");
        let lexicon = self.lexicon;
        let info = registry
            .entities
            .entry(id.clone())
            .or_insert_with(|| EntityInfo {
                code: ORIGINAL_CODE.to_string(),
                names: Vec::new(),
                category: lexicon.categorize_name(name),
                region: UNKNOWN_REGION.to_string(),
            });
        if !info.names.iter().any(|n| n == name) {
            info.names.push(name.to_string());
            info.names.sort();
            info.category =
                majority_category(info.names.iter().map(|n| lexicon.categorize_name(n)))
                    .unwrap_or(Category::Others);
        }
        registry
            .names
            .entry(name.to_string())
            .or_insert_with(|| id.clone());
        Some((id, MatchStage::Singleton))
    }
}

/// Links original assignee names to registry entities through
/// [`NameMatcher`] and records the resolved first assignees of every patent.
/// Patents without original names fall back to their DWPI names.
pub fn match_original_names(
    records: &[PatentRecord],
    registry: &mut IdentityRegistry,
    threshold: f64,
    lexicon: &Lexicon,
) -> MatchSummary {
    registry.match_threshold = Some(threshold);
    let mut matcher = NameMatcher::new(registry, threshold, lexicon);
    let mut summary = MatchSummary::default();

    let mut sorted: Vec<&PatentRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.application_id.cmp(&b.application_id));
    for rec in sorted {
        let mut entities: Vec<String> = Vec::new();
        if rec.original_assignees.is_empty() {
            for d in &rec.assignee_name_pool {
                if let Some(e) = registry.names.get(&d.name) {
                    if !entities.contains(e) {
                        entities.push(e.clone());
                    }
                }
            }
            if !entities.is_empty() {
                summary.from_dwpi_pool += 1;
            }
        }
        for a in &rec.original_assignees {
            let Some((e, stage)) = matcher.resolve(&a.name, Some(rec), registry) else {
                continue;
            };
            match stage {
                MatchStage::SameRecord => summary.same_record += 1,
                MatchStage::Global => summary.global += 1,
                MatchStage::Singleton => summary.singleton += 1,
            }
            if !entities.contains(&e) {
                entities.push(e);
            }
        }
        if entities.is_empty() {
            summary.unresolved += 1;
            log::debug!("{}: no assignee could be resolved", rec.application_id);
            continue;
        }
        let region = region_from_address(rec.first_assignee_address()).unwrap_or_else(|| {
            log::warn!(
                "{}: no region in address {:?}",
                rec.application_id,
                rec.first_assignee_address()
            );
            UNKNOWN_REGION.to_string()
        });
        registry.patents.insert(
            rec.application_id.clone(),
            PatentEntities {
                entities,
                region,
                year: rec.year,
            },
        );
    }
    registry.assign_entity_regions();
    summary
}

fn global_match(
    raw: &str,
    norm: &str,
    dwpi: &[(String, String)],
    registry: &IdentityRegistry,
    threshold: f64,
) -> Option<String> {
    let mut hits: Vec<(f64, &str)> = dwpi
        .par_iter()
        .filter_map(|(n, raw_name)| {
            let s = similarity_normalized(norm, n);
            (s >= threshold).then_some((s, raw_name.as_str()))
        })
        .collect();
    hits.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(b.1)));
    hits.truncate(GLOBAL_CANDIDATES);
    let ids: BTreeSet<&str> = hits
        .iter()
        .filter_map(|(_, n)| registry.entity_of(n))
        .collect();
    let comps: Vec<Component> = ids
        .into_iter()
        .filter_map(|e| registry.component(e))
        .collect();
    let refs: Vec<&Component> = comps.iter().collect();
    resolve_name(raw, &refs).map(|c| c.entity_id.clone())
}
