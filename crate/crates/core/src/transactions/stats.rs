use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::resolve::{TransactionEvent, TransactionKind};
use crate::entity::{Category, IdentityRegistry};

fn pct(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        100.0 * part as f64 / whole as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairShare {
    pub to: Category,
    pub count: usize,
    pub pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OriginReassignment {
    pub origin: Category,
    pub total: usize,
    pub unchanged: usize,
    pub unchanged_pct: f64,
    pub changed: usize,
    pub changed_pct: f64,
    pub transactions: usize,
    /// Share of this origin's transactions going to each category.
    pub pairs: Vec<PairShare>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReassignmentStats {
    pub by_origin: Vec<OriginReassignment>,
}

impl ReassignmentStats {
    pub fn origin(&self, c: Category) -> &OriginReassignment {
        self.by_origin
            .iter()
            .find(|o| o.origin == c)
            .expect("every category is reported")
    }
}

fn in_scope<'a>(
    events: &'a [TransactionEvent],
    origins: &'a BTreeMap<String, Category>,
    kind: TransactionKind,
    include_internal: bool,
) -> impl Iterator<Item = (&'a TransactionEvent, Category)> {
    events.iter().filter_map(move |e| {
        if e.kind != kind || (e.internal && !include_internal) {
            return None;
        }
        origins.get(&e.application_id).map(|&c| (e, c))
    })
}

/// Ownership changes per origin category; `origins` gives the category of
/// every patent in scope.
pub fn reassignment_stats(
    events: &[TransactionEvent],
    origins: &BTreeMap<String, Category>,
    include_internal: bool,
) -> ReassignmentStats {
    let mut changed: BTreeMap<Category, BTreeSet<&str>> = BTreeMap::new();
    let mut pairs: BTreeMap<Category, BTreeMap<Category, usize>> = BTreeMap::new();
    for (e, origin) in in_scope(
        events,
        origins,
        TransactionKind::Reassignment,
        include_internal,
    ) {
        changed.entry(origin).or_default().insert(&e.application_id);
        *pairs
            .entry(origin)
            .or_default()
            .entry(e.to_category)
            .or_default() += 1;
    }
    let by_origin = Category::ALL
        .iter()
        .map(|&origin| {
            let total = origins.values().filter(|&&c| c == origin).count();
            let ch = changed.get(&origin).map_or(0, BTreeSet::len);
            let to = pairs.remove(&origin).unwrap_or_default();
            let transactions: usize = to.values().sum();
            OriginReassignment {
                origin,
                total,
                unchanged: total - ch,
                unchanged_pct: pct(total - ch, total),
                changed: ch,
                changed_pct: pct(ch, total),
                transactions,
                pairs: to
                    .into_iter()
                    .map(|(to, count)| PairShare {
                        to,
                        count,
                        pct: pct(count, transactions),
                    })
                    .collect(),
            }
        })
        .collect();
    ReassignmentStats { by_origin }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OriginLicensing {
    pub origin: Category,
    pub total: usize,
    /// Times licensed → number of patents.
    pub histogram: BTreeMap<usize, usize>,
    pub licensed: usize,
    pub licensed_pct: f64,
    pub instances: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LicensorRow {
    pub entity: String,
    pub name: String,
    pub credit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LicenseeRow {
    pub entity: String,
    pub name: String,
    pub from_corporation: usize,
    pub from_university: usize,
    pub from_others: usize,
}

impl LicenseeRow {
    pub fn total(&self) -> usize {
        self.from_corporation + self.from_university + self.from_others
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LicensingStats {
    pub by_origin: Vec<OriginLicensing>,
    pub total_instances: usize,
    /// Per licensor category, the `top_k` entities by credit of their
    /// licensed patents.
    pub top_licensors: BTreeMap<Category, Vec<LicensorRow>>,
    /// Every licensee with its license counts by patent origin.
    pub licensees: Vec<LicenseeRow>,
}

impl LicensingStats {
    pub fn origin(&self, c: Category) -> &OriginLicensing {
        self.by_origin
            .iter()
            .find(|o| o.origin == c)
            .expect("every category is reported")
    }
}

fn display_name(registry: &IdentityRegistry, entity: &str) -> String {
    registry
        .entities
        .get(entity)
        .and_then(|e| e.names.first().cloned())
        .unwrap_or_else(|| entity.to_string())
}

pub fn licensing_stats(
    events: &[TransactionEvent],
    origins: &BTreeMap<String, Category>,
    registry: &IdentityRegistry,
    top_k: usize,
    include_internal: bool,
) -> LicensingStats {
    let mut times: BTreeMap<&str, usize> = BTreeMap::new();
    let mut licensee_counts: BTreeMap<&str, [usize; 3]> = BTreeMap::new();
    for (e, origin) in in_scope(events, origins, TransactionKind::License, include_internal) {
        *times.entry(&e.application_id).or_default() += 1;
        licensee_counts.entry(&e.assignee).or_default()[origin as usize] += 1;
    }
    let by_origin: Vec<OriginLicensing> = Category::ALL
        .iter()
        .map(|&origin| {
            let total = origins.values().filter(|&&c| c == origin).count();
            let mut histogram = BTreeMap::new();
            for (p, &t) in &times {
                if origins[*p] == origin {
                    *histogram.entry(t).or_insert(0) += 1;
                }
            }
            let licensed: usize = histogram.values().sum();
            let instances = histogram.iter().map(|(t, n)| t * n).sum();
            OriginLicensing {
                origin,
                total,
                histogram,
                licensed,
                licensed_pct: pct(licensed, total),
                instances,
            }
        })
        .collect();
    let total_instances = by_origin.iter().map(|o| o.instances).sum();

    let mut credit: BTreeMap<&str, f64> = BTreeMap::new();
    for p in times.keys() {
        if let Some(pe) = registry.patents.get(*p) {
            let share = 1.0 / pe.entities.len() as f64;
            for e in &pe.entities {
                *credit.entry(e).or_default() += share;
            }
        }
    }
    let mut top_licensors: BTreeMap<Category, Vec<LicensorRow>> = BTreeMap::new();
    for (e, c) in credit {
        let cat = registry.category_of(e).unwrap_or(Category::Others);
        top_licensors.entry(cat).or_default().push(LicensorRow {
            entity: e.to_string(),
            name: display_name(registry, e),
            credit: c,
        });
    }
    for rows in top_licensors.values_mut() {
        rows.sort_by(|a, b| {
            b.credit
                .total_cmp(&a.credit)
                .then_with(|| a.name.cmp(&b.name))
                .then_with(|| a.entity.cmp(&b.entity))
        });
        rows.truncate(top_k);
    }

    let mut licensees: Vec<LicenseeRow> = licensee_counts
        .into_iter()
        .map(|(e, c)| LicenseeRow {
            entity: e.to_string(),
            name: display_name(registry, e),
            from_corporation: c[Category::Corporation as usize],
            from_university: c[Category::University as usize],
            from_others: c[Category::Others as usize],
        })
        .collect();
    licensees.sort_by(|a, b| b.total().cmp(&a.total()).then_with(|| a.name.cmp(&b.name)));

    LicensingStats {
        by_origin,
        total_instances,
        top_licensors,
        licensees,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsBlock {
    pub reassignment: ReassignmentStats,
    pub licensing: LicensingStats,
}

/// Both tables, once over all transactions and once without internal ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransactionStats {
    pub all: StatsBlock,
    pub external_only: StatsBlock,
}

pub fn transaction_stats(
    events: &[TransactionEvent],
    origins: &BTreeMap<String, Category>,
    registry: &IdentityRegistry,
    top_k: usize,
) -> TransactionStats {
    let block = |internal| StatsBlock {
        reassignment: reassignment_stats(events, origins, internal),
        licensing: licensing_stats(events, origins, registry, top_k, internal),
    };
    TransactionStats {
        all: block(true),
        external_only: block(false),
    }
}
