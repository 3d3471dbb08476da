use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::entity::{Category, CreditLedger, UNKNOWN_REGION};
use crate::{Error, Result};

/// A credited patent with its technology area and year attached.
#[derive(Debug, Clone, PartialEq)]
pub struct CreditedPatent {
    pub application_id: String,
    pub year: i32,
    pub area: usize,
    pub region: String,
    pub category: Category,
    pub credits: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioData {
    pub g: usize,
    pub patents: Vec<CreditedPatent>,
}

/// Attaches areas and years to ledger rows. Rows without an area (patents
/// dropped before clustering) or without a year are skipped.
pub fn join_credits(
    ledger: &CreditLedger,
    areas: &BTreeMap<String, usize>,
    years: &BTreeMap<String, i32>,
    g: usize,
) -> Result<PortfolioData> {
    let mut patents = Vec::with_capacity(ledger.rows.len());
    let mut skipped = 0usize;
    for r in &ledger.rows {
        let (Some(&area), Some(&year)) =
            (areas.get(&r.application_id), years.get(&r.application_id))
        else {
            skipped += 1;
            continue;
        };
        if area >= g {
            return Err(Error::invalid(format!(
                "{}: area {area} outside 0..{g}",
                r.application_id
            )));
        }
        patents.push(CreditedPatent {
            application_id: r.application_id.clone(),
            year,
            area,
            region: r.region.clone(),
            category: r.category,
            credits: r.credits.clone(),
        });
    }
    if skipped > 0 {
        log::info!("{skipped} credited patents have no area or year and are left out");
    }
    Ok(PortfolioData { g, patents })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupBy {
    None,
    Region,
    Category,
}

impl GroupBy {
    pub const ALL: [GroupBy; 3] = [GroupBy::None, GroupBy::Region, GroupBy::Category];

    pub fn as_str(self) -> &'static str {
        match self {
            GroupBy::None => "none",
            GroupBy::Region => "region",
            GroupBy::Category => "category",
        }
    }

    fn key(self, p: &CreditedPatent) -> String {
        match self {
            GroupBy::None => "all".to_string(),
            GroupBy::Region => p.region.clone(),
            GroupBy::Category => p.category.as_str().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProportionRow {
    pub group: String,
    pub year: i32,
    pub counts: Vec<f64>,
    pub proportions: Vec<f64>,
}

/// Patent counts per area for every (group, year), with shares summing to 1.
pub fn proportions_timeseries(data: &PortfolioData, group_by: GroupBy) -> Vec<ProportionRow> {
    let mut counts: BTreeMap<(String, i32), Vec<f64>> = BTreeMap::new();
    for p in &data.patents {
        counts
            .entry((group_by.key(p), p.year))
            .or_insert_with(|| vec![0.0; data.g])[p.area] += 1.0;
    }
    counts
        .into_iter()
        .map(|((group, year), counts)| {
            let total: f64 = counts.iter().sum();
            let proportions = counts.iter().map(|c| c / total).collect();
            ProportionRow {
                group,
                year,
                counts,
                proportions,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingRow {
    pub year: i32,
    pub rank: usize,
    pub region: String,
    pub count: f64,
}

fn ranked(counts: BTreeMap<String, f64>) -> Vec<(String, f64)> {
    let mut v: Vec<(String, f64)> = counts.into_iter().collect();
    v.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    v
}

/// Per year, the `top_n` regions by application count, optionally within
/// one area. Unknown regions are not ranked.
pub fn region_rankings(data: &PortfolioData, area: Option<usize>, top_n: usize) -> Vec<RankingRow> {
    let mut by_year: BTreeMap<i32, BTreeMap<String, f64>> = BTreeMap::new();
    for p in &data.patents {
        if p.region == UNKNOWN_REGION || area.is_some_and(|a| a != p.area) {
            continue;
        }
        *by_year
            .entry(p.year)
            .or_default()
            .entry(p.region.clone())
            .or_default() += 1.0;
    }
    let mut out = Vec::new();
    for (year, counts) in by_year {
        for (i, (region, count)) in ranked(counts).into_iter().take(top_n).enumerate() {
            out.push(RankingRow {
                year,
                rank: i + 1,
                region,
                count,
            });
        }
    }
    out
}

/// Application count per region over all years, largest first.
pub fn region_totals(data: &PortfolioData) -> Vec<(String, f64)> {
    let mut counts: BTreeMap<String, f64> = BTreeMap::new();
    for p in &data.patents {
        *counts.entry(p.region.clone()).or_default() += 1.0;
    }
    ranked(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn patent(id: &str, year: i32, area: usize, region: &str) -> CreditedPatent {
        CreditedPatent {
            application_id: id.into(),
            year,
            area,
            region: region.into(),
            category: Category::Corporation,
            credits: vec![(format!("E{id}"), 1.0)],
        }
    }

    #[test]
    fn single_patent_share() {
        let d = PortfolioData {
            g: 7,
            patents: vec![patent("a", 2010, 2, "CN")],
        };
        let rows = proportions_timeseries(&d, GroupBy::None);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].year, 2010);
        assert_eq!(rows[0].proportions[2], 1.0);
    }

    #[test]
    fn rankings_order_and_ties() {
        let mut ps = Vec::new();
        for i in 0..5 {
            ps.push(patent(&format!("a{i}"), 2015, 0, "US"));
        }
        for i in 0..3 {
            ps.push(patent(&format!("b{i}"), 2015, 1, "KR"));
            ps.push(patent(&format!("c{i}"), 2015, 1, "JP"));
        }
        ps.push(patent("d", 2015, 1, UNKNOWN_REGION));
        let d = PortfolioData { g: 2, patents: ps };
        let r = region_rankings(&d, None, 10);
        let names: Vec<_> = r.iter().map(|x| (x.rank, x.region.as_str())).collect();
        assert_eq!(names, vec![(1, "US"), (2, "JP"), (3, "KR")]);
        let r = region_rankings(&d, Some(1), 1);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].region, "JP");
    }

    #[test]
    fn join_skips_unclustered() {
        use crate::entity::CreditRow;
        let ledger = CreditLedger {
            rows: vec![
                CreditRow {
                    application_id: "a".into(),
                    region: "CN".into(),
                    category: Category::University,
                    credits: vec![("u".into(), 1.0)],
                },
                CreditRow {
                    application_id: "b".into(),
                    region: "CN".into(),
                    category: Category::University,
                    credits: vec![("u".into(), 1.0)],
                },
            ],
        };
        let areas = BTreeMap::from([("a".to_string(), 1usize)]);
        let years = BTreeMap::from([("a".to_string(), 2011), ("b".to_string(), 2012)]);
        let d = join_credits(&ledger, &areas, &years, 2).unwrap();
        assert_eq!(d.patents.len(), 1);
        assert!(join_credits(&ledger, &areas, &years, 1).is_err());
    }
}
