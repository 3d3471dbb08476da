use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::category::{majority_category, Category};
use super::registry::{IdentityRegistry, PatentEntities};
use crate::{Error, Result};

pub const UNKNOWN_REGION: &str = "??";

/// Trailing two-letter country token of an address, uppercased.
pub fn region_from_address(address: &str) -> Option<String> {
    let last = address.rsplit(',').next()?.trim();
    if last.len() == 2 && last.chars().all(|c| c.is_ascii_alphabetic()) {
        Some(last.to_ascii_uppercase())
    } else {
        None
    }
}

/// Credits of one patent.
#[derive(Debug, Clone, PartialEq)]
pub struct CreditRow {
    pub application_id: String,
    pub region: String,
    pub category: Category,
    pub credits: Vec<(String, f64)>,
}

impl CreditRow {
    pub fn total(&self) -> f64 {
        self.credits.iter().map(|c| c.1).sum()
    }
}

/// Splits one patent evenly across its distinct first assignees. The
/// patent's category is the majority over those entities.
pub fn allocate_credits(
    application_id: &str,
    patent: &PatentEntities,
    registry: &IdentityRegistry,
) -> Result<CreditRow> {
    let mut distinct: Vec<&str> = Vec::new();
    for e in &patent.entities {
        if !distinct.contains(&e.as_str()) {
            distinct.push(e);
        }
    }
    if distinct.is_empty() {
        return Err(Error::invalid(format!(
            "{application_id}: no resolved first assignee"
        )));
    }
    let mut cats = Vec::with_capacity(distinct.len());
    for e in &distinct {
        cats.push(
            registry
                .category_of(e)
                .ok_or_else(|| Error::invalid(format!("{application_id}: unknown entity {e}")))?,
        );
    }
    let share = 1.0 / distinct.len() as f64;
    Ok(CreditRow {
        application_id: application_id.to_string(),
        region: patent.region.clone(),
        category: majority_category(cats).unwrap_or(Category::Others),
        credits: distinct
            .into_iter()
            .map(|e| (e.to_string(), share))
            .collect(),
    })
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    application_id: String,
    region: String,
    category: Category,
    entity_id: String,
    credit: f64,
}

/// Credits of every resolved patent, ordered by application id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CreditLedger {
    pub rows: Vec<CreditRow>,
}

impl CreditLedger {
    pub fn from_registry(registry: &IdentityRegistry) -> Result<Self> {
        let rows = registry
            .patents
            .iter()
            .map(|(id, p)| allocate_credits(id, p, registry))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rows })
    }

    pub fn credited_patents(&self) -> usize {
        self.rows.len()
    }

    pub fn entity_totals(&self) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        for r in &self.rows {
            for (e, c) in &r.credits {
                *out.entry(e.clone()).or_insert(0.0) += c;
            }
        }
        out
    }

    pub fn region_totals(&self) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        for r in &self.rows {
            *out.entry(r.region.clone()).or_insert(0.0) += r.total();
        }
        out
    }

    /// One line per (patent, entity): `application_id,region,category,entity_id,credit`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        for r in &self.rows {
            for (e, c) in &r.credits {
                wtr.serialize(CsvRow {
                    application_id: r.application_id.clone(),
                    region: r.region.clone(),
                    category: r.category,
                    entity_id: e.clone(),
                    credit: *c,
                })?;
            }
        }
        wtr.flush().map_err(|e| Error::io("<credits>", e))?;
        Ok(())
    }

    /// Reads what [`write_csv`](Self::write_csv) produced; `#` lines are skipped.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
        let mut rows: Vec<CreditRow> = Vec::new();
        for rec in rdr.deserialize() {
            let rec: CsvRow = rec?;
            match rows.last_mut() {
                Some(last) if last.application_id == rec.application_id => {
                    last.credits.push((rec.entity_id, rec.credit))
                }
                _ => rows.push(CreditRow {
                    application_id: rec.application_id,
                    region: rec.region,
                    category: rec.category,
                    credits: vec![(rec.entity_id, rec.credit)],
                }),
            }
        }
        Ok(Self { rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entity::registry::{EntityInfo, REGISTRY_VERSION};

    #[test]
    fn regions() {
        assert_eq!(
            region_from_address("Nanchang, Jiangxi, 330013, CN").as_deref(),
            Some("CN")
        );
        assert_eq!(region_from_address("Seoul, kr").as_deref(), Some("KR"));
        assert_eq!(region_from_address("Nowhere 12345"), None);
        assert_eq!(region_from_address("Berlin, D1"), None);
        assert_eq!(region_from_address(""), None);
    }

    fn registry(patents: &[(&str, &[&str])]) -> IdentityRegistry {
        let mut entities = BTreeMap::new();
        for (id, cat) in [
            ("U#0", Category::University),
            ("C#0", Category::Corporation),
            ("C#1", Category::Corporation),
        ] {
            entities.insert(
                id.to_string(),
                EntityInfo {
                    code: id[..1].into(),
                    names: vec![id.into()],
                    category: cat,
                    region: "US".into(),
                },
            );
        }
        IdentityRegistry {
            version: REGISTRY_VERSION,
            p0: 99.0,
            edge_threshold: 90.0,
            match_threshold: None,
            names: BTreeMap::new(),
            entities,
            patents: patents
                .iter()
                .map(|(id, es)| {
                    (
                        id.to_string(),
                        PatentEntities {
                            entities: es.iter().map(|s| s.to_string()).collect(),
                            region: "US".into(),
                            year: 2010,
                        },
                    )
                })
                .collect(),
        }
    }

    #[test]
    fn fractional_split_and_category() {
        let reg = registry(&[
            ("P1", &["C#0"]),
            ("P2", &["U#0", "C#0"]),
            ("P3", &["C#0", "C#1", "C#0"]),
        ]);
        let l = CreditLedger::from_registry(&reg).unwrap();
        assert_eq!(l.rows[0].credits, vec![("C#0".to_string(), 1.0)]);
        assert_eq!(l.rows[1].category, Category::Others);
        assert_eq!(l.rows[1].credits[0].1, 0.5);
        assert_eq!(l.rows[2].credits.len(), 2);
        assert_eq!(l.rows[2].category, Category::Corporation);
        let totals = l.entity_totals();
        assert!((totals["C#0"] - 2.0).abs() < 1e-12);
        assert!((totals.values().sum::<f64>() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn csv_round_trip() {
        let reg = registry(&[("P1", &["C#0"]), ("P2", &["U#0", "C#1"])]);
        let l = CreditLedger::from_registry(&reg).unwrap();
        let mut buf = b"# header comment\n".to_vec();
        l.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("application_id,region,category,entity_id,credit\n"));
        assert!(text.contains("P2,US,others,U#0,0.5\n"));
        assert_eq!(CreditLedger::read_csv(&buf[..]).unwrap(), l);
    }

    #[test]
    fn unknown_entity_is_an_error() {
        let reg = registry(&[("P1", &["Q#9"])]);
        assert!(CreditLedger::from_registry(&reg).is_err());
    }
}
