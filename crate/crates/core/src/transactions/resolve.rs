use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::parse::{parse_reassignment_field, ReassignmentEntry};
use crate::entity::{
    majority_category, normalize_name, Category, IdentityRegistry, Lexicon, NameMatcher,
};
use crate::ingest::PatentRecord;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransactionKind {
    Reassignment,
    License,
}

impl TransactionKind {
    /// License when the reasons mention `LICENSE` in any case.
    pub fn from_reasons(reasons: &str) -> Self {
        if reasons.to_ascii_uppercase().contains("LICENSE") {
            TransactionKind::License
        } else {
            TransactionKind::Reassignment
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TransactionKind::Reassignment => "reassignment",
            TransactionKind::License => "license",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransactionEvent {
    pub application_id: String,
    pub kind: TransactionKind,
    /// Entity id of the assignor (the licensor for licenses).
    pub assignor: String,
    /// Entity id of the assignee (the licensee for licenses).
    pub assignee: String,
    pub year: i32,
    pub reasons: String,
    pub from_category: Category,
    pub to_category: Category,
    /// Both sides belong to the same entity or alias family.
    pub internal: bool,
}

/// Groups of entity names known to belong together, e.g. subsidiaries.
///
/// Text format, one family per line: `FAMILY = NAME; NAME; ...`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AliasMap {
    family_of_name: BTreeMap<String, String>,
}

impl AliasMap {
    pub fn parse(text: &str) -> Result<Self> {
        let mut family_of_name = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (family, names) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: "alias lines look like `FAMILY = NAME; NAME`".into(),
            })?;
            let family = family.trim().to_string();
            for n in names
                .split(';')
                .map(normalize_name)
                .filter(|n| !n.is_empty())
            {
                family_of_name.insert(n, family.clone());
            }
        }
        Ok(Self { family_of_name })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn is_empty(&self) -> bool {
        self.family_of_name.is_empty()
    }

    pub fn family_of_name(&self, name: &str) -> Option<&str> {
        self.family_of_name
            .get(&normalize_name(name))
            .map(String::as_str)
    }

    /// Family of the first listed member name of an entity.
    pub fn family_of_entity<'a>(
        &'a self,
        registry: &IdentityRegistry,
        entity: &str,
    ) -> Option<&'a str> {
        registry
            .entities
            .get(entity)?
            .names
            .iter()
            .find_map(|n| self.family_of_name(n))
    }
}

fn is_us_filed(r: &PatentRecord) -> bool {
    r.merged_publication_ids.iter().any(|p| p.starts_with("US"))
}

/// Origin category of every credited patent with a US publication.
pub fn patent_origins(
    registry: &IdentityRegistry,
    records: &[PatentRecord],
) -> BTreeMap<String, Category> {
    records
        .iter()
        .filter(|r| is_us_filed(r))
        .filter_map(|r| {
            let p = registry.patents.get(&r.application_id)?;
            let cat = majority_category(p.entities.iter().filter_map(|e| registry.category_of(e)))?;
            Some((r.application_id.clone(), cat))
        })
        .collect()
}

/// Parses every record's reassignment field and resolves both parties to
/// registry entities. Unknown names become new entities.
pub fn resolve_events(
    records: &[PatentRecord],
    registry: &mut IdentityRegistry,
    threshold: f64,
    lexicon: &Lexicon,
    aliases: &AliasMap,
) -> Result<Vec<TransactionEvent>> {
    let mut parsed: Vec<(&PatentRecord, Vec<ReassignmentEntry>)> = records
        .par_iter()
        .filter_map(|r| r.us_reassignment_field.as_deref().map(|f| (r, f)))
        .map(|(r, f)| {
            parse_reassignment_field(f)
                .map(|e| (r, e))
                .map_err(|e| match e {
                    Error::Reassignment { offset, message } => Error::Reassignment {
                        offset,
                        message: format!("{}: {message}", r.application_id),
                    },
                    other => other,
                })
        })
        .collect::<Result<_>>()?;
    parsed.sort_by(|a, b| a.0.application_id.cmp(&b.0.application_id));

    let mut matcher = NameMatcher::new(registry, threshold, lexicon);
    let mut events = Vec::new();
    for (rec, entries) in parsed {
        for e in entries {
            let (Some((from, _)), Some((to, _))) = (
                matcher.resolve(&e.assignor, Some(rec), registry),
                matcher.resolve(&e.assignee, Some(rec), registry),
            ) else {
                log::warn!(
                    "{}: transaction with an empty party skipped",
                    rec.application_id
                );
                continue;
            };
            let internal = from == to
                || matches!(
                    (aliases.family_of_entity(registry, &from), aliases.family_of_entity(registry, &to)),
                    (Some(a), Some(b)) if a == b
                );
            events.push(TransactionEvent {
                application_id: rec.application_id.clone(),
                kind: TransactionKind::from_reasons(&e.reasons),
                from_category: registry.category_of(&from).unwrap_or(Category::Others),
                to_category: registry.category_of(&to).unwrap_or(Category::Others),
                assignor: from,
                assignee: to,
                year: e.assignee_year,
                reasons: e.reasons,
                internal,
            });
        }
    }
    Ok(events)
}

/// `application_id,kind,year,assignor,assignee,from_category,to_category,internal,reasons`
pub fn write_events_csv<W: Write>(events: &[TransactionEvent], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record([
        "application_id",
        "kind",
        "year",
        "assignor",
        "assignee",
        "from_category",
        "to_category",
        "internal",
        "reasons",
    ])?;
    for e in events {
        wtr.write_record([
            e.application_id.as_str(),
            e.kind.as_str(),
            &e.year.to_string(),
            &e.assignor,
            &e.assignee,
            e.from_category.as_str(),
            e.to_category.as_str(),
            if e.internal { "true" } else { "false" },
            &e.reasons,
        ])?;
    }
    wtr.flush().map_err(|e| Error::io("<transactions>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entity::{build_registry, match_original_names};
    use crate::ingest::{DwpiAssignee, OriginalAssignee};

    fn rec(id: &str, owner: &str, field: Option<&str>) -> PatentRecord {
        PatentRecord {
            application_id: id.into(),
            year: 2010,
            ipc_subclasses: vec!["C01B".into()],
            merged_publication_ids: vec![format!("US{id}")],
            title: String::new(),
            abstract_text: String::new(),
            original_assignees: vec![OriginalAssignee {
                name: owner.into(),
                address: "Houston, TX, US".into(),
            }],
            assignee_name_pool: vec![DwpiAssignee {
                name: owner.into(),
                code: "OWNR|C".into(),
            }],
            us_reassignment_field: field.map(str::to_string),
        }
    }

    #[test]
    fn resolves_parties_and_flags_internal() {
        let lex = Lexicon::default();
        let records = vec![
            rec("1", "SAMSUNG ELECTRONICS CO LTD", Some("SAMSUNG SDI CO LTD|SAMSUNG ELECTRONICS CO LTD||2012|||||")),
            rec("2", "SAMSUNG ELECTRONICS CO LTD", Some("UNIV SUNGKYUNKWAN|SAMSUNG ELECTRONICS CO LTD||2013||||ASSIGNMENT|;;US DEPARTMENT OF ENERGY|SAMSUNG ELECTRONICS CO LTD||2014||||LICENSE|")),
            rec("3", "SAMSUNG ELECTRONICS CO LTD", None),
        ];
        let pairs: Vec<DwpiAssignee> = records
            .iter()
            .flat_map(|r| r.assignee_name_pool.clone())
            .collect();
        let mut reg = build_registry(&pairs, 99.0, &lex).unwrap();
        match_original_names(&records, &mut reg, 90.0, &lex);
        let aliases = AliasMap::parse(
            "# subsidiaries\nSAMSUNG = SAMSUNG ELECTRONICS CO LTD; SAMSUNG SDI CO LTD\n",
        )
        .unwrap();
        let ev = resolve_events(&records, &mut reg, 90.0, &lex, &aliases).unwrap();
        assert_eq!(ev.len(), 3);
        assert!(ev[0].internal);
        assert_eq!(ev[0].from_category, Category::Corporation);
        assert_eq!(ev[1].to_category, Category::University);
        assert!(!ev[1].internal);
        assert_eq!(ev[2].kind, TransactionKind::License);
        assert_eq!(ev[2].to_category, Category::Others);
        assert_eq!(ev[2].year, 2014);

        let origins = patent_origins(&reg, &records);
        assert_eq!(origins.len(), 3);
        assert!(origins.values().all(|&c| c == Category::Corporation));

        let mut buf = Vec::new();
        write_events_csv(&ev, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 4);
    }

    #[test]
    fn alias_parse_errors() {
        assert!(AliasMap::parse("SAMSUNG SAMSUNG SDI").is_err());
        assert!(AliasMap::parse("").unwrap().is_empty());
    }
}
