use std::collections::{BTreeMap, BTreeSet};

use super::{PatentRecord, RawRecord, MAX_EXPECTED_SUBCLASSES};

/// Collapses publications sharing an application id into one record each.
///
/// Year is the earliest among the publications. Title, abstract and the
/// reassignment field come from the latest publication, ordered by
/// `(application_year, publication_id)`; original assignees come from the
/// earliest publication that lists any. Output is sorted by application id,
/// so the result does not depend on input order.
pub fn merge_applications(records: &[RawRecord]) -> Vec<PatentRecord> {
    let mut groups: BTreeMap<&str, Vec<&RawRecord>> = BTreeMap::new();
    for rec in records {
        groups
            .entry(rec.application_id.as_str())
            .or_default()
            .push(rec);
    }

    groups
        .into_iter()
        .map(|(app_id, mut group)| {
            group.sort_by(|a, b| {
                (a.application_year, &a.publication_id)
                    .cmp(&(b.application_year, &b.publication_id))
            });
            let latest = group[group.len() - 1];
            let ipc: BTreeSet<&str> = group
                .iter()
                .flat_map(|r| r.ipc_subclasses.iter().map(String::as_str))
                .collect();
            if ipc.len() > MAX_EXPECTED_SUBCLASSES {
                log::warn!("application {app_id} lists {} subclasses", ipc.len());
            }
            let pool: BTreeSet<_> = group
                .iter()
                .flat_map(|r| r.dwpi_assignees.iter().cloned())
                .collect();
            let original = group
                .iter()
                .find(|r| !r.original_assignees.is_empty())
                .map(|r| r.original_assignees.clone())
                .unwrap_or_default();
            let reassignment = group
                .iter()
                .rev()
                .find_map(|r| r.us_reassignment_field.clone());
            let mut pubs: Vec<String> = group.iter().map(|r| r.publication_id.clone()).collect();
            pubs.sort();
            PatentRecord {
                application_id: app_id.to_string(),
                year: group[0].application_year,
                ipc_subclasses: ipc.into_iter().map(str::to_string).collect(),
                merged_publication_ids: pubs,
                title: latest.title.clone(),
                abstract_text: latest.abstract_text.clone(),
                original_assignees: original,
                assignee_name_pool: pool.into_iter().collect(),
                us_reassignment_field: reassignment,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{DwpiAssignee, OriginalAssignee};

    fn raw(pid: &str, app: &str, year: i32, ipc: &[&str], title: &str) -> RawRecord {
        RawRecord {
            publication_id: pid.into(),
            application_id: app.into(),
            application_year: year,
            title: title.into(),
            abstract_text: String::new(),
            ipc_subclasses: ipc.iter().map(|s| s.to_string()).collect(),
            dwpi_assignees: vec![DwpiAssignee {
                name: "UNIV NORTHWESTERN".into(),
                code: "UNNW|C".into(),
            }],
            original_assignees: vec![OriginalAssignee {
                name: "Northwestern University".into(),
                address: "Evanston, IL, US".into(),
            }],
            us_reassignment_field: None,
        }
    }

    #[test]
    fn shared_application_number_merges() {
        let recs = vec![
            raw(
                "US20080193827A1",
                "US2007704873A",
                2008,
                &["H01M"],
                "old title",
            ),
            raw(
                "US9318762B2",
                "US2007704873A",
                2016,
                &["H01M", "C08G"],
                "new title",
            ),
        ];
        let merged = merge_applications(&recs);
        assert_eq!(merged.len(), 1);
        let p = &merged[0];
        assert_eq!(
            p.merged_publication_ids,
            vec!["US20080193827A1", "US9318762B2"]
        );
        assert_eq!(p.year, 2008);
        assert_eq!(p.ipc_subclasses, vec!["C08G", "H01M"]);
        assert_eq!(p.title, "new title");
        assert_eq!(p.assignee_name_pool.len(), 1);
    }

    #[test]
    fn single_record_passes_through() {
        let r = raw("P1", "A1", 2010, &["C01B", "H01M"], "t");
        let merged = merge_applications(std::slice::from_ref(&r));
        assert_eq!(merged.len(), 1);
        assert_eq!(
            merged[0].to_raw_records(),
            vec![RawRecord {
                ipc_subclasses: vec!["C01B".into(), "H01M".into()],
                ..r
            }]
        );
    }
}
