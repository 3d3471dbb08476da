use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const SLOTS: usize = 9;
pub const RECORD_DELIMITER: &str = ";;";

/// One record of the reassignment field, slots trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReassignmentEntry {
    pub assignee: String,
    pub assignor: String,
    pub assignee_date: String,
    pub assignee_year: i32,
    pub document_number: String,
    pub document_date: String,
    pub document_year: String,
    pub reasons: String,
    pub legal_agent: String,
}

impl ReassignmentEntry {
    pub fn is_license(&self) -> bool {
        self.reasons.to_ascii_uppercase().contains("LICENSE")
    }

    fn format(&self) -> String {
        [
            self.assignee.as_str(),
            &self.assignor,
            &self.assignee_date,
            &self.assignee_year.to_string(),
            &self.document_number,
            &self.document_date,
            &self.document_year,
            &self.reasons,
            &self.legal_agent,
        ]
        .join(" | ")
    }
}

/// Parses every record in the field. An empty field has no records.
pub fn parse_reassignment_field(raw: &str) -> Result<Vec<ReassignmentEntry>> {
    let mut out = Vec::new();
    let mut offset = 0usize;
    for seg in raw.split(RECORD_DELIMITER) {
        let here = offset;
        offset += seg.len() + RECORD_DELIMITER.len();
        if seg.trim().is_empty() {
            continue;
        }
        let slots: Vec<&str> = seg.split('|').map(str::trim).collect();
        if slots.len() != SLOTS {
            return Err(Error::Reassignment {
                offset: here,
                message: format!("expected {SLOTS} slots, found {}", slots.len()),
            });
        }
        let year = slots[3].parse::<i32>().map_err(|_| Error::Reassignment {
            offset: here,
            message: format!("assignee year {:?} is not a year", slots[3]),
        })?;
        out.push(ReassignmentEntry {
            assignee: slots[0].to_string(),
            assignor: slots[1].to_string(),
            assignee_date: slots[2].to_string(),
            assignee_year: year,
            document_number: slots[4].to_string(),
            document_date: slots[5].to_string(),
            document_year: slots[6].to_string(),
            reasons: slots[7].to_string(),
            legal_agent: slots[8].to_string(),
        });
    }
    Ok(out)
}

/// Canonical text form: slots joined by ` | `, records by `;;`.
pub fn format_reassignment_field(entries: &[ReassignmentEntry]) -> String {
    entries
        .iter()
        .map(ReassignmentEntry::format)
        .collect::<Vec<_>>()
        .join(RECORD_DELIMITER)
}
