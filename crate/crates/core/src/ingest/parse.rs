use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use super::{DwpiAssignee, OriginalAssignee, RawRecord};
use crate::{Error, Result};

const COLUMNS: [&str; 9] = [
    "publication_id",
    "application_id",
    "application_year",
    "title",
    "abstract",
    "ipc",
    "dwpi_assignees",
    "original_assignees",
    "us_reassignment",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Csv,
    Jsonl,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(InputFormat::Csv),
            "jsonl" => Ok(InputFormat::Jsonl),
            other => Err(Error::Config(format!("unknown input format `{other}`"))),
        }
    }
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputFormat::Csv => "csv",
            InputFormat::Jsonl => "jsonl",
        })
    }
}

/// Truncates an IPC symbol to its subclass and checks the
/// letter-digit-digit-letter shape.
pub fn normalize_ipc(code: &str) -> Option<String> {
    let code: String = code
        .trim()
        .chars()
        .take(4)
        .collect::<String>()
        .to_ascii_uppercase();
    let b = code.as_bytes();
    let ok = b.len() == 4
        && b[0].is_ascii_alphabetic()
        && b[1].is_ascii_digit()
        && b[2].is_ascii_digit()
        && b[3].is_ascii_alphabetic();
    ok.then_some(code)
}

pub fn parse_records(path: &Path, format: InputFormat) -> Result<Vec<RawRecord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_records_from_str(&text, format)
}

pub fn parse_records_from_str(text: &str, format: InputFormat) -> Result<Vec<RawRecord>> {
    let records = match format {
        InputFormat::Jsonl => parse_jsonl(text)?,
        InputFormat::Csv => parse_csv(text)?,
    };
    let mut seen = HashSet::new();
    for (line, rec) in &records {
        validate(*line, rec)?;
        if !seen.insert(rec.publication_id.as_str()) {
            return Err(Error::Parse {
                line: *line,
                message: format!("duplicate publication_id `{}`", rec.publication_id),
            });
        }
    }
    Ok(records.into_iter().map(|(_, r)| r).collect())
}

fn validate(line: usize, rec: &RawRecord) -> Result<()> {
    let fail = |message: String| Err(Error::Parse { line, message });
    if rec.publication_id.trim().is_empty() {
        return fail("empty publication_id".into());
    }
    if rec.application_id.trim().is_empty() {
        return fail("missing application_id".into());
    }
    if let Some(bad) = rec
        .ipc_subclasses
        .iter()
        .find(|c| normalize_ipc(c).is_none())
    {
        return fail(format!("malformed IPC subclass `{bad}`"));
    }
    Ok(())
}

fn parse_jsonl(text: &str) -> Result<Vec<(usize, RawRecord)>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut rec: RawRecord = serde_json::from_str(line).map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?;
        canonicalize_ipc(&mut rec);
        rec.us_reassignment_field = rec
            .us_reassignment_field
            .as_deref()
            .map(str::trim)
            .filter(|f| !f.is_empty())
            .map(str::to_string);
        out.push((idx + 1, rec));
    }
    Ok(out)
}

fn canonicalize_ipc(rec: &mut RawRecord) {
    for code in &mut rec.ipc_subclasses {
        if let Some(c) = normalize_ipc(code) {
            *code = c;
        }
    }
}

fn split_list(cell: &str) -> impl Iterator<Item = &str> {
    cell.split(';').map(str::trim).filter(|s| !s.is_empty())
}

fn split_pair(item: &str, line: usize) -> Result<(String, String)> {
    match item.split_once('|') {
        Some((a, b)) => Ok((a.trim().to_string(), b.trim().to_string())),
        None => Err(Error::Parse {
            line,
            message: format!("expected `name|value` pair, got `{item}`"),
        }),
    }
}

fn parse_csv(text: &str) -> Result<Vec<(usize, RawRecord)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let mut index = [0usize; 9];
    for (slot, name) in COLUMNS.iter().enumerate() {
        index[slot] = headers
            .iter()
            .position(|h| h.trim() == *name)
            .ok_or_else(|| Error::Parse {
                line: 1,
                message: format!("missing column `{name}`"),
            })?;
    }
    if headers.len() != COLUMNS.len() {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "expected {} columns, found {}",
                COLUMNS.len(),
                headers.len()
            ),
        });
    }

    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| Error::Parse {
            line: e.position().map(|p| p.line() as usize).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = row.position().map(|p| p.line() as usize).unwrap_or(0);
        let cell = |slot: usize| row.get(index[slot]).unwrap_or("");
        let year = cell(2).trim().parse::<i32>().map_err(|_| Error::Parse {
            line,
            message: format!("application_year `{}` is not an integer", cell(2)),
        })?;
        let dwpi = split_list(cell(6))
            .map(|item| split_pair(item, line).map(|(name, code)| DwpiAssignee { name, code }))
            .collect::<Result<Vec<_>>>()?;
        let original = split_list(cell(7))
            .map(|item| {
                split_pair(item, line).map(|(name, address)| OriginalAssignee { name, address })
            })
            .collect::<Result<Vec<_>>>()?;
        let reassignment = cell(8).trim();
        let mut rec = RawRecord {
            publication_id: cell(0).trim().to_string(),
            application_id: cell(1).trim().to_string(),
            application_year: year,
            title: cell(3).to_string(),
            abstract_text: cell(4).to_string(),
            ipc_subclasses: split_list(cell(5)).map(str::to_string).collect(),
            dwpi_assignees: dwpi,
            original_assignees: original,
            us_reassignment_field: (!reassignment.is_empty()).then(|| reassignment.to_string()),
        };
        canonicalize_ipc(&mut rec);
        out.push((line, rec));
    }
    Ok(out)
}

/// Writes records in either input format; the output parses back to the same
/// records.
pub fn write_records(path: &Path, records: &[RawRecord], format: InputFormat) -> Result<()> {
    let file = crate::fsutil::create_file(path)?;
    let mut w = std::io::BufWriter::new(file);
    match format {
        InputFormat::Jsonl => {
            for rec in records {
                serde_json::to_writer(&mut w, rec)?;
                w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
            }
        }
        InputFormat::Csv => {
            let mut cw = csv::Writer::from_writer(&mut w);
            cw.write_record(COLUMNS)?;
            for r in records {
                let dwpi: Vec<String> = r
                    .dwpi_assignees
                    .iter()
                    .map(|a| format!("{}|{}", a.name, a.code))
                    .collect();
                let orig: Vec<String> = r
                    .original_assignees
                    .iter()
                    .map(|a| format!("{}|{}", a.name, a.address))
                    .collect();
                cw.write_record([
                    r.publication_id.as_str(),
                    r.application_id.as_str(),
                    &r.application_year.to_string(),
                    r.title.as_str(),
                    r.abstract_text.as_str(),
                    &r.ipc_subclasses.join(";"),
                    &dwpi.join(";"),
                    &orig.join(";"),
                    r.us_reassignment_field.as_deref().unwrap_or(""),
                ])?;
            }
            cw.flush().map_err(|e| Error::io(path, e))?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINE: &str = r#"{"publication_id":"US20080193827A1","application_id":"US2007704873A","application_year":2007,"title":"Conducting polymer-transition metal electro-catalyst compositions for fuel cells","abstract":"","ipc":["H01M4/90","C08G"],"dwpi_assignees":[{"name":"UNIV NORTHWESTERN","code":"UNNW|C"}],"original_assignees":[{"name":"Northwestern University","address":"Evanston, IL, US"}],"us_reassignment":null}"#;

    #[test]
    fn jsonl_line_keeps_ids() {
        let recs = parse_records_from_str(LINE, InputFormat::Jsonl).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].publication_id, "US20080193827A1");
        assert_eq!(recs[0].application_id, "US2007704873A");
        assert_eq!(recs[0].ipc_subclasses, vec!["H01M", "C08G"]);
    }

    #[test]
    fn empty_input_is_empty_list() {
        assert!(parse_records_from_str("", InputFormat::Jsonl)
            .unwrap()
            .is_empty());
        let header = COLUMNS.join(",");
        assert!(parse_records_from_str(&header, InputFormat::Csv)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn missing_application_id_reports_line() {
        let bad = LINE.replace(r#""application_id":"US2007704873A","#, "");
        let text = format!("{LINE}\n{bad}\n");
        let text = text.replacen("US20080193827A1", "US9318762B2", 1);
        match parse_records_from_str(&text, InputFormat::Jsonl) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn csv_missing_application_id_reports_line() {
        let text = format!(
            "{}\nP1,A1,2010,t,a,H01M,,,\nP2,,2011,t,a,C01B,,,\n",
            COLUMNS.join(",")
        );
        match parse_records_from_str(&text, InputFormat::Csv) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn csv_pairs_split_on_first_bar() {
        let text = format!(
            "{}\nP1,A1,2010,t,a,H01M;C01B,UNIV HEIBEI NORMAL|UYHE|N,\"Nanchang Co|Nanchang, Jiangxi, 330013, CN\",\n",
            COLUMNS.join(",")
        );
        let recs = parse_records_from_str(&text, InputFormat::Csv).unwrap();
        assert_eq!(recs[0].dwpi_assignees[0].code, "UYHE|N");
        assert_eq!(
            recs[0].original_assignees[0].address,
            "Nanchang, Jiangxi, 330013, CN"
        );
        assert_eq!(recs[0].ipc_subclasses, vec!["H01M", "C01B"]);
    }

    #[test]
    fn bad_ipc_and_unknown_format_are_errors() {
        let bad = LINE.replace("C08G", "8C0G");
        assert!(matches!(
            parse_records_from_str(&bad, InputFormat::Jsonl),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            "xml".parse::<InputFormat>(),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn duplicate_publication_id_is_rejected() {
        let text = format!("{LINE}\n{LINE}\n");
        assert!(matches!(
            parse_records_from_str(&text, InputFormat::Jsonl),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
