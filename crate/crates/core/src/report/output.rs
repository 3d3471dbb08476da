use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coclus::CoClustering;
use crate::ingest::SparseBinaryMatrix;
use crate::{Error, Result, VERSION};

/// Provenance stamped into every output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    /// SHA-256 of the configuration (or argument list) that produced the file.
    pub config: String,
}

impl Meta {
    pub fn new(config_hash: impl Into<String>) -> Self {
        Self {
            tool: "patlas".into(),
            version: VERSION.into(),
            config: config_hash.into(),
        }
    }

    /// Meta for a one-off command, hashed from its arguments.
    pub fn from_args<S: AsRef<str>>(args: &[S]) -> Self {
        let joined: Vec<&str> = args.iter().map(AsRef::as_ref).collect();
        Self::new(sha256_hex(joined.join("\u{1f}").as_bytes()))
    }

    /// `# patlas <version> config=<hash>`
    pub fn csv_header(&self) -> String {
        format!("# {} {} config={}\n", self.tool, self.version, self.config)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// CSV text with the provenance comment line on top.
pub fn csv_string<T: Serialize>(meta: &Meta, rows: impl IntoIterator<Item = T>) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(meta.csv_header().into_bytes());
    for r in rows {
        wtr.serialize(r)?;
    }
    let bytes = wtr
        .into_inner()
        .map_err(|e| Error::invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Like [`csv_string`] with an explicit header row, for rows of plain strings.
pub fn csv_records(meta: &Meta, header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(meta.csv_header().into_bytes());
    wtr.write_record(header)?;
    for r in rows {
        wtr.write_record(r)?;
    }
    let bytes = wtr
        .into_inner()
        .map_err(|e| Error::invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize)]
struct WithMeta<'a, T> {
    meta: &'a Meta,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON of `body` with a `meta` field added at top level.
pub fn json_string<T: Serialize>(meta: &Meta, body: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&WithMeta { meta, body })?;
    s.push('\n');
    Ok(s)
}

pub fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    let mut f = crate::fsutil::create_file(path)?;
    f.write_all(contents).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub meta: Meta,
    /// File name → SHA-256 of its contents.
    pub artifacts: BTreeMap<String, String>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// An output directory that remembers the hash of everything written to it.
pub struct ArtifactDir {
    dir: PathBuf,
    meta: Meta,
    artifacts: BTreeMap<String, String>,
}

impl ArtifactDir {
    pub fn create(dir: &Path, meta: Meta) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            meta,
            artifacts: BTreeMap::new(),
        })
    }

    pub fn meta(&self) -> &Meta {
        &self.meta
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn write(&mut self, name: &str, contents: &[u8]) -> Result<PathBuf> {
        let path = self.path(name);
        write_file(&path, contents)?;
        self.artifacts
            .insert(name.to_string(), sha256_hex(contents));
        log::debug!("wrote {}", path.display());
        Ok(path)
    }

    pub fn write_csv<T: Serialize>(
        &mut self,
        name: &str,
        rows: impl IntoIterator<Item = T>,
    ) -> Result<PathBuf> {
        let text = csv_string(&self.meta, rows)?;
        self.write(name, text.as_bytes())
    }

    pub fn write_records(
        &mut self,
        name: &str,
        header: &[&str],
        rows: &[Vec<String>],
    ) -> Result<PathBuf> {
        let text = csv_records(&self.meta, header, rows)?;
        self.write(name, text.as_bytes())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, body: &T) -> Result<PathBuf> {
        let text = json_string(&self.meta, body)?;
        self.write(name, text.as_bytes())
    }

    /// Writes `manifest.json` and returns the manifest.
    pub fn finish(self) -> Result<Manifest> {
        let m = Manifest {
            meta: self.meta,
            artifacts: self.artifacts,
        };
        let text = serde_json::to_string_pretty(&m)? + "\n";
        write_file(&self.dir.join("manifest.json"), text.as_bytes())?;
        Ok(m)
    }
}

pub const CLUSTER_FILE_VERSION: u32 = 1;

/// Co-clustering result keyed by application id and IPC subclass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterFile {
    pub version: u32,
    pub meta: Meta,
    pub g: usize,
    pub modularity: f64,
    pub seed: u64,
    pub restarts: usize,
    pub rows: BTreeMap<String, usize>,
    pub cols: BTreeMap<String, usize>,
}

impl ClusterFile {
    pub fn new(
        m: &SparseBinaryMatrix,
        c: &CoClustering,
        seed: u64,
        restarts: usize,
        meta: Meta,
    ) -> Self {
        let label =
            |names: &[String], a: &[usize]| names.iter().cloned().zip(a.iter().copied()).collect();
        Self {
            version: CLUSTER_FILE_VERSION,
            meta,
            g: c.g,
            modularity: c.modularity,
            seed,
            restarts,
            rows: label(m.row_labels(), &c.row_assignment),
            cols: label(m.col_labels(), &c.col_assignment),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_file(path, self.to_json()?.as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let f: Self = serde_json::from_str(&text)?;
        if f.version != CLUSTER_FILE_VERSION {
            return Err(Error::CorpusFormat(format!(
                "cluster file version {} unsupported",
                f.version
            )));
        }
        if let Some((id, &k)) = f.rows.iter().chain(&f.cols).find(|(_, &k)| k >= f.g) {
            return Err(Error::CorpusFormat(format!(
                "{id}: cluster {k} outside 0..{}",
                f.g
            )));
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        a: u32,
        b: f64,
    }

    #[test]
    fn csv_has_header_and_roundtrips() {
        let meta = Meta::new("abc");
        let s = csv_string(&meta, [Row { a: 1, b: 0.5 }, Row { a: 2, b: 1e-3 }]).unwrap();
        assert!(s.starts_with(&format!("# patlas {VERSION} config=abc\na,b\n1,0.5\n")));
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(s.as_bytes());
        assert_eq!(rdr.records().count(), 2);
    }

    #[test]
    fn json_carries_meta() {
        let v: serde_json::Value = serde_json::from_str(
            &json_string(&Meta::new("h"), &serde_json::json!({"x": 1})).unwrap(),
        )
        .unwrap();
        assert_eq!(v["meta"]["config"], "h");
        assert_eq!(v["x"], 1);
    }

    #[test]
    fn manifest_hashes_contents() {
        let tmp = tempfile::tempdir().unwrap();
        let mut d = ArtifactDir::create(tmp.path(), Meta::new("h")).unwrap();
        d.write("a.txt", b"hello").unwrap();
        let m = d.finish().unwrap();
        assert_eq!(m.artifacts["a.txt"], sha256_hex(b"hello"));
        assert_eq!(
            Manifest::load(&tmp.path().join("manifest.json")).unwrap(),
            m
        );
    }

    #[test]
    fn cluster_file_rejects_out_of_range_labels() {
        let tmp = tempfile::tempdir().unwrap();
        let mut f = ClusterFile {
            version: CLUSTER_FILE_VERSION,
            meta: Meta::new("h"),
            g: 2,
            modularity: 0.1,
            seed: 0,
            restarts: 1,
            rows: BTreeMap::from([("a".into(), 0), ("b".into(), 1)]),
            cols: BTreeMap::from([("X".into(), 1)]),
        };
        let p = tmp.path().join("c.json");
        f.save(&p).unwrap();
        assert_eq!(ClusterFile::load(&p).unwrap(), f);
        f.cols.insert("Y".into(), 2);
        f.save(&p).unwrap();
        assert!(ClusterFile::load(&p).is_err());
    }
}
