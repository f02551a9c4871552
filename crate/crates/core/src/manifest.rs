//! CSV dataset manifests.
//!
//! Header `ref,dist,mos[,distortion][,level]` (any column order), UTF-8,
//! comma-delimited, `#` comment lines ignored. Relative image paths resolve
//! against the manifest's own directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub ref_path: PathBuf,
    pub dist_path: PathBuf,
    pub mos: f64,
    pub distortion: Option<String>,
    pub level: Option<i64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub entries: Vec<ManifestEntry>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn mos(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.mos).collect()
    }
}

struct Columns {
    reference: usize,
    distorted: usize,
    mos: usize,
    distortion: Option<usize>,
    level: Option<usize>,
}

impl Columns {
    fn from_header(header: &csv::StringRecord) -> Result<Self> {
        let find = |name: &str| header.iter().position(|h| h.trim().eq_ignore_ascii_case(name));
        let need = |name: &str| find(name).ok_or_else(|| Error::MissingColumn(name.to_string()));
        Ok(Self {
            reference: need("ref")?,
            distorted: need("dist")?,
            mos: need("mos")?,
            distortion: find("distortion"),
            level: find("level"),
        })
    }
}

fn parse_error(line: u64, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Reads a manifest from disk.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let base = path.parent().unwrap_or_else(|| Path::new(""));
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse_manifest(&text, base, name)
}

/// Parses manifest text; relative paths are joined onto `base`.
pub fn parse_manifest(text: &str, base: &Path, name: String) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| parse_error(1, e.to_string()))?.clone();
    let cols = Columns::from_header(&header)?;

    let mut entries = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize, what: &str| -> Result<&str> {
            match record.get(i) {
                Some(v) if !v.is_empty() => Ok(v),
                _ => Err(parse_error(line, format!("missing {what}"))),
            }
        };
        let optional = |i: Option<usize>| i.and_then(|i| record.get(i)).filter(|v| !v.is_empty());

        let resolve = |p: &str| {
            let p = Path::new(p);
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base.join(p)
            }
        };
        let mos_text = field(cols.mos, "mos")?;
        let mos: f64 = mos_text.parse().map_err(|_| parse_error(line, format!("mos `{mos_text}` is not a number")))?;
        if !mos.is_finite() {
            return Err(parse_error(line, format!("mos `{mos_text}` is not finite")));
        }
        let level = optional(cols.level)
            .map(|v| v.parse::<i64>().map_err(|_| parse_error(line, format!("level `{v}` is not an integer"))))
            .transpose()?;
        entries.push(ManifestEntry {
            ref_path: resolve(field(cols.reference, "ref")?),
            dist_path: resolve(field(cols.distorted, "dist")?),
            mos,
            distortion: optional(cols.distortion).map(str::to_string),
            level,
        });
    }
    if entries.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(Dataset { name, entries })
}

/// Serializes a dataset as a manifest with the paths stored verbatim.
pub fn write_manifest(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io = |e: std::io::Error| Error::Io { path: path.to_path_buf(), source: e };
    let mut w = csv::Writer::from_path(path).map_err(|e| io(e.into()))?;
    let csv_err = |e: csv::Error| io(e.into());
    w.write_record(["ref", "dist", "mos", "distortion", "level"]).map_err(csv_err)?;
    for e in &ds.entries {
        w.write_record([
            e.ref_path.to_string_lossy().into_owned(),
            e.dist_path.to_string_lossy().into_owned(),
            // shortest representation that parses back to the same f64
            format!("{:?}", e.mos),
            e.distortion.clone().unwrap_or_default(),
            e.level.map(|l| l.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(io)
}

/// Stable partition by distortion label, groups ordered by label.
pub fn group_by_distortion(ds: &Dataset) -> Result<BTreeMap<String, Dataset>> {
    let mut groups: BTreeMap<String, Dataset> = BTreeMap::new();
    for (index, e) in ds.entries.iter().enumerate() {
        let label = e.distortion.clone().ok_or(Error::MissingLabel { index })?;
        groups
            .entry(label.clone())
            .or_insert_with(|| Dataset { name: format!("{}/{label}", ds.name), entries: Vec::new() })
            .entries
            .push(e.clone());
    }
    Ok(groups)
}
