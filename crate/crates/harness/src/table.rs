//! Feature tables and their on-disk formats.
//!
//! CSV: a `# {json}` metadata line, a `path,label,group,<columns>` header,
//! then one row per image. Floats use the shortest representation that
//! parses back to the same bits.
//!
//! CTXF (little-endian):
//!
//! ```text
//! "CTXF" | u16 version | u64 rows | u64 cols | u32 meta_len | meta json
//! rows x (u32 len + label, u32 len + group, u32 len + path)
//! rows x cols f64, row-major
//! ```
//!
//! An empty group string means "no group".

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use chaostex_core::DescriptorConfig;
use serde::{Deserialize, Serialize};

use crate::dataset::Sample;
use crate::error::{HarnessError, Result};

const MAGIC: &[u8; 4] = b"CTXF";
const VERSION: u16 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    /// Full chaotic-map descriptor.
    Chaos,
    /// LBP of the input image only; the baseline.
    Plain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMeta {
    pub kind: FeatureKind,
    pub descriptor: DescriptorConfig,
}

impl TableMeta {
    pub fn columns(&self) -> Result<Vec<String>> {
        match self.kind {
            FeatureKind::Chaos => Ok(self.descriptor.layout()?.column_names()),
            FeatureKind::Plain => {
                self.descriptor.validate()?;
                let mut names = Vec::new();
                for s in &self.descriptor.scales {
                    for p in &self.descriptor.lbp {
                        for b in 0..p.bins() {
                            names.push(format!("s{s}_p{}r{}_b{b}", p.points, p.radius));
                        }
                    }
                }
                Ok(names)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub meta: TableMeta,
    pub samples: Vec<Sample>,
    pub values: Vec<Vec<f64>>,
}

impl FeatureTable {
    pub fn new(meta: TableMeta, samples: Vec<Sample>, values: Vec<Vec<f64>>) -> Result<Self> {
        let cols = meta.columns()?.len();
        if samples.len() != values.len() {
            return Err(HarnessError::data(format!("{} samples but {} feature rows", samples.len(), values.len())));
        }
        if let Some((i, row)) = values.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(HarnessError::data(format!(
                "row {i} ({}) has {} values, the configuration implies {cols}",
                samples[i].path,
                row.len()
            )));
        }
        Ok(FeatureTable { meta, samples, values })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        let mut labels: Vec<String> = self.samples.iter().map(|s| s.label.clone()).collect();
        labels.sort();
        labels.dedup();
        labels
    }

    /// Writes CSV when the extension is `.csv`, CTXF otherwise.
    pub fn save(&self, path: &Path) -> Result<()> {
        if is_csv(path) {
            self.write_csv(path)
        } else {
            fs::write(path, self.to_ctxf()?).map_err(|e| HarnessError::io(path, e))
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        if is_csv(path) {
            Self::read_csv(path)
        } else {
            let bytes = fs::read(path).map_err(|e| HarnessError::io(path, e))?;
            Self::from_ctxf(&bytes).map_err(|e| HarnessError::data(format!("{}: {e}", path.display())))
        }
    }

    fn write_csv(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
        let mut out = BufWriter::new(file);
        writeln!(out, "# {}", serde_json::to_string(&self.meta)?).map_err(|e| HarnessError::io(path, e))?;
        let mut writer = csv::Writer::from_writer(out);
        let mut header = vec!["path".to_string(), "label".into(), "group".into()];
        header.extend(self.meta.columns()?);
        let csv_err = |e: csv::Error| HarnessError::data(format!("{}: {e}", path.display()));
        writer.write_record(&header).map_err(csv_err)?;
        for (s, row) in self.samples.iter().zip(&self.values) {
            let mut record = vec![s.path.clone(), s.label.clone(), s.group.clone().unwrap_or_default()];
            record.extend(row.iter().map(f64::to_string));
            writer.write_record(&record).map_err(csv_err)?;
        }
        writer.flush().map_err(|e| HarnessError::io(path, e))
    }

    fn read_csv(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
        let mut reader = BufReader::new(file);
        let mut first = String::new();
        reader.read_line(&mut first).map_err(|e| HarnessError::io(path, e))?;
        let meta_json = first
            .strip_prefix("# ")
            .ok_or_else(|| HarnessError::data(format!("{}: missing `# {{...}}` metadata line", path.display())))?;
        let meta: TableMeta = serde_json::from_str(meta_json.trim_end())?;
        let columns = meta.columns()?;

        let bad = |msg: String| HarnessError::data(format!("{}: {msg}", path.display()));
        let mut csv = csv::Reader::from_reader(reader);
        let header = csv.headers().map_err(|e| bad(e.to_string()))?.clone();
        if header.len() != columns.len() + 3 || header.iter().skip(3).zip(&columns).any(|(a, b)| a != b) {
            return Err(bad("header does not match the metadata configuration".into()));
        }
        let mut samples = Vec::new();
        let mut values = Vec::new();
        for (line, record) in csv.records().enumerate() {
            let record = record.map_err(|e| bad(e.to_string()))?;
            let group = &record[2];
            samples.push(Sample {
                path: record[0].to_string(),
                label: record[1].to_string(),
                group: (!group.is_empty()).then(|| group.to_string()),
            });
            let row = record
                .iter()
                .skip(3)
                .map(|v| v.parse::<f64>().map_err(|_| bad(format!("row {}: bad number `{v}`", line + 1))))
                .collect::<Result<Vec<f64>>>()?;
            values.push(row);
        }
        Self::new(meta, samples, values)
    }

    pub fn to_ctxf(&self) -> Result<Vec<u8>> {
        let cols = self.meta.columns()?.len();
        let meta = serde_json::to_vec(&self.meta)?;
        let mut out = Vec::with_capacity(64 + meta.len() + self.len() * (cols * 8 + 64));
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.len() as u64).to_le_bytes());
        out.extend_from_slice(&(cols as u64).to_le_bytes());
        put_bytes(&mut out, &meta);
        for s in &self.samples {
            put_bytes(&mut out, s.label.as_bytes());
            put_bytes(&mut out, s.group.as_deref().unwrap_or("").as_bytes());
            put_bytes(&mut out, s.path.as_bytes());
        }
        for v in self.values.iter().flatten() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        Ok(out)
    }

    pub fn from_ctxf(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(HarnessError::data("not a CTXF feature file"));
        }
        let version = u16::from_le_bytes(r.array()?);
        if version != VERSION {
            return Err(HarnessError::data(format!("unsupported CTXF version {version}")));
        }
        let rows = u64::from_le_bytes(r.array()?) as usize;
        let cols = u64::from_le_bytes(r.array()?) as usize;
        let meta: TableMeta = serde_json::from_slice(r.string_bytes()?)?;
        let mut samples = Vec::with_capacity(rows.min(1 << 20));
        for _ in 0..rows {
            let label = r.string()?;
            let group = r.string()?;
            let path = r.string()?;
            samples.push(Sample { path, label, group: (!group.is_empty()).then_some(group) });
        }
        let need = rows.checked_mul(cols).and_then(|n| n.checked_mul(8));
        if need != Some(bytes.len() - r.pos) {
            return Err(HarnessError::data("CTXF value block has the wrong size"));
        }
        let values = (0..rows)
            .map(|_| (0..cols).map(|_| r.array().map(f64::from_le_bytes)).collect::<Result<Vec<f64>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(meta, samples, values)
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension().and_then(|e| e.to_str()).is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn put_bytes(out: &mut Vec<u8>, bytes: &[u8]) {
    out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
    out.extend_from_slice(bytes);
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| HarnessError::data("CTXF file is truncated"))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().expect("length checked"))
    }

    fn string_bytes(&mut self) -> Result<&'a [u8]> {
        let len = u32::from_le_bytes(self.array()?) as usize;
        self.take(len)
    }

    fn string(&mut self) -> Result<String> {
        String::from_utf8(self.string_bytes()?.to_vec()).map_err(|_| HarnessError::data("CTXF string is not UTF-8"))
    }
}
