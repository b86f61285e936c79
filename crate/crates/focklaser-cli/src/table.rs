//! Result envelope and its CSV/JSON encodings.
//!
//! CSV layout: a `# focklaser v<semver>` line, one `# key=value` line per
//! config entry, one `# summary key=value` line per summary entry, a header
//! row, then data. Floats are written with 17 significant digits so that
//! parsing the file returns the exact values.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Cell::Int(a), Cell::Int(b)) => a == b,
            // Bitwise, so NaN round-trips compare equal.
            (Cell::Float(a), Cell::Float(b)) => a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()),
            (Cell::Text(a), Cell::Text(b)) => a == b,
            _ => false,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// 17 significant digits; non-finite values use Rust's spelling.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) => f.write_str(&format_float(*v)),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl Cell {
    /// Inverse of `Display`: integers never carry `.` or `e`, floats always do
    /// (or are non-finite).
    pub fn parse(s: &str) -> Cell {
        if let Ok(v) = s.parse::<i64>() {
            return Cell::Int(v);
        }
        match s.parse::<f64>() {
            Ok(v) => Cell::Float(v),
            Err(_) => Cell::Text(s.to_string()),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Float(v) => Some(*v),
            Cell::Text(_) => None,
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Int(v) => s.serialize_i64(*v),
            Cell::Float(v) if v.is_finite() => s.serialize_f64(*v),
            // JSON has no NaN or infinity.
            Cell::Float(v) => s.serialize_str(&format!("{v}")),
            Cell::Text(t) => s.serialize_str(t),
        }
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Cell;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or a string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Cell, E> {
                Ok(Cell::Int(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Cell, E> {
                i64::try_from(v).map(Cell::Int).map_err(E::custom)
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Cell, E> {
                Ok(Cell::Float(v))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Cell, E> {
                Ok(match v {
                    "NaN" => Cell::Float(f64::NAN),
                    "inf" => Cell::Float(f64::INFINITY),
                    "-inf" => Cell::Float(f64::NEG_INFINITY),
                    _ => Cell::Text(v.to_string()),
                })
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub version: String,
    /// Resolved parameters, keyed by flag name.
    pub config: BTreeMap<String, String>,
    pub summary: BTreeMap<String, Cell>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Wall-clock seconds; JSON only, so CSV output stays byte-identical.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_s: Option<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("malformed output: {0}")]
    Format(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Envelope {
    pub fn new(config: BTreeMap<String, String>, columns: &[&str]) -> Self {
        Envelope {
            version: VERSION.to_string(),
            config,
            summary: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            duration_s: None,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn to_csv(&self) -> Result<String, TableError> {
        let mut out = format!("# focklaser v{}\n", self.version);
        for (k, v) in &self.config {
            out.push_str(&format!("# {k}={v}\n"));
        }
        for (k, v) in &self.summary {
            out.push_str(&format!("# summary {k}={v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string()))?;
        }
        let body = w.into_inner().map_err(|e| TableError::Format(e.to_string()))?;
        out.push_str(&String::from_utf8(body).map_err(|e| TableError::Format(e.to_string()))?);
        Ok(out)
    }

    pub fn from_csv(text: &str) -> Result<Self, TableError> {
        let mut lines = text.lines();
        let first = lines.next().ok_or_else(|| TableError::Format("empty file".into()))?;
        let version = first
            .strip_prefix("# focklaser v")
            .ok_or_else(|| TableError::Format("missing version line".into()))?
            .to_string();
        let mut config = BTreeMap::new();
        let mut summary = BTreeMap::new();
        let mut body = String::new();
        for line in lines {
            if let Some(rest) = line.strip_prefix("# summary ") {
                let (k, v) = split_kv(rest)?;
                summary.insert(k.to_string(), Cell::parse(v));
            } else if let Some(rest) = line.strip_prefix("# ") {
                let (k, v) = split_kv(rest)?;
                config.insert(k.to_string(), v.to_string());
            } else {
                body.push_str(line);
                body.push('\n');
            }
        }
        let mut r = csv::Reader::from_reader(body.as_bytes());
        let columns: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec?.iter().map(Cell::parse).collect());
        }
        Ok(Envelope { version, config, summary, columns, rows, duration_s: None })
    }

    pub fn to_json(&self) -> Result<String, TableError> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self, TableError> {
        Ok(serde_json::from_str(text)?)
    }
}

fn split_kv(s: &str) -> Result<(&str, &str), TableError> {
    s.split_once('=').ok_or_else(|| TableError::Format(format!("expected key=value, got `{s}`")))
}
