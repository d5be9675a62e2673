use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::config::Format;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    /// CSV text; floats carry 17 significant digits.
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) => v.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Text(v) => json!(v),
            Cell::Empty => Value::Null,
        }
    }
}

macro_rules! cell_from {
    ($($t:ty => $arm:ident as $as:ty),*) => {
        $(impl From<$t> for Cell {
            fn from(v: $t) -> Self {
                Cell::$arm(v as $as)
            }
        })*
    };
}

cell_from!(i64 => Int as i64, i32 => Int as i64, u32 => Int as i64, u64 => Int as i64, usize => Int as i64, f64 => Float as f64);

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Homogeneous rows plus a free-form summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Map<String, Value>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
            summary: Map::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_string(), value.into());
    }

    fn json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    Value::Object(
                        self.columns
                            .iter()
                            .zip(r)
                            .map(|(c, v)| (c.to_string(), v.json()))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

/// Path of the JSON sidecar that accompanies a CSV artifact.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".config.json");
    PathBuf::from(s)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn write_bytes(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if path == Path::new("-") {
        let mut out = std::io::stdout().lock();
        return out.write_all(bytes).map_err(|e| CliError::io(path, e));
    }
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Writes the table. JSON artifacts hold `config`, `rows` and `summary`
/// with sorted keys; CSV artifacts hold the rows and a sidecar at
/// `<path>.config.json` holds `config` and `summary`. Nothing is written to
/// a sidecar when the CSV goes to stdout.
pub fn emit(table: &Table, config: Map<String, Value>, format: Format, path: &Path) -> CliResult<()> {
    match format {
        Format::Json => {
            let doc = json!({
                "config": config,
                "rows": table.json_rows(),
                "summary": table.summary,
            });
            write_bytes(path, pretty(&doc).as_bytes())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.columns)?;
            for row in &table.rows {
                w.write_record(row.iter().map(Cell::csv))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::io(path, e.into_error()))?;
            write_bytes(path, &bytes)?;
            if path != Path::new("-") {
                let doc = json!({ "config": config, "summary": table.summary });
                write_bytes(&sidecar_path(path), pretty(&doc).as_bytes())?;
            }
            Ok(())
        }
    }
}
