//! CSV and JSON report writers.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

pub const SCHEMA: &str = "wdl/1";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    U(u64),
    B(bool),
    S(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::U(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::U(v as u64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::I(v)
    }
}

impl From<i8> for Cell {
    fn from(v: i8) -> Self {
        Cell::I(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::B(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::S(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map(Into::into).unwrap_or(Cell::S(String::new()))
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            // 17 significant digits
            Cell::F(v) => format!("{v:.16e}"),
            Cell::I(v) => v.to_string(),
            Cell::U(v) => v.to_string(),
            Cell::B(v) => v.to_string(),
            Cell::S(s) => s.clone(),
        }
    }
}

/// Output of one subcommand.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub results: Value,
    pub warnings: Vec<String>,
    /// False when the run completed but its own check failed (selftest).
    pub ok: bool,
}

macro_rules! row {
    ($($v:expr),* $(,)?) => { vec![$($crate::report::Cell::from($v)),*] };
}
pub(crate) use row;

impl Report {
    pub fn new(command: &'static str, header: &[&'static str]) -> Self {
        Report { command, header: header.to_vec(), rows: Vec::new(), results: Value::Null, warnings: Vec::new(), ok: true }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len(), "row width for {}", self.command);
        self.rows.push(row);
    }

    pub fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    pub fn json(&self, config: &RunConfig, timestamp: u64) -> String {
        #[derive(Serialize)]
        struct Envelope<'a> {
            schema: &'static str,
            version: &'static str,
            command: &'static str,
            config: &'a RunConfig,
            results: &'a Value,
            warnings: &'a [String],
            timestamp: u64,
        }
        let env = Envelope {
            schema: SCHEMA,
            version: wdl_core::VERSION,
            command: self.command,
            config,
            results: &self.results,
            warnings: &self.warnings,
            timestamp,
        };
        let mut s = serde_json::to_string_pretty(&env).expect("report serialises");
        s.push('\n');
        s
    }

    /// Writes `<stem>.csv` and `<stem>.json`, returning both paths.
    pub fn write(&self, stem: &Path, config: &RunConfig) -> std::io::Result<(PathBuf, PathBuf)> {
        let csv = with_ext(stem, "csv");
        let json = with_ext(stem, "json");
        if let Some(dir) = stem.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::File::create(&csv)?.write_all(self.csv().as_bytes())?;
        std::fs::File::create(&json)?.write_all(self.json(config, now()).as_bytes())?;
        Ok((csv, json))
    }
}

fn with_ext(stem: &Path, ext: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Machine-readable error record printed on failure.
pub fn error_record(kind: &str, message: &str) -> String {
    serde_json::json!({ "schema": SCHEMA, "error": { "kind": kind, "message": message } }).to_string()
}
