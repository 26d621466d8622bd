//! Result rows shared by the pipelines, the cost model and the CLI.

use std::fmt;
use std::fs::OpenOptions;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Aqce,
    Naive,
    QromModel,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Aqce => "aqce",
            Method::Naive => "naive",
            Method::QromModel => "qrom-model",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aqce" => Ok(Method::Aqce),
            "naive" => Ok(Method::Naive),
            "qrom-model" => Ok(Method::QromModel),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

/// Outcome flag carried in every row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    /// AQCE hit its gate cap above the threshold.
    NotConverged,
    /// No ε_T in the bracket met the budget.
    BudgetUnreachable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ok => "ok",
            Status::NotConverged => "not-converged",
            Status::BudgetUnreachable => "budget-unreachable",
        })
    }
}

/// One CSV row. For the QROM model `achieved_error` is the budget the model
/// is sized for, since no circuit exists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisReport {
    pub method: Method,
    #[serde(rename = "L")]
    pub terms: usize,
    #[serde(rename = "m")]
    pub qubits: usize,
    pub two_qubit_gates: usize,
    pub rotation_count: usize,
    pub t_count: u64,
    pub ancilla_count: u64,
    pub achieved_error: f64,
    pub epsilon: f64,
    pub wall_seconds: f64,
    pub status: Status,
    /// Calibrated per-rotation tolerance, empty when nothing was lowered.
    pub eps_t: Option<f64>,
}

pub const REPORT_COLUMNS: [&str; 12] = [
    "method",
    "L",
    "m",
    "two_qubit_gates",
    "rotation_count",
    "t_count",
    "ancilla_count",
    "achieved_error",
    "epsilon",
    "wall_seconds",
    "status",
    "eps_t",
];

/// Per-stage wall-clock split of one pipeline run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StageTimings {
    pub aqce_seconds: f64,
    pub decomp_seconds: f64,
    pub synth_seconds: f64,
    pub total_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub method: Method,
    #[serde(rename = "L")]
    pub terms: usize,
    #[serde(rename = "m")]
    pub qubits: usize,
    pub t_count: u64,
    pub status: Status,
    pub aqce_seconds: f64,
    pub decomp_seconds: f64,
    pub synth_seconds: f64,
    pub total_seconds: f64,
}

impl BenchRow {
    pub fn new(report: &SynthesisReport, t: &StageTimings) -> Self {
        BenchRow {
            method: report.method,
            terms: report.terms,
            qubits: report.qubits,
            t_count: report.t_count,
            status: report.status,
            aqce_seconds: t.aqce_seconds,
            decomp_seconds: t.decomp_seconds,
            synth_seconds: t.synth_seconds,
            total_seconds: t.total_seconds,
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io { path: PathBuf::new(), source },
        other => Error::Parse { line: 0, msg: format!("{other:?}") },
    }
}

/// Serializes rows, header first.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io { path: PathBuf::new(), source: e.into_error() })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// The data line of a single row, without header or trailing newline.
pub fn csv_line<T: Serialize>(row: &T) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.serialize(row).map_err(csv_err)?;
    let bytes = w.into_inner().map_err(|e| Error::Io { path: PathBuf::new(), source: e.into_error() })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8").trim_end().to_string())
}

pub fn from_csv<T: for<'de> Deserialize<'de>>(text: &str) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize().map(|row| row.map_err(csv_err)).collect()
}

/// Appends a row, writing the header first when the file is new or empty.
pub fn append_csv<T: Serialize>(path: impl AsRef<Path>, row: &T) -> Result<()> {
    let path = path.as_ref();
    let io = |source| Error::Io { path: path.to_path_buf(), source };
    let mut file = OpenOptions::new().create(true).read(true).append(true).open(path).map_err(io)?;
    let mut existing = String::new();
    file.read_to_string(&mut existing).map_err(io)?;
    let text = if existing.is_empty() { to_csv(std::slice::from_ref(row))? } else { csv_line(row)? + "\n" };
    file.write_all(text.as_bytes()).map_err(io)
}
