//! JSON output records and error reporting.

use std::path::Path;

use persistent_cycles::{CellComplex, Death, Interval, PersistentCycle};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    Usage,
    Parse,
    Io,
    Precondition,
    Internal,
}

#[derive(Clone, Debug, Serialize)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
    /// Name of the library error, when one was raised.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
}

impl CliError {
    fn new(kind: ErrorKind, message: String) -> Self {
        CliError {
            kind,
            message,
            code: None,
            file: None,
            line: None,
        }
    }

    pub fn usage(message: String) -> Self {
        Self::new(ErrorKind::Usage, message)
    }

    pub fn parse(message: String) -> Self {
        Self::new(ErrorKind::Parse, message)
    }

    pub fn precondition(message: String) -> Self {
        Self::new(ErrorKind::Precondition, message)
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self::new(ErrorKind::Io, format!("{}: {e}", path.display()))
    }

    pub fn at_line(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }

    pub fn in_file(mut self, path: &Path) -> Self {
        self.file.get_or_insert_with(|| path.display().to_string());
        self
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind {
            ErrorKind::Usage | ErrorKind::Parse | ErrorKind::Io => 2,
            ErrorKind::Precondition => 3,
            ErrorKind::Internal => 4,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl From<persistent_cycles::Error> for CliError {
    fn from(e: persistent_cycles::Error) -> Self {
        let kind = if e.is_internal() {
            ErrorKind::Internal
        } else if matches!(e, persistent_cycles::Error::Io(_)) {
            ErrorKind::Io
        } else {
            ErrorKind::Precondition
        };
        let debug = format!("{e:?}");
        let code = debug
            .split(|c: char| !c.is_alphanumeric())
            .next()
            .unwrap_or_default();
        CliError {
            code: Some(code.to_string()),
            ..Self::new(kind, e.to_string())
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntervalOut {
    pub dim: usize,
    pub birth: usize,
    pub death: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub birth_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub death_value: Option<f64>,
}

impl IntervalOut {
    pub fn new(iv: &Interval, values: Option<&[f64]>) -> Self {
        let death = match iv.death {
            Death::At(j) => Some(j),
            Death::Never => None,
        };
        IntervalOut {
            dim: iv.dim,
            birth: iv.birth,
            death,
            birth_value: values.map(|v| v[iv.birth - 1]),
            death_value: values.zip(death).map(|(v, j)| v[j - 1]),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DiagramOut {
    pub intervals: Vec<IntervalOut>,
}

#[derive(Debug, Serialize)]
pub struct CycleOut {
    pub interval: IntervalOut,
    pub cells: Vec<Vec<usize>>,
    pub weight: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obj: Option<String>,
}

impl CycleOut {
    pub fn new(k: &CellComplex, interval: IntervalOut, cycle: &PersistentCycle) -> Self {
        CycleOut {
            interval,
            cells: k.chain_vertices(&cycle.chain),
            weight: cycle.weight,
            obj: None,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OrientedCellOut {
    pub vertices: Vec<usize>,
    pub orientation: &'static str,
}

#[derive(Debug, Serialize)]
pub struct VoidOut {
    pub cells: Vec<OrientedCellOut>,
}

#[derive(Debug, Serialize)]
pub struct VoidsOut {
    pub dim: usize,
    pub voids: Vec<VoidOut>,
}
