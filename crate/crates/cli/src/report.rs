//! Rendering of command results as CSV or as a plain text record.

use std::io::Write;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Text,
}

/// Outcome class, mapped to the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    CheckFailed,
    NotConverged,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::CheckFailed => 1,
            Status::NotConverged => 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Summary lines written after the table.
    pub notes: Vec<(String, String)>,
    pub status: Status,
}

impl Report {
    pub fn new(columns: &[&str]) -> Self {
        Report {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
            status: Status::Pass,
        }
    }

    pub fn row(&mut self, values: Vec<String>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(values);
    }

    pub fn note(&mut self, key: &str, value: impl Into<String>) {
        self.notes.push((key.to_string(), value.into()));
    }

    /// Raises the status; a failed check outranks a pass, non-convergence
    /// outranks both.
    pub fn flag(&mut self, status: Status) {
        self.status = self.status.max(status);
    }
}

/// `# key = value` lines echoing the command and every parameter.
pub fn config_header(command: &str, params: &serde_json::Value) -> Vec<String> {
    let mut lines = vec![format!("# schurcert {command}")];
    if let serde_json::Value::Object(map) = params {
        for (key, value) in map {
            let shown = match value {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Null => "default".to_string(),
                other => other.to_string(),
            };
            lines.push(format!("# {key} = {shown}"));
        }
    }
    lines
}

pub fn render(header: &[String], report: &Report, format: Format) -> std::io::Result<Vec<u8>> {
    let mut out = Vec::new();
    for line in header {
        writeln!(out, "{line}")?;
    }
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&report.columns)?;
            for row in &report.rows {
                w.write_record(row)?;
            }
            out.extend(w.into_inner().map_err(|e| e.into_error())?);
            for (k, v) in &report.notes {
                writeln!(out, "# {k} = {v}")?;
            }
        }
        Format::Text => {
            for (i, row) in report.rows.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                for (c, v) in report.columns.iter().zip(row) {
                    writeln!(out, "{c}: {v}")?;
                }
            }
            if !report.notes.is_empty() && !report.rows.is_empty() {
                writeln!(out)?;
            }
            for (k, v) in &report.notes {
                writeln!(out, "{k}: {v}")?;
            }
        }
    }
    Ok(out)
}
