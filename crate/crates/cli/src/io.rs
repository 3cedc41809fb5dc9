//! State files (JSON) and report files (CSV with `#` metadata lines).
//!
//! Floats are serialized with the shortest representation that parses back
//! to the identical bits, so write-then-read round-trips are exact and a
//! fixed seed reproduces a byte-identical payload (the `# timestamp` line is
//! the only run-dependent part of a report).

use crate::CliError;
use harmony_core::{Complex64, ComplexMatrix, DensityMatrix, Tolerances};
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::Write;
use std::path::Path;

pub const FORMAT_VERSION: &str = "1";

/// On-disk density matrix: `matrix[i][j] = [re, im]`.
#[derive(Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub format_version: String,
    pub n_qubits: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix, label: Option<String>) -> Self {
        let dim = rho.dim();
        let matrix = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        let z = rho.matrix()[(i, j)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        Self {
            format_version: FORMAT_VERSION.to_string(),
            n_qubits: rho.n_qubits(),
            label,
            matrix,
        }
    }

    /// Schema validation (parse-level, exit 2) followed by density-matrix
    /// validation (exit 3).
    pub fn into_density(self, tol: &Tolerances) -> Result<(DensityMatrix, Option<String>), CliError> {
        if self.format_version != FORMAT_VERSION {
            return Err(CliError::Parse(format!(
                "field `format_version`: expected \"{FORMAT_VERSION}\", got \"{}\"",
                self.format_version
            )));
        }
        if !(1..=3).contains(&self.n_qubits) {
            return Err(CliError::Parse(format!(
                "field `n_qubits`: expected 1, 2 or 3, got {}",
                self.n_qubits
            )));
        }
        let dim = 1usize << self.n_qubits;
        if self.matrix.len() != dim {
            return Err(CliError::Parse(format!(
                "field `matrix`: expected {dim} rows for n_qubits={}, got {}",
                self.n_qubits,
                self.matrix.len()
            )));
        }
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != dim {
                return Err(CliError::Parse(format!(
                    "field `matrix[{i}]`: expected {dim} entries, got {}",
                    row.len()
                )));
            }
            for (j, [re, im]) in row.iter().enumerate() {
                if !re.is_finite() || !im.is_finite() {
                    return Err(CliError::Parse(format!(
                        "field `matrix[{i}][{j}]`: non-finite entry [{re}, {im}]"
                    )));
                }
            }
        }
        let mat = ComplexMatrix::from_fn(dim, |i, j| {
            Complex64::new(self.matrix[i][j][0], self.matrix[i][j][1])
        });
        let rho = DensityMatrix::new_with(self.n_qubits, mat, tol)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        Ok((rho, self.label))
    }
}

pub fn read_state(path: &Path, tol: &Tolerances) -> Result<(DensityMatrix, Option<String>), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    // serde_json's message already carries the line/column position
    let file: StateFile = serde_json::from_str(&text).map_err(|e| CliError::Parse(e.to_string()))?;
    file.into_density(tol)
}

pub fn write_state(path: &Path, rho: &DensityMatrix, label: Option<String>) -> Result<(), CliError> {
    let file = StateFile::from_density(rho, label);
    let mut text = serde_json::to_string_pretty(&file)
        .map_err(|e| CliError::Parse(format!("serialization failed: {e}")))?;
    text.push('\n');
    fs::write(path, text)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

/// CSV report with `#`-prefixed metadata lines before the header row.
pub struct Report {
    metadata: Vec<(String, String)>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    trailing: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut report = Self {
            metadata: Vec::new(),
            header: Vec::new(),
            rows: Vec::new(),
            trailing: Vec::new(),
        };
        report.meta("report", "harmony");
        report.meta("command", command);
        report
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    /// Summary metadata emitted after the data rows.
    pub fn summary(&mut self, key: &str, value: impl ToString) {
        self.trailing.push((key.to_string(), value.to_string()));
    }

    pub fn header(&mut self, columns: &[&str]) {
        self.header = columns.iter().map(|s| s.to_string()).collect();
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len(), "row width mismatch");
        self.rows.push(cells);
    }

    /// Renders everything; the timestamp is appended here so the rest of the
    /// payload is byte-identical for identical inputs and seeds.
    pub fn render(&self, timestamp_unix_s: u64) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        out.push_str(&format!("# timestamp: {timestamp_unix_s}\n"));
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        for (k, v) in &self.trailing {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        out
    }

    pub fn write(&self, target: Option<&Path>, timestamp_unix_s: u64) -> Result<(), CliError> {
        let text = self.render(timestamp_unix_s);
        match target {
            Some(path) => fs::write(path, text)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
            None => {
                std::io::stdout()
                    .write_all(text.as_bytes())
                    .map_err(|e| CliError::Usage(format!("cannot write to stdout: {e}")))
            }
        }
    }
}

/// Shortest-round-trip decimal form of a float (Rust's default `Display`).
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}
