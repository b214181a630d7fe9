//! Result tables and their CSV/JSON/gnuplot serializations.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

/// One table cell. Untagged so JSON round trips exactly: integers stay
/// integers, floats keep a fractional part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => {
                // Keep floats recognizable as floats across round trips.
                let s = format!("{v}");
                if s.contains('.') || s.contains('e') || s.contains("inf") || s.contains("NaN") {
                    s
                } else {
                    format!("{s}.0")
                }
            }
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
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

/// Reproducibility metadata carried by every table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Metadata {
    /// The full resolved config the experiment actually ran with.
    pub config: serde_json::Value,
    pub wall_time_ms: f64,
    pub version: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultTable {
    pub metadata: Metadata,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl ResultTable {
    pub fn new(columns: &[&str], config: serde_json::Value) -> Self {
        Self {
            metadata: Metadata {
                config,
                wall_time_ms: 0.0,
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "table must stay rectangular");
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Gnuplot,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "gnuplot" => Ok(OutputFormat::Gnuplot),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Writes the table.
///
/// CSV carries the metadata as `#`-prefixed comment lines ahead of the
/// header row (the wall-time line is the only part that varies between
/// identically-configured runs); JSON is the object
/// `{metadata, columns, rows}`; gnuplot is whitespace-separated columns
/// under a single `#` header comment that also echoes the config.
pub fn emit(table: &ResultTable, format: OutputFormat, out: &mut dyn Write) -> io::Result<()> {
    match format {
        OutputFormat::Csv => {
            writeln!(out, "# config: {}", table.metadata.config)?;
            writeln!(out, "# version: {}", table.metadata.version)?;
            writeln!(out, "# wall_time_ms: {}", table.metadata.wall_time_ms)?;
            writeln!(
                out,
                "{}",
                table
                    .columns
                    .iter()
                    .map(|c| csv_quote(c))
                    .collect::<Vec<_>>()
                    .join(",")
            )?;
            for row in &table.rows {
                writeln!(
                    out,
                    "{}",
                    row.iter()
                        .map(|c| csv_quote(&c.render()))
                        .collect::<Vec<_>>()
                        .join(",")
                )?;
            }
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, table)?;
            writeln!(out)?;
        }
        OutputFormat::Gnuplot => {
            writeln!(
                out,
                "# {}  config: {}  version: {}",
                table.columns.join(" "),
                table.metadata.config,
                table.metadata.version
            )?;
            for row in &table.rows {
                writeln!(
                    out,
                    "{}",
                    row.iter().map(|c| c.render()).collect::<Vec<_>>().join(" ")
                )?;
            }
        }
    }
    Ok(())
}
