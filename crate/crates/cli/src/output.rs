//! Row output with a trailing completion marker.
//!
//! CSV rows are flushed as they arrive, so an interrupted run leaves every
//! finished row on disk; the last line is `# complete rows=N` or
//! `# incomplete rows=N error=...`. JSON output is written once at the end as
//! `{"complete": bool, "error": ..., "rows": [...]}`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::args::Format;
use crate::error::CliError;

pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Output(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

enum Target {
    Csv(csv::Writer<Box<dyn Write>>),
    Json(Box<dyn Write>, Vec<Value>),
}

pub struct RowSink {
    target: Target,
    rows: usize,
}

impl RowSink {
    pub fn new(out: Box<dyn Write>, format: Format, header: &[&str]) -> Result<Self, CliError> {
        let target = match format {
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
                w.write_record(header)?;
                w.flush()?;
                Target::Csv(w)
            }
            Format::Json => Target::Json(out, Vec::new()),
        };
        Ok(Self { target, rows: 0 })
    }

    pub fn push<T: Serialize>(&mut self, row: &T) -> Result<(), CliError> {
        match &mut self.target {
            Target::Csv(w) => {
                w.serialize(row)?;
                w.flush()?;
            }
            Target::Json(_, rows) => rows.push(serde_json::to_value(row)?),
        }
        self.rows += 1;
        Ok(())
    }

    /// Writes the completion marker; `error` marks the output as partial.
    pub fn finish(self, error: Option<&str>) -> Result<(), CliError> {
        match self.target {
            Target::Csv(w) => {
                let mut out = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
                match error {
                    None => writeln!(out, "# complete rows={}", self.rows)?,
                    Some(e) => writeln!(out, "# incomplete rows={} error={}", self.rows, e.replace('\n', " "))?,
                }
                out.flush()?;
            }
            Target::Json(mut out, rows) => {
                let doc = serde_json::json!({
                    "complete": error.is_none(),
                    "error": error,
                    "rows": rows,
                });
                serde_json::to_writer_pretty(&mut out, &doc)?;
                writeln!(out)?;
                out.flush()?;
            }
        }
        Ok(())
    }
}
