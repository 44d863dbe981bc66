//! Delimited trace files: header `p,y`, then one `confidence,label` row per
//! sample in arrival order.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use hil_core::{Label, Sample64, Trace64};

use crate::error::{CliError, Result};

/// Reads and validates a trace file. Errors carry 1-based line numbers.
pub fn read_trace(path: &Path) -> Result<Trace64> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    parse_trace(file, path)
}

/// Parses trace text from any reader; `origin` only labels errors.
pub fn parse_trace<R: Read>(reader: R, origin: &Path) -> Result<Trace64> {
    let parse_error = |line: u64, message: String| CliError::Parse { path: origin.to_path_buf(), line, message };
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);

    let headers = rdr.headers().map_err(|e| csv_error(e, origin))?.clone();
    if headers.is_empty() {
        return Err(CliError::EmptyTrace { path: origin.to_path_buf() });
    }
    if headers.len() != 2 || &headers[0] != "p" || &headers[1] != "y" {
        return Err(parse_error(1, format!("expected header `p,y`, found `{}`", headers.iter().collect::<Vec<_>>().join(","))));
    }

    let mut samples = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(e, origin))?;
        let line = record.position().map_or(0, |p| p.line());
        let p: f64 = record[0]
            .parse()
            .map_err(|_| parse_error(line, format!("confidence `{}` is not a number", &record[0])))?;
        let y = match &record[1] {
            "0" => Label::Correct,
            "1" => Label::Wrong,
            other => return Err(parse_error(line, format!("label `{other}` must be 0 or 1"))),
        };
        let sample = Sample64::new(p, y).map_err(|e| parse_error(line, e.to_string()))?;
        samples.push(sample);
    }
    Trace64::new(samples).map_err(|_| CliError::EmptyTrace { path: origin.to_path_buf() })
}

fn csv_error(e: csv::Error, origin: &Path) -> CliError {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(source) => CliError::io(origin, source),
        csv::ErrorKind::UnequalLengths { len, .. } => CliError::Parse {
            path: origin.to_path_buf(),
            line,
            message: format!("expected 2 fields, found {len}"),
        },
        kind => CliError::Parse { path: origin.to_path_buf(), line, message: format!("{kind:?}") },
    }
}

/// Writes `trace` with shortest round-trip formatting of each confidence.
pub fn write_trace<W: Write>(mut out: W, trace: &Trace64) -> std::io::Result<()> {
    writeln!(out, "p,y")?;
    for s in trace.samples() {
        writeln!(out, "{},{}", s.p, s.y)?;
    }
    out.flush()
}

pub fn write_trace_file(path: &Path, trace: &Trace64) -> Result<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    write_trace(std::io::BufWriter::new(file), trace).map_err(|e| CliError::io(path, e))
}
