use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::args::{Format, OutputArgs};
use crate::error::{CliError, CliResult};

fn sink(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            Box::new(BufWriter::new(File::create(p).map_err(|source| CliError::Io { path: p.to_path_buf(), source })?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_csv<R: Serialize>(path: Option<&Path>, rows: &[R]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(sink(path)?);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<D: Serialize>(path: Option<&Path>, doc: &D) -> CliResult<()> {
    let mut w = sink(path)?;
    serde_json::to_writer_pretty(&mut w, doc)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Data rows as CSV or a JSON document, then the summary as one JSON line:
/// on stdout when the data went to a file, on stderr otherwise.
pub fn emit<S: Serialize, R: Serialize, D: Serialize>(
    out: &OutputArgs,
    summary: &S,
    rows: &[R],
    doc: impl FnOnce() -> D,
) -> CliResult<()> {
    let path = out.output.as_deref();
    match out.format.unwrap_or(Format::Csv) {
        Format::Csv => write_csv(path, rows)?,
        Format::Json => write_json(path, &doc())?,
    }
    let line = serde_json::to_string(summary)?;
    if path.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(())
}
