//! CSV emission. Floats are written with Rust's shortest round-trip
//! formatting, so output is byte-identical across runs of the same build.

use crate::CliError;
use std::io::Write;
use std::path::Path;

pub enum CsvTarget<'a> {
    Stdout,
    File(&'a Path),
}

impl<'a> From<Option<&'a Path>> for CsvTarget<'a> {
    fn from(path: Option<&'a Path>) -> Self {
        match path {
            Some(p) => CsvTarget::File(p),
            None => CsvTarget::Stdout,
        }
    }
}

pub fn write_csv(target: CsvTarget, header: &[&str], rows: &[Vec<f64>]) -> Result<(), CliError> {
    match target {
        CsvTarget::Stdout => {
            let stdout = std::io::stdout();
            write_records(csv::Writer::from_writer(stdout.lock()), header, rows)
                .map_err(|e| CliError::Runtime(format!("cannot write CSV to stdout: {e}")))
        }
        CsvTarget::File(path) => {
            let writer = csv::Writer::from_path(path).map_err(|e| {
                CliError::Runtime(format!("cannot write CSV to {}: {e}", path.display()))
            })?;
            write_records(writer, header, rows).map_err(|e| {
                CliError::Runtime(format!("cannot write CSV to {}: {e}", path.display()))
            })
        }
    }
}

fn write_records<W: Write>(
    mut writer: csv::Writer<W>,
    header: &[&str],
    rows: &[Vec<f64>],
) -> Result<(), csv::Error> {
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row.iter().map(|v| v.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}
