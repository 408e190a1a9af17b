use std::io::Write;
use std::path::Path;

use cumdir::BivariateSample;

use crate::error::CliError;

/// Reads two numeric columns. Errors name the offending line.
pub fn read_pair_csv(path: &Path, has_header: bool) -> Result<BivariateSample, CliError> {
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut x = Vec::new();
    let mut y = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != 2 {
            return Err(CliError::Input(format!(
                "line {line}: expected 2 columns, found {}",
                record.len()
            )));
        }
        let parse = |cell: &str| -> Result<f64, CliError> {
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(CliError::Input(format!(
                    "line {line}: '{cell}' is not a finite number"
                ))),
            }
        };
        x.push(parse(&record[0])?);
        y.push(parse(&record[1])?);
    }
    BivariateSample::new(x, y).map_err(CliError::from_lib)
}

pub fn write_pair_csv(path: &Path, sample: &BivariateSample, header: bool) -> Result<(), CliError> {
    let io_err = |e: std::io::Error| CliError::Input(format!("{}: {e}", path.display()));
    let file = std::fs::File::create(path).map_err(io_err)?;
    let mut out = std::io::BufWriter::new(file);
    if header {
        writeln!(out, "x,y").map_err(io_err)?;
    }
    for (a, b) in sample.x().iter().zip(sample.y()) {
        writeln!(out, "{a},{b}").map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}
