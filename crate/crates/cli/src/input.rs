use std::fs::File;
use std::path::Path;

use xihd_core::moments::MIN_N_TEST;
use xihd_core::DataMatrix;

use crate::CliError;

/// Reads a header-first CSV of numeric columns.
pub fn read_csv(path: &Path) -> Result<DataMatrix, CliError> {
    let file = File::open(path)
        .map_err(|e| CliError::Io(format!("cannot open {}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let labels: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?
        .iter()
        .map(str::to_string)
        .collect();

    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        // header is line 1
        let line = record.position().map_or(idx as u64 + 2, |p| p.line());
        let row = record
            .iter()
            .zip(&labels)
            .map(|(cell, label)| {
                if cell.is_empty() {
                    return Err(CliError::Contract(format!(
                        "missing value at line {line}, column `{label}`"
                    )));
                }
                match cell.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    Ok(_) => Err(CliError::Contract(format!(
                        "non-finite value `{cell}` at line {line}, column `{label}`"
                    ))),
                    Err(_) => Err(CliError::Contract(format!(
                        "non-numeric value `{cell}` at line {line}, column `{label}`"
                    ))),
                }
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }

    if rows.len() < MIN_N_TEST {
        return Err(CliError::Contract(format!(
            "{} has {} data rows; at least {MIN_N_TEST} are required",
            path.display(),
            rows.len()
        )));
    }
    if labels.len() < 2 {
        return Err(CliError::Contract(format!(
            "{} has {} column(s); at least 2 are required",
            path.display(),
            labels.len()
        )));
    }
    DataMatrix::from_rows(labels, &rows).map_err(|e| CliError::contract(e, None))
}
