//! CSV emission: stable 12-significant-digit decimal formatting and table
//! writers for reports and sweep curves.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use blackbox_search::VerificationReport;

use crate::config::CliResult;

/// Formats with 12 significant digits in plain decimal, deterministically.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.00000000000".into();
    }
    let sci = format!("{:e}", x.abs());
    let exponent: i32 = sci
        .split('e')
        .nth(1)
        .and_then(|e| e.parse().ok())
        .unwrap_or(0);
    let decimals = (11 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

/// A header row plus data rows, ready to serialize.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }
}

/// One row per verification report, details flattened into the last column.
pub fn report_table(reports: &[VerificationReport]) -> Table {
    let mut table = Table::new(vec![
        "id", "instance", "mode", "observed", "bound", "slack", "passed", "details",
    ]);
    for report in reports {
        let details = report
            .details
            .iter()
            .map(|row| format!("{}={}", row.label, sig12(row.value)))
            .collect::<Vec<_>>()
            .join("; ");
        table.rows.push(vec![
            report.id.to_string(),
            report.instance.clone(),
            report.mode.clone(),
            sig12(report.observed),
            sig12(report.bound),
            sig12(report.slack()),
            report.passed.to_string(),
            details,
        ]);
    }
    table
}

/// Two-column threshold sweep for plotting.
pub fn plot_table(points: &[(f64, f64)]) -> Table {
    let mut table = Table::new(vec!["threshold", "observed-fraction"]);
    for &(threshold, fraction) in points {
        table
            .rows
            .push(vec![sig12(threshold), sig12(fraction)]);
    }
    table
}

/// Writes the table as CSV to the path, or to stdout when no path is given.
pub fn write_table(table: &Table, dest: Option<&Path>) -> CliResult<()> {
    let sink: Box<dyn Write> = match dest {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut writer = csv::Writer::from_writer(sink);
    writer.write_record(&table.header)?;
    for row in &table.rows {
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok(())
}
