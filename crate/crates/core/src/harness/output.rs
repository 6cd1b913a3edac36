//! Machine-readable output: UTF-8 CSV with 17-significant-digit values, a
//! JSON sidecar carrying the full provenance, and optional gnuplot-ready
//! `.dat` emission. Rerunning a config reproduces every byte.

use crate::error::{Error, Result};
use crate::harness::run::ErrorSeries;
use crate::harness::sweep::SweepTable;

pub const CSV_HEADER: &str = "time/epsilon,model,error_L2,error_H1,checkpoint_tag";

/// FNV-1a 64-bit hash; used to stamp outputs with their config.
pub fn fnv64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

fn num(v: f64) -> String {
    // 17 significant digits round-trip any f64
    format!("{v:.16e}")
}

pub fn series_to_csv(series: &ErrorSeries) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in &series.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            num(row.time),
            row.model,
            num(row.error_l2),
            num(row.error_h1),
            row.tag
        ));
    }
    out
}

pub fn sweep_to_csv(table: &SweepTable) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            num(row.epsilon),
            row.model,
            num(row.error_l2),
            num(row.error_h1),
            row.tag
        ));
    }
    out
}

/// Whitespace-separated variant for gnuplot, '#'-prefixed header.
pub fn csv_to_dat(csv: &str) -> String {
    let mut out = String::new();
    for (i, line) in csv.lines().enumerate() {
        if i == 0 {
            out.push_str(&format!("# {}\n", line.replace(',', " ")));
        } else {
            let cols: Vec<&str> = line.split(',').collect();
            let tag = if cols.len() > 4 && !cols[4].is_empty() { cols[4] } else { "-" };
            out.push_str(&format!(
                "{} {} {} {} {}\n",
                cols[0], cols[1], cols[2], cols[3], tag
            ));
        }
    }
    out
}

/// One parsed sweep row: `(epsilon, model, error_l2, error_h1, tag)`.
pub type SweepCsvRow = (f64, String, f64, f64, String);

/// Parse a sweep CSV back into rows (the `rates` entry point re-fits slopes
/// from files).
pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepCsvRow>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 {
            if line.trim() != CSV_HEADER {
                return Err(Error::Config(format!(
                    "unexpected CSV header: {line:?} (want {CSV_HEADER:?})"
                )));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 5 {
            return Err(Error::Config(format!("line {} has {} columns", i + 1, cols.len())));
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|e| Error::Config(format!("line {}: {e}", i + 1)))
        };
        rows.push((
            parse(cols[0])?,
            cols[1].to_string(),
            parse(cols[2])?,
            parse(cols[3])?,
            cols[4].to_string(),
        ));
    }
    Ok(rows)
}
