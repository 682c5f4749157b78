//! CSV and plot-data writers. Both are deterministic functions of the table.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use super::{SweepRow, SweepTable};
use crate::error::Result;

pub const CSV_HEADER: [&str; 7] = [
    "scheme",
    "node",
    "pt_db",
    "outage_cf",
    "converged",
    "outage_mc",
    "mc_se",
];

const SIGNIFICANT_DIGITS: usize = 10;

/// `%.10g`-style formatting: ten significant digits, trailing zeros dropped,
/// scientific notation outside 1e-4 ≤ |x| < 1e10.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".to_string() } else { x.to_string() };
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_sig).unwrap_or_default()
}

fn csv_record(row: &SweepRow) -> [String; 7] {
    [
        row.scheme.to_string(),
        row.node.to_string(),
        format_sig(row.pt_db),
        opt(row.closed_form),
        row.converged.to_string(),
        opt(row.mc_probability),
        opt(row.mc_std_error),
    ]
}

/// Writes the table as CSV (header plus one line per row, LF endings).
pub fn write_csv<W: Write>(table: &SweepTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io::Error::from)?;
    for row in &table.rows {
        w.write_record(csv_record(row)).map_err(io::Error::from)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(table: &SweepTable, path: impl AsRef<Path>) -> Result<()> {
    write_csv(table, BufWriter::new(File::create(path)?))
}

/// One block per (scheme, node): a `# scheme node` comment, then
/// `pt_db outage` lines. Blocks are separated by two blank lines so that
/// gnuplot can address them with `index`. Rows without a closed-form value
/// are skipped.
pub fn write_plot_data<W: Write>(table: &SweepTable, mut out: W) -> Result<()> {
    let mut current = None;
    for row in &table.rows {
        let Some(p) = row.closed_form else { continue };
        let key = (row.scheme, row.node);
        if current != Some(key) {
            if current.is_some() {
                out.write_all(b"\n\n")?;
            }
            writeln!(out, "# {} {}", row.scheme, row.node)?;
            current = Some(key);
        }
        writeln!(out, "{} {}", format_sig(row.pt_db), format_sig(p))?;
    }
    out.flush()?;
    Ok(())
}

pub fn emit_plot_data(table: &SweepTable, path: impl AsRef<Path>) -> Result<()> {
    write_plot_data(table, BufWriter::new(File::create(path)?))
}
