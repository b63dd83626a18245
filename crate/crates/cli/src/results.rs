//! Sweep results as CSV.

use std::io::{Read, Write};

use anyhow::{bail, Context, Result};

pub const HEADER: [&str; 7] = ["U", "E_vqe", "E_exact", "E_meanfield", "iterations", "wall_time", "converged"];

/// One sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub u: f64,
    pub e_vqe: f64,
    pub e_exact: f64,
    pub e_meanfield: f64,
    pub iterations: usize,
    /// Seconds.
    pub wall_time: f64,
    pub converged: bool,
}

/// Ten significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.9e}")
}

impl SweepRow {
    fn record(&self) -> [String; 7] {
        [
            format_float(self.u),
            format_float(self.e_vqe),
            format_float(self.e_exact),
            format_float(self.e_meanfield),
            self.iterations.to_string(),
            format_float(self.wall_time),
            self.converged.to_string(),
        ]
    }
}

pub fn write_rows<W: Write>(w: W, rows: &[SweepRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(HEADER)?;
    for row in rows {
        out.write_record(row.record())?;
    }
    out.flush()?;
    Ok(())
}

pub fn emit(rows: &[SweepRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_rows(&mut buf, rows)?;
    Ok(String::from_utf8(buf)?)
}

pub fn read_rows<R: Read>(r: R) -> Result<Vec<SweepRow>> {
    let mut input = csv::Reader::from_reader(r);
    let header = input.headers()?.clone();
    if header.iter().ne(HEADER) {
        bail!("unexpected header {:?}", header.iter().collect::<Vec<_>>());
    }
    let mut rows = Vec::new();
    for (line, record) in input.records().enumerate() {
        let record = record?;
        let ctx = || format!("row {}", line + 1);
        let float = |k: usize| -> Result<f64> {
            record[k]
                .parse()
                .with_context(|| format!("{} column {}", ctx(), HEADER[k]))
        };
        rows.push(SweepRow {
            u: float(0)?,
            e_vqe: float(1)?,
            e_exact: float(2)?,
            e_meanfield: float(3)?,
            iterations: record[4].parse().with_context(|| format!("{} column iterations", ctx()))?,
            wall_time: float(5)?,
            converged: record[6].parse().with_context(|| format!("{} column converged", ctx()))?,
        });
    }
    Ok(rows)
}

pub fn parse(text: &str) -> Result<Vec<SweepRow>> {
    read_rows(text.as_bytes())
}
