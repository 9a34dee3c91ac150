//! CSV file formats. All numbers are serialized with 17 significant digits
//! so that doubles round-trip bit-exactly.

use std::fs;
use std::path::Path;

use adlab_core::{CMatrix, Signal};
use num_complex::Complex64;

use crate::error::CliError;

pub const SIGNAL_HEADER: &str = "# adlab-signal v1";
pub const MATRIX_HEADER: &str = "# adlab-matrix v1";
pub const GRID_HEADER: &str = "# adlab-grid v1";

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_f64(s: &str) -> Result<f64, CliError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| CliError::Format(format!("bad number: {s:?}")))
}

/// Pulls `key=<value>` out of a header line.
fn header_field<'a>(line: &'a str, key: &str) -> Result<&'a str, CliError> {
    line.split_whitespace()
        .find_map(|tok| tok.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .ok_or_else(|| CliError::Format(format!("header missing {key}=")))
}

pub fn write_signal(path: &Path, x: &Signal) -> Result<(), CliError> {
    let mut out = format!("{SIGNAL_HEADER} M={} dt={}\n", x.len(), fmt_f64(x.dt));
    for v in &x.samples {
        out.push_str(&fmt_f64(v.re));
        out.push(',');
        out.push_str(&fmt_f64(v.im));
        out.push('\n');
    }
    fs::write(path, out).map_err(CliError::Io)
}

pub fn read_signal(path: &Path) -> Result<Signal, CliError> {
    let text = fs::read_to_string(path).map_err(CliError::Io)?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if !header.starts_with(SIGNAL_HEADER) {
        return Err(CliError::Format(format!(
            "expected `{SIGNAL_HEADER}` header in {}",
            path.display()
        )));
    }
    let m: usize = header_field(header, "M")?
        .parse()
        .map_err(|_| CliError::Format("bad M".into()))?;
    let dt = parse_f64(header_field(header, "dt")?)?;
    let mut samples = Vec::with_capacity(m);
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split(',');
        let re = parse_f64(it.next().unwrap_or_default())?;
        let im = parse_f64(it.next().ok_or_else(|| CliError::Format("missing im".into()))?)?;
        samples.push(Complex64::new(re, im));
    }
    if samples.len() != m {
        return Err(CliError::Format(format!(
            "header says M={m} but found {} rows",
            samples.len()
        )));
    }
    Signal::new(samples, dt, 0.0).map_err(CliError::Core)
}

pub fn write_matrix(path: &Path, a: &CMatrix) -> Result<(), CliError> {
    let m = a.nrows();
    let mut out = format!("{MATRIX_HEADER} M={m}\n");
    for i in 0..m {
        for j in 0..m {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&fmt_f64(a[(i, j)].re));
            out.push(',');
            out.push_str(&fmt_f64(a[(i, j)].im));
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(CliError::Io)
}

pub fn read_matrix(path: &Path) -> Result<CMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(CliError::Io)?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if !header.starts_with(MATRIX_HEADER) {
        return Err(CliError::Format(format!(
            "expected `{MATRIX_HEADER}` header in {}",
            path.display()
        )));
    }
    let m: usize = header_field(header, "M")?
        .parse()
        .map_err(|_| CliError::Format("bad M".into()))?;
    let mut a = CMatrix::zeros(m, m);
    let mut row = 0usize;
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        if row >= m {
            return Err(CliError::Format("too many matrix rows".into()));
        }
        let nums: Vec<f64> = line
            .split(',')
            .map(parse_f64)
            .collect::<Result<_, _>>()?;
        if nums.len() != 2 * m {
            return Err(CliError::Format(format!(
                "row {row}: expected {} values, found {}",
                2 * m,
                nums.len()
            )));
        }
        for j in 0..m {
            a[(row, j)] = Complex64::new(nums[2 * j], nums[2 * j + 1]);
        }
        row += 1;
    }
    if row != m {
        return Err(CliError::Format(format!("expected {m} rows, found {row}")));
    }
    Ok(a)
}

fn grid_header(rows: usize, cols: usize, row_axis: &str, col_axis: &str) -> String {
    format!("{GRID_HEADER} rows={rows} cols={cols} row-axis={row_axis} col-axis={col_axis}\n")
}

pub fn write_real_grid(
    path: &Path,
    values: &[Vec<f64>],
    row_axis: &str,
    col_axis: &str,
) -> Result<(), CliError> {
    let cols = values.first().map_or(0, Vec::len);
    let mut out = grid_header(values.len(), cols, row_axis, col_axis);
    for row in values {
        let line: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    fs::write(path, out).map_err(CliError::Io)
}

/// Complex grid rows hold `2 * cols` numbers, re/im interleaved.
pub fn write_complex_grid(
    path: &Path,
    values: &[Vec<Complex64>],
    row_axis: &str,
    col_axis: &str,
) -> Result<(), CliError> {
    let cols = values.first().map_or(0, Vec::len);
    let mut out = grid_header(values.len(), cols, row_axis, col_axis);
    for row in values {
        let line: Vec<String> = row
            .iter()
            .flat_map(|v| [fmt_f64(v.re), fmt_f64(v.im)])
            .collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    fs::write(path, out).map_err(CliError::Io)
}
