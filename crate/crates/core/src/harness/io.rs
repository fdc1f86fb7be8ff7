use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::dynamics::{RunSeries, RunStatus, Sample};
use crate::error::{Error, Result};
use crate::lattice::{enforce_hermitian, Lattice, SpectralField, ZERO3};

pub const SERIES_SCHEMA: &str = "gevrey-series/1";
pub const FIELD_SCHEMA: &str = "gevrey-field/1";

const FIXED_COLUMNS: [&str; 5] = ["gevrey", "psi", "xi", "envelope", "margin"];

/// Free-form provenance written as `# key = value` lines above the table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SeriesHeader {
    pub entries: Vec<(String, String)>,
}

impl SeriesHeader {
    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn status_line(status: &RunStatus) -> String {
    match status {
        RunStatus::Completed => "completed".into(),
        RunStatus::BlowUp { last_valid_time } => format!("blow-up {}", num(*last_valid_time)),
    }
}

/// Comma-separated table with columns
/// `t, energy, sob_<q>..., gevrey, psi, xi, envelope, margin`, every value
/// printed with 17 significant digits.
pub fn series_to_string(series: &RunSeries, header: &SeriesHeader) -> Result<String> {
    if series.samples.is_empty() {
        return Err(Error::InsufficientData("series has no samples".into()));
    }
    let mut out = String::new();
    writeln!(out, "# {SERIES_SCHEMA}").unwrap();
    writeln!(out, "# status = {}", status_line(&series.status)).unwrap();
    for (key, value) in &header.entries {
        writeln!(out, "# {key} = {value}").unwrap();
    }
    let mut columns = vec!["t".to_string(), "energy".to_string()];
    columns.extend(series.sobolev_indices.iter().map(|q| format!("sob_{q}")));
    columns.extend(FIXED_COLUMNS.iter().map(|c| c.to_string()));
    writeln!(out, "{}", columns.join(",")).unwrap();
    for s in &series.samples {
        let mut row = vec![num(s.t), num(s.energy)];
        row.extend(s.sobolev.iter().map(|&x| num(x)));
        row.extend([s.gevrey, s.psi, s.xi, s.envelope, s.margin].map(num));
        writeln!(out, "{}", row.join(",")).unwrap();
    }
    Ok(out)
}

pub fn export_series(series: &RunSeries, header: &SeriesHeader, path: &Path) -> Result<()> {
    std::fs::write(path, series_to_string(series, header)?)?;
    Ok(())
}

fn parse_num(token: &str, line: usize) -> Result<f64> {
    token
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: `{token}` is not a number")))
}

/// Parses a series written by [`export_series`]; the header entries are
/// returned alongside.
pub fn parse_series(text: &str) -> Result<(RunSeries, SeriesHeader)> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first.trim() == format!("# {SERIES_SCHEMA}") => {}
        Some((_, first)) => {
            return Err(Error::SchemaMismatch(format!(
                "series starts with `{first}`, expected `# {SERIES_SCHEMA}`"
            )))
        }
        None => return Err(Error::SchemaMismatch("empty series file".into())),
    }
    let mut status = None;
    let mut header = SeriesHeader::default();
    let mut columns: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for (k, line) in lines {
        let line_no = k + 1;
        if let Some(comment) = line.strip_prefix('#') {
            let (key, value) = comment
                .split_once('=')
                .map(|(a, b)| (a.trim(), b.trim()))
                .ok_or_else(|| Error::Parse(format!("line {line_no}: malformed header")))?;
            if key == "status" {
                status = Some(if value == "completed" {
                    RunStatus::Completed
                } else if let Some(t) = value.strip_prefix("blow-up ") {
                    RunStatus::BlowUp { last_valid_time: parse_num(t, line_no)? }
                } else {
                    return Err(Error::Parse(format!("line {line_no}: unknown status `{value}`")));
                });
            } else {
                header.entries.push((key.to_string(), value.to_string()));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        match &columns {
            None => columns = Some(line.split(',').map(|c| c.trim().to_string()).collect()),
            Some(cols) => {
                let values = line
                    .split(',')
                    .map(|token| parse_num(token, line_no))
                    .collect::<Result<Vec<f64>>>()?;
                if values.len() != cols.len() {
                    return Err(Error::Parse(format!(
                        "line {line_no}: {} values for {} columns",
                        values.len(),
                        cols.len()
                    )));
                }
                rows.push(values);
            }
        }
    }
    let columns = columns.ok_or_else(|| Error::ReportIncomplete("series has no column header".into()))?;
    let status = status.ok_or_else(|| Error::ReportIncomplete("series has no status line".into()))?;

    let find = |name: &str| {
        columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::ReportIncomplete(format!("series has no `{name}` column")))
    };
    let t = find("t")?;
    let energy = find("energy")?;
    let fixed: Vec<usize> = FIXED_COLUMNS.iter().map(|c| find(c)).collect::<Result<_>>()?;
    let mut sobolev_indices = Vec::new();
    let mut sobolev_cols = Vec::new();
    for (k, c) in columns.iter().enumerate() {
        if let Some(q) = c.strip_prefix("sob_") {
            sobolev_indices.push(parse_num(q, 0)?);
            sobolev_cols.push(k);
        }
    }
    let samples = rows
        .iter()
        .map(|r| Sample {
            t: r[t],
            energy: r[energy],
            sobolev: sobolev_cols.iter().map(|&k| r[k]).collect(),
            gevrey: r[fixed[0]],
            psi: r[fixed[1]],
            xi: r[fixed[2]],
            envelope: r[fixed[3]],
            margin: r[fixed[4]],
            sigma_fit: None,
        })
        .collect();
    Ok((
        RunSeries {
            sobolev_indices,
            samples,
            status,
        },
        header,
    ))
}

pub fn read_series(path: &Path) -> Result<(RunSeries, SeriesHeader)> {
    parse_series(&std::fs::read_to_string(path)?)
}

/// Text format: a `# gevrey-field/1 N=<n>` header followed by rows
/// `n1 n2 n3 re1 im1 re2 im2 re3 im3`.
pub fn field_to_string(field: &SpectralField) -> String {
    let lattice = field.lattice();
    let mut out = format!("# {FIELD_SCHEMA} N={}\n", lattice.truncation());
    for (mode, c) in lattice.modes().iter().zip(field.coeffs()) {
        write!(out, "{} {} {}", mode[0], mode[1], mode[2]).unwrap();
        for z in c {
            write!(out, " {} {}", num(z.re), num(z.im)).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_field(field: &SpectralField, path: &Path) -> Result<()> {
    std::fs::write(path, field_to_string(field))?;
    Ok(())
}

/// Parses a field file. Modes that are absent are zero unless their mirror is
/// present, in which case they are filled by conjugate symmetry; the result is
/// then symmetrised exactly.
pub fn parse_field(text: &str) -> Result<SpectralField> {
    let mut lines = text.lines().enumerate();
    let first = lines.next().map(|(_, l)| l.trim()).unwrap_or("");
    let n: usize = first
        .strip_prefix(&format!("# {FIELD_SCHEMA} N="))
        .ok_or_else(|| Error::SchemaMismatch(format!("field header `{first}`")))?
        .parse()
        .map_err(|_| Error::Parse(format!("field header `{first}`")))?;
    let lattice = Lattice::new(n)?;
    let mut coeffs = vec![ZERO3; lattice.len()];
    let mut seen = vec![false; lattice.len()];
    for (k, line) in lines {
        let line_no = k + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 9 {
            return Err(Error::Parse(format!("line {line_no}: expected 9 values")));
        }
        let mut mode = [0i32; 3];
        for (m, token) in mode.iter_mut().zip(&tokens[..3]) {
            *m = token
                .parse()
                .map_err(|_| Error::Parse(format!("line {line_no}: bad mode `{token}`")))?;
        }
        let idx = lattice
            .index_of(mode)
            .ok_or_else(|| Error::Parse(format!("line {line_no}: mode {mode:?} outside N = {n}")))?;
        let values = tokens[3..]
            .iter()
            .map(|t| parse_num(t, line_no))
            .collect::<Result<Vec<f64>>>()?;
        for c in 0..3 {
            coeffs[idx][c] = Complex64::new(values[2 * c], values[2 * c + 1]);
        }
        seen[idx] = true;
    }
    for idx in 0..lattice.len() {
        let partner = lattice.mirror(idx);
        if !seen[idx] && seen[partner] {
            coeffs[idx] = coeffs[partner].map(|z| z.conj());
        }
    }
    Ok(enforce_hermitian(&SpectralField::from_coeffs(lattice, coeffs)?))
}

pub fn read_field(path: &Path) -> Result<SpectralField> {
    parse_field(&std::fs::read_to_string(path)?)
}
