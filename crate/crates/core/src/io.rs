//! Signal files: a CSV with header `x,re,im` plus a JSON sidecar `{n, L}`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{coordinate, spacing, Domain, Grid, SampledSignal, C64};

/// Float formatting used by every emitted artifact: 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sidecar {
    pub n: usize,
    #[serde(rename = "L")]
    pub half_width: f64,
    #[serde(default)]
    pub domain: Domain,
}

impl Sidecar {
    pub fn of(f: &SampledSignal) -> Self {
        Sidecar { n: f.grid().n(), half_width: f.grid().half_width(), domain: f.domain() }
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.n, self.half_width)
    }
}

pub fn parse_sidecar(text: &str) -> Result<Sidecar> {
    let s: Sidecar = serde_json::from_str(text)?;
    s.grid()?;
    Ok(s)
}

/// Parses the CSV body against the grid described by `sidecar`.
pub fn parse_signal_csv(text: &str, sidecar: &Sidecar) -> Result<SampledSignal> {
    let grid = sidecar.grid()?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::Parse(e.to_string()))?;
    if header.iter().collect::<Vec<_>>() != ["x", "re", "im"] {
        return Err(Error::Parse("header must be x,re,im".into()));
    }
    let tol = 1e-6 * spacing(&grid, sidecar.domain);
    let mut samples = Vec::new();
    for (j, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if j >= grid.n() {
            return Err(Error::LengthMismatch { expected: grid.n(), got: j + 1 });
        }
        if record.len() != 3 {
            return Err(Error::Parse(format!("row {j}: expected 3 fields")));
        }
        let field = |i: usize| -> Result<f64> {
            record[i].parse::<f64>().map_err(|_| Error::Parse(format!("row {j}: bad number {:?}", &record[i])))
        };
        let x = field(0)?;
        if !((x - coordinate(&grid, sidecar.domain, j)).abs() <= tol) {
            return Err(Error::Parse(format!("row {j}: x = {x} is off the grid")));
        }
        samples.push(C64::new(field(1)?, field(2)?));
    }
    SampledSignal::new(grid, sidecar.domain, samples)
}

pub fn signal_to_csv(f: &SampledSignal) -> String {
    let mut out = String::with_capacity(f.len() * 72 + 8);
    out.push_str("x,re,im\n");
    for (j, z) in f.samples().iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", fmt17(f.coordinate(j)), fmt17(z.re), fmt17(z.im)));
    }
    out
}

pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

/// Writes `path` (CSV) and its `.json` sidecar.
pub fn write_signal(path: &Path, f: &SampledSignal) -> Result<()> {
    fs::write(path, signal_to_csv(f))?;
    fs::write(sidecar_path(path), serde_json::to_string_pretty(&Sidecar::of(f))? + "\n")?;
    Ok(())
}

pub fn read_signal(path: &Path) -> Result<SampledSignal> {
    let sidecar = parse_sidecar(&fs::read_to_string(sidecar_path(path))?)?;
    parse_signal_csv(&fs::read_to_string(path)?, &sidecar)
}

/// Dumps a real matrix (for example `|V_φ f|`) as CSV rows.
pub fn matrix_to_csv(rows: usize, cols: usize, at: impl Fn(usize, usize) -> f64) -> String {
    let mut out = String::new();
    for r in 0..rows {
        let line: Vec<String> = (0..cols).map(|c| fmt17(at(r, c))).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
