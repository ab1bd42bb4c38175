//! Parameter sweeps: classify every point of a rectangular grid.

use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use pielou_core::{classify, Params, Verdict};

use crate::error::{CliError, CliResult};
use crate::io;

pub const MAX_GRID_POINTS: u128 = 1_000_000;
pub const DEFAULT_SWEEP_TOL: f64 = 1e-12;
pub const HEADER: &str = "a,b,p,q,ratio,exists,zero_local,zero_global,pos_local,pos_global,verdict";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn fixed(value: f64) -> Self {
        Axis {
            min: value,
            max: value,
            count: 1,
        }
    }

    /// Evenly spaced values from `min` to `max` inclusive.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let last = self.count - 1;
        (0..self.count)
            .map(|i| {
                if i == last {
                    self.max
                } else {
                    self.min + (self.max - self.min) * (i as f64 / last as f64)
                }
            })
            .collect()
    }

    fn validate(&self, name: &str) -> CliResult<()> {
        if self.count == 0 {
            return Err(CliError::Invalid(format!(
                "axis {name}: count must be at least 1"
            )));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min > 0.0) {
            return Err(CliError::Invalid(format!(
                "axis {name}: bounds must be positive and finite"
            )));
        }
        if self.min > self.max {
            return Err(CliError::Invalid(format!("axis {name}: min exceeds max")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub a: Axis,
    pub b: Axis,
    pub p: Axis,
    pub q: Axis,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

fn default_tol() -> f64 {
    DEFAULT_SWEEP_TOL
}

fn default_output() -> PathBuf {
    PathBuf::from("sweep.csv")
}

impl SweepSpec {
    pub fn grid_size(&self) -> u128 {
        [self.a, self.b, self.p, self.q]
            .iter()
            .map(|ax| ax.count as u128)
            .product()
    }

    pub fn validate(&self) -> CliResult<()> {
        for (name, ax) in [
            ("a", &self.a),
            ("b", &self.b),
            ("p", &self.p),
            ("q", &self.q),
        ] {
            ax.validate(name)?;
        }
        crate::scenario::check_tol(self.tol)?;
        let size = self.grid_size();
        if size > MAX_GRID_POINTS {
            return Err(CliError::GridTooLarge(size));
        }
        Ok(())
    }

    /// Grid points in lexicographic order, `a` varying slowest.
    pub fn points(&self) -> CliResult<Vec<Params>> {
        let (av, bv, pv, qv) = (
            self.a.values(),
            self.b.values(),
            self.p.values(),
            self.q.values(),
        );
        let mut out = Vec::with_capacity(self.grid_size() as usize);
        for &a in &av {
            for &b in &bv {
                for &p in &pv {
                    for &q in &qv {
                        out.push(
                            Params::new(a, b, p, q)
                                .map_err(|e| CliError::Invalid(e.to_string()))?,
                        );
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub params: Params,
    pub ratio: f64,
    pub exists: bool,
    pub zero_local: bool,
    pub zero_global: bool,
    pub pos_local: bool,
    pub pos_global: bool,
    pub verdict: Verdict,
}

impl SweepRow {
    pub fn classify(params: Params, tol: f64) -> pielou_core::Result<Self> {
        let cert = classify(&params, tol)?;
        Ok(SweepRow {
            params,
            ratio: params.ratio(),
            exists: cert.existence.holds,
            zero_local: cert.zero_local.holds,
            zero_global: cert.zero_global.holds,
            pos_local: cert.positive_local.holds,
            pos_global: cert.positive_global.holds,
            verdict: cert.verdict,
        })
    }

    pub fn to_csv_line(&self) -> String {
        let p = &self.params;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            p.a(),
            p.b(),
            p.p(),
            p.q(),
            self.ratio,
            self.exists,
            self.zero_local,
            self.zero_global,
            self.pos_local,
            self.pos_global,
            self.verdict
        )
    }

    pub fn parse_csv_line(line: &str) -> Result<Self, String> {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(format!("expected 11 fields, got {}", fields.len()));
        }
        let num = |i: usize| {
            fields[i]
                .parse::<f64>()
                .map_err(|e| format!("field {}: {e}", i + 1))
        };
        let flag = |i: usize| {
            fields[i]
                .parse::<bool>()
                .map_err(|e| format!("field {}: {e}", i + 1))
        };
        let params = Params::new(num(0)?, num(1)?, num(2)?, num(3)?).map_err(|e| e.to_string())?;
        let verdict = match fields[10] {
            "zero-GAS-certified" => Verdict::ZeroGasCertified,
            "positive-equilibrium-certified" => Verdict::PositiveEquilibriumCertified,
            "conditions-inconclusive" => Verdict::ConditionsInconclusive,
            other => return Err(format!("unknown verdict '{other}'")),
        };
        Ok(SweepRow {
            params,
            ratio: num(4)?,
            exists: flag(5)?,
            zero_local: flag(6)?,
            zero_global: flag(7)?,
            pos_local: flag(8)?,
            pos_global: flag(9)?,
            verdict,
        })
    }
}

/// Classifies every grid point; rows come back in grid order whatever the
/// evaluation order.
pub fn evaluate(spec: &SweepSpec) -> CliResult<Vec<SweepRow>> {
    spec.validate()?;
    let points = spec.points()?;
    let rows = points
        .into_par_iter()
        .map(|params| SweepRow::classify(params, spec.tol))
        .collect::<pielou_core::Result<Vec<_>>>()?;
    Ok(rows)
}

pub fn write_rows<W: Write>(mut out: W, rows: &[SweepRow]) -> std::io::Result<()> {
    writeln!(out, "{HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.to_csv_line())?;
    }
    Ok(())
}

pub fn read_rows<R: BufRead>(input: R) -> Result<Vec<SweepRow>, String> {
    let mut lines = input.lines();
    match lines.next() {
        Some(Ok(h)) if h.trim_end() == HEADER => {}
        Some(Ok(h)) => return Err(format!("unexpected header '{h}'")),
        Some(Err(e)) => return Err(e.to_string()),
        None => return Err("empty file".into()),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| e.to_string())?;
        if line.trim().is_empty() {
            continue;
        }
        rows.push(
            SweepRow::parse_csv_line(line.trim_end())
                .map_err(|e| format!("line {}: {e}", i + 2))?,
        );
    }
    Ok(rows)
}

pub fn load_sweep_csv(path: &Path) -> CliResult<Vec<SweepRow>> {
    let file = std::fs::File::open(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })?;
    read_rows(BufReader::new(file)).map_err(|message| CliError::Parse {
        path: path.to_owned(),
        message,
    })
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub path: PathBuf,
    pub rows: Vec<SweepRow>,
}

pub fn run_sweep(
    spec_path: &Path,
    out_dir: Option<&Path>,
    tol_override: Option<f64>,
) -> CliResult<SweepOutcome> {
    let mut spec: SweepSpec = io::read_json(spec_path)?;
    if let Some(tol) = tol_override {
        spec.tol = tol;
    }
    let rows = evaluate(&spec)?;
    let base = spec_path.parent().unwrap_or_else(|| Path::new("."));
    let path = io::resolve_output(&spec.output, base, out_dir);
    io::write_with(&path, |out| write_rows(out, &rows))?;
    Ok(SweepOutcome { path, rows })
}
