//! Built-in reproductions of the two worked examples.

use std::fmt;
use std::path::Path;

use pielou_core::{analyze, crude_box, Analysis, FunctionId, Params, State, Verdict};

use crate::error::{CliError, CliResult};
use crate::io;

/// Reference values carry four decimals.
pub const REFERENCE_TOL: f64 = 5e-4;
pub const DEFAULT_REPRODUCE_TOL: f64 = 1e-12;
pub const REPRODUCE_MAX_STEPS: usize = 10_000;

pub const SEEDS: [(f64, f64); 2] = [(0.35, 0.26), (0.05, 0.02)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExampleId {
    PositiveEquilibrium,
    ZeroEquilibrium,
}

impl ExampleId {
    pub fn parse(id: &str) -> CliResult<Self> {
        match id {
            "4.1" => Ok(ExampleId::PositiveEquilibrium),
            "4.2" => Ok(ExampleId::ZeroEquilibrium),
            other => Err(CliError::UnknownExample(other.to_owned())),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ExampleId::PositiveEquilibrium => "4.1",
            ExampleId::ZeroEquilibrium => "4.2",
        }
    }

    pub fn params(self) -> Params {
        let (a, b, p, q) = match self {
            ExampleId::PositiveEquilibrium => (0.8, 0.9, 0.6, 0.5),
            ExampleId::ZeroEquilibrium => (0.6, 0.5, 0.8, 0.9),
        };
        Params::new(a, b, p, q).expect("built-in parameters are positive")
    }

    pub fn seeds(self) -> Vec<State> {
        SEEDS
            .iter()
            .map(|&(y, z)| State::new(y, z).expect("built-in seeds are valid"))
            .collect()
    }
}

/// One numeric comparison. Counts toward the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub label: String,
    pub target: f64,
    pub computed: f64,
    pub tol: f64,
}

impl Row {
    fn new(label: impl Into<String>, target: f64, computed: f64, tol: f64) -> Self {
        Row {
            label: label.into(),
            target,
            computed,
            tol,
        }
    }

    pub fn passes(&self) -> bool {
        (self.computed - self.target).abs() <= self.tol
    }
}

/// A qualitative claim compared against the literal evaluation. Reported,
/// never fatal.
#[derive(Debug, Clone, PartialEq)]
pub struct Flag {
    pub label: String,
    pub claimed: bool,
    pub computed: bool,
}

impl Flag {
    fn new(label: impl Into<String>, claimed: bool, computed: bool) -> Self {
        Flag {
            label: label.into(),
            claimed,
            computed,
        }
    }

    pub fn agrees(&self) -> bool {
        self.claimed == self.computed
    }
}

pub struct Reproduction {
    pub id: ExampleId,
    pub rows: Vec<Row>,
    pub flags: Vec<Flag>,
    pub warnings: Vec<String>,
    pub analysis: Analysis,
}

impl Reproduction {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.passes()).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }
}

pub fn reproduce(id: ExampleId, tol: f64) -> CliResult<Reproduction> {
    let params = id.params();
    let seeds = id.seeds();
    let analysis = analyze(&params, &seeds, REPRODUCE_MAX_STEPS, tol)?;
    let cert = &analysis.report.certificate;
    let mut rows = Vec::new();
    let mut flags = Vec::new();
    let mut warnings = cert.warnings.clone();

    match id {
        ExampleId::PositiveEquilibrium => {
            let reference = [(0.1087, 0.1507), (0.0116, 0.0333)];
            for (k, (&seed, &(ylo, zlo))) in seeds.iter().zip(&reference).enumerate() {
                let b = crude_box(&params, seed)?;
                rows.push(Row::new(
                    format!("seed {} box y lower", k + 1),
                    ylo,
                    b.y_lo,
                    REFERENCE_TOL,
                ));
                rows.push(Row::new(
                    format!("seed {} box z lower", k + 1),
                    zlo,
                    b.z_lo,
                    REFERENCE_TOL,
                ));
                rows.push(Row::new(
                    format!("seed {} box y upper", k + 1),
                    0.8,
                    b.y_hi,
                    REFERENCE_TOL,
                ));
                rows.push(Row::new(
                    format!("seed {} box z upper", k + 1),
                    0.9,
                    b.z_hi,
                    REFERENCE_TOL,
                ));
            }
            match &cert.bracket {
                Some(br) => {
                    rows.push(Row::new("bracket y upper", 0.2800, br.y_hi, REFERENCE_TOL));
                    rows.push(Row::new("bracket z upper", 0.3231, br.z_hi, REFERENCE_TOL));
                    rows.push(Row::new("bracket y lower", 0.0751, br.y_lo, REFERENCE_TOL));
                    rows.push(Row::new("bracket z lower", 0.0850, br.z_lo, REFERENCE_TOL));
                }
                None => warnings.push("no bracket computed".to_owned()),
            }
            flags.push(Flag::new("C3.2", true, cert.existence.holds));
            flags.push(Flag::new("C3.25", true, cert.positive_local.holds));
            flags.push(Flag::new("C3.34", true, cert.positive_global.holds));
        }
        ExampleId::ZeroEquilibrium => {
            for (k, &seed) in seeds.iter().enumerate() {
                let b = crude_box(&params, seed)?;
                rows.push(Row::new(
                    format!("seed {} box y upper", k + 1),
                    0.6,
                    b.y_hi,
                    REFERENCE_TOL,
                ));
                rows.push(Row::new(
                    format!("seed {} box z upper", k + 1),
                    0.5,
                    b.z_hi,
                    REFERENCE_TOL,
                ));
            }
            rows.push(Row::new(
                "zero spectral radius",
                (0.30f64 / 0.72).sqrt(),
                cert.eigenvalues.zero_spectral_radius,
                1e-4,
            ));
            for (k, orbit) in analysis.orbits.iter().enumerate() {
                let last = orbit.last().unwrap_or(seeds[k]);
                rows.push(Row::new(
                    format!("seed {} distance to origin", k + 1),
                    0.0,
                    last.distance(&State::ORIGIN),
                    1e-6,
                ));
            }
            flags.push(Flag::new("C3.24", true, cert.zero_local.holds));
            flags.push(Flag::new("C3.33", true, cert.zero_global.holds));
            flags.push(Flag::new(
                "verdict zero-GAS",
                true,
                cert.verdict == Verdict::ZeroGasCertified,
            ));
        }
    }

    for audit in &analysis.report.lyapunov {
        for r in &audit.reports {
            if r.function_id == FunctionId::VZero && r.violations > 0 {
                warnings.push(format!(
                    "{} audit, seed {}: {} increase(s) in {} steps, first at index {}",
                    r.function_id,
                    audit.seed_index + 1,
                    r.violations,
                    r.total_steps,
                    r.first_violation_index
                        .map_or("-".to_owned(), |i| i.to_string()),
                ));
            }
        }
    }
    for flag in flags.iter().filter(|f| !f.agrees()) {
        warnings.push(format!(
            "{} is claimed to hold but evaluates to {}",
            flag.label, flag.computed
        ));
    }

    Ok(Reproduction {
        id,
        rows,
        flags,
        warnings,
        analysis,
    })
}

/// Writes per-seed orbit CSVs and the analysis JSON under `dir`.
pub fn write_artifacts(rep: &Reproduction, dir: &Path) -> CliResult<Vec<std::path::PathBuf>> {
    let stem = format!("example_{}", rep.id.label());
    let mut written = Vec::new();
    for (k, orbit) in rep.analysis.orbits.iter().enumerate() {
        let path = dir.join(format!("{stem}_orbit_{}.csv", k + 1));
        io::write_orbit(&path, orbit)?;
        written.push(path);
    }
    let path = dir.join(format!("{stem}_certificate.json"));
    io::write_json(&path, &rep.analysis.report)?;
    written.push(path);
    Ok(written)
}

impl fmt::Display for Reproduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.id.params();
        writeln!(
            f,
            "Example {}  (a, b, p, q) = ({}, {}, {}, {})",
            self.id.label(),
            p.a(),
            p.b(),
            p.p(),
            p.q()
        )?;
        writeln!(
            f,
            "{:<28} {:>10} {:>14} {:>10} {:>8}  result",
            "quantity", "reference", "computed", "|diff|", "tol"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<28} {:>10.4} {:>14.8} {:>10.2e} {:>8.0e}  {}",
                r.label,
                r.target,
                r.computed,
                (r.computed - r.target).abs(),
                r.tol,
                if r.passes() { "PASS" } else { "FAIL" }
            )?;
        }
        writeln!(f)?;
        writeln!(f, "{:<28} {:>8} {:>9}", "condition", "claimed", "computed")?;
        for fl in &self.flags {
            writeln!(
                f,
                "{:<28} {:>8} {:>9}  {}",
                fl.label,
                fl.claimed,
                fl.computed,
                if fl.agrees() { "agrees" } else { "DIFFERS" }
            )?;
        }
        let cert = &self.analysis.report.certificate;
        writeln!(f)?;
        writeln!(f, "verdict: {}", cert.verdict)?;
        if let Some(eq) = &cert.equilibrium {
            writeln!(
                f,
                "positive equilibrium: ({:.12}, {:.12})",
                eq.y_bar, eq.z_bar
            )?;
        }
        for w in &self.warnings {
            writeln!(f, "WARNING: {w}")?;
        }
        writeln!(
            f,
            "{}/{} numeric rows pass",
            self.rows.len() - self.failures(),
            self.rows.len()
        )
    }
}
