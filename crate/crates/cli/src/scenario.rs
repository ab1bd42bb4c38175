//! Scenario files and the `simulate` / `analyze` commands.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use pielou_core::{
    analyze, iterate, orbit_stats, EquilibriumKind, Orbit, OrbitStats, Params, State,
};

use crate::error::{CliError, CliResult};
use crate::io;

pub const DEFAULT_MAX_STEPS: usize = 10_000;
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub params: Params,
    pub initial_conditions: Vec<State>,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Accept seeds with a zero coordinate.
    #[serde(default)]
    pub allow_boundary_seeds: bool,
    #[serde(default)]
    pub outputs: Outputs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default = "default_orbit_csv")]
    pub orbit_csv: PathBuf,
    #[serde(default = "default_certificate_json")]
    pub certificate_json: PathBuf,
}

impl Default for Outputs {
    fn default() -> Self {
        Outputs {
            orbit_csv: default_orbit_csv(),
            certificate_json: default_certificate_json(),
        }
    }
}

fn default_max_steps() -> usize {
    DEFAULT_MAX_STEPS
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

fn default_orbit_csv() -> PathBuf {
    PathBuf::from("orbit.csv")
}

fn default_certificate_json() -> PathBuf {
    PathBuf::from("certificate.json")
}

impl Scenario {
    pub fn new(params: Params, initial_conditions: Vec<State>) -> Self {
        Scenario {
            params,
            initial_conditions,
            max_steps: DEFAULT_MAX_STEPS,
            tol: DEFAULT_TOL,
            allow_boundary_seeds: false,
            outputs: Outputs::default(),
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.initial_conditions.is_empty() {
            return Err(CliError::Invalid("no initial conditions".into()));
        }
        if self.max_steps == 0 {
            return Err(CliError::Invalid("max_steps must be at least 1".into()));
        }
        check_tol(self.tol)?;
        if !self.allow_boundary_seeds {
            if let Some((k, s)) = self
                .initial_conditions
                .iter()
                .enumerate()
                .find(|(_, s)| !s.is_strictly_positive())
            {
                return Err(CliError::Invalid(format!(
                    "initial condition {} ({}, {}) is on the boundary; \
                     set allow_boundary_seeds to accept it",
                    k + 1,
                    s.y,
                    s.z
                )));
            }
        }
        Ok(())
    }
}

pub fn check_tol(tol: f64) -> CliResult<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(CliError::Invalid(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

/// A parsed scenario and the directory its relative outputs resolve against.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub base_dir: PathBuf,
}

pub fn load_scenario(path: &Path, tol_override: Option<f64>) -> CliResult<LoadedScenario> {
    let mut scenario: Scenario = io::read_json(path)?;
    if let Some(tol) = tol_override {
        scenario.tol = tol;
    }
    scenario.validate()?;
    let base_dir = path
        .parent()
        .map(Path::to_owned)
        .unwrap_or_else(|| PathBuf::from("."));
    Ok(LoadedScenario { scenario, base_dir })
}

/// Files written by `simulate`, one per initial condition.
#[derive(Debug)]
pub struct SimulateOutcome {
    pub orbits: Vec<Orbit>,
    pub paths: Vec<PathBuf>,
    pub summary: String,
}

pub fn simulate(loaded: &LoadedScenario, out_dir: Option<&Path>) -> CliResult<SimulateOutcome> {
    let sc = &loaded.scenario;
    let base = io::resolve_output(&sc.outputs.orbit_csv, &loaded.base_dir, out_dir);
    let mut orbits = Vec::new();
    let mut paths = Vec::new();
    let mut summary = String::new();
    for (i, &seed) in sc.initial_conditions.iter().enumerate() {
        let k = i + 1;
        let orbit = iterate(&sc.params, seed, sc.max_steps, sc.tol)?;
        let path = io::with_index_suffix(&base, k);
        io::write_orbit(&path, &orbit)?;
        let _ = writeln!(
            summary,
            "{}",
            describe_orbit(k, seed, &orbit, &orbit_stats(&orbit))
        );
        let _ = writeln!(summary, "  wrote {}", path.display());
        orbits.push(orbit);
        paths.push(path);
    }
    Ok(SimulateOutcome {
        orbits,
        paths,
        summary,
    })
}

fn describe_orbit(k: usize, seed: State, orbit: &Orbit, stats: &OrbitStats) -> String {
    let last = orbit.last().unwrap_or(seed);
    let status = match orbit.convergence_index {
        Some(n) => format!("converged at step {n}"),
        None => "not converged".to_owned(),
    };
    format!(
        "seed {k} ({}, {}): {} steps, {status}\n  \
         final     y = {:.10}  z = {:.10}\n  \
         range     y in [{:.6e}, {:.6e}]  z in [{:.6e}, {:.6e}]\n  \
         tail amp  y = {:.3e}  z = {:.3e}",
        seed.y,
        seed.z,
        orbit.len() - 1,
        last.y,
        last.z,
        stats.min_y,
        stats.max_y,
        stats.min_z,
        stats.max_z,
        stats.tail_amplitude_y,
        stats.tail_amplitude_z,
    )
}

#[derive(Debug)]
pub struct AnalyzeOutcome {
    pub path: PathBuf,
    pub summary: String,
}

pub fn run_analyze(loaded: &LoadedScenario, out_dir: Option<&Path>) -> CliResult<AnalyzeOutcome> {
    let sc = &loaded.scenario;
    let analysis = analyze(&sc.params, &sc.initial_conditions, sc.max_steps, sc.tol)?;
    let path = io::resolve_output(&sc.outputs.certificate_json, &loaded.base_dir, out_dir);
    io::write_json(&path, &analysis.report)?;

    let report = &analysis.report;
    let cert = &report.certificate;
    let mut summary = String::new();
    let _ = writeln!(summary, "verdict: {}", cert.verdict);
    for c in cert.conditions() {
        let _ = writeln!(summary, "  {:<6} {}", c.id.to_string(), flag(c.holds));
    }
    if let Some(eq) = &cert.equilibrium {
        let _ = writeln!(
            summary,
            "positive equilibrium: ({:.12}, {:.12})",
            eq.y_bar, eq.z_bar
        );
    }
    for ev in &report.evidence {
        let _ = writeln!(
            summary,
            "seed {}: distance to {} equilibrium {:.3e} after {} steps",
            ev.seed_index + 1,
            match ev.target {
                EquilibriumKind::Zero => "zero",
                EquilibriumKind::Positive => "positive",
            },
            ev.distance_to_target,
            ev.steps
        );
    }
    for w in &cert.warnings {
        let _ = writeln!(summary, "WARNING: {w}");
    }
    let _ = writeln!(summary, "wrote {}", path.display());
    Ok(AnalyzeOutcome { path, summary })
}

pub fn flag(holds: bool) -> &'static str {
    if holds {
        "holds"
    } else {
        "fails"
    }
}
