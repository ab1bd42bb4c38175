//! Certificate plus empirical evidence: orbits from concrete seeds, their
//! containment in the persistence box, distance to the expected limit, and
//! Lyapunov audits.

use serde::{Deserialize, Serialize};

use crate::bounds::{crude_box, crude_box_swapped_exponents, BoundBox};
use crate::equilibria::{Equilibrium, EquilibriumKind};
use crate::error::Result;
use crate::lyapunov::{audit, FunctionId, MonotonicityReport};
use crate::model::{Params, State};
use crate::orbit::{iterate, orbit_stats, Orbit, OrbitStats};
use crate::stability::{classify, StabilityCertificate, Verdict};

pub const ARTIFACT_VERSION: &str = concat!("pielou-core ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedEvidence {
    pub seed_index: usize,
    pub seed: State,
    pub steps: usize,
    pub converged: bool,
    pub final_state: State,
    pub target: EquilibriumKind,
    /// Sup-norm distance from the final state to the target equilibrium.
    pub distance_to_target: f64,
    pub stats: OrbitStats,
    pub crude_box: Option<BoundBox>,
    pub crude_box_swapped_exponents: Option<BoundBox>,
    /// Every state with `n >= 1` lies inside `crude_box`.
    pub within_crude_box: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedAudit {
    pub seed_index: usize,
    pub reports: Vec<MonotonicityReport>,
    #[serde(default)]
    pub skipped: Vec<String>,
}

/// The full analysis document written by `analyze`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub artifact_version: String,
    #[serde(flatten)]
    pub certificate: StabilityCertificate,
    pub evidence: Vec<SeedEvidence>,
    pub lyapunov: Vec<SeedAudit>,
}

pub struct Analysis {
    pub report: AnalysisReport,
    pub orbits: Vec<Orbit>,
}

/// The equilibrium orbits are expected to approach under a certificate.
pub fn expected_limit(cert: &StabilityCertificate) -> Equilibrium {
    match (cert.verdict, cert.equilibrium) {
        (Verdict::ZeroGasCertified, _) | (_, None) => Equilibrium::zero(),
        (_, Some(eq)) => eq,
    }
}

pub fn analyze(params: &Params, seeds: &[State], max_steps: usize, tol: f64) -> Result<Analysis> {
    let certificate = classify(params, tol)?;
    let target = expected_limit(&certificate);
    let target_state = State {
        y: target.y_bar,
        z: target.z_bar,
    };

    let mut evidence = Vec::with_capacity(seeds.len());
    let mut lyapunov = Vec::with_capacity(seeds.len());
    let mut orbits = Vec::with_capacity(seeds.len());
    for (seed_index, &seed) in seeds.iter().enumerate() {
        let orbit = iterate(params, seed, max_steps, tol)?;
        let last = orbit.last().unwrap_or(seed);
        let cbox = crude_box(params, seed).ok();
        evidence.push(SeedEvidence {
            seed_index,
            seed,
            steps: orbit.len() - 1,
            converged: orbit.converged,
            final_state: last,
            target: target.kind,
            distance_to_target: last.distance(&target_state),
            stats: orbit_stats(&orbit),
            crude_box: cbox,
            crude_box_swapped_exponents: crude_box_swapped_exponents(params, seed).ok(),
            within_crude_box: cbox.map(|b| orbit.states[1..].iter().all(|s| b.contains(s))),
        });

        let mut reports = Vec::new();
        let mut skipped = Vec::new();
        match audit(&orbit, FunctionId::VZero, None) {
            Ok(r) => reports.push(r),
            Err(e) => skipped.push(format!("V-zero: {e}")),
        }
        if let Some(eq) = certificate.equilibrium.as_ref() {
            match audit(&orbit, FunctionId::WPositive, Some(eq)) {
                Ok(r) => reports.push(r),
                Err(e) => skipped.push(format!("W-positive: {e}")),
            }
        }
        lyapunov.push(SeedAudit {
            seed_index,
            reports,
            skipped,
        });
        orbits.push(orbit);
    }

    Ok(Analysis {
        report: AnalysisReport {
            artifact_version: ARTIFACT_VERSION.to_owned(),
            certificate,
            evidence,
            lyapunov,
        },
        orbits,
    })
}
