//! Stability conditions, linearization spectra and the certificate that ties
//! them together.
//!
//! Five scalar conditions are evaluated literally:
//!
//! | id      | condition                                         | role                         |
//! |---------|---------------------------------------------------|------------------------------|
//! | `C3.2`  | `ab > pq`                                         | positive equilibrium exists  |
//! | `C3.24` | `a/p < 1`, `b/q < 1`                              | origin locally stable        |
//! | `C3.33` | `ab < min(p, q)`                                  | origin attracts              |
//! | `C3.25` | `e^{y_*} > a`, `e^{z_*} > b`                      | positive eq. locally stable  |
//! | `C3.34` | `a z^* <= ȳ (p+z^*) e^{y_*}`, `b y^* <= z̄ (q+y^*) e^{z_*}` | positive eq. attracts |
//!
//! The two conditions that use the lower bracket corner `(y_*, z_*)` also
//! carry the inequality `ab·e^{-(y^*+z^*)} > pq`, so a bracket whose lower
//! corner had to be floored can never satisfy them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bounds::{equilibrium_bracket, Bracket};
use crate::equilibria::{existence_check, solve_positive, Equilibrium};
use crate::error::{Error, Result};
use crate::model::{jacobian_at, Jacobian2, Params, State};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConditionId {
    #[serde(rename = "C3.2")]
    Existence,
    #[serde(rename = "C3.24")]
    ZeroLocal,
    #[serde(rename = "C3.33")]
    ZeroGlobal,
    #[serde(rename = "C3.25")]
    PositiveLocal,
    #[serde(rename = "C3.34")]
    PositiveGlobal,
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConditionId::Existence => "C3.2",
            ConditionId::ZeroLocal => "C3.24",
            ConditionId::ZeroGlobal => "C3.33",
            ConditionId::PositiveLocal => "C3.25",
            ConditionId::PositiveGlobal => "C3.34",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Less,
    #[serde(rename = "<=")]
    LessEq,
    #[serde(rename = ">")]
    Greater,
}

/// `lhs relation rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
}

impl Inequality {
    pub fn lt(lhs: f64, rhs: f64) -> Self {
        Inequality {
            lhs,
            rhs,
            relation: Relation::Less,
        }
    }

    pub fn le(lhs: f64, rhs: f64) -> Self {
        Inequality {
            lhs,
            rhs,
            relation: Relation::LessEq,
        }
    }

    pub fn gt(lhs: f64, rhs: f64) -> Self {
        Inequality {
            lhs,
            rhs,
            relation: Relation::Greater,
        }
    }

    pub fn satisfied(&self) -> bool {
        match self.relation {
            Relation::Less => self.lhs < self.rhs,
            Relation::LessEq => self.lhs <= self.rhs,
            Relation::Greater => self.lhs > self.rhs,
        }
    }
}

/// A named diagnostic value attached to a condition report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub name: String,
    pub value: f64,
}

fn obs(name: &str, value: f64) -> Observation {
    Observation {
        name: name.to_owned(),
        value,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub id: ConditionId,
    /// True iff there is at least one inequality and every one is satisfied.
    pub holds: bool,
    pub inequalities: Vec<Inequality>,
    #[serde(default)]
    pub observations: Vec<Observation>,
    #[serde(default)]
    pub notes: String,
}

impl ConditionReport {
    pub fn new(
        id: ConditionId,
        inequalities: Vec<Inequality>,
        observations: Vec<Observation>,
        notes: impl Into<String>,
    ) -> Self {
        let holds = !inequalities.is_empty() && inequalities.iter().all(Inequality::satisfied);
        ConditionReport {
            id,
            holds,
            inequalities,
            observations,
            notes: notes.into(),
        }
    }

    fn not_applicable(id: ConditionId, notes: &str) -> Self {
        ConditionReport::new(id, Vec::new(), Vec::new(), notes)
    }

    pub fn observation(&self, name: &str) -> Option<f64> {
        self.observations
            .iter()
            .find(|o| o.name == name)
            .map(|o| o.value)
    }
}

/// A complex eigenvalue `re + i·im`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
}

impl Eigenvalue {
    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Roots of `λ² - tr·λ + det = 0`.
pub fn eigenvalues(j: &Jacobian2) -> [Eigenvalue; 2] {
    let tr = j.trace();
    let det = j.det();
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        // Larger-magnitude root first, smaller one from Vieta to avoid cancellation.
        let big = 0.5 * (tr + sq.copysign(tr));
        let small = if big != 0.0 { det / big } else { 0.0 };
        [
            Eigenvalue { re: big, im: 0.0 },
            Eigenvalue { re: small, im: 0.0 },
        ]
    } else {
        let re = 0.5 * tr;
        let im = 0.5 * (-disc).sqrt();
        [Eigenvalue { re, im }, Eigenvalue { re, im: -im }]
    }
}

/// Largest eigenvalue modulus of `j`.
pub fn spectral_radius(j: &Jacobian2) -> f64 {
    let tr = j.trace();
    let det = j.det();
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        0.5 * (tr.abs() + disc.sqrt())
    } else {
        det.sqrt()
    }
}

pub fn check_existence(params: &Params) -> ConditionReport {
    let e = existence_check(params);
    ConditionReport::new(
        ConditionId::Existence,
        vec![Inequality::gt(
            params.a() * params.b(),
            params.p() * params.q(),
        )],
        vec![obs("ratio", e.ratio)],
        "",
    )
}

pub fn check_zero_local(params: &Params) -> ConditionReport {
    let m = params.ratio().sqrt();
    ConditionReport::new(
        ConditionId::ZeroLocal,
        vec![
            Inequality::lt(params.a() / params.p(), 1.0),
            Inequality::lt(params.b() / params.q(), 1.0),
        ],
        vec![obs("eigenvalue_plus", m), obs("eigenvalue_minus", -m)],
        "",
    )
}

pub fn check_zero_global(params: &Params) -> ConditionReport {
    // Two steps give y_{n+2} <= (ab/pq)·y_n; record the factor.
    ConditionReport::new(
        ConditionId::ZeroGlobal,
        vec![Inequality::lt(
            params.a() * params.b(),
            params.p().min(params.q()),
        )],
        vec![obs("two_step_contraction", params.ratio())],
        "",
    )
}

/// `e^{y_*} > a`, `e^{z_*} > b`, plus the linearization diagnostics at `eq`.
pub fn check_positive_local(
    params: &Params,
    bracket: &Bracket,
    eq: Option<&Equilibrium>,
) -> ConditionReport {
    let mut inequalities = vec![
        Inequality::gt(bracket.y_lo.exp(), params.a()),
        Inequality::gt(bracket.z_lo.exp(), params.b()),
    ];
    inequalities.push(lower_corner_positivity(params, bracket));
    let mut observations = vec![
        obs("row_sum_bound_y", params.a() * (-bracket.y_lo).exp()),
        obs("row_sum_bound_z", params.b() * (-bracket.z_lo).exp()),
    ];
    if let Some(eq) = eq {
        let j = jacobian_at(
            params,
            State {
                y: eq.y_bar,
                z: eq.z_bar,
            },
        );
        let (ry, rz) = j.row_sums();
        let ev = eigenvalues(&j);
        observations.extend([
            obs("row_sum_y", ry),
            obs("row_sum_z", rz),
            obs("eigen_modulus_1", ev[0].modulus()),
            obs("eigen_modulus_2", ev[1].modulus()),
            obs("spectral_radius", spectral_radius(&j)),
        ]);
    }
    let notes = if bracket.lower_degenerate {
        "lower bracket corner is not positive; floored value used"
    } else {
        ""
    };
    ConditionReport::new(
        ConditionId::PositiveLocal,
        inequalities,
        observations,
        notes,
    )
}

/// `a·z^* <= ȳ·(p+z^*)·e^{y_*}` and `b·y^* <= z̄·(q+y^*)·e^{z_*}` at the
/// solved equilibrium.
pub fn check_positive_global(
    params: &Params,
    eq: &Equilibrium,
    bracket: &Bracket,
) -> ConditionReport {
    let inequalities = vec![
        Inequality::le(
            params.a() * bracket.z_hi,
            eq.y_bar * (params.p() + bracket.z_hi) * bracket.y_lo.exp(),
        ),
        Inequality::le(
            params.b() * bracket.y_hi,
            eq.z_bar * (params.q() + bracket.y_hi) * bracket.z_lo.exp(),
        ),
        lower_corner_positivity(params, bracket),
    ];
    let report = ConditionReport::new(ConditionId::PositiveGlobal, inequalities, Vec::new(), "");
    let notes = if report.holds {
        String::new()
    } else {
        "evaluated literally with the solved equilibrium".to_owned()
    };
    ConditionReport { notes, ..report }
}

fn lower_corner_positivity(params: &Params, bracket: &Bracket) -> Inequality {
    Inequality::gt(
        params.a() * params.b() * (-(bracket.y_hi + bracket.z_hi)).exp(),
        params.p() * params.q(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "zero-GAS-certified")]
    ZeroGasCertified,
    #[serde(rename = "positive-equilibrium-certified")]
    PositiveEquilibriumCertified,
    #[serde(rename = "conditions-inconclusive")]
    ConditionsInconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ZeroGasCertified => "zero-GAS-certified",
            Verdict::PositiveEquilibriumCertified => "positive-equilibrium-certified",
            Verdict::ConditionsInconclusive => "conditions-inconclusive",
        })
    }
}

/// Linearization spectra at both equilibria.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenSummary {
    pub zero: [Eigenvalue; 2],
    pub zero_spectral_radius: f64,
    pub positive: Option<[Eigenvalue; 2]>,
    pub positive_spectral_radius: Option<f64>,
    /// Spectral radius at the positive equilibrium is below 1.
    pub positive_linearly_stable: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "CertificateRepr", try_from = "CertificateRepr")]
pub struct StabilityCertificate {
    pub params: Params,
    pub existence: ConditionReport,
    pub zero_local: ConditionReport,
    pub zero_global: ConditionReport,
    pub positive_local: ConditionReport,
    pub positive_global: ConditionReport,
    pub eigenvalues: EigenSummary,
    pub bracket: Option<Bracket>,
    pub equilibrium: Option<Equilibrium>,
    pub verdict: Verdict,
    pub warnings: Vec<String>,
}

impl StabilityCertificate {
    pub fn conditions(&self) -> [&ConditionReport; 5] {
        [
            &self.existence,
            &self.zero_local,
            &self.zero_global,
            &self.positive_local,
            &self.positive_global,
        ]
    }
}

#[derive(Serialize, Deserialize)]
struct CertificateRepr {
    params: Params,
    conditions: Vec<ConditionReport>,
    eigenvalues: EigenSummary,
    bracket: Option<Bracket>,
    equilibrium: Option<Equilibrium>,
    verdict: Verdict,
    #[serde(default)]
    warnings: Vec<String>,
}

impl From<StabilityCertificate> for CertificateRepr {
    fn from(c: StabilityCertificate) -> Self {
        CertificateRepr {
            params: c.params,
            conditions: vec![
                c.existence,
                c.zero_local,
                c.zero_global,
                c.positive_local,
                c.positive_global,
            ],
            eigenvalues: c.eigenvalues,
            bracket: c.bracket,
            equilibrium: c.equilibrium,
            verdict: c.verdict,
            warnings: c.warnings,
        }
    }
}

impl TryFrom<CertificateRepr> for StabilityCertificate {
    type Error = String;

    fn try_from(r: CertificateRepr) -> std::result::Result<Self, String> {
        let take = |id: ConditionId| {
            r.conditions
                .iter()
                .find(|c| c.id == id)
                .cloned()
                .ok_or_else(|| format!("certificate is missing condition {id}"))
        };
        Ok(StabilityCertificate {
            params: r.params,
            existence: take(ConditionId::Existence)?,
            zero_local: take(ConditionId::ZeroLocal)?,
            zero_global: take(ConditionId::ZeroGlobal)?,
            positive_local: take(ConditionId::PositiveLocal)?,
            positive_global: take(ConditionId::PositiveGlobal)?,
            eigenvalues: r.eigenvalues,
            bracket: r.bracket,
            equilibrium: r.equilibrium,
            verdict: r.verdict,
            warnings: r.warnings,
        })
    }
}

/// Evaluates every condition, solves the positive equilibrium when it
/// exists, and issues a verdict.
///
/// `zero-GAS-certified` requires C3.24 and C3.33; `positive-equilibrium-certified`
/// requires C3.2, C3.25 and C3.34. Anything else is inconclusive.
pub fn classify(params: &Params, tol: f64) -> Result<StabilityCertificate> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let existence = check_existence(params);
    let zero_local = check_zero_local(params);
    let zero_global = check_zero_global(params);
    let mut warnings = Vec::new();

    let j0 = jacobian_at(params, State::ORIGIN);
    let mut eigen = EigenSummary {
        zero: eigenvalues(&j0),
        zero_spectral_radius: spectral_radius(&j0),
        positive: None,
        positive_spectral_radius: None,
        positive_linearly_stable: None,
    };

    let (bracket, equilibrium, positive_local, positive_global) = if existence.holds {
        let bracket = equilibrium_bracket(params)?;
        let eq = solve_positive(params, tol)?;
        if bracket.lower_degenerate {
            warnings
                .push("refined lower bound is not positive; bracket floor substituted".to_owned());
        } else if !bracket.contains_strictly(eq.y_bar, eq.z_bar) {
            warnings.push("solved equilibrium lies outside the refined bracket".to_owned());
        }
        let j = jacobian_at(
            params,
            State {
                y: eq.y_bar,
                z: eq.z_bar,
            },
        );
        let rho = spectral_radius(&j);
        eigen.positive = Some(eigenvalues(&j));
        eigen.positive_spectral_radius = Some(rho);
        eigen.positive_linearly_stable = Some(rho < 1.0);
        let local = check_positive_local(params, &bracket, Some(&eq));
        let global = check_positive_global(params, &eq, &bracket);
        if !global.holds {
            let ineq = &global.inequalities;
            warnings.push(format!(
                "condition C3.34 fails on literal evaluation: {:.6} <= {:.6} is {}, {:.6} <= {:.6} is {}",
                ineq[0].lhs,
                ineq[0].rhs,
                ineq[0].satisfied(),
                ineq[1].lhs,
                ineq[1].rhs,
                ineq[1].satisfied()
            ));
        }
        if local.holds && rho >= 1.0 {
            warnings.push(format!(
                "C3.25 holds but the spectral radius at the equilibrium is {rho}"
            ));
        }
        (Some(bracket), Some(eq), local, global)
    } else {
        (
            None,
            None,
            ConditionReport::not_applicable(ConditionId::PositiveLocal, "no positive equilibrium"),
            ConditionReport::not_applicable(ConditionId::PositiveGlobal, "no positive equilibrium"),
        )
    };

    let verdict = if zero_local.holds && zero_global.holds {
        Verdict::ZeroGasCertified
    } else if existence.holds && positive_local.holds && positive_global.holds {
        Verdict::PositiveEquilibriumCertified
    } else {
        Verdict::ConditionsInconclusive
    };

    Ok(StabilityCertificate {
        params: *params,
        existence,
        zero_local,
        zero_global,
        positive_local,
        positive_global,
        eigenvalues: eigen,
        bracket,
        equilibrium,
        verdict,
        warnings,
    })
}
