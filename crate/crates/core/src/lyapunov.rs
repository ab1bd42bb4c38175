//! Volterra-type functionals `x - 1 - ln x` evaluated along orbits, with an
//! audit of whether they actually decrease.

use serde::{Deserialize, Serialize};

use crate::equilibria::{Equilibrium, EquilibriumKind};
use crate::error::{Error, Result};
use crate::model::State;
use crate::orbit::Orbit;

/// An increase larger than this counts as a monotonicity violation.
pub const INCREASE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FunctionId {
    /// `(y - 1 - ln y) + (z - 1 - ln z)`, the functional attached to the origin.
    #[serde(rename = "V-zero")]
    VZero,
    /// `ȳ(y/ȳ - 1 - ln(y/ȳ)) + z̄(z/z̄ - 1 - ln(z/z̄))`.
    #[serde(rename = "W-positive")]
    WPositive,
}

impl std::fmt::Display for FunctionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FunctionId::VZero => "V-zero",
            FunctionId::WPositive => "W-positive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub function_id: FunctionId,
    /// Number of consecutive pairs compared.
    pub total_steps: usize,
    pub violations: usize,
    pub first_violation_index: Option<usize>,
    pub max_increase: f64,
    pub final_value: f64,
}

fn volterra(x: f64) -> f64 {
    x - 1.0 - x.ln()
}

fn domain(s: &State, function: &'static str) -> Result<()> {
    if s.is_strictly_positive() {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            x: s.y.min(s.z),
        })
    }
}

#[allow(non_snake_case)]
pub fn V_zero(s: &State) -> Result<f64> {
    domain(s, "V_zero")?;
    Ok(volterra(s.y) + volterra(s.z))
}

#[allow(non_snake_case)]
pub fn W_positive(s: &State, eq: &Equilibrium) -> Result<f64> {
    domain(s, "W_positive")?;
    if eq.kind != EquilibriumKind::Positive || !(eq.y_bar > 0.0 && eq.z_bar > 0.0) {
        return Err(Error::MissingEquilibrium);
    }
    Ok(eq.y_bar * volterra(s.y / eq.y_bar) + eq.z_bar * volterra(s.z / eq.z_bar))
}

/// Counts the steps along `orbit` where the chosen functional increases.
///
/// The audit starts at the first strictly positive state and stops before
/// the next state that leaves the open quadrant (e.g. after underflow).
/// Indices in the report refer to the orbit, so `first_violation_index = n`
/// means `value(n + 1) > value(n) + INCREASE_TOL`.
pub fn audit(
    orbit: &Orbit,
    function_id: FunctionId,
    eq: Option<&Equilibrium>,
) -> Result<MonotonicityReport> {
    let eq = match (function_id, eq) {
        (FunctionId::WPositive, None) => return Err(Error::MissingEquilibrium),
        (_, eq) => eq,
    };
    let value = |s: &State| -> Result<f64> {
        match function_id {
            FunctionId::VZero => V_zero(s),
            FunctionId::WPositive => W_positive(s, eq.expect("checked above")),
        }
    };

    let start = orbit
        .states
        .iter()
        .position(State::is_strictly_positive)
        .unwrap_or(orbit.states.len());
    let usable = orbit.states[start..]
        .iter()
        .take_while(|s| s.is_strictly_positive())
        .count();
    if usable < 2 {
        return Err(Error::InsufficientData { usable });
    }

    let mut prev = value(&orbit.states[start])?;
    let mut violations = 0;
    let mut first_violation_index = None;
    let mut max_increase = 0.0f64;
    for (offset, s) in orbit.states[start + 1..start + usable].iter().enumerate() {
        let v = value(s)?;
        let increase = v - prev;
        if increase > INCREASE_TOL {
            violations += 1;
            first_violation_index.get_or_insert(start + offset);
        }
        max_increase = max_increase.max(increase);
        prev = v;
    }
    Ok(MonotonicityReport {
        function_id,
        total_steps: usable - 1,
        violations,
        first_violation_index,
        max_increase,
        final_value: prev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::solve_positive;
    use crate::model::Params;
    use crate::orbit::iterate;

    fn ex41() -> Params {
        Params::new(0.8, 0.9, 0.6, 0.5).unwrap()
    }

    #[test]
    fn v_zero_values() {
        assert_eq!(V_zero(&State::new(1.0, 1.0).unwrap()).unwrap(), 0.0);
        let v = V_zero(&State::new(0.5, 0.5).unwrap()).unwrap();
        assert!((v - 0.386_294_361_1).abs() < 1e-9);
        assert!(V_zero(&State::new(0.0, 0.5).unwrap()).is_err());
    }

    #[test]
    fn w_positive_values() {
        let eq = solve_positive(&ex41(), 1e-12).unwrap();
        let at_eq = State::new(eq.y_bar, eq.z_bar).unwrap();
        assert!(W_positive(&at_eq, &eq).unwrap().abs() < 1e-15);
        let doubled = State::new(2.0 * eq.y_bar, eq.z_bar).unwrap();
        let w = W_positive(&doubled, &eq).unwrap();
        let want = eq.y_bar * (1.0 - std::f64::consts::LN_2);
        assert!((w - want).abs() < 1e-14);
        assert_eq!(
            W_positive(&at_eq, &Equilibrium::zero()),
            Err(Error::MissingEquilibrium)
        );
    }

    #[test]
    fn audit_requires_equilibrium_for_w() {
        let orbit = iterate(&ex41(), State::new(0.35, 0.26).unwrap(), 20, 1e-10).unwrap();
        assert_eq!(
            audit(&orbit, FunctionId::WPositive, None),
            Err(Error::MissingEquilibrium)
        );
    }

    #[test]
    fn audit_needs_two_states() {
        let orbit = iterate(&ex41(), State::ORIGIN, 20, 1e-10).unwrap();
        assert_eq!(
            audit(&orbit, FunctionId::VZero, None),
            Err(Error::InsufficientData { usable: 0 })
        );
    }

    #[test]
    fn constant_orbit_at_equilibrium() {
        let p = ex41();
        let eq = solve_positive(&p, 1e-12).unwrap();
        let s = State::new(eq.y_bar, eq.z_bar).unwrap();
        let orbit = Orbit {
            params: p,
            states: vec![s; 50],
            converged: true,
            limit_estimate: Some(s),
            convergence_index: Some(49),
        };
        let r = audit(&orbit, FunctionId::WPositive, Some(&eq)).unwrap();
        assert_eq!(r.violations, 0);
        assert_eq!(r.first_violation_index, None);
        assert_eq!(r.final_value, 0.0);
        assert_eq!(r.total_steps, 49);
    }

    #[test]
    fn w_vanishes_along_example_41() {
        let p = ex41();
        let eq = solve_positive(&p, 1e-12).unwrap();
        let orbit = iterate(&p, State::new(0.35, 0.26).unwrap(), 500, 1e-10).unwrap();
        let r = audit(&orbit, FunctionId::WPositive, Some(&eq)).unwrap();
        assert!(r.final_value < 1e-10);
        assert_eq!(r.violations == 0, r.first_violation_index.is_none());
    }

    #[test]
    fn v_zero_grows_toward_origin() {
        let p = Params::new(0.6, 0.5, 0.8, 0.9).unwrap();
        let orbit = iterate(&p, State::new(0.35, 0.26).unwrap(), 10_000, 1e-10).unwrap();
        let r = audit(&orbit, FunctionId::VZero, None).unwrap();
        assert!(r.violations > 0);
        assert!(r.final_value > 40.0);
        assert_eq!(r.first_violation_index, Some(0));
    }
}
