//! Equilibria of the system.
//!
//! The origin is always fixed. When `ab > pq` there is exactly one positive
//! equilibrium. Eliminating `z` through `z = p·y·e^y/(a - y·e^y)` reduces the
//! fixed-point equations to a scalar root of the increasing function
//!
//! ```text
//! G(y) = exp(p·y·e^y/(a - y·e^y)) + b/(q+y) · (y·e^y - a)/(p·e^y)
//! ```
//!
//! on `0 < y < ŷ`, where `ŷ·e^ŷ = a`. `H(z)` is the mirror image with the
//! roles of the species exchanged. Both are solved by bisection.

use serde::{Deserialize, Serialize};

use crate::bounds::{equilibrium_bracket, Bracket};
use crate::error::{Error, Result};
use crate::model::{response_f, response_g, Params};

const MAX_BISECTIONS: usize = 400;

/// Required agreement `|H(z̄)|` for a G-route solution (and vice versa).
pub const CROSS_CHECK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquilibriumKind {
    Zero,
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub y_bar: f64,
    pub z_bar: f64,
    /// `|ȳ - f(z̄)·e^{-ȳ}|`
    pub residual_y: f64,
    /// `|z̄ - g(ȳ)·e^{-z̄}|`
    pub residual_z: f64,
    pub kind: EquilibriumKind,
    pub solver_iterations: usize,
}

impl Equilibrium {
    pub fn zero() -> Self {
        Equilibrium {
            y_bar: 0.0,
            z_bar: 0.0,
            residual_y: 0.0,
            residual_z: 0.0,
            kind: EquilibriumKind::Zero,
            solver_iterations: 0,
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.residual_y.max(self.residual_z)
    }
}

/// Fixed-point defects at `(y, z)`.
pub fn residuals(params: &Params, y: f64, z: f64) -> (f64, f64) {
    (
        (y - response_f(params, z) * (-y).exp()).abs(),
        (z - response_g(params, y) * (-z).exp()).abs(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Existence {
    pub exists: bool,
    pub ratio: f64,
}

/// A positive equilibrium exists iff `ab/(pq) > 1`.
pub fn existence_check(params: &Params) -> Existence {
    let ratio = params.ratio();
    Existence {
        exists: ratio > 1.0,
        ratio,
    }
}

/// The unique positive root of `x·e^x = c`, found by bisection on `(0, c)`.
///
/// Returns 0 for `c <= 0`.
pub fn domain_endpoint(c: f64) -> f64 {
    if c <= 0.0 {
        return 0.0;
    }
    // x·e^x > x, so the root lies below c.
    let (mut lo, mut hi) = (0.0f64, c);
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-14 * hi {
            break;
        }
        if mid * mid.exp() < c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `G(y)`; defined for `0 <= y` with `y·e^y < a`.
#[allow(non_snake_case)]
pub fn G(params: &Params, y: f64) -> Result<f64> {
    root_function(params.a(), params.b(), params.p(), params.q(), y, "G")
}

/// `H(z)`; defined for `0 <= z` with `z·e^z < b`.
#[allow(non_snake_case)]
pub fn H(params: &Params, z: f64) -> Result<f64> {
    root_function(params.b(), params.a(), params.q(), params.p(), z, "H")
}

// G written for (a, b, p, q); H is the same with (b, a, q, p).
fn root_function(a: f64, b: f64, p: f64, q: f64, x: f64, name: &'static str) -> Result<f64> {
    let ex = x.exp();
    let xex = x * ex;
    if !(x >= 0.0 && xex < a) {
        return Err(Error::Domain { function: name, x });
    }
    let partner = p * xex / (a - xex);
    Ok(partner.exp() + b / (q + x) * (xex - a) / (p * ex))
}

/// Which reduced scalar equation the positive solver bisects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootRoute {
    /// Root of `G` in `y`, then `z̄ = p·ȳ·e^ȳ/(a - ȳ·e^ȳ)`.
    G,
    /// Root of `H` in `z`, then `ȳ = q·z̄·e^z̄/(b - z̄·e^z̄)`.
    H,
}

/// Solves for the positive equilibrium through `G`.
pub fn solve_positive(params: &Params, tol: f64) -> Result<Equilibrium> {
    solve_positive_via(params, tol, RootRoute::G)
}

pub fn solve_positive_via(params: &Params, tol: f64, route: RootRoute) -> Result<Equilibrium> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let existence = existence_check(params);
    if !existence.exists {
        return Err(Error::NoPositiveEquilibrium {
            ratio: existence.ratio,
        });
    }

    // Solve in the route's own coordinate, then map to the partner.
    let (own_cap, own_p) = match route {
        RootRoute::G => (params.a(), params.p()),
        RootRoute::H => (params.b(), params.q()),
    };
    let f = |x: f64| match route {
        RootRoute::G => G(params, x),
        RootRoute::H => H(params, x),
    };

    let endpoint = domain_endpoint(own_cap);
    let delta = 1e-12 * endpoint;
    let (mut lo, mut hi) = (delta, endpoint - delta);
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::SolverBracket { lo, hi, f_lo, f_hi });
    }

    let mut iterations = 0;
    while iterations < MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let own = 0.5 * (lo + hi);
    let oex = own * own.exp();
    let partner = own_p * oex / (own_cap - oex);

    let (y_bar, z_bar) = match route {
        RootRoute::G => (own, partner),
        RootRoute::H => (partner, own),
    };
    let (residual_y, residual_z) = residuals(params, y_bar, z_bar);
    let worst = residual_y.max(residual_z);
    if worst.is_nan() || worst > tol {
        return Err(Error::Convergence {
            residual: worst,
            tol,
            iterations,
        });
    }

    let cross = match route {
        RootRoute::G => H(params, z_bar),
        RootRoute::H => G(params, y_bar),
    }?;
    if cross.is_nan() || cross.abs() > CROSS_CHECK_TOL {
        return Err(Error::Convergence {
            residual: cross.abs(),
            tol: CROSS_CHECK_TOL,
            iterations,
        });
    }

    Ok(Equilibrium {
        y_bar,
        z_bar,
        residual_y,
        residual_z,
        kind: EquilibriumKind::Positive,
        solver_iterations: iterations,
    })
}

/// The positive equilibrium together with its closed-form bracket.
pub fn solve_with_bracket(params: &Params, tol: f64) -> Result<(Equilibrium, Bracket)> {
    let bracket = equilibrium_bracket(params)?;
    let eq = solve_positive(params, tol)?;
    Ok((eq, bracket))
}
