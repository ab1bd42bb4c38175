//! Forward iteration of the system and the rational comparison system that
//! majorizes it.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{response_f, response_g, step, Params, State};

/// Number of consecutive sub-tolerance steps required to declare convergence.
pub const CONVERGENCE_WINDOW: usize = 10;

/// A finite trajectory `states[0..=n]` of the system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub params: Params,
    pub states: Vec<State>,
    pub converged: bool,
    pub limit_estimate: Option<State>,
    pub convergence_index: Option<usize>,
}

/// Iterates from `s0` for at most `max_steps` steps.
///
/// Stops early once the sup-norm difference between successive states has
/// stayed below `tol` for [`CONVERGENCE_WINDOW`] consecutive steps.
pub fn iterate(params: &Params, s0: State, max_steps: usize, tol: f64) -> Result<Orbit> {
    if max_steps == 0 {
        return Err(Error::ZeroSteps);
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let mut states = Vec::with_capacity(max_steps.min(1 << 16) + 1);
    states.push(s0);
    let mut current = s0;
    let mut quiet = 0usize;
    let mut convergence_index = None;
    for n in 1..=max_steps {
        let next = step(params, current);
        if !(next.y.is_finite() && next.z.is_finite()) {
            return Err(Error::NonFiniteState { index: n });
        }
        let delta = next.distance(&current);
        states.push(next);
        current = next;
        if delta < tol {
            quiet += 1;
            if quiet >= CONVERGENCE_WINDOW {
                convergence_index = Some(n);
                break;
            }
        } else {
            quiet = 0;
        }
    }
    Ok(Orbit {
        params: *params,
        converged: convergence_index.is_some(),
        limit_estimate: convergence_index.map(|_| current),
        convergence_index,
        states,
    })
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> Option<State> {
        self.states.last().copied()
    }

    /// Writes the `n,y,z` CSV form, 17 significant digits per value.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,y,z")?;
        for (n, s) in self.states.iter().enumerate() {
            writeln!(out, "{},{:.16e},{:.16e}", n, s.y, s.z)?;
        }
        out.flush()
    }
}

/// Reads the states back from the `n,y,z` CSV form.
pub fn read_orbit_csv<R: BufRead>(input: R) -> std::result::Result<Vec<State>, String> {
    let mut lines = input.lines();
    match lines.next() {
        Some(Ok(header)) if header.trim() == "n,y,z" => {}
        Some(Ok(header)) => return Err(format!("unexpected header {header:?}")),
        Some(Err(e)) => return Err(e.to_string()),
        None => return Err("empty orbit file".into()),
    }
    let mut states = Vec::new();
    for (row, line) in lines.enumerate() {
        let line = line.map_err(|e| e.to_string())?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(format!("row {row}: expected 3 fields"));
        }
        let n: usize = fields[0].parse().map_err(|e| format!("row {row}: {e}"))?;
        if n != states.len() {
            return Err(format!("row {row}: index {n} out of sequence"));
        }
        let y: f64 = fields[1].parse().map_err(|e| format!("row {row}: {e}"))?;
        let z: f64 = fields[2].parse().map_err(|e| format!("row {row}: {e}"))?;
        states.push(State::new(y, z).map_err(|e| format!("row {row}: {e}"))?);
    }
    Ok(states)
}

/// Coordinate-wise extrema and tail amplitude of an orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitStats {
    pub min_y: f64,
    pub max_y: f64,
    pub min_z: f64,
    pub max_z: f64,
    /// `max - min` of y over the final 10% of states.
    pub tail_amplitude_y: f64,
    pub tail_amplitude_z: f64,
}

/// Extrema over `n >= 1` (the seed is excluded unless it is the only state).
///
/// # Panics
///
/// Panics on an empty orbit.
pub fn orbit_stats(orbit: &Orbit) -> OrbitStats {
    assert!(!orbit.states.is_empty(), "orbit_stats on empty orbit");
    let body = if orbit.states.len() > 1 {
        &orbit.states[1..]
    } else {
        &orbit.states[..]
    };
    let (min_y, max_y, min_z, max_z) = extrema(body);
    let tail_len = (orbit.states.len() as f64 * 0.1).ceil().max(1.0) as usize;
    let tail = &orbit.states[orbit.states.len() - tail_len..];
    let (ty0, ty1, tz0, tz1) = extrema(tail);
    OrbitStats {
        min_y,
        max_y,
        min_z,
        max_z,
        tail_amplitude_y: ty1 - ty0,
        tail_amplitude_z: tz1 - tz0,
    }
}

fn extrema(states: &[State]) -> (f64, f64, f64, f64) {
    states.iter().fold(
        (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        ),
        |(y0, y1, z0, z1), s| (y0.min(s.y), y1.max(s.y), z0.min(s.z), z1.max(s.z)),
    )
}

/// Iterates the exponential-free comparison system
/// `x' = a·w/(p+w)`, `w' = b·x/(q+x)` for `n_steps` steps.
pub fn comparison_recursion(
    params: &Params,
    x0: f64,
    w0: f64,
    n_steps: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_seeds(x0, w0)?;
    let mut xs = Vec::with_capacity(n_steps + 1);
    let mut ws = Vec::with_capacity(n_steps + 1);
    let (mut x, mut w) = (x0, w0);
    xs.push(x);
    ws.push(w);
    for _ in 0..n_steps {
        (x, w) = (response_f(params, w), response_g(params, x));
        xs.push(x);
        ws.push(w);
    }
    Ok((xs, ws))
}

fn check_seeds(x0: f64, w0: f64) -> Result<()> {
    if x0.is_finite() && w0.is_finite() && x0 > 0.0 && w0 > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveSeed { x0, w0 })
    }
}

/// Coefficients of the closed-form reciprocal solution
///
/// ```text
/// X_n = λ1·r^n + λ2·(-r)^n + Lx,   W_n = μ1·r^n + μ2·(-r)^n + Lw
/// ```
///
/// with `X_n = 1/x_n`, `W_n = 1/w_n` and `r = sqrt(pq/ab)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonCoefficients {
    pub lambda1: f64,
    pub lambda2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub r: f64,
    pub limit_x: f64,
    pub limit_w: f64,
}

impl ComparisonCoefficients {
    /// Fits the coefficients from the seeds and one explicit comparison step.
    pub fn fit(params: &Params, x0: f64, w0: f64) -> Result<Self> {
        check_seeds(x0, w0)?;
        let (a, b, p, q) = (params.a(), params.b(), params.p(), params.q());
        let gap = a * b - p * q;
        if gap == 0.0 {
            return Err(Error::DegenerateRatio);
        }
        let r = (p * q / (a * b)).sqrt();
        let limit_x = (p + b) / gap;
        let limit_w = (q + a) / gap;

        let x1 = response_f(params, w0);
        let w1 = response_g(params, x0);
        let (lambda1, lambda2) = split(1.0 / x0 - limit_x, 1.0 / x1 - limit_x, r);
        let (mu1, mu2) = split(1.0 / w0 - limit_w, 1.0 / w1 - limit_w, r);
        Ok(ComparisonCoefficients {
            lambda1,
            lambda2,
            mu1,
            mu2,
            r,
            limit_x,
            limit_w,
        })
    }

    /// `X_n`, the reciprocal of the x-sequence.
    pub fn reciprocal_x(&self, n: usize) -> f64 {
        general_term(self.lambda1, self.lambda2, self.r, n) + self.limit_x
    }

    /// `W_n`, the reciprocal of the w-sequence.
    pub fn reciprocal_w(&self, n: usize) -> f64 {
        general_term(self.mu1, self.mu2, self.r, n) + self.limit_w
    }
}

// Solves c1 + c2 = d0, r·(c1 - c2) = d1.
fn split(d0: f64, d1: f64, r: f64) -> (f64, f64) {
    let odd = d1 / r;
    (0.5 * (d0 + odd), 0.5 * (d0 - odd))
}

fn general_term(c1: f64, c2: f64, r: f64, n: usize) -> f64 {
    let rn = r.powi(n as i32);
    if n.is_multiple_of(2) {
        (c1 + c2) * rn
    } else {
        (c1 - c2) * rn
    }
}

/// Evaluates the comparison system through its closed-form solution.
/// Fails with [`Error::DegenerateRatio`] when `ab = pq`.
pub fn comparison_closed_form(
    params: &Params,
    x0: f64,
    w0: f64,
    n_steps: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let c = ComparisonCoefficients::fit(params, x0, w0)?;
    let xs = (0..=n_steps).map(|n| 1.0 / c.reciprocal_x(n)).collect();
    let ws = (0..=n_steps).map(|n| 1.0 / c.reciprocal_w(n)).collect();
    Ok((xs, ws))
}
