//! The exponential Pielou system
//!
//! ```text
//! y' = a·z/(p+z)·exp(-y)
//! z' = b·y/(q+y)·exp(-z)
//! ```
//!
//! together with its saturating response functions and Jacobian.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four positive coefficients of the system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct Params {
    a: f64,
    b: f64,
    p: f64,
    q: f64,
}

#[derive(Deserialize)]
struct RawParams {
    a: f64,
    b: f64,
    p: f64,
    q: f64,
}

impl TryFrom<RawParams> for Params {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Params::new(raw.a, raw.b, raw.p, raw.q)
    }
}

impl Params {
    pub fn new(a: f64, b: f64, p: f64, q: f64) -> Result<Self> {
        for (name, value) in [("a", a), ("b", b), ("p", p), ("q", q)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        Ok(Params { a, b, p, q })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `ab / (pq)`; the positive equilibrium exists iff this exceeds 1.
    pub fn ratio(&self) -> f64 {
        (self.a * self.b) / (self.p * self.q)
    }

    /// Whether `a < 1` and `b < 1`, the growth bound under which orbits are
    /// known to be bounded and persistent. Not enforced.
    pub fn sub_unit_growth(&self) -> bool {
        self.a < 1.0 && self.b < 1.0
    }

    /// Exchanges the roles of the two species: `(a, b, p, q) -> (b, a, q, p)`.
    pub fn swapped(&self) -> Params {
        Params {
            a: self.b,
            b: self.a,
            p: self.q,
            q: self.p,
        }
    }
}

/// A point of the closed nonnegative quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawState")]
pub struct State {
    pub y: f64,
    pub z: f64,
}

#[derive(Deserialize)]
struct RawState {
    y: f64,
    z: f64,
}

impl TryFrom<RawState> for State {
    type Error = Error;

    fn try_from(raw: RawState) -> Result<Self> {
        State::new(raw.y, raw.z)
    }
}

impl State {
    pub const ORIGIN: State = State { y: 0.0, z: 0.0 };

    pub fn new(y: f64, z: f64) -> Result<Self> {
        if y.is_finite() && z.is_finite() && y >= 0.0 && z >= 0.0 {
            Ok(State { y, z })
        } else {
            Err(Error::InvalidState { y, z })
        }
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.y > 0.0 && self.z > 0.0
    }

    /// Sup-norm distance.
    pub fn distance(&self, other: &State) -> f64 {
        (self.y - other.y).abs().max((self.z - other.z).abs())
    }

    pub fn swapped(&self) -> State {
        State {
            y: self.z,
            z: self.y,
        }
    }
}

/// `f(x) = a·x/(p+x)`, the saturating response driving the y-equation.
pub fn response_f(params: &Params, x: f64) -> f64 {
    params.a * x / (params.p + x)
}

/// `g(x) = b·x/(q+x)`, the saturating response driving the z-equation.
pub fn response_g(params: &Params, x: f64) -> f64 {
    params.b * x / (params.q + x)
}

/// Evaluates the map at an arbitrary real point without validation.
///
/// Used where the argument may leave the nonnegative quadrant, e.g. finite
/// difference stencils around a boundary point.
pub fn eval_map(params: &Params, y: f64, z: f64) -> (f64, f64) {
    (
        response_f(params, z) * (-y).exp(),
        response_g(params, y) * (-z).exp(),
    )
}

/// One application of the system map. The image of a nonnegative state lies
/// in `[0, a) × [0, b)`.
pub fn step(params: &Params, s: State) -> State {
    let (y, z) = eval_map(params, s.y, s.z);
    State { y, z }
}

/// 2×2 matrix in row order `[[m11, m12], [m21, m22]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jacobian2 {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl Jacobian2 {
    pub fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        Jacobian2 { m11, m12, m21, m22 }
    }

    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// `(|m11| + |m12|, |m21| + |m22|)`, the infinity-norm row sums.
    pub fn row_sums(&self) -> (f64, f64) {
        (
            self.m11.abs() + self.m12.abs(),
            self.m21.abs() + self.m22.abs(),
        )
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.m11 * v[0] + self.m12 * v[1],
            self.m21 * v[0] + self.m22 * v[1],
        ]
    }
}

/// Analytic Jacobian of [`step`] at `s`.
pub fn jacobian_at(params: &Params, s: State) -> Jacobian2 {
    let Params { a, b, p, q } = *params;
    let ey = (-s.y).exp();
    let ez = (-s.z).exp();
    Jacobian2 {
        m11: -a * s.z * ey / (p + s.z),
        m12: a / (p + s.z) * (p / (p + s.z)) * ey,
        m21: b / (q + s.y) * (q / (q + s.y)) * ez,
        m22: -b * s.y * ez / (q + s.y),
    }
}
