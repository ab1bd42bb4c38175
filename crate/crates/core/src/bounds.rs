//! Closed-form containment data: the boundedness/persistence box for orbits
//! and the refined rectangle enclosing the positive equilibrium.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{response_f, response_g, Params, State};

/// Floor substituted for a non-positive refined lower bound.
pub const LOWER_BOUND_FLOOR: f64 = 1e-9;

/// Axis-aligned box `[y_lo, y_hi] × [z_lo, z_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundBox {
    pub y_lo: f64,
    pub y_hi: f64,
    pub z_lo: f64,
    pub z_hi: f64,
}

impl BoundBox {
    pub fn contains(&self, s: &State) -> bool {
        (self.y_lo..=self.y_hi).contains(&s.y) && (self.z_lo..=self.z_hi).contains(&s.z)
    }
}

/// Persistence and boundedness box for orbits seeded at `s0`:
/// `[f(z0)·e^{-a}, a] × [g(y0)·e^{-b}, b]`.
///
/// The lower bounds use `e^{-a}` on y and `e^{-b}` on z, the pairing that
/// follows from `y_n < a`, `z_n < b` for `n >= 1`. See
/// [`crude_box_swapped_exponents`] for the other pairing.
pub fn crude_box(params: &Params, s0: State) -> Result<BoundBox> {
    crude_box_with(params, s0, params.a(), params.b())
}

/// Same box with the exponents exchanged (`e^{-b}` on y, `e^{-a}` on z).
/// Reported alongside [`crude_box`] for comparison.
pub fn crude_box_swapped_exponents(params: &Params, s0: State) -> Result<BoundBox> {
    crude_box_with(params, s0, params.b(), params.a())
}

fn crude_box_with(params: &Params, s0: State, ey: f64, ez: f64) -> Result<BoundBox> {
    if !s0.is_strictly_positive() {
        return Err(Error::PersistenceUndefined { y: s0.y, z: s0.z });
    }
    Ok(BoundBox {
        y_lo: response_f(params, s0.z) * (-ey).exp(),
        y_hi: params.a(),
        z_lo: response_g(params, s0.y) * (-ez).exp(),
        z_hi: params.b(),
    })
}

/// Upper corner `(y^*, z^*) = ((ab-pq)/(p+b), (ab-pq)/(q+a))`.
pub fn refined_upper(params: &Params) -> Result<(f64, f64)> {
    let gap = params.a() * params.b() - params.p() * params.q();
    if gap <= 0.0 {
        return Err(Error::NoPositiveEquilibrium {
            ratio: params.ratio(),
        });
    }
    Ok((
        gap / (params.p() + params.b()),
        gap / (params.q() + params.a()),
    ))
}

/// Raw lower corner of the bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBounds {
    pub y: f64,
    pub z: f64,
    /// Set when `ab·e^{-(y^*+z^*)} <= pq`, i.e. the formula gives no positive bound.
    pub degenerate: bool,
}

/// `y_* = (ab·e^{-(y^*+z^*)} - pq)/(b·e^{-z^*} + p)` and
/// `z_* = (ab·e^{-(y^*+z^*)} - pq)/(a·e^{-y^*} + q)`.
pub fn refined_lower(params: &Params, y_hi: f64, z_hi: f64) -> LowerBounds {
    let numer = lower_numerator(params, y_hi, z_hi);
    LowerBounds {
        y: numer / (params.b() * (-z_hi).exp() + params.p()),
        z: numer / (params.a() * (-y_hi).exp() + params.q()),
        degenerate: numer <= 0.0,
    }
}

/// `ab·e^{-(y^*+z^*)} - pq`, positive iff the refined lower bounds are.
pub fn lower_numerator(params: &Params, y_hi: f64, z_hi: f64) -> f64 {
    params.a() * params.b() * (-(y_hi + z_hi)).exp() - params.p() * params.q()
}

/// Rectangle `[y_*, y^*] × [z_*, z^*]` enclosing the positive equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub y_lo: f64,
    pub y_hi: f64,
    pub z_lo: f64,
    pub z_hi: f64,
    /// The lower corner was replaced by [`LOWER_BOUND_FLOOR`].
    pub lower_degenerate: bool,
}

impl Bracket {
    pub fn contains_strictly(&self, y: f64, z: f64) -> bool {
        self.y_lo < y && y < self.y_hi && self.z_lo < z && z < self.z_hi
    }
}

pub fn equilibrium_bracket(params: &Params) -> Result<Bracket> {
    let (y_hi, z_hi) = refined_upper(params)?;
    let lower = refined_lower(params, y_hi, z_hi);
    let floor = |v: f64| if v > 0.0 { v } else { LOWER_BOUND_FLOOR };
    Ok(Bracket {
        y_lo: floor(lower.y),
        y_hi,
        z_lo: floor(lower.z),
        z_hi,
        lower_degenerate: lower.degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex41() -> Params {
        Params::new(0.8, 0.9, 0.6, 0.5).unwrap()
    }

    #[test]
    fn crude_box_reference_values() {
        let b = crude_box(&ex41(), State::new(0.35, 0.26).unwrap()).unwrap();
        assert!((b.y_lo - 0.1087).abs() < 5e-5);
        assert!((b.z_lo - 0.1507).abs() < 5e-5);
        assert_eq!((b.y_hi, b.z_hi), (0.8, 0.9));

        let b = crude_box(&ex41(), State::new(0.05, 0.02).unwrap()).unwrap();
        assert!((b.y_lo - 0.0116).abs() < 5e-5);
        assert!((b.z_lo - 0.0333).abs() < 5e-5);
    }

    #[test]
    fn swapped_exponents_differ() {
        let s = State::new(0.35, 0.26).unwrap();
        let alt = crude_box_swapped_exponents(&ex41(), s).unwrap();
        // 0.8·0.26/0.86·e^{-0.9}
        assert!((alt.y_lo - 0.098_334).abs() < 1e-5);
        assert!((alt.y_lo - 0.1087).abs() > 5e-4);
    }

    #[test]
    fn crude_box_saturation_limit() {
        let p = ex41();
        let b = crude_box(&p, State::new(1e12, 1e12).unwrap()).unwrap();
        assert!((b.y_lo - p.a() * (-p.a()).exp()).abs() < 1e-9);
        assert!((b.z_lo - p.b() * (-p.b()).exp()).abs() < 1e-9);
    }

    #[test]
    fn crude_box_needs_positive_seed() {
        assert!(matches!(
            crude_box(&ex41(), State::new(0.0, 0.3).unwrap()),
            Err(Error::PersistenceUndefined { .. })
        ));
    }

    #[test]
    fn refined_values_example_41() {
        let (yh, zh) = refined_upper(&ex41()).unwrap();
        assert!((yh - 0.2800).abs() < 5e-5);
        assert!((zh - 0.3231).abs() < 5e-5);
        let lo = refined_lower(&ex41(), yh, zh);
        assert!(!lo.degenerate);
        assert!((lo.y - 0.0751).abs() < 5e-5);
        assert!((lo.z - 0.0850).abs() < 5e-5);
    }

    #[test]
    fn upper_vanishes_at_threshold() {
        let p = Params::new(1.0, 1.0 + 1e-12, 1.0, 1.0).unwrap();
        let (yh, zh) = refined_upper(&p).unwrap();
        assert!(yh < 1e-11 && zh < 1e-11);
    }

    #[test]
    fn upper_requires_existence() {
        let p = Params::new(0.6, 0.5, 0.8, 0.9).unwrap();
        assert!(matches!(
            refined_upper(&p),
            Err(Error::NoPositiveEquilibrium { .. })
        ));
        let p = Params::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(refined_upper(&p).is_err());
        assert!(equilibrium_bracket(&p).is_err());
    }

    #[test]
    fn symmetric_params_give_symmetric_bracket() {
        let p = Params::new(0.9, 0.9, 0.3, 0.3).unwrap();
        let (yh, zh) = refined_upper(&p).unwrap();
        assert_eq!(yh, zh);
        let lo = refined_lower(&p, yh, zh);
        assert_eq!(lo.y, lo.z);
    }

    #[test]
    fn zero_numerator_is_degenerate() {
        // ab·e^{-(y+z)} = pq with ab = 1, pq = e^{-1}, y + z = 1
        let p = Params::new(1.0, 1.0, (-1.0f64).exp(), 1.0).unwrap();
        let lo = refined_lower(&p, 0.5, 0.5);
        assert!(lo.degenerate);
        assert!(lo.y.abs() < 1e-16 && lo.z.abs() < 1e-16);
    }

    #[test]
    fn degenerate_bracket_uses_floor() {
        // ratio just above 1 with large coefficients: the exponential factor
        // pushes the numerator negative.
        let p = Params::new(8.0, 8.0, 7.0, 7.0).unwrap();
        let b = equilibrium_bracket(&p).unwrap();
        assert!(b.lower_degenerate);
        assert_eq!(b.y_lo, LOWER_BOUND_FLOOR);
        assert_eq!(b.z_lo, LOWER_BOUND_FLOOR);
    }

    #[test]
    fn bracket_example_41() {
        let b = equilibrium_bracket(&ex41()).unwrap();
        assert!(!b.lower_degenerate);
        for (got, want) in [
            (b.y_lo, 0.0751),
            (b.y_hi, 0.2800),
            (b.z_lo, 0.0850),
            (b.z_hi, 0.3231),
        ] {
            assert!((got - want).abs() < 5e-5, "{got} vs {want}");
        }
    }
}
