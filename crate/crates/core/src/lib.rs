//! Dynamics of the exponential Pielou system
//!
//! ```text
//! y_{n+1} = a·z_n/(p+z_n)·exp(-y_n)
//! z_{n+1} = b·y_n/(q+y_n)·exp(-z_n)
//! ```
//!
//! with positive coefficients `a, b, p, q` and nonnegative initial values.
//!
//! The crate iterates the system, computes closed-form containment boxes,
//! solves for the positive equilibrium, evaluates sufficient stability
//! conditions literally, and audits Lyapunov functionals along orbits.
//!
//! ```
//! use pielou_core::{classify, Params, Verdict};
//!
//! let params = Params::new(0.6, 0.5, 0.8, 0.9)?;
//! let cert = classify(&params, 1e-12)?;
//! assert_eq!(cert.verdict, Verdict::ZeroGasCertified);
//! # Ok::<(), pielou_core::Error>(())
//! ```

pub mod analysis;
pub mod bounds;
pub mod equilibria;
pub mod error;
pub mod lyapunov;
pub mod model;
pub mod orbit;
pub mod stability;

pub use analysis::{analyze, Analysis, AnalysisReport, ARTIFACT_VERSION};
pub use bounds::{crude_box, equilibrium_bracket, refined_lower, refined_upper, BoundBox, Bracket};
pub use equilibria::{existence_check, solve_positive, Equilibrium, EquilibriumKind};
pub use error::{Error, Result};
pub use lyapunov::{audit, FunctionId, MonotonicityReport};
pub use model::{jacobian_at, step, Jacobian2, Params, State};
pub use orbit::{iterate, orbit_stats, Orbit, OrbitStats};
pub use stability::{classify, spectral_radius, ConditionReport, StabilityCertificate, Verdict};
