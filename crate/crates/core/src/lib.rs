//! Bound states and resonances of a single photon coupled to a cloud of
//! two-level atoms.
//!
//! The photon field obeys a half-wave equation `i ψ_t = c(-Δ)^{1/2} ψ + g√ρ φ`
//! and the atomic amplitude `i φ_t = g√ρ ψ + Ω φ`. Eliminating the atoms
//! gives a nonlinear, nonlocal eigenproblem in the frequency ω, which this
//! crate discretizes on radially symmetric inclusions and solves with
//! Muller's method. Closed-form small-inclusion expansions are provided
//! alongside so the two can be cross-checked.
//!
//! Module map:
//!
//! - [`specfun`]: E₁, J₀, Y₀, Hankel and Struve functions of complex argument.
//! - [`greens`]: every branch of the Green's function of `(-Δ)^{1/2} - k`.
//! - [`nystrom`]: quadrature rules and dense operators on radial functions.
//! - [`eigensolver`]: characteristic value, Muller iteration, mode tracing.
//! - [`boundstates`]: Birman–Schwinger operators and bound-state location.
//! - [`asymptotics`]: small-ε expansions built from the limiting operator.
//! - [`dynamics`]: 1D time evolution of the coupled photon/atom system.

// `!(x > 0.0)` is the NaN-rejecting form used throughout input validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod boundstates;
pub mod dynamics;
pub mod eigensolver;
pub mod error;
pub mod greens;
pub mod linalg;
pub mod nystrom;
pub mod params;
pub mod specfun;
#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use greens::{Branch, WaveNumber};
pub use nystrom::{OperatorKind, QuadratureRule, RadialOperator};
pub use params::{DensityScale, Dimension, PhysicalParams};

/// Complex double used throughout.
pub type C64 = num_complex::Complex64;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
