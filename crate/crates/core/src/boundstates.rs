//! Bound states below zero frequency via the Birman–Schwinger operator
//!
//! ```text
//! K_ω[ρ] = g² ρ^{½} (c(-Δ)^{½} + |ω|)^{-1} ρ^{½} / (Ω + |ω|),   ω < 0,
//! ```
//!
//! whose kernel is `g²/(c(Ω+|ω|)) √ρ(x) G^{ω/c}(x-y) √ρ(y)` with the
//! negative-branch Green's function. The number of bound states at or below
//! ω equals the number of eigenvalues `μₙ(ω) ≥ 1`, and each `μₙ` grows as ω
//! rises toward 0, so bound states are located by bracketing and bisection.
//!
//! Geometry: in 1D a square density on `[x₀-R, x₀+R]` is discretized on the
//! full interval (both parities); by translation invariance the centre `x₀`
//! does not enter. For d = 2, 3 only radial functions are represented, and a
//! cube `[-R, R]^d` is replaced by the ball of equal volume,
//! `R_b = 2R/|B₁|^{1/d}`, which has the same `‖ρ‖_{L^d}`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::nystrom::{integral_matrix, Kernel, Layout, QuadratureRule, DEFAULT_RADIAL_NODES};
use crate::{linalg, Dimension, Error, PhysicalParams, Result, WaveNumber, C64};

/// Bracket scan `ω = -c·2^j`.
pub const SCAN_EXPONENTS: std::ops::RangeInclusive<i32> = -20..=10;
/// Target `|μₙ(ω*) - 1|`.
pub const MU_TOL: f64 = 1e-10;
const MAX_BISECTIONS: usize = 200;

/// Shape of the density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityKind {
    /// `ρ₀ χ` of the cube (interval in 1D) of half-width `R` about `center`.
    Square { rho0: f64, half_width: f64, center: f64 },
    /// The ball `B_ε` with the density `ρ₀(ε)` of the parameters.
    ScaledInclusion,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    pub kind: DensityKind,
    pub dim: Dimension,
}

impl DensityProfile {
    pub fn square(dim: Dimension, rho0: f64, half_width: f64, center: f64) -> Result<Self> {
        if !(rho0 > 0.0 && half_width > 0.0 && rho0.is_finite() && half_width.is_finite() && center.is_finite()) {
            return Err(Error::Invalid(format!(
                "square density needs ρ₀ > 0 and R > 0, got ρ₀ = {rho0}, R = {half_width}"
            )));
        }
        Ok(Self { kind: DensityKind::Square { rho0, half_width, center }, dim })
    }

    pub fn scaled_inclusion(params: &PhysicalParams) -> Self {
        Self { kind: DensityKind::ScaledInclusion, dim: params.dim }
    }

    /// `‖ρ‖_∞`.
    pub fn height(&self, params: &PhysicalParams) -> f64 {
        match self.kind {
            DensityKind::Square { rho0, .. } => rho0,
            DensityKind::ScaledInclusion => params.rho0(),
        }
    }

    /// Radius of the discretized support: `R` in 1D, the equal-volume ball
    /// radius for a cube, `ε` for the inclusion.
    pub fn support_radius(&self, params: &PhysicalParams) -> f64 {
        match self.kind {
            DensityKind::Square { half_width, .. } => match self.dim {
                Dimension::One => half_width,
                d => 2.0 * half_width / d.unit_ball_volume().powf(1.0 / d.as_usize() as f64),
            },
            DensityKind::ScaledInclusion => params.epsilon,
        }
    }

    /// `∫ ρ^d`.
    pub fn integral_of_power(&self, params: &PhysicalParams) -> f64 {
        let d = self.dim.as_usize() as i32;
        match self.kind {
            DensityKind::Square { rho0, half_width, .. } => (rho0 * 2.0 * half_width).powi(d),
            DensityKind::ScaledInclusion => {
                params.rho0().powi(d) * self.dim.unit_ball_volume() * params.epsilon.powi(d)
            }
        }
    }

    /// `2R`, the side of the square density (cube).
    fn side(&self) -> Result<f64> {
        match self.kind {
            DensityKind::Square { half_width, .. } => Ok(2.0 * half_width),
            DensityKind::ScaledInclusion => {
                Err(Error::Invalid("this condition is stated for square densities".into()))
            }
        }
    }
}

/// Symmetric Birman–Schwinger matrix at one frequency.
#[derive(Debug, Clone)]
pub struct BSOperator {
    pub matrix: DMatrix<f64>,
    pub omega: f64,
    pub profile: DensityProfile,
    pub rule: QuadratureRule,
}

/// Rule suited to bound-state counting: the full interval in 1D, radial
/// otherwise.
pub fn bs_rule(dim: Dimension, radial_nodes: usize) -> Result<QuadratureRule> {
    match dim {
        Dimension::One => QuadratureRule::interval(radial_nodes),
        d => QuadratureRule::with_radial(d, radial_nodes),
    }
}

/// Default-size [`bs_rule`].
pub fn default_bs_rule(dim: Dimension) -> QuadratureRule {
    bs_rule(dim, DEFAULT_RADIAL_NODES).expect("default rule is valid")
}

pub fn build_bs_operator(
    profile: &DensityProfile,
    omega: f64,
    params: &PhysicalParams,
    rule: &QuadratureRule,
) -> Result<BSOperator> {
    params.validate()?;
    if !(omega < 0.0 && omega.is_finite()) {
        return Err(Error::Invalid(format!("Birman–Schwinger operators need ω < 0, got {omega}")));
    }
    if params.omega_atom + omega.abs() <= 0.0 {
        return Err(Error::Invalid(format!("Ω + |ω| must be positive, got {}", params.omega_atom + omega.abs())));
    }
    if rule.dim() != profile.dim || profile.dim != params.dim {
        return Err(Error::Invalid("profile, parameters and rule must share the dimension".into()));
    }
    if profile.dim == Dimension::One && rule.layout() != Layout::Interval {
        return Err(Error::Invalid("1D bound states need the full-interval rule (see bs_rule)".into()));
    }
    let k = WaveNumber::negative(C64::new(omega / params.c, 0.0))?;
    let w = integral_matrix(rule, Kernel::Green(k), profile.support_radius(params))?;
    let scale = params.g * params.g * profile.height(params) / (params.c * (params.omega_atom + omega.abs()));
    let wt = rule.weights();
    let n = rule.len();
    // D^{½} W D^{-½}, then the symmetric part; W is real on the negative branch.
    let s = DMatrix::from_fn(n, n, |i, j| scale * w[(i, j)].re * (wt[i] / wt[j]).sqrt());
    let matrix = (&s + s.transpose()) * 0.5;
    Ok(BSOperator { matrix, omega, profile: *profile, rule: rule.clone() })
}

/// The `m` largest eigenvalues, decreasing.
pub fn mu_spectrum(k: &BSOperator, m: usize) -> Result<Vec<f64>> {
    let (vals, _) = linalg::symmetric_eigen_desc(k.matrix.clone())?;
    Ok(vals.into_iter().take(m).collect())
}

/// `#{n : μₙ(ω) ≥ 1}`, the number of bound states at or below ω.
pub fn count_bound_states_below(
    profile: &DensityProfile,
    omega: f64,
    params: &PhysicalParams,
    rule: &QuadratureRule,
) -> Result<usize> {
    let k = build_bs_operator(profile, omega, params, rule)?;
    let (vals, _) = linalg::symmetric_eigen_desc(k.matrix)?;
    Ok(vals.iter().filter(|&&mu| mu >= 1.0).count())
}

/// A located bound state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    /// 1-based mode index `n` of the eigenvalue `μₙ` that crosses 1.
    pub mode: usize,
    pub omega: f64,
    /// `μₙ(ω*)`, within [`MU_TOL`] of 1.
    pub mu_check: f64,
}

fn mu_n(profile: &DensityProfile, omega: f64, params: &PhysicalParams, rule: &QuadratureRule, n: usize) -> Result<f64> {
    let k = build_bs_operator(profile, omega, params, rule)?;
    let vals = mu_spectrum(&k, n)?;
    vals.get(n - 1)
        .copied()
        .ok_or_else(|| Error::Invalid(format!("mode {n} exceeds the {} discrete modes", rule.len())))
}

/// Frequency `ω* < 0` where `μₙ(ω*) = 1`, by scanning `ω = -c·2^j` and
/// bisecting `log|ω|` inside the bracket.
pub fn solve_bound_state(
    profile: &DensityProfile,
    params: &PhysicalParams,
    n: usize,
    rule: &QuadratureRule,
) -> Result<BoundState> {
    if n == 0 {
        return Err(Error::Invalid("modes are numbered from 1".into()));
    }
    let c = params.c;
    let mut above: Option<f64> = None;
    let mut below: Option<f64> = None;
    for j in SCAN_EXPONENTS {
        let omega = -c * 2f64.powi(j);
        let mu = mu_n(profile, omega, params, rule, n)?;
        if mu >= 1.0 {
            above = Some(omega);
        } else {
            below = Some(omega);
            break;
        }
    }
    let (Some(hi), Some(lo)) = (above, below) else {
        let reason = if above.is_none() {
            "μₙ < 1 already next to ω = 0"
        } else {
            "μₙ ≥ 1 across the whole scan"
        };
        return Err(Error::NotFound(format!("no bound state detected for mode {n}: {reason}")));
    };
    // μₙ(hi) ≥ 1 > μₙ(lo), with lo < hi < 0.
    let (mut a, mut b) = (hi.abs().ln(), lo.abs().ln());
    let mut best = (hi, mu_n(profile, hi, params, rule, n)?);
    for _ in 0..MAX_BISECTIONS {
        if (best.1 - 1.0).abs() <= MU_TOL || (b - a).abs() <= 1e-15 * a.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (a + b);
        let omega = -mid.exp();
        let mu = mu_n(profile, omega, params, rule, n)?;
        if (mu - 1.0).abs() < (best.1 - 1.0).abs() {
            best = (omega, mu);
        }
        if mu >= 1.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    if (best.1 - 1.0).abs() > MU_TOL {
        return Err(Error::NoConvergence(format!(
            "bisection for mode {n} stalled at ω = {} with μ - 1 = {:.3e}",
            best.0,
            best.1 - 1.0
        )));
    }
    Ok(BoundState { mode: n, omega: best.0, mu_check: best.1 })
}

/// Necessary condition for a bound state at ω < 0: `g²‖ρ‖_∞ ≥ ω(ω - Ω)`.
pub fn necessary_condition_holds(omega: f64, profile: &DensityProfile, params: &PhysicalParams) -> bool {
    params.g * params.g * profile.height(params) >= omega * (omega - params.omega_atom)
}

/// `|𝕊^d|`, the surface measure of the unit sphere in `ℝ^{d+1}`.
pub fn sphere_measure(d: usize) -> f64 {
    // 2π^{(d+1)/2}/Γ((d+1)/2), with Γ at integers and half-integers in closed form.
    let gamma_half = |m: usize| -> f64 {
        // Γ(m/2)
        if m.is_multiple_of(2) {
            (1..m / 2).map(|k| k as f64).product()
        } else {
            let mut g = PI.sqrt();
            let mut x = 0.5;
            while x < m as f64 / 2.0 - 0.25 {
                g *= x;
                x += 1.0;
            }
            g
        }
    };
    2.0 * PI.powf((d as f64 + 1.0) / 2.0) / gamma_half(d + 1)
}

/// `S_d = ((d-1)/2)|𝕊^d|^{1/d}` for d ≥ 2.
pub fn sobolev_threshold(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::Invalid(format!("S_d is defined for d ≥ 2, got {d}")));
    }
    Ok((d as f64 - 1.0) / 2.0 * sphere_measure(d).powf(1.0 / d as f64))
}

/// `2g²ρ₀R/(Ωc)`, the dimensionless strength of a square density.
pub fn square_strength(profile: &DensityProfile, params: &PhysicalParams) -> Result<f64> {
    Ok(params.g * params.g * profile.height(params) * profile.side()? / (params.omega_atom * params.c))
}

/// Sufficient condition for no bound states (d ≥ 2, square density):
/// `2g²ρ₀R/(Ωc) < S_d`.
pub fn no_bound_state_condition(profile: &DensityProfile, params: &PhysicalParams) -> Result<bool> {
    Ok(square_strength(profile, params)? < sobolev_threshold(profile.dim.as_usize())?)
}

/// Sufficient condition for at least one bound state (d ≥ 2, square
/// density): `2g²ρ₀R/(Ωc) > Kπ`. `K` is a universal constant with no known
/// value; the caller supplies it.
pub fn large_density_condition(profile: &DensityProfile, params: &PhysicalParams, k: f64) -> Result<bool> {
    if profile.dim == Dimension::One {
        return Err(Error::Invalid("the large-density condition is for d ≥ 2".into()));
    }
    if !(k > 0.0) {
        return Err(Error::Invalid(format!("K must be positive, got {k}")));
    }
    Ok(square_strength(profile, params)? > k * PI)
}

/// `K_d (g²/(Ωc))^d ∫ρ^d`, the bound on the number of negative-frequency
/// bound states. `K_d` is a universal constant with no known value; the
/// caller supplies it.
pub fn nbs_upper_bound(profile: &DensityProfile, params: &PhysicalParams, k_d: f64) -> Result<f64> {
    if profile.dim == Dimension::One {
        return Err(Error::Invalid("the bound-state count bound is for d ≥ 2".into()));
    }
    if !(k_d > 0.0) {
        return Err(Error::Invalid(format!("K_d must be positive, got {k_d}")));
    }
    let d = profile.dim.as_usize() as i32;
    Ok(k_d * (params.g * params.g / (params.omega_atom * params.c)).powi(d) * profile.integral_of_power(params))
}
