//! Small-inclusion expansions of resonances and bound states.
//!
//! Everything here is built from the spectrum of the discretized limiting
//! operator `L₀` on the same quadrature rule the eigensolver uses, so that
//! discretization error cancels when the two are compared. Masses and inner
//! products are the quadrature-weighted discrete forms.
//!
//! Sign conventions: `ωⱼ = Ω - μⱼ` with `μⱼ` the eigenvalues of `L₀`, in
//! decreasing order, so `ω₁ < ω₂ < … < Ω`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::nystrom::{build_first_order, build_kernel_only, QuadratureRule};
use crate::{Dimension, Error, PhysicalParams, Result, C64};

/// One eigenpair of the limiting problem `L₀ψ = (Ω - ω)ψ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitingMode {
    /// 1-based mode index.
    pub j: usize,
    pub omega_j: f64,
    /// Samples of `ψⱼ` at the rule's nodes, `‖ψⱼ‖_w = 1`, `mass ≥ 0`.
    pub psi: Vec<f64>,
    /// `∫_{B₁} ψⱼ`.
    pub mass: f64,
    /// `⟨ψⱼ, 𝒜₁^{ωⱼ} ψⱼ⟩`. Real in 3D; in 2D the outgoing branch adds an
    /// imaginary part.
    pub a1_quad: C64,
}

/// Top `n` eigenpairs of `L₀` for d = 2, 3.
pub fn limiting_modes(params: &PhysicalParams, n: usize, rule: &QuadratureRule) -> Result<Vec<LimitingMode>> {
    if params.dim == Dimension::One {
        return Err(Error::Invalid("limiting modes need d = 2 or 3; the 1D limit is rank one".into()));
    }
    if n == 0 || n > rule.len() {
        return Err(Error::Invalid(format!("mode count must be in 1..={}, got {n}", rule.len())));
    }
    let l0 = build_kernel_only(params, rule)?;
    let sym = l0.symmetrized().map(|v| v.re);
    let (mu, vecs) = linalg::symmetric_eigen_desc(sym)?;
    let w = rule.weights();
    let mut modes = Vec::with_capacity(n);
    for j in 0..n {
        // Symmetric-frame vector y has ‖y‖ = 1, so ψ = D^{-1/2} y has ‖ψ‖_w = 1.
        let mut psi: Vec<f64> = (0..rule.len()).map(|i| vecs[(i, j)] / w[i].sqrt()).collect();
        let mut mass: f64 = psi.iter().zip(w).map(|(p, w)| p * w).sum();
        if mass < 0.0 {
            psi.iter_mut().for_each(|p| *p = -*p);
            mass = -mass;
        }
        let omega_j = params.omega_atom - mu[j];
        let a1 = build_first_order(params, C64::new(omega_j, 0.0), rule)?;
        let a1_quad: C64 = (0..rule.len())
            .map(|i| {
                let row: C64 = (0..rule.len()).map(|k| a1.matrix[(i, k)] * psi[k]).sum();
                row * (w[i] * psi[i])
            })
            .sum();
        modes.push(LimitingMode { j: j + 1, omega_j, psi, mass, a1_quad });
    }
    Ok(modes)
}

/// 3D resonance to second order in ε:
/// `ωⱼ + ε⟨ψⱼ, 𝒜₁ψⱼ⟩ - iε²ωⱼ²g²s₀ (∫ψⱼ)²/(2πc³)`.
pub fn resonance_expansion_3d(mode: &LimitingMode, params: &PhysicalParams, eps: f64) -> Result<C64> {
    if params.dim != Dimension::Three {
        return Err(Error::Invalid("the 3D expansion needs d = 3".into()));
    }
    check_eps(eps)?;
    let (c, g2, s0) = (params.c, params.g * params.g, params.s0());
    let re = mode.omega_j + eps * mode.a1_quad.re;
    let im = -eps * eps * mode.omega_j.powi(2) * g2 * s0 * mode.mass.powi(2) / (2.0 * PI * c.powi(3));
    Ok(C64::new(re, im))
}

/// 2D resonance to leading order: a `ε log ε` shift of the real part and an
/// `O(ε)` imaginary part.
pub fn resonance_expansion_2d(mode: &LimitingMode, params: &PhysicalParams, eps: f64) -> Result<C64> {
    if params.dim != Dimension::Two {
        return Err(Error::Invalid("the 2D expansion needs d = 2".into()));
    }
    check_eps(eps)?;
    let (c, g2, s0) = (params.c, params.g * params.g, params.s0());
    let m2 = mode.mass * mode.mass;
    let re = if eps == 0.0 {
        mode.omega_j
    } else {
        mode.omega_j + eps * eps.ln() * mode.omega_j * g2 * s0 * m2 / (2.0 * PI * c * c)
    };
    let im = -eps * mode.omega_j * g2 * s0 * m2 / (2.0 * c * c);
    Ok(C64::new(re, im))
}

/// `Ω - g²s₀|B₁|/(πc)`, the 1D limiting frequency.
pub fn limiting_frequency_1d(params: &PhysicalParams) -> f64 {
    let b1 = Dimension::One.unit_ball_volume();
    params.omega_atom - params.g * params.g * params.s0() * b1 / (PI * params.c)
}

/// 1D resonance to leading order:
/// `Ω - g²s₀|B₁|/(πc) + i g²s₀|B₁|/(c log ε)`.
pub fn resonance_expansion_1d(params: &PhysicalParams, eps: f64) -> Result<C64> {
    if params.dim != Dimension::One {
        return Err(Error::Invalid("the 1D expansion needs d = 1".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Invalid(format!("need 0 < ε < 1, got {eps}")));
    }
    let re = limiting_frequency_1d(params);
    if re <= 0.0 {
        return Err(Error::Invalid(format!(
            "limiting frequency {re} ≤ 0: this is the bound-state regime, see bound_state_exponent_1d"
        )));
    }
    let b1 = Dimension::One.unit_ball_volume();
    let im = params.g * params.g * params.s0() * b1 / (params.c * eps.ln());
    Ok(C64::new(re, im))
}

/// `α = 2g²s₀/(πc)`, the coupling scale of the uniform-ball approximation.
pub fn sphere_alpha(params: &PhysicalParams) -> f64 {
    2.0 * params.g * params.g * params.s0() / (PI * params.c)
}

/// Uniform-ball approximation of the lowest 3D resonance:
/// `Re ≈ Ω - α - ε(Ω-α)/c`, `Im ≈ -ε²απ(Ω-α)²/(3c²)`.
pub fn sphere_lowest_mode_approx(params: &PhysicalParams, eps: f64) -> Result<C64> {
    if params.dim != Dimension::Three {
        return Err(Error::Invalid("the sphere approximation needs d = 3".into()));
    }
    check_eps(eps)?;
    let alpha = sphere_alpha(params);
    let c = params.c;
    let gap = params.omega_atom - alpha;
    Ok(C64::new(gap - eps * gap / c, -eps * eps * alpha * PI * gap * gap / (3.0 * c * c)))
}

/// Exponent `p` in `ω(ε) ≈ -c εᵖ` for the small-ε 1D bound state:
/// `p = Ωπc/(g²s₀|B₁|) - 1`.
pub fn bound_state_exponent_1d(params: &PhysicalParams) -> Result<f64> {
    if params.dim != Dimension::One {
        return Err(Error::Invalid("the bound-state exponent is 1D only".into()));
    }
    let b1 = Dimension::One.unit_ball_volume();
    let ratio = params.omega_atom * PI * params.c / (params.g * params.g * params.s0() * b1);
    if ratio <= 1.0 {
        return Err(Error::Invalid(format!(
            "Ωπc/(g²s₀|B₁|) = {ratio} ≤ 1: the limiting frequency is not positive, use resonance_expansion_1d instead"
        )));
    }
    Ok(ratio - 1.0)
}

fn check_eps(eps: f64) -> Result<()> {
    if eps >= 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::Invalid(format!("ε must be finite and ≥ 0, got {eps}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params3(eps: f64) -> PhysicalParams {
        PhysicalParams::scaled(Dimension::Three, 1.0, 1.0, 1.0, 1.0, eps)
    }

    fn rule(d: Dimension) -> QuadratureRule {
        QuadratureRule::with_radial(d, 32).unwrap()
    }

    #[test]
    fn limiting_modes_structure_3d() {
        let p = params3(0.1);
        let modes = limiting_modes(&p, 5, &rule(Dimension::Three)).unwrap();
        for w in modes.windows(2) {
            assert!(w[0].omega_j < w[1].omega_j);
            assert!(w[0].mass > w[1].mass);
        }
        assert!(modes.iter().all(|m| m.omega_j < 1.0));
        assert!(modes[0].psi.iter().all(|&v| v > 0.0));
        let r = rule(Dimension::Three);
        for m in &modes {
            let norm: f64 = m.psi.iter().zip(r.weights()).map(|(p, w)| p * p * w).sum();
            assert!((norm - 1.0).abs() < 1e-12);
            assert!(m.a1_quad.im.abs() < 1e-12);
        }
    }

    #[test]
    fn limiting_modes_structure_2d() {
        let p = PhysicalParams::scaled(Dimension::Two, 1.0, 1.0, 1.0, 1.0, 0.1);
        let modes = limiting_modes(&p, 4, &rule(Dimension::Two)).unwrap();
        assert!(modes.windows(2).all(|w| w[0].omega_j < w[1].omega_j));
        assert!(modes[0].psi.iter().all(|&v| v > 0.0));
        // Outgoing radiation makes the first-order term dissipative.
        assert!(modes.iter().all(|m| m.omega_j <= 0.0 || m.a1_quad.im < 0.0));
    }

    #[test]
    fn expansions_base_point_and_sign() {
        let p = params3(0.1);
        let m = &limiting_modes(&p, 2, &rule(Dimension::Three)).unwrap()[0];
        assert_eq!(resonance_expansion_3d(m, &p, 0.0).unwrap(), C64::new(m.omega_j, 0.0));
        for eps in [1e-3, 0.01, 0.3] {
            assert!(resonance_expansion_3d(m, &p, eps).unwrap().im <= 0.0);
        }
        let p2 = PhysicalParams::scaled(Dimension::Two, 1.0, 1.0, 1.0, 1.0, 0.1);
        let m2 = &limiting_modes(&p2, 1, &rule(Dimension::Two)).unwrap()[0];
        assert_eq!(resonance_expansion_2d(m2, &p2, 0.0).unwrap(), C64::new(m2.omega_j, 0.0));
        for eps in [1e-3, 0.01, 0.3] {
            assert!(resonance_expansion_2d(m2, &p2, eps).unwrap().im <= 0.0);
        }
        assert!(resonance_expansion_2d(m2, &p, 0.1).is_err());
    }

    #[test]
    fn one_d_expansion() {
        let p = PhysicalParams::scaled(Dimension::One, 1.0, 1.0, 1.0, 0.5, 1e-3);
        let a = resonance_expansion_1d(&p, 1e-3).unwrap();
        let b = resonance_expansion_1d(&p, 1e-6).unwrap();
        assert_eq!(a.re, b.re);
        assert!((a.re - (1.0 - 1.0 / PI)).abs() < 1e-15);
        assert!(a.im < 0.0 && b.im < 0.0);
        let strong = PhysicalParams::scaled(Dimension::One, 1.0, 1.0, 1.0, 2.0, 1e-3);
        assert!(resonance_expansion_1d(&strong, 1e-3).is_err());
        assert!(resonance_expansion_1d(&p, 1.5).is_err());
    }

    #[test]
    fn sphere_approximation_values() {
        let p = params3(0.1);
        assert!((sphere_alpha(&p) - 2.0 / PI).abs() < 1e-15);
        let at_alpha = PhysicalParams::scaled(Dimension::Three, 1.0, 1.0, 2.0 / PI, 1.0, 0.1);
        let z = sphere_lowest_mode_approx(&at_alpha, 0.1).unwrap();
        assert!(z.im.abs() < 1e-15 && z.re.abs() < 1e-15);
    }

    #[test]
    fn exponent_values() {
        // g²s₀|B₁| = π/2 and π/4 with Ω = c = 1.
        let p = PhysicalParams::scaled(Dimension::One, 1.0, 1.0, 1.0, PI / 4.0, 1e-2);
        assert!((bound_state_exponent_1d(&p).unwrap() - 1.0).abs() < 1e-14);
        let p = PhysicalParams::scaled(Dimension::One, 1.0, 1.0, 1.0, PI / 8.0, 1e-2);
        assert!((bound_state_exponent_1d(&p).unwrap() - 3.0).abs() < 1e-14);
        let p = PhysicalParams::scaled(Dimension::One, 1.0, 1.0, 1.0, 2.0, 1e-2);
        assert!(bound_state_exponent_1d(&p).is_err());
    }
}
