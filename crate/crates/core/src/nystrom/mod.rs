//! Nyström discretization of the inclusion operator on radial functions.
//!
//! Unknowns are samples of φ on the unit domain `B₁`; a domain of radius `a`
//! is handled by scaling the kernel, never the nodes.
//!
//! | d | unknowns                     | base rule                         |
//! |---|------------------------------|-----------------------------------|
//! | 1 | even φ at the `N` positive GL nodes of `[-1, 1]` (or all `2N`) | `2N`-point GL with log/abs product weights |
//! | 2 | φ at `N` GL radii on `[0, 1]`  | `N`-point GL with log/abs product weights, `M`-point angular trapezoid |
//! | 3 | φ at the `N` positive nodes; internally `u = rφ`, odd | as d = 1 |
//!
//! Weak singularities are integrated by product rules rather than by
//! subtracting `A₀`: every kernel is split into `log|x-y|`, `|x-y|` and
//! smooth factors (see [`kernel`]), which keeps spectral accuracy for the
//! smooth parts. The discrete operators are not exactly symmetric under the
//! volume-weight similarity; [`RadialOperator::symmetrized`] averages the two
//! triangles when a symmetric matrix is needed.

mod kernel;
mod quadrature;

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use kernel::{reduced_kernel, Kernel};
use quadrature::ProductRule;

use crate::greens::WaveNumber;
use crate::{Dimension, Error, PhysicalParams, Result, C64};

/// Default radial node count.
pub const DEFAULT_RADIAL_NODES: usize = 64;
/// Smallest radial node count accepted.
pub const MIN_RADIAL_NODES: usize = 8;
/// Default ratio of angular to radial nodes in 2D.
pub const ANGULAR_PER_RADIAL: usize = 4;

/// Where the unknowns live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    /// Radially symmetric functions (even functions in 1D).
    Radial,
    /// All functions on the 1D interval, both parities.
    Interval,
}

/// Nodes, volume weights and the product rules behind them.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    dim: Dimension,
    layout: Layout,
    radial: usize,
    angular: usize,
    base: Arc<ProductRule>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Radial rule with `radial` GL nodes and, in 2D, `angular` trapezoid nodes.
    pub fn new(dim: Dimension, radial: usize, angular: usize) -> Result<Self> {
        if radial < MIN_RADIAL_NODES {
            return Err(Error::Invalid(format!("need at least {MIN_RADIAL_NODES} radial nodes, got {radial}")));
        }
        if dim == Dimension::Two && (angular < 2 || !angular.is_multiple_of(2)) {
            return Err(Error::Invalid(format!("angular node count must be even and ≥ 2, got {angular}")));
        }
        let (base, nodes, weights) = match dim {
            Dimension::Two => {
                let base = ProductRule::with_kink(radial);
                let nodes: Vec<f64> = base.nodes.iter().map(|&x| 0.5 * (1.0 + x)).collect();
                let weights = nodes.iter().zip(&base.weights).map(|(&r, &w)| std::f64::consts::PI * r * w).collect();
                (base, nodes, weights)
            }
            _ => {
                let base = ProductRule::new(2 * radial);
                let pos = &base.nodes[radial..];
                let pw = &base.weights[radial..];
                let weights: Vec<f64> = if dim == Dimension::One {
                    pw.iter().map(|&w| 2.0 * w).collect()
                } else {
                    pos.iter().zip(pw).map(|(&t, &w)| 4.0 * std::f64::consts::PI * t * t * w).collect()
                };
                let nodes = pos.to_vec();
                (base, nodes, weights)
            }
        };
        Ok(Self { dim, layout: Layout::Radial, radial, angular, base: Arc::new(base), nodes, weights })
    }

    /// Defaults: 64 radial nodes, 4× as many angular nodes.
    pub fn with_defaults(dim: Dimension) -> Self {
        Self::new(dim, DEFAULT_RADIAL_NODES, ANGULAR_PER_RADIAL * DEFAULT_RADIAL_NODES)
            .expect("default rule is valid")
    }

    /// `radial` radial nodes with the default angular ratio.
    pub fn with_radial(dim: Dimension, radial: usize) -> Result<Self> {
        Self::new(dim, radial, ANGULAR_PER_RADIAL * radial)
    }

    /// 1D rule on all `2·half` nodes of `[-1, 1]`.
    pub fn interval(half: usize) -> Result<Self> {
        let mut rule = Self::new(Dimension::One, half, 0)?;
        rule.layout = Layout::Interval;
        rule.nodes = rule.base.nodes.clone();
        rule.weights = rule.base.weights.clone();
        Ok(rule)
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn radial_nodes(&self) -> usize {
        self.radial
    }

    pub fn angular_nodes(&self) -> usize {
        self.angular
    }

    /// Unknown locations on the unit domain (radii, or `t ∈ [-1, 1]`).
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Volume weights; `Σ w_j f(x_j) ≈ ∫_{B₁} f` for radial `f`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_{B₁} ψ` for samples `ψ`.
    pub fn integrate(&self, v: &[C64]) -> C64 {
        v.iter().zip(&self.weights).map(|(x, &w)| x * w).sum()
    }

    /// `‖ψ‖_{L²(B₁)}`.
    pub fn weighted_norm(&self, v: &[C64]) -> f64 {
        v.iter().zip(&self.weights).map(|(x, &w)| x.norm_sqr() * w).sum::<f64>().sqrt()
    }
}

/// Which operator a [`RadialOperator`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    /// `𝒢^ω_ε = -(ω-Ω) - (g²ρ₀/c)∫_{B_ε} G^{ω/c}`.
    Full,
    /// `𝒜₀^ω` (2D/3D) or its 1D rank-one analogue.
    Limiting,
    /// `L₀`, the kernel part of `𝒜₀`.
    KernelOnly,
    /// Birman–Schwinger operator `K_ω[ρ]`.
    BirmanSchwinger,
    /// `𝒜₁^ω`, the first-order correction of the rescaled operator.
    FirstOrder,
}

/// Dense matrix of an operator on the nodes of a [`QuadratureRule`].
#[derive(Debug, Clone)]
pub struct RadialOperator {
    pub matrix: DMatrix<C64>,
    pub rule: QuadratureRule,
    pub omega: C64,
    pub params: PhysicalParams,
    pub kind: OperatorKind,
}

impl RadialOperator {
    pub fn len(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.nrows() == 0
    }

    /// `½(S + Sᵀ)` with `S = D^{½} M D^{-½}` and `D` the volume weights.
    pub fn symmetrized(&self) -> DMatrix<C64> {
        let s = self.weight_similarity();
        (&s + s.transpose()) * C64::new(0.5, 0.0)
    }

    /// `‖S - Sᵀ‖_F / ‖S‖_F` for the weight-similar matrix.
    pub fn asymmetry(&self) -> f64 {
        let s = self.weight_similarity();
        (&s - s.transpose()).norm() / s.norm()
    }

    fn weight_similarity(&self) -> DMatrix<C64> {
        let w = self.rule.weights();
        DMatrix::from_fn(self.len(), self.len(), |i, j| self.matrix[(i, j)] * (w[i] / w[j]).sqrt())
    }
}

/// Matrix of `φ ↦ ∫_{B_a} K(x - y) φ(y) dy` sampled at `a·x_i`, with `x_i`
/// the rule's nodes.
pub fn integral_matrix(rule: &QuadratureRule, kernel: Kernel, a: f64) -> Result<DMatrix<C64>> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Invalid(format!("domain radius must be positive, got {a}")));
    }
    let m = match rule.dim {
        Dimension::Two => disk_matrix(rule, kernel, a)?,
        _ => interval_matrix(rule, kernel, a)?,
    };
    for ((i, j), v) in m.iter().enumerate().map(|(n, v)| ((n % m.nrows(), n / m.nrows()), v)) {
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite(format!(
                "kernel entry ({i}, {j}) between nodes {} and {}",
                rule.nodes[i], rule.nodes[j]
            )));
        }
    }
    Ok(m)
}

fn interval_matrix(rule: &QuadratureRule, kernel: Kernel, a: f64) -> Result<DMatrix<C64>> {
    let base = &rule.base;
    let t = &base.nodes;
    // Full-interval entry for base indices (ib, jb).
    let entry = |ib: usize, jb: usize| -> Result<C64> {
        let s = (t[ib] - t[jb]).abs();
        let (ca, cc, cd) = kernel::split_1d(rule.dim, kernel, a, s)?;
        Ok(a * (base.log_w[(ib, jb)] * ca + base.abs_w[(ib, jb)] * cc + base.weights[jb] * cd))
    };
    match rule.layout {
        Layout::Interval => {
            let n = base.len();
            let mut m = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] = entry(i, j)?;
                }
            }
            Ok(m)
        }
        Layout::Radial => {
            let n = rule.radial;
            let mut m = DMatrix::zeros(n, n);
            for i in 0..n {
                let ib = n + i;
                for j in 0..n {
                    let jb = n + j;
                    let direct = entry(ib, jb)?;
                    let mirrored = entry(ib, base.mirror(jb))?;
                    m[(i, j)] = if rule.dim == Dimension::One {
                        direct + mirrored
                    } else {
                        (direct - mirrored) * (t[jb] / t[ib])
                    };
                }
            }
            Ok(m)
        }
    }
}

fn disk_matrix(rule: &QuadratureRule, kernel: Kernel, a: f64) -> Result<DMatrix<C64>> {
    let base = &rule.base;
    let parts = kernel::angular_2d(kernel, a)?;
    let n = rule.radial;
    let r = &rule.nodes;
    let ln2 = std::f64::consts::LN_2;
    let kink_w = base.kink_w.as_ref().expect("2D rules carry kink weights");
    let mut regular = DMatrix::<C64>::zeros(n, n);
    if let Some(k) = parts.regular {
        for i in 0..n {
            for j in i..n {
                let v = kernel::regular_angular_2d(k, a, r[i], r[j], rule.angular)? * (a * a);
                regular[(i, j)] = v;
                regular[(j, i)] = v;
            }
        }
    }
    // ∫_0^1 F dr' = ½ ∫_{-1}^1 F dt', with r - r' = (t - t')/2.
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (rj, wj) = (r[j], base.weights[j]);
            let (alpha, beta) = kernel::leading_log_split(r[i], rj);
            let lead = base.log_w[(i, j)] * rj * alpha + wj * rj * (beta - alpha * ln2);
            // log max(r, r') = log r + max(0, log(r'/r)), and r'/r = (1+t')/(1+t).
            let kink = wj * rj * r[i].ln() + kink_w[(i, j)] * rj;
            let smooth = wj * rj * (parts.c_0 + regular[(i, j)]);
            m[(i, j)] = 0.5 * (parts.c_a * lead + parts.c_l * kink + smooth);
        }
    }
    Ok(m)
}

fn check(params: &PhysicalParams, rule: &QuadratureRule) -> Result<()> {
    params.validate()?;
    if rule.dim != params.dim {
        return Err(Error::Invalid(format!(
            "rule is for d = {} but params are for d = {}",
            rule.dim.as_usize(),
            params.dim.as_usize()
        )));
    }
    if rule.layout != Layout::Radial {
        return Err(Error::Invalid("inclusion operators need a radial rule".into()));
    }
    Ok(())
}

fn shifted(kernel: DMatrix<C64>, omega: C64, omega_atom: f64, scale: f64) -> DMatrix<C64> {
    let n = kernel.nrows();
    let mut m = kernel * C64::new(-scale, 0.0);
    for i in 0..n {
        m[(i, i)] -= omega - omega_atom;
    }
    m
}

/// `𝒢^ω_ε = -(ω-Ω)I - (g²ρ₀/c) W`, the discretized inclusion operator.
pub fn build_full_operator(params: &PhysicalParams, omega: C64, rule: &QuadratureRule) -> Result<RadialOperator> {
    check(params, rule)?;
    let k = WaveNumber::from_frequency(omega, params.c)?;
    let w = integral_matrix(rule, Kernel::Green(k), params.epsilon)?;
    let scale = params.g * params.g * params.rho0() / params.c;
    Ok(RadialOperator {
        matrix: shifted(w, omega, params.omega_atom, scale),
        rule: rule.clone(),
        omega,
        params: *params,
        kind: OperatorKind::Full,
    })
}

/// `L₀ = (g²s₀/c)∫_{B₁} A₀(x - y) · dy` for d = 2, 3. `omega` is stored as 0.
pub fn build_kernel_only(params: &PhysicalParams, rule: &QuadratureRule) -> Result<RadialOperator> {
    check(params, rule)?;
    if params.dim == Dimension::One {
        return Err(Error::Invalid("L₀ is defined for d = 2, 3; use build_rank1_limit_1d".into()));
    }
    let w = integral_matrix(rule, Kernel::Leading, 1.0)?;
    let scale = params.g * params.g * params.s0() / params.c;
    Ok(RadialOperator {
        matrix: w * C64::new(scale, 0.0),
        rule: rule.clone(),
        omega: C64::new(0.0, 0.0),
        params: *params,
        kind: OperatorKind::KernelOnly,
    })
}

/// `𝒜₀^ω = -(ω-Ω)I - L₀` for d = 2, 3.
pub fn build_limiting_operator(params: &PhysicalParams, omega: C64, rule: &QuadratureRule) -> Result<RadialOperator> {
    let l0 = build_kernel_only(params, rule)?;
    Ok(RadialOperator {
        matrix: shifted(l0.matrix, omega, params.omega_atom, 1.0),
        omega,
        kind: OperatorKind::Limiting,
        ..l0
    })
}

/// 1D limit `-(ω-Ω)φ - (g²s₀/(πc))∫_{B₁} φ`, a rank-one perturbation of a
/// multiple of the identity.
pub fn build_rank1_limit_1d(params: &PhysicalParams, omega: C64, rule: &QuadratureRule) -> Result<RadialOperator> {
    check(params, rule)?;
    if params.dim != Dimension::One {
        return Err(Error::Invalid("the rank-one limit is 1D only".into()));
    }
    let w = integral_matrix(rule, Kernel::Constant, 1.0)?;
    let scale = params.g * params.g * params.s0() / (std::f64::consts::PI * params.c);
    Ok(RadialOperator {
        matrix: shifted(w, omega, params.omega_atom, scale),
        rule: rule.clone(),
        omega,
        params: *params,
        kind: OperatorKind::Limiting,
    })
}

/// `𝒜₁^ω = -(g²s₀/c)∫_{B₁} A₁^{ω/c}(x - y) · dy` for d = 2, 3.
pub fn build_first_order(params: &PhysicalParams, omega: C64, rule: &QuadratureRule) -> Result<RadialOperator> {
    check(params, rule)?;
    let k = WaveNumber::from_frequency(omega, params.c)?;
    let w = integral_matrix(rule, Kernel::FirstOrder(k), 1.0)?;
    let scale = params.g * params.g * params.s0() / params.c;
    Ok(RadialOperator {
        matrix: w * C64::new(-scale, 0.0),
        rule: rule.clone(),
        omega,
        params: *params,
        kind: OperatorKind::FirstOrder,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greens;
    use crate::testutil::graded;
    use std::f64::consts::PI;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn weights_sum_to_volume() {
        for d in [Dimension::One, Dimension::Two, Dimension::Three] {
            let rule = QuadratureRule::with_radial(d, 16).unwrap();
            let total: f64 = rule.weights().iter().sum();
            let want = d.unit_ball_volume();
            assert!(((total - want) / want).abs() < 1e-12);
            assert!(rule.weights().iter().all(|&w| w > 0.0));
        }
        assert!(QuadratureRule::new(Dimension::Three, 4, 16).is_err());
        assert!(QuadratureRule::new(Dimension::Two, 16, 7).is_err());
    }

    /// Applies the matrix to `f` and compares with a direct radial/angular
    /// quadrature of `∫_{B_a} G(x-y) f(|y|) dy` at one node.
    fn apply_row(rule: &QuadratureRule, m: &DMatrix<C64>, f: impl Fn(f64) -> f64, i: usize) -> C64 {
        (0..rule.len()).map(|j| m[(i, j)] * f(rule.nodes()[j])).sum()
    }

    /// `∫_0^a F(r') dr'` for `F` log-singular at `r' = x`, in the distance variable.
    fn around(f: impl Fn(f64) -> f64, x: f64, a: f64) -> f64 {
        let g = |rp: f64| if (rp - x).abs() < 1e-12 { 0.0 } else { f(rp) };
        graded(|u| g(x - u), x) + graded(|u| g(x + u), a - x)
    }

    #[test]
    fn three_d_matrix_matches_shell_quadrature() {
        let rule = QuadratureRule::with_radial(Dimension::Three, 24).unwrap();
        let k = WaveNumber::outgoing(C64::new(1.2, -0.1)).unwrap();
        let a = 0.7;
        let m = integral_matrix(&rule, Kernel::Green(k), a).unwrap();
        let f = |r: f64| (1.1 * r).cos() + r * r;
        let i = 9;
        let x = a * rule.nodes()[i];
        // ∫_0^a r'² f(r'/a) ∮G dσ dr'.
        let g = |rp: f64| reduced_kernel(Dimension::Three, k, x, rp, 0).unwrap() * rp * rp * f(rp / a);
        let re = around(|rp| g(rp).re, x, a);
        let im = around(|rp| g(rp).im, x, a);
        let got = apply_row(&rule, &m, f, i);
        assert!((got - C64::new(re, im)).norm() < 1e-10 * got.norm(), "{got} vs {re} {im}");
    }

    #[test]
    fn one_d_matrix_matches_interval_quadrature() {
        let rule = QuadratureRule::with_radial(Dimension::One, 20).unwrap();
        let k = WaveNumber::negative(c(-2.0)).unwrap();
        let a = 0.3;
        let m = integral_matrix(&rule, Kernel::Green(k), a).unwrap();
        let f = |t: f64| (2.0 * t).cos();
        let i = 4;
        let x = a * rule.nodes()[i];
        let g = |u: f64| if u < 1e-12 { 0.0 } else { greens::green(Dimension::One, k, u).unwrap().re };
        let want = graded(|u| g(u) * f((x - u) / a), x + a) + graded(|u| g(u) * f((x + u) / a), a - x);
        let got = apply_row(&rule, &m, f, i);
        assert!((got.re - want).abs() < 1e-10 * want.abs(), "{got} vs {want}");
    }

    /// `∫_{B_a} G(x - y) f(|y|/a) dy` at `|x| = x`, in polar coordinates about
    /// `x`: `ρG(ρ)` is bounded and the θ-integrand is smooth and periodic.
    fn disk_oracle(k: WaveNumber, f: impl Fn(f64) -> f64, x: f64, a: f64) -> C64 {
        let nq = 96;
        let mut acc = C64::new(0.0, 0.0);
        for q in 0..nq {
            let th = 2.0 * PI * q as f64 / nq as f64;
            let rho_max = -x * th.cos() + (a * a - (x * th.sin()).powi(2)).sqrt();
            let g = |rho: f64| {
                if rho < 1e-12 {
                    return C64::new(0.0, 0.0);
                }
                let y = ((x + rho * th.cos()).powi(2) + (rho * th.sin()).powi(2)).sqrt();
                greens::green(Dimension::Two, k, rho).unwrap() * rho * f(y / a)
            };
            acc += C64::new(graded(|r| g(r).re, rho_max), graded(|r| g(r).im, rho_max));
        }
        acc * (2.0 * PI / nq as f64)
    }

    #[test]
    fn two_d_matrix_converges_to_disk_quadrature() {
        // The reduced 2D kernel is singular at the reflected radius r' = -r,
        // so convergence is algebraic (about N⁻³ away from the origin).
        let k = WaveNumber::outgoing(C64::new(1.0, -0.2)).unwrap();
        let a = 0.5;
        let f = |r: f64| 1.0 - 0.5 * r * r;
        let errs: Vec<f64> = [32, 64]
            .iter()
            .map(|&n| {
                let rule = QuadratureRule::with_radial(Dimension::Two, n).unwrap();
                let m = integral_matrix(&rule, Kernel::Green(k), a).unwrap();
                let i = n / 3;
                let want = disk_oracle(k, f, a * rule.nodes()[i], a);
                (apply_row(&rule, &m, f, i) - want).norm() / want.norm()
            })
            .collect();
        assert!(errs[1] < 5e-8, "{errs:?}");
        assert!(errs[0] / errs[1] > 5.0, "{errs:?}");
    }

    #[test]
    fn real_frequency_below_zero_gives_real_matrix() {
        for d in [Dimension::One, Dimension::Two, Dimension::Three] {
            let p = PhysicalParams::scaled(d, 1.0, 1.0, 1.0, 1.0, 0.1);
            let rule = QuadratureRule::with_radial(d, 12).unwrap();
            let op = build_full_operator(&p, c(-0.7), &rule).unwrap();
            assert!(op.matrix.iter().all(|v| v.im.abs() <= 1e-12));
            let conj = build_full_operator(&p, C64::new(0.6, 0.2), &rule).unwrap();
            let base = build_full_operator(&p, C64::new(0.6, -0.2), &rule).unwrap();
            // Outgoing at ω̄ is the conjugate of incoming at ω, not of outgoing.
            assert!((conj.matrix.clone() - base.matrix.map(|v| v.conj())).norm() > 1e-6);
        }
    }

    #[test]
    fn rank_one_limit_structure() {
        let p = PhysicalParams::scaled(Dimension::One, 1.0, 1.0, 1.0, 0.5, 0.01);
        let rule = QuadratureRule::with_radial(Dimension::One, 16).unwrap();
        let omega = c(0.3);
        let op = build_rank1_limit_1d(&p, omega, &rule).unwrap();
        let n = rule.len();
        let alpha = 1.0 * 0.5 / PI;
        // Constant vector: eigenvalue -(ω-Ω) - α|B₁|.
        let ones = vec![c(1.0); n];
        let mv: Vec<C64> = (0..n).map(|i| (0..n).map(|j| op.matrix[(i, j)] * ones[j]).sum()).collect();
        let lam = c(-(0.3 - 1.0) - alpha * 2.0);
        assert!(mv.iter().all(|v| (v - lam).norm() < 1e-13));
        // Zero-mean vectors see only the shift.
        let w = rule.weights();
        let mut z: Vec<C64> = (0..n).map(|j| c((j as f64).sin())).collect();
        let mean = rule.integrate(&z) / 2.0;
        z.iter_mut().for_each(|v| *v -= mean);
        for i in 0..n {
            let row: C64 = (0..n).map(|j| op.matrix[(i, j)] * z[j]).sum();
            assert!((row - c(0.7) * z[i]).norm() < 1e-13);
        }
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn full_operator_tends_to_limit_linearly_in_3d() {
        let rule = QuadratureRule::with_radial(Dimension::Three, 16).unwrap();
        let omega = c(0.5);
        let mut diffs = Vec::new();
        for eps in [1e-2, 5e-3, 2.5e-3] {
            let p = PhysicalParams::scaled(Dimension::Three, 1.0, 1.0, 1.0, 1.0, eps);
            let full = build_full_operator(&p, omega, &rule).unwrap();
            let lim = build_limiting_operator(&p, omega, &rule).unwrap();
            diffs.push((full.matrix - lim.matrix).norm());
        }
        let order = (diffs[0] / diffs[2]).ln() / 4f64.ln();
        assert!((order - 1.0).abs() < 0.05, "order {order}");
    }

    #[test]
    fn kernel_only_is_nearly_symmetric() {
        for d in [Dimension::Two, Dimension::Three] {
            let p = PhysicalParams::scaled(d, 1.0, 1.0, 1.0, 1.0, 0.1);
            let rule = QuadratureRule::with_radial(d, 32).unwrap();
            let l0 = build_kernel_only(&p, &rule).unwrap();
            assert!(l0.asymmetry() < 1e-2, "d={} asym {}", d.as_usize(), l0.asymmetry());
        }
    }
}
