//! Green's functions of `(-Δ)^{1/2} - k` in one, two and three dimensions.
//!
//! Every branch is a closed form in `s = |x|`:
//!
//! - 1D: `(1/2π)[e^{iks}E₁(iks) + e^{-iks}E₁(-iks)]`, plus `i e^{iks}` (outgoing)
//!   or `-i e^{-iks}` (incoming).
//! - 2D: `1/(2πs) - (k/4)𝐊₀(ks) + (ik/2)H₀⁽¹⁾(ks)` (outgoing),
//!   `... - (ik/2)H₀⁽²⁾(ks)` (incoming), `1/(2πs) + (k/4)𝐊₀(-ks)` (negative).
//! - 3D: `1/(2π²s²) - (ik/4π²s)[e^{iks}E₁(iks) - e^{-iks}E₁(-iks)]`, plus
//!   `k e^{iks}/(2πs)` (outgoing) or `k e^{-iks}/(2πs)` (incoming).
//!
//! The E₁ combinations are even in `k`, so the negative branch is the bare
//! combination. The outgoing formula is used for every `Re k > 0`, which is
//! the analytic continuation from `Im k > 0` into the lower half-plane where
//! resonances live.
//!
//! The radial derivative of the 1D function is `-2πs` times the 3D one for
//! each branch; [`green_1d_split`] exposes the 1D function as
//! `A(s) log s + C(s) s + D(s)` with `A`, `C`, `D` entire in `s`, which is the
//! form the Nyström product rules integrate.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::specfun::{self, HankelKind};
use crate::{Dimension, Error, Result, C64, EULER_GAMMA};

/// Smallest radius accepted by the pointwise evaluators.
pub const MIN_RADIUS: f64 = 1e-12;

/// Which Green's function of `(-Δ)^{1/2} - k` is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Radiating solution, `Re k > 0`.
    Outgoing,
    /// Incoming solution, `Re k > 0`.
    Incoming,
    /// Resolvent kernel for `Re k < 0`.
    Negative,
    /// `k = 0`.
    Zero,
}

/// Spectral argument `k = ω/c` with its branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveNumber {
    k: C64,
    branch: Branch,
}

impl WaveNumber {
    pub fn new(k: C64, branch: Branch) -> Result<Self> {
        if !(k.re.is_finite() && k.im.is_finite()) {
            return Err(Error::Domain(format!("wave number {k} is not finite")));
        }
        let ok = match branch {
            Branch::Zero => k.re == 0.0 && k.im == 0.0,
            Branch::Outgoing | Branch::Incoming => k.re > 0.0,
            Branch::Negative => k.re < 0.0,
        };
        if !ok {
            return Err(Error::Domain(format!(
                "wave number {k} is incompatible with the {branch:?} branch"
            )));
        }
        Ok(Self { k, branch })
    }

    pub fn outgoing(k: C64) -> Result<Self> {
        Self::new(k, Branch::Outgoing)
    }

    pub fn incoming(k: C64) -> Result<Self> {
        Self::new(k, Branch::Incoming)
    }

    pub fn negative(k: C64) -> Result<Self> {
        Self::new(k, Branch::Negative)
    }

    pub fn zero() -> Self {
        Self { k: C64::new(0.0, 0.0), branch: Branch::Zero }
    }

    /// `k = ω/c` on the physical sheet: outgoing for `Re ω > 0`, negative for
    /// `Re ω < 0`. Purely imaginary nonzero `ω` is rejected.
    pub fn from_frequency(omega: C64, c: f64) -> Result<Self> {
        let k = omega / c;
        if k.re > 0.0 {
            Self::outgoing(k)
        } else if k.re < 0.0 {
            Self::negative(k)
        } else if k.im == 0.0 {
            Ok(Self::zero())
        } else {
            Err(Error::Domain(format!("k = {k} lies on the imaginary axis")))
        }
    }

    pub fn k(&self) -> C64 {
        self.k
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// `κ`, the representative of `±k` with `Re κ ≥ 0`.
    pub fn kappa(&self) -> C64 {
        match self.branch {
            Branch::Negative => -self.k,
            _ => self.k,
        }
    }

    /// Coefficient of the oscillating Helmholtz part: `+1`, `-1` or `0`.
    fn helmholtz_sign(&self) -> f64 {
        match self.branch {
            Branch::Outgoing => 1.0,
            Branch::Incoming => -1.0,
            Branch::Negative | Branch::Zero => 0.0,
        }
    }
}

/// `c_d = Γ((d+1)/2)/π^{(d+1)/2}`, the constant of the real-space representation
/// and of the fractional heat kernel.
pub fn c_d(d: Dimension) -> f64 {
    match d {
        Dimension::One => 1.0 / PI,
        Dimension::Two => 1.0 / (2.0 * PI),
        Dimension::Three => 1.0 / (PI * PI),
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_finite() && r >= MIN_RADIUS {
        Ok(())
    } else {
        Err(Error::Domain(format!("radius must be finite and ≥ {MIN_RADIUS:e}, got {r}")))
    }
}

/// `e^{w}E₁(w) + e^{-w}E₁(-w)` and `e^{w}E₁(w) - e^{-w}E₁(-w)` at `w = iks`.
fn e1_pair(w: C64) -> Result<(C64, C64)> {
    let a = w.exp() * specfun::exp_integral_e1(w)?;
    let b = (-w).exp() * specfun::exp_integral_e1(-w)?;
    Ok((a + b, a - b))
}

/// Green's function `G^k(r)` of the requested branch.
pub fn green(d: Dimension, k: WaveNumber, r: f64) -> Result<C64> {
    check_radius(r)?;
    let kk = k.k;
    let i = C64::i();
    let sigma = k.helmholtz_sign();
    let value = match (d, k.branch) {
        (Dimension::One, Branch::Zero) => C64::new(-(r.ln() + EULER_GAMMA) / PI, 0.0),
        (Dimension::Two, Branch::Zero) => C64::new(1.0 / (2.0 * PI * r), 0.0),
        (Dimension::Three, Branch::Zero) => C64::new(1.0 / (2.0 * PI * PI * r * r), 0.0),
        (Dimension::One, _) => {
            let (even, _) = e1_pair(i * kk * r)?;
            let osc = match k.branch {
                Branch::Outgoing => i * (i * kk * r).exp(),
                Branch::Incoming => -i * (-i * kk * r).exp(),
                _ => C64::new(0.0, 0.0),
            };
            even / (2.0 * PI) + osc
        }
        (Dimension::Two, Branch::Negative) => {
            1.0 / (2.0 * PI * r) + kk / 4.0 * specfun::struve_k0(-kk * r)?
        }
        (Dimension::Two, _) => {
            let z = kk * r;
            let h = match k.branch {
                Branch::Outgoing => specfun::hankel0(z, HankelKind::First)?,
                _ => specfun::hankel0(z, HankelKind::Second)?,
            };
            1.0 / (2.0 * PI * r) - kk / 4.0 * specfun::struve_k0(z)? + sigma * i * kk / 2.0 * h
        }
        (Dimension::Three, _) => {
            let (_, odd) = e1_pair(i * kk * r)?;
            let base = 1.0 / (2.0 * PI * PI * r * r) - i * kk / (4.0 * PI * PI * r) * odd;
            let osc = match k.branch {
                Branch::Outgoing => kk * (i * kk * r).exp() / (2.0 * PI * r),
                Branch::Incoming => kk * (-i * kk * r).exp() / (2.0 * PI * r),
                _ => C64::new(0.0, 0.0),
            };
            base + osc
        }
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite(format!("G at d={}, k={kk}, r={r}", d.as_usize())))
    }
}

/// Sign of the exponent in the Helmholtz Green's function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HelmholtzSign {
    /// `e^{+ik|x|}`.
    Plus,
    /// `e^{-ik|x|}`.
    Minus,
}

/// Helmholtz Green's function with `G^k = G^{-k} + 2k G_helm` for `Re k > 0`:
/// `±(i/2k)e^{±iks}` in 1D, `±(i/4)H₀^{(1|2)}(ks)` in 2D, `e^{±iks}/(4πs)` in 3D.
pub fn green_helmholtz(d: Dimension, k: C64, r: f64, sign: HelmholtzSign) -> Result<C64> {
    check_radius(r)?;
    if !(k.re > 0.0) {
        return Err(Error::Domain(format!("Helmholtz kernel needs Re k > 0, got {k}")));
    }
    let i = C64::i();
    let (s, kind) = match sign {
        HelmholtzSign::Plus => (1.0, HankelKind::First),
        HelmholtzSign::Minus => (-1.0, HankelKind::Second),
    };
    Ok(match d {
        Dimension::One => s * i / (2.0 * k) * (s * i * k * r).exp(),
        Dimension::Two => s * i / 4.0 * specfun::hankel0(k * r, kind)?,
        Dimension::Three => (s * i * k * r).exp() / (4.0 * PI * r),
    })
}

/// 1D Green's function split as `A(s) log s + C(s) s + D(s)` with entire parts.
///
/// Returns `(A, C, D)`. `A = -(1/π)cos(ks)` and `C = -sin(ks)/(2s)` are even
/// in `s`; `D` carries `log κ`, the entire function `Q(κs)` and the branch's
/// `±i cos(ks)` term. Valid for `s ≥ 0`, including `s = 0`.
pub fn green_1d_split(k: WaveNumber, s: f64) -> (C64, C64, C64) {
    let kk = k.k;
    if k.branch == Branch::Zero {
        return (C64::new(-1.0 / PI, 0.0), C64::new(0.0, 0.0), C64::new(-EULER_GAMMA / PI, 0.0));
    }
    let kappa = k.kappa();
    let z = kappa * s;
    let cosz = z.cos();
    let a = -cosz / PI;
    // C is odd in k, so it uses k rather than κ.
    let zk = kk * s;
    let c = if zk.norm() < 1e-4 {
        // -sin(ks)/(2s) = -(k/2)(1 - (ks)²/6 + (ks)⁴/120).
        let z2 = zk * zk;
        -kk / 2.0 * (1.0 - z2 / 6.0 + z2 * z2 / 120.0)
    } else {
        -zk.sin() / (2.0 * s)
    };
    let sigma = k.helmholtz_sign();
    let d = -cosz * (kappa.ln() + EULER_GAMMA) / PI + q_entire(z) / (2.0 * PI) + sigma * C64::i() * cosz;
    (a, c, d)
}

/// Radius below which `Q` is summed from the Ein series.
const Q_SERIES_RADIUS: f64 = 4.0;

/// `Q(z) = e^{iz}Ein(iz) + e^{-iz}Ein(-iz)`, entire and even.
///
/// For `|z| > 4` it is recovered from E₁ through
/// `Q = h + 2cos z (log z + γ) - π sin z` with `h = e^{iz}E₁(iz) + e^{-iz}E₁(-iz)`,
/// valid for `Re z > 0`.
pub fn q_entire(z: C64) -> C64 {
    let i = C64::i();
    let w = i * z;
    if z.re < 0.0 {
        return q_entire(-z);
    }
    if z.norm() <= Q_SERIES_RADIUS || z.re == 0.0 {
        return w.exp() * specfun::ein(w) + (-w).exp() * specfun::ein(-w);
    }
    let h = w.exp() * specfun::exp_integral_e1(w).expect("Re z > 0 keeps iz off the cut")
        + (-w).exp() * specfun::exp_integral_e1(-w).expect("Re z > 0 keeps -iz off the cut");
    h + 2.0 * z.cos() * (z.ln() + EULER_GAMMA) - PI * z.sin()
}

/// Regular remainder of the 2D kernel: `G₂ - 1/(2πs) + (k/2π) log s`, with
/// the removable singularity at `s = 0` evaluated in the limit.
pub fn green_2d_regular(k: WaveNumber, s: f64) -> Result<C64> {
    let kk = k.k;
    if k.branch == Branch::Zero {
        return Ok(C64::new(0.0, 0.0));
    }
    let kappa = k.kappa();
    let z = kappa * s;
    // G₂ = 1/(2πs) - (κ/4)𝐇₀(z) + σ_Y(κ/4)Y₀(z) + σ_J(iκ/2)J₀(z), σ_Y κ = -k.
    let sigma_j = k.helmholtz_sign();
    let h0 = specfun::struve_h0(z);
    // Y₀(z) = (2/π)(log(κ/2) + γ + log s)J₀ + Ŷ; Ŷ(0) = 0.
    let (j0, yhat) = if s == 0.0 {
        (C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    } else {
        specfun::bessel_y0_split(z)?
    };
    let log_half_kappa = (kappa * 0.5).ln() + EULER_GAMMA;
    // The J₀ = 1 part of the log s term cancels against +(k/2π) log s.
    let log_s = if s == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        specfun::bessel_j0_minus_one(z) * s.ln()
    };
    let y_part = -kk / 4.0 * (2.0 / PI * (log_half_kappa * j0 + log_s) + yhat);
    Ok(-kappa / 4.0 * h0 + y_part + sigma_j * C64::i() * kappa / 2.0 * j0)
}

/// `∫_{ℝ^d} G^k = -1/k` for real `k < 0`.
pub fn fourier_dc_value(k: f64) -> Result<f64> {
    if k < 0.0 && k.is_finite() {
        Ok(-1.0 / k)
    } else {
        Err(Error::Domain(format!("DC value needs k < 0, got {k}")))
    }
}

/// Poisson kernel `c_d t (t² + r²)^{-(d+1)/2}`, the fundamental solution of
/// `∂_t u + (-Δ)^{1/2} u = 0`.
pub fn fractional_heat_kernel(d: Dimension, t: f64, r: f64) -> Result<f64> {
    if !(t > 0.0) || !(r >= 0.0) {
        return Err(Error::Domain(format!("heat kernel needs t > 0 and r ≥ 0, got t={t}, r={r}")));
    }
    let p = (d.as_usize() + 1) as f64 / 2.0;
    Ok(c_d(d) * t / (t * t + r * r).powf(p))
}

/// `c_d ∫_0^∞ e^{kt} t (t² + r²)^{-(d+1)/2} dt` for real `k < 0`, by composite
/// Gauss–Legendre on geometrically growing panels.
///
/// This is the real-space representation of the negative branch and is
/// independent of the closed forms; it exists to cross-check them.
pub fn green_negk_quadrature_oracle(d: Dimension, k: f64, r: f64) -> Result<f64> {
    if !(k < 0.0) || !(r > 0.0) {
        return Err(Error::Domain(format!("oracle needs k < 0 and r > 0, got k={k}, r={r}")));
    }
    let p = (d.as_usize() + 1) as f64 / 2.0;
    let f = |t: f64| (k * t).exp() * t / (t * t + r * r).powf(p);
    let rule = specfun::gauss_legendre_unit(20);
    // Integrand is analytic with poles at t = ±ir; panel widths stay below the
    // distance to them, and the exponential cuts the range at 50/|k|.
    let end = 50.0 / k.abs();
    let mut a = 0.0;
    let mut total = 0.0;
    let mut panels = 0;
    while a < end {
        let width = (0.5 * r).max(0.5 * a).min(2.0 / k.abs()).max(1e-3 * r);
        let b = (a + width).min(end);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        total += half * rule.iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>();
        a = b;
        panels += 1;
        if panels > 100_000 {
            return Err(Error::NoConvergence("oracle panel count exceeded".into()));
        }
    }
    let v = c_d(d) * total;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(format!("oracle at d={}, k={k}, r={r}", d.as_usize())))
    }
}

/// `|r^{(d-1)/2}(∂_r G - ikG)|` for the outgoing branch at real `k > 0`, with
/// the derivative by central differences.
pub fn farfield_deficit(d: Dimension, k: f64, r: f64) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("far-field deficit needs k > 0, got {k}")));
    }
    let wk = WaveNumber::outgoing(C64::new(k, 0.0))?;
    let h = 1e-3 * r.min(1.0 / k);
    let g = green(d, wk, r)?;
    let dg = (green(d, wk, r + h)? - green(d, wk, r - h)?) / (2.0 * h);
    let m = (dg - C64::i() * k * g).norm();
    Ok(r.powf((d.as_usize() as f64 - 1.0) / 2.0) * m)
}

/// Small-argument expansion `ε^{d-1} G^k(εx) = Σ εⁿ Aₙ(x) + Σ εⁿ log ε Glogₙ(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCoeffs {
    pub dim: Dimension,
    /// `|x|` at which the coefficients were evaluated.
    pub x: f64,
    /// `A₀, A₁, ...`.
    pub regular: Vec<C64>,
    /// `(n, Glogₙ)` pairs.
    pub log: Vec<(usize, C64)>,
}

impl ExpansionCoeffs {
    /// `Σ εⁿ Aₙ + Σ εⁿ log ε Glogₙ` over the stored terms.
    pub fn partial_sum(&self, eps: f64) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for (n, a) in self.regular.iter().enumerate() {
            s += eps.powi(n as i32) * a;
        }
        for &(n, g) in &self.log {
            s += eps.powi(n as i32) * eps.ln() * g;
        }
        s
    }

    /// Power of ε of the first term not stored.
    pub fn next_order(&self) -> usize {
        self.regular.len()
    }
}

/// Leading expansion terms for any branch, derived from the closed forms.
///
/// With `κ = ±k` the branch representative (`Re κ > 0`) and `σ = +1, -1, 0`
/// for outgoing, incoming, negative:
///
/// - 1D: `A₀ = -(1/π)(log(κ|x|) + γ) + σi`, `Glog₀ = -1/π`.
/// - 2D: `A₀ = 1/(2π|x|)`, `A₁ = -(k/2π)(log(κ|x|/2) + γ) + σiκ/2`,
///   `Glog₁ = -k/(2π)`, `A₂ = -k²|x|/(2π)`, `Glog₂ = 0`.
/// - 3D: `A₀ = 1/(2π²|x|²)`, `A₁ = k/(4π|x|)`,
///   `A₂ = (k²/2π²)(1 - γ - log(κ|x|)) + σik²/(2π)`, `Glog₂ = -k²/(2π²)`.
pub fn expansion_terms(d: Dimension, k: WaveNumber, x: f64) -> Result<ExpansionCoeffs> {
    check_radius(x)?;
    let kk = k.k;
    let i = C64::i();
    let sigma = k.helmholtz_sign();
    let zero = C64::new(0.0, 0.0);
    let (regular, log) = if k.branch == Branch::Zero {
        match d {
            Dimension::One => (
                vec![C64::new(-(x.ln() + EULER_GAMMA) / PI, 0.0)],
                vec![(0, C64::new(-1.0 / PI, 0.0))],
            ),
            Dimension::Two => (vec![C64::new(1.0 / (2.0 * PI * x), 0.0), zero, zero], vec![(1, zero), (2, zero)]),
            Dimension::Three => (vec![C64::new(1.0 / (2.0 * PI * PI * x * x), 0.0), zero, zero], vec![(2, zero)]),
        }
    } else {
        let kappa = k.kappa();
        match d {
            Dimension::One => (
                vec![-((kappa * x).ln() + EULER_GAMMA) / PI + sigma * i],
                vec![(0, C64::new(-1.0 / PI, 0.0))],
            ),
            Dimension::Two => (
                vec![
                    C64::new(1.0 / (2.0 * PI * x), 0.0),
                    -kk / (2.0 * PI) * ((kappa * x * 0.5).ln() + EULER_GAMMA) + sigma * i * kappa / 2.0,
                    -kk * kk * x / (2.0 * PI),
                ],
                vec![(1, -kk / (2.0 * PI)), (2, zero)],
            ),
            Dimension::Three => (
                vec![
                    C64::new(1.0 / (2.0 * PI * PI * x * x), 0.0),
                    kk / (4.0 * PI * x),
                    kk * kk / (2.0 * PI * PI) * (1.0 - EULER_GAMMA - (kappa * x).ln())
                        + sigma * i * kk * kk / (2.0 * PI),
                ],
                vec![(2, -kk * kk / (2.0 * PI * PI))],
            ),
        }
    };
    Ok(ExpansionCoeffs { dim: d, x, regular, log })
}

/// The outgoing-branch coefficients in the form commonly quoted for this
/// problem: 3D `A₁ = k/(2π|x|)`, 2D `A₁ = -(k/2π)(log(k|x|) + γ) + ik/2`,
/// 2D `A₂ = -k/π`, others as in [`expansion_terms`].
///
/// Kept for reference and comparison only. These three entries do not match
/// the closed forms; the remainder test in `tests/greens_oracle.rs` shows the
/// fit order they produce, and the library uses [`expansion_terms`].
pub fn expansion_terms_as_quoted(d: Dimension, k: C64, x: f64) -> Result<ExpansionCoeffs> {
    let mut c = expansion_terms(d, WaveNumber::outgoing(k)?, x)?;
    match d {
        Dimension::One => {}
        Dimension::Two => {
            c.regular[1] = -k / (2.0 * PI) * ((k * x).ln() + EULER_GAMMA) + C64::i() * k / 2.0;
            c.regular[2] = -k / PI;
        }
        Dimension::Three => c.regular[1] = k / (2.0 * PI * x),
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn zero_branch_values() {
        let g3 = green(Dimension::Three, WaveNumber::zero(), 1.0).unwrap();
        assert!((g3.re - 0.050660592).abs() < 1e-9);
        let g2 = green(Dimension::Two, WaveNumber::zero(), 2.0).unwrap();
        assert!((g2.re - 0.079577472).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(WaveNumber::outgoing(c(-1.0, 0.0)).is_err());
        assert!(WaveNumber::negative(c(1.0, 0.0)).is_err());
        assert!(WaveNumber::from_frequency(c(0.0, 1.0), 1.0).is_err());
        let k = WaveNumber::outgoing(c(1.0, 0.0)).unwrap();
        assert!(green(Dimension::One, k, 0.0).is_err());
        assert!(green(Dimension::One, k, 1e-13).is_err());
        assert!(green_helmholtz(Dimension::One, c(-1.0, 0.0), 1.0, HelmholtzSign::Plus).is_err());
    }

    #[test]
    fn helmholtz_closed_forms() {
        let v = green_helmholtz(Dimension::Three, c(1.0, 0.0), 1.0, HelmholtzSign::Plus).unwrap();
        let want = C64::from_polar(1.0, 1.0) / (4.0 * PI);
        assert!((v - want).norm() < 1e-15);
        let v = green_helmholtz(Dimension::One, c(2.0, 0.0), 0.5, HelmholtzSign::Plus).unwrap();
        let want = C64::i() / 4.0 * C64::from_polar(1.0, 1.0);
        assert!((v - want).norm() < 1e-15);
    }

    #[test]
    fn decomposition_spec_point() {
        let k = c(1.0, 0.2);
        let r = 0.7;
        let out = green(Dimension::Three, WaveNumber::outgoing(k).unwrap(), r).unwrap();
        let neg = green(Dimension::Three, WaveNumber::negative(-k).unwrap(), r).unwrap();
        let helm = green_helmholtz(Dimension::Three, k, r, HelmholtzSign::Plus).unwrap();
        assert!((out - neg - 2.0 * k * helm).norm() <= 1e-12 * out.norm());
    }

    #[test]
    fn split_reassembles_1d() {
        for (k, r) in [
            (WaveNumber::outgoing(c(1.3, -0.2)).unwrap(), 0.4),
            (WaveNumber::incoming(c(0.7, 0.0)).unwrap(), 2.5),
            (WaveNumber::negative(c(-2.0, 0.1)).unwrap(), 6.0),
            (WaveNumber::zero(), 0.3),
        ] {
            let (a, cc, d) = green_1d_split(k, r);
            let g = green(Dimension::One, k, r).unwrap();
            let s = a * r.ln() + cc * r + d;
            assert!((s - g).norm() <= 1e-12 * g.norm(), "{k:?} {r}: {s} vs {g}");
        }
    }

    #[test]
    fn regular_2d_reassembles() {
        for (k, r) in [
            (WaveNumber::outgoing(c(1.3, -0.2)).unwrap(), 0.4),
            (WaveNumber::incoming(c(0.7, 0.0)).unwrap(), 2.5),
            (WaveNumber::negative(c(-2.0, 0.1)).unwrap(), 1.5),
        ] {
            let reg = green_2d_regular(k, r).unwrap();
            let g = green(Dimension::Two, k, r).unwrap();
            let s = reg + 1.0 / (2.0 * PI * r) - k.k() / (2.0 * PI) * r.ln();
            assert!((s - g).norm() <= 1e-12 * g.norm(), "{k:?} {r}: {s} vs {g}");
        }
    }

    #[test]
    fn regular_2d_is_continuous_at_origin() {
        let k = WaveNumber::outgoing(c(1.1, -0.1)).unwrap();
        let at0 = green_2d_regular(k, 0.0).unwrap();
        let near = green_2d_regular(k, 1e-7).unwrap();
        assert!((at0 - near).norm() < 1e-6);
    }

    #[test]
    fn q_entire_crossover() {
        for theta in [-1.2, -0.5, 0.0, 0.5, 1.2] {
            let z = C64::from_polar(Q_SERIES_RADIUS * 1.0001, theta);
            let w = C64::i() * z;
            let series = w.exp() * specfun::ein(w) + (-w).exp() * specfun::ein(-w);
            assert!((q_entire(z) - series).norm() <= 1e-11 * series.norm());
        }
    }

    #[test]
    fn heat_kernel_values() {
        let v = fractional_heat_kernel(Dimension::One, 1.0, 0.0).unwrap();
        assert!((v - 1.0 / PI).abs() < 1e-15);
        let v = fractional_heat_kernel(Dimension::Two, 0.5, 1.0).unwrap();
        assert!(v <= c_d(Dimension::Two) / 0.25);
    }

    #[test]
    fn dc_value() {
        assert_eq!(fourier_dc_value(-1.0).unwrap(), 1.0);
        assert_eq!(fourier_dc_value(-2.0).unwrap(), 0.5);
        assert!(fourier_dc_value(1.0).is_err());
    }
}
