//! Kernels and their angular reductions.
//!
//! 3D radial functions are handled through `u(r) = rφ(r)` extended oddly to
//! `[-a, a]`: since `∂_s G₁ = -2πs G₃` for every branch,
//!
//! ```text
//! ∮_{|y|=r'} G₃(|x-y|) dσ(ŷ) = (1/(r r')) [G₁(|r-r'|) - G₁(r+r')]
//! ```
//!
//! so the 3D operator on `u` is the 1D operator with the same `k` restricted to
//! odd functions. Every 1D-type kernel is split as `A(s) log s + C(s) s + D(s)`
//! with smooth parts, matching the product weights.
//!
//! In 2D the angular integral of `G₂` splits into
//!
//! - `∫ dθ/(2πs) = 1/AGM(r+r', |r-r'|)`, log-singular at `r = r'`;
//! - `∫ log s dθ = 2π log max(r, r')`, a kink at `r = r'`;
//! - `∫ R₂(s) dθ` for the remainder `R₂ = G₂ - 1/(2πs) + (k/2π) log s`,
//!   by the shifted trapezoidal rule after removing its `|x-y|` term
//!   `-κ²s/(2π)`, whose angular integral is a complete elliptic integral.

use std::f64::consts::PI;

use crate::greens::{self, Branch, WaveNumber};
use crate::{Dimension, Error, Result, C64, EULER_GAMMA};

/// Integral kernels the builders know how to discretize.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    /// The Green's function `G^k` of the given branch.
    Green(WaveNumber),
    /// Leading small-inclusion term `A₀`: `1/(2π|x|)` in 2D, `1/(2π²|x|²)` in 3D.
    Leading,
    /// First-order term `A₁^k`: `k/(4π|x|)` in 3D,
    /// `-(k/2π)(log(κ|x|/2) + γ) + σiκ/2` in 2D.
    FirstOrder(WaveNumber),
    /// The constant 1 (1D rank-one limit).
    Constant,
}

/// Split `(A, C, D)` of the 1D-type kernel at physical distance `a·s`, written
/// in the scaled distance `s`: `K(as) = A log s + C s + D`.
///
/// In 3D this is the kernel acting on `u = rφ`.
pub(crate) fn split_1d(dim: Dimension, kernel: Kernel, a: f64, s: f64) -> Result<(C64, C64, C64)> {
    let zero = C64::new(0.0, 0.0);
    match (dim, kernel) {
        (Dimension::One | Dimension::Three, Kernel::Green(k)) => {
            let (ca, cc, cd) = greens::green_1d_split(k, a * s);
            Ok((ca, a * cc, ca * a.ln() + cd))
        }
        (Dimension::One, Kernel::Constant) => Ok((zero, zero, C64::new(1.0, 0.0))),
        // -(1/π) log(as)
        (Dimension::Three, Kernel::Leading) => Ok((C64::new(-1.0 / PI, 0.0), zero, C64::new(-a.ln() / PI, 0.0))),
        // -(k/2)(as)
        (Dimension::Three, Kernel::FirstOrder(k)) => Ok((zero, -k.k() * a / 2.0, zero)),
        _ => Err(Error::Invalid(format!("kernel {kernel:?} is not defined for d = {}", dim.as_usize()))),
    }
}

/// Angular integral in 2D at scale `a`, premultiplied by the area factor `a²`:
/// `c_a Θ_A + c_l log max(r, r') + c_0 + a² ∫ R₂(a s) dθ` (last term only when
/// `regular` is set).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Angular2d {
    pub c_a: C64,
    pub c_l: C64,
    pub c_0: C64,
    pub regular: Option<WaveNumber>,
}

pub(crate) fn angular_2d(kernel: Kernel, a: f64) -> Result<Angular2d> {
    let zero = C64::new(0.0, 0.0);
    let a2 = a * a;
    match kernel {
        Kernel::Green(k) => {
            if k.branch() == Branch::Zero {
                return Ok(Angular2d { c_a: C64::new(a, 0.0), c_l: zero, c_0: zero, regular: None });
            }
            let kk = k.k();
            Ok(Angular2d { c_a: C64::new(a, 0.0), c_l: -a2 * kk, c_0: -a2 * kk * a.ln(), regular: Some(k) })
        }
        Kernel::Leading => Ok(Angular2d { c_a: C64::new(a, 0.0), c_l: zero, c_0: zero, regular: None }),
        Kernel::FirstOrder(k) => {
            if k.branch() == Branch::Zero {
                return Ok(Angular2d { c_a: zero, c_l: zero, c_0: zero, regular: None });
            }
            let kk = k.k();
            let kappa = k.kappa();
            let sigma = match k.branch() {
                Branch::Outgoing => 1.0,
                Branch::Incoming => -1.0,
                _ => 0.0,
            };
            let c_0 = a2 * (-kk * ((kappa * a * 0.5).ln() + EULER_GAMMA) + sigma * C64::i() * PI * kappa);
            Ok(Angular2d { c_a: zero, c_l: -a2 * kk, c_0, regular: None })
        }
        Kernel::Constant => Err(Error::Invalid("the constant kernel is 1D only".into())),
    }
}

/// Arithmetic–geometric mean.
pub(crate) fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let m = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = m;
    }
    a
}

/// `∫_0^{2π} dθ / (2π s(θ))` with `s² = r² + r'² - 2rr' cos θ`, `r ≠ r'`.
pub(crate) fn theta_leading(r: f64, rp: f64) -> f64 {
    1.0 / agm(r + rp, (r - rp).abs())
}

/// `∫_0^{2π} s(θ) dθ`.
pub(crate) fn circle_mean_distance(r: f64, rp: f64) -> f64 {
    let a = r + rp;
    let b = (r - rp).abs();
    if b == 0.0 {
        return 4.0 * a;
    }
    // 4∫_0^{π/2} √(a²cos² + b²sin²) = (2π/M)(a² - Σ 2^{n-1} c_n²), c₀² = a² - b².
    let (mut x, mut y) = (a, b);
    let mut sum = 0.5 * (a * a - b * b);
    let mut pow = 0.5;
    for _ in 0..64 {
        let c = 0.5 * (x - y);
        pow *= 2.0;
        let m = 0.5 * (x + y);
        y = (x * y).sqrt();
        x = m;
        sum += pow * c * c;
        if c.abs() <= 1e-17 * x {
            break;
        }
    }
    2.0 * PI / x * (a * a - sum)
}

/// Number of terms kept in the log coefficient of `Θ_A`.
const LOG_SERIES_TERMS: usize = 12;

/// `Θ_A(r, r') = α log|r - r'| + β` with `α` a polynomial in
/// `m₁ = ((r-r')/(r+r'))²` and `β` smooth to high order at `r = r'`.
///
/// From `K(m) = Σ c_n m₁ⁿ [log(4/√m₁) - d_n]`, `c_n = ((½)_n/n!)²`; `α` keeps
/// the first [`LOG_SERIES_TERMS`] terms of `-(2/(π(r+r'))) Σ c_n m₁ⁿ`.
pub(crate) fn leading_log_split(r: f64, rp: f64) -> (f64, f64) {
    let sum = r + rp;
    let m1 = ((r - rp) / sum).powi(2);
    let mut c = 1.0;
    let mut poly = 0.0;
    let mut mp = 1.0;
    for n in 0..LOG_SERIES_TERMS {
        poly += c * mp;
        mp *= m1;
        let nf = n as f64;
        c *= ((2.0 * nf + 1.0) / (2.0 * nf + 2.0)).powi(2);
    }
    let alpha = -2.0 / (PI * sum) * poly;
    let beta = if r == rp {
        (8.0 * r).ln() / (PI * r)
    } else {
        theta_leading(r, rp) - alpha * (r - rp).abs().ln()
    };
    (alpha, beta)
}

/// `∫_0^{2π} R₂(a s(θ)) dθ` by the `m`-point shifted trapezoidal rule, with the
/// `|x-y|` term integrated exactly.
pub(crate) fn regular_angular_2d(k: WaveNumber, a: f64, r: f64, rp: f64, m: usize) -> Result<C64> {
    let kappa = k.kappa();
    let beta1 = -kappa * kappa / (2.0 * PI);
    let half = m / 2;
    let h = 2.0 * PI / m as f64;
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..half {
        let theta = (j as f64 + 0.5) * h;
        let s = (r * r + rp * rp - 2.0 * r * rp * theta.cos()).max(0.0).sqrt();
        // Shifted nodes never hit θ = 0, but s can still round to ~0 at r = r'.
        let v = greens::green_2d_regular(k, a * s)? - beta1 * a * s;
        acc += v;
    }
    Ok(2.0 * h * acc + beta1 * a * circle_mean_distance(r, rp))
}

/// Angular mean `∮ G^k(|x - y|) dσ(ŷ)` over the sphere `|y| = r'` for
/// `|x| = r`, with `r ≠ r'`.
///
/// - d = 1: `G(|r - r'|) + G(r + r')`, the two points `±r'`.
/// - d = 2: `∫_0^{2π} G₂ dθ`, singular parts in closed form and the remainder
///   by the trapezoidal rule with `angular_nodes` points.
/// - d = 3: `(1/(rr'))[G₁(|r-r'|) - G₁(r+r')]`, exact.
pub fn reduced_kernel(d: Dimension, k: WaveNumber, r: f64, rp: f64, angular_nodes: usize) -> Result<C64> {
    if !(r > 0.0 && rp > 0.0 && r.is_finite() && rp.is_finite()) {
        return Err(Error::Domain(format!("radii must be positive, got ({r}, {rp})")));
    }
    if (r - rp).abs() < greens::MIN_RADIUS {
        return Err(Error::Domain(format!("reduced kernel is singular at r = r' = {r}")));
    }
    let v = match d {
        Dimension::One => greens::green(d, k, (r - rp).abs())? + greens::green(d, k, r + rp)?,
        Dimension::Two => {
            let mut v = C64::new(theta_leading(r, rp), 0.0);
            if k.branch() != Branch::Zero {
                v -= k.k() * r.max(rp).ln();
                if angular_nodes < 2 || !angular_nodes.is_multiple_of(2) {
                    return Err(Error::Invalid(format!("angular node count must be even, got {angular_nodes}")));
                }
                v += regular_angular_2d(k, 1.0, r, rp, angular_nodes)?;
            }
            v
        }
        Dimension::Three => {
            let g = |s: f64| greens::green(Dimension::One, k, s);
            (g((r - rp).abs())? - g(r + rp)?) / (r * rp)
        }
    };
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NonFinite(format!("reduced kernel at (r, r') = ({r}, {rp})")));
    }
    Ok(v)
}
