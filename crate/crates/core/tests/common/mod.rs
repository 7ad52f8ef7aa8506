//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls into the library's special functions. Series are summed
//! in 512-bit arithmetic; integrals use the double-exponential rule from the
//! `quadrature` crate.

#![allow(dead_code)]

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

const P: usize = 512;
const RM: RoundingMode = RoundingMode::ToEven;
const EULER_GAMMA_DIGITS: &str =
    "0.57721566490153286060651209008240243104215933593992359880576723488486772677766467093694706329174674951";

pub struct Ctx {
    cc: Consts,
    gamma: BigFloat,
    pi: BigFloat,
}

impl Ctx {
    pub fn new() -> Self {
        let mut cc = Consts::new().expect("constants cache");
        let gamma = BigFloat::parse(EULER_GAMMA_DIGITS, Radix::Dec, P, RM, &mut cc);
        let pi = cc.pi(P, RM);
        Ctx { cc, gamma, pi }
    }
}

#[derive(Clone, Debug)]
pub struct Bc {
    re: BigFloat,
    im: BigFloat,
}

fn bf(x: f64) -> BigFloat {
    BigFloat::from_f64(x, P)
}

fn to_f64(x: &BigFloat) -> f64 {
    thread_local! {
        static CC: std::cell::RefCell<Consts> = std::cell::RefCell::new(Consts::new().expect("constants cache"));
    }
    if x.is_zero() {
        return 0.0;
    }
    let s = CC.with(|cc| x.format(Radix::Dec, RM, &mut cc.borrow_mut()).expect("format"));
    s.parse::<f64>().unwrap_or_else(|_| panic!("unparsable {s}"))
}

impl Bc {
    pub fn from_c64(z: C64) -> Self {
        Bc { re: bf(z.re), im: bf(z.im) }
    }
    fn real(x: BigFloat) -> Self {
        Bc { re: x, im: bf(0.0) }
    }
    pub fn to_c64(&self) -> C64 {
        C64::new(to_f64(&self.re), to_f64(&self.im))
    }
    fn add(&self, o: &Bc) -> Bc {
        Bc { re: self.re.add(&o.re, P, RM), im: self.im.add(&o.im, P, RM) }
    }
    fn sub(&self, o: &Bc) -> Bc {
        Bc { re: self.re.sub(&o.re, P, RM), im: self.im.sub(&o.im, P, RM) }
    }
    fn mul(&self, o: &Bc) -> Bc {
        let re = self.re.mul(&o.re, P, RM).sub(&self.im.mul(&o.im, P, RM), P, RM);
        let im = self.re.mul(&o.im, P, RM).add(&self.im.mul(&o.re, P, RM), P, RM);
        Bc { re, im }
    }
    fn scale(&self, s: &BigFloat) -> Bc {
        Bc { re: self.re.mul(s, P, RM), im: self.im.mul(s, P, RM) }
    }
    fn div_real(&self, s: &BigFloat) -> Bc {
        Bc { re: self.re.div(s, P, RM), im: self.im.div(s, P, RM) }
    }
    fn neg(&self) -> Bc {
        Bc { re: self.re.neg(), im: self.im.neg() }
    }
    /// Binary exponent of the larger component; `i32::MIN` for zero.
    fn log2_mag(&self) -> i32 {
        let e = |x: &BigFloat| if x.is_zero() { i32::MIN } else { x.exponent().unwrap_or(i32::MIN) };
        e(&self.re).max(e(&self.im))
    }
    /// Principal logarithm.
    fn ln(&self, ctx: &mut Ctx) -> Bc {
        let r2 = self.re.mul(&self.re, P, RM).add(&self.im.mul(&self.im, P, RM), P, RM);
        let half = bf(0.5);
        let re = r2.ln(P, RM, &mut ctx.cc).mul(&half, P, RM);
        let im = if self.re.is_zero() {
            let hp = ctx.pi.mul(&half, P, RM);
            if self.im.is_positive() { hp } else { hp.neg() }
        } else {
            let base = self.im.div(&self.re, P, RM).atan(P, RM, &mut ctx.cc);
            if self.re.is_positive() {
                base
            } else if self.im.is_negative() {
                base.sub(&ctx.pi, P, RM)
            } else {
                base.add(&ctx.pi, P, RM)
            }
        };
        Bc { re, im }
    }
}

/// Bits below the largest term at which a series is cut off.
const CUTOFF_BITS: i32 = 470;

/// Sums terms produced by `next(n, prev)` until they fall `CUTOFF_BITS` below
/// the largest term seen.
fn sum_series(first: Bc, mut next: impl FnMut(usize, &Bc) -> Bc) -> Bc {
    let mut sum = first.clone();
    let mut term = first;
    let mut peak = term.log2_mag();
    for n in 1..4000 {
        term = next(n, &term);
        sum = sum.add(&term);
        let m = term.log2_mag();
        peak = peak.max(m);
        if n > 8 && m < peak.saturating_sub(CUTOFF_BITS) {
            break;
        }
    }
    sum
}

/// E₁ from `-log z - γ + Σ (-1)^{n+1} zⁿ/(n·n!)`.
pub fn e1(ctx: &mut Ctx, z: C64) -> C64 {
    let zb = Bc::from_c64(z);
    // Terms t_n = (-1)^{n+1} zⁿ/n!, summed as t_n/n.
    let mut t = zb.clone();
    let mut sum = zb.clone();
    let mut peak = t.log2_mag();
    for n in 2..4000usize {
        t = t.mul(&zb.neg()).div_real(&bf(n as f64));
        let c = t.div_real(&bf(n as f64));
        sum = sum.add(&c);
        let m = c.log2_mag();
        peak = peak.max(m);
        if n > 8 && m < peak.saturating_sub(CUTOFF_BITS) {
            break;
        }
    }
    let lg = zb.ln(ctx);
    sum.sub(&lg).sub(&Bc::real(ctx.gamma.clone())).to_c64()
}

fn quarter_square(z: C64) -> Bc {
    let zb = Bc::from_c64(z);
    zb.mul(&zb).scale(&bf(0.25))
}

/// J₀ from its power series.
pub fn j0(_ctx: &mut Ctx, z: C64) -> C64 {
    j0_big(z).to_c64()
}

fn j0_big(z: C64) -> Bc {
    let q = quarter_square(z).neg();
    sum_series(Bc::from_c64(C64::new(1.0, 0.0)), |m, prev| {
        prev.mul(&q).div_real(&bf((m * m) as f64))
    })
}

/// `H₀⁽¹⁾ = J₀ + iY₀` (`sign = 1`) or `H₀⁽²⁾ = J₀ - iY₀` (`sign = -1`), combined
/// before rounding.
pub fn hankel0(ctx: &mut Ctx, z: C64, sign: f64) -> C64 {
    let y = y0_big(ctx, z);
    let iy = Bc { re: y.im.neg(), im: y.re }.scale(&bf(sign));
    j0_big(z).add(&iy).to_c64()
}

/// Y₀ from `(2/π)(log(z/2)+γ)J₀ + (2/π)Σ (-1)^{m+1} H_m (z²/4)^m/(m!)²`.
pub fn y0(ctx: &mut Ctx, z: C64) -> C64 {
    y0_big(ctx, z).to_c64()
}

fn y0_big(ctx: &mut Ctx, z: C64) -> Bc {
    let q = quarter_square(z);
    let mut term = Bc::from_c64(C64::new(1.0, 0.0));
    let mut j = term.clone();
    let mut reg = Bc::from_c64(C64::new(0.0, 0.0));
    let mut harmonic = bf(0.0);
    let mut peak = 0;
    for m in 1..4000usize {
        term = term.mul(&q.neg()).div_real(&bf((m * m) as f64));
        harmonic = harmonic.add(&bf(1.0).div(&bf(m as f64), P, RM), P, RM);
        j = j.add(&term);
        reg = reg.sub(&term.scale(&harmonic));
        let mag = term.log2_mag();
        peak = peak.max(mag);
        if m > 8 && mag < peak.saturating_sub(CUTOFF_BITS) {
            break;
        }
    }
    let half_z = Bc::from_c64(z * 0.5);
    let lg = half_z.ln(ctx).add(&Bc::real(ctx.gamma.clone()));
    let two_over_pi = bf(2.0).div(&ctx.pi, P, RM);
    lg.mul(&j).add(&reg).scale(&two_over_pi)
}

/// Struve 𝐇₀ from `Σ (-1)^n (z/2)^{2n+1} / Γ(n+3/2)²`.
pub fn struve_h0(ctx: &mut Ctx, z: C64) -> C64 {
    struve_h0_big(ctx, z).to_c64()
}

fn struve_h0_big(ctx: &mut Ctx, z: C64) -> Bc {
    let q = quarter_square(z).neg();
    // Γ(3/2)² = π/4.
    let first = Bc::from_c64(z * 0.5).div_real(&ctx.pi.div(&bf(4.0), P, RM));
    sum_series(first, |n, prev| {
        let g = bf(n as f64 + 0.5);
        prev.mul(&q).div_real(&g.mul(&g, P, RM))
    })
}

/// 𝐊₀ = 𝐇₀ - Y₀ from the two series.
pub fn struve_k0(ctx: &mut Ctx, z: C64) -> C64 {
    struve_h0_big(ctx, z).sub(&y0_big(ctx, z)).to_c64()
}

/// Relative error with an absolute floor for values near zero.
pub fn rel_err(got: C64, want: C64) -> f64 {
    (got - want).norm() / want.norm().max(1e-300)
}

/// Double-exponential quadrature on `[a, b]` of a real integrand.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    quadrature::double_exponential::integrate(f, a, b, tol).integral
}

/// `∫_a^∞ f`, mapped to a finite interval with `t = a + u/(1-u)`.
pub fn integrate_to_inf(f: impl Fn(f64) -> f64, a: f64, tol: f64) -> f64 {
    integrate(
        |u| {
            if u >= 1.0 {
                return 0.0;
            }
            let w = 1.0 - u;
            f(a + u / w) / (w * w)
        },
        0.0,
        1.0,
        tol,
    )
}

/// `c_d ∫_0^∞ e^{kt} t (t²+r²)^{-(d+1)/2} dt`, the negative-branch Green's
/// function written as a superposition of Poisson kernels.
pub fn realspace_green(d: usize, k: f64, r: f64) -> f64 {
    let p = (d + 1) as f64 / 2.0;
    let cd = poisson_constant(d);
    // Split at the scale r so the endpoint clustering resolves both regimes.
    let f = |t: f64| (k * t).exp() * t / (t * t + r * r).powf(p);
    cd * (integrate(f, 0.0, r, 1e-14) + integrate_to_inf(f, r, 1e-14))
}

/// `Γ((d+1)/2)/π^{(d+1)/2}` for d = 1, 2, 3.
pub fn poisson_constant(d: usize) -> f64 {
    match d {
        1 => 1.0 / PI,
        2 => 1.0 / (2.0 * PI),
        3 => 1.0 / (PI * PI),
        _ => panic!("d = {d} not covered"),
    }
}

/// `|𝕊^{d-1}| ∫_0^∞ g(r) r^{d-1} dr` for a radial `g` that decays like
/// `c_d/(k² r^{d+1})`.
///
/// Beyond `R = 10³` the two-term tail `c_d/(k² r^{d+1})(1 - 3(d+1)/(k²r²))`
/// is integrated exactly; `g` is never called below `r_min`.
pub fn radial_mass(d: usize, k: f64, r_min: f64, g: impl Fn(f64) -> f64) -> f64 {
    const R: f64 = 1e3;
    let f = |r: f64| if r < r_min { 0.0 } else { g(r) * r.powi(d as i32 - 1) };
    let body: f64 = [0.0, 1.0, 10.0, 100.0, R].windows(2).map(|w| integrate(f, w[0], w[1], 1e-12)).sum();
    let p = (d + 1) as f64;
    let k2 = k * k;
    let tail = poisson_constant(d) / k2 * (1.0 / R - p / (k2 * R.powi(3)));
    let area = match d {
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 4.0 * PI,
    };
    area * (body + tail)
}
