//! 1D time evolution of the photon/atom system on a periodic grid.
//!
//! With `φ = √ρ a` the system reads
//!
//! ```text
//! i ψ_t = c(-Δ)^{½} ψ + g√ρ φ
//! i φ_t = g√ρ ψ + Ω φ
//! ```
//!
//! and `Σ (|ψ|² + |φ|²) Δx` is conserved. Each step is a Strang splitting:
//! half a step of the pointwise 2×2 block `[[0, g√ρ], [g√ρ, Ω]]`, solved
//! exactly, then a full step of the Fourier multiplier `e^{-ic|k|Δt}` on ψ,
//! then the other half block step. Both sub-flows are unitary, so the mass is
//! preserved up to rounding, and `φ` stays zero wherever `ρ` is.
//!
//! The domain is periodic; runs must end before outgoing waves wrap around,
//! which in practice means `L ≥ 8·diam(supp ρ) + cT`.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::{Dimension, Error, PhysicalParams, Result, C64};

/// Relative mass drift at which [`Evolver::step`] gives up.
pub const MASS_DRIFT_LIMIT: f64 = 1e-6;
/// Largest `|φ|` tolerated outside `supp ρ`.
pub const SUPPORT_LEAK: f64 = 1e-12;

/// Cell-centred periodic grid `x_j = -L/2 + (j + ½)Δx` on `[-L/2, L/2)`.
///
/// Cell centres keep the grid symmetric about 0 and, when `Δx` divides the
/// support radius, keep nodes off the edges of a square density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    length: f64,
    n: usize,
}

impl Grid {
    pub fn new(length: f64, n: usize) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Invalid(format!("grid length must be positive, got {length}")));
        }
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::Invalid(format!("grid size must be a power of two ≥ 2, got {n}")));
        }
        Ok(Self { length, n })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -0.5 * self.length + (j as f64 + 0.5) * self.dx()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Discrete wavenumbers in FFT order: `2πm/L` for `m = 0..N/2`, then
    /// `m - N` above; the Nyquist mode carries `+πN/L`.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n as i64;
        (0..n)
            .map(|m| {
                let m = if m > n / 2 { m - n } else { m };
                2.0 * PI * m as f64 / self.length
            })
            .collect()
    }
}

/// `(ψ, φ)` sampled on a grid at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub grid: Grid,
    pub psi: Vec<C64>,
    pub phi: Vec<C64>,
    pub t: f64,
}

impl FieldState {
    pub fn new(grid: Grid, psi: Vec<C64>, phi: Vec<C64>) -> Result<Self> {
        if psi.len() != grid.len() || phi.len() != grid.len() {
            return Err(Error::Invalid(format!(
                "state has {} / {} samples on a grid of {}",
                psi.len(),
                phi.len(),
                grid.len()
            )));
        }
        if psi.iter().chain(&phi).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("initial state has non-finite samples".into()));
        }
        Ok(Self { grid, psi, phi, t: 0.0 })
    }

    /// `Σ (|ψ|² + |φ|²) Δx`.
    pub fn mass(&self) -> f64 {
        let s: f64 = self.psi.iter().chain(&self.phi).map(|z| z.norm_sqr()).sum();
        s * self.grid.dx()
    }

    /// Mass carried by nodes with `a ≤ x ≤ b`.
    pub fn window_mass(&self, a: f64, b: f64) -> f64 {
        let s: f64 = (0..self.grid.len())
            .filter(|&j| (a..=b).contains(&self.grid.x(j)))
            .map(|j| self.psi[j].norm_sqr() + self.phi[j].norm_sqr())
            .sum();
        s * self.grid.dx()
    }

    /// `⟨self, other⟩ = Σ (conj ψ ψ' + conj φ φ') Δx`.
    pub fn inner(&self, other: &FieldState) -> C64 {
        let s: C64 = self
            .psi
            .iter()
            .zip(&other.psi)
            .chain(self.phi.iter().zip(&other.phi))
            .map(|(a, b)| a.conj() * b)
            .sum();
        s * self.grid.dx()
    }

    /// Same state scaled to unit mass.
    pub fn normalized(mut self) -> Result<Self> {
        let m = self.mass();
        if m <= 0.0 {
            return Err(Error::Invalid("cannot normalize a zero state".into()));
        }
        let s = 1.0 / m.sqrt();
        self.psi.iter_mut().chain(self.phi.iter_mut()).for_each(|z| *z *= s);
        Ok(self)
    }
}

/// `ρ` on the grid: `ρ₀` on `|x| < ε`, zero elsewhere.
pub fn density_samples(grid: &Grid, params: &PhysicalParams) -> Vec<f64> {
    let rho0 = params.rho0();
    (0..grid.len())
        .map(|j| if grid.x(j).abs() < params.epsilon { rho0 } else { 0.0 })
        .collect()
}

/// `(-Δ)^{½} ψ` by the multiplier `|k|`.
pub fn half_laplacian_apply(psi: &[C64], grid: &Grid) -> Result<Vec<C64>> {
    if psi.len() != grid.len() {
        return Err(Error::Invalid(format!("{} samples on a grid of {}", psi.len(), grid.len())));
    }
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(grid.len());
    let inv = planner.plan_fft_inverse(grid.len());
    let mut buf = psi.to_vec();
    fwd.process(&mut buf);
    let scale = 1.0 / grid.len() as f64;
    for (z, k) in buf.iter_mut().zip(grid.wavenumbers()) {
        *z *= k.abs() * scale;
    }
    inv.process(&mut buf);
    Ok(buf)
}

/// Precomputed propagators for a fixed grid, medium and step.
pub struct Evolver {
    grid: Grid,
    dt: f64,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// `e^{-ic|k|Δt}/N` per Fourier mode.
    free: Vec<C64>,
    /// Half-step block propagator per node, `[[a, b], [b, d]]`.
    block: Vec<[C64; 3]>,
    outside: Vec<bool>,
    scratch: Vec<C64>,
}

/// `exp(-iMτ)` for `M = [[0, β], [β, Ω]]`, returned as `(a, b, d)` of the
/// symmetric result.
fn block_propagator(beta: f64, omega: f64, tau: f64) -> [C64; 3] {
    // M = (Ω/2)I + N, N² = λ²I with λ = √(Ω²/4 + β²).
    let lam = (0.25 * omega * omega + beta * beta).sqrt();
    let sinc = if lam * tau == 0.0 { tau } else { (lam * tau).sin() / lam };
    let cos = (lam * tau).cos();
    let phase = C64::from_polar(1.0, -0.5 * omega * tau);
    let i = C64::i();
    [
        phase * (cos + i * sinc * 0.5 * omega),
        phase * (-i * sinc * beta),
        phase * (cos - i * sinc * 0.5 * omega),
    ]
}

impl Evolver {
    pub fn new(grid: Grid, params: &PhysicalParams, dt: f64) -> Result<Self> {
        params.validate()?;
        if params.dim != Dimension::One {
            return Err(Error::Invalid("only 1D dynamics is implemented".into()));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Invalid(format!("dt must be positive, got {dt}")));
        }
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(grid.len());
        let inv = planner.plan_fft_inverse(grid.len());
        let scale = 1.0 / grid.len() as f64;
        let free = grid
            .wavenumbers()
            .iter()
            .map(|k| C64::from_polar(scale, -params.c * k.abs() * dt))
            .collect();
        let rho = density_samples(&grid, params);
        let block = rho
            .iter()
            .map(|r| block_propagator(params.g * r.sqrt(), params.omega_atom, 0.5 * dt))
            .collect();
        let outside = rho.iter().map(|&r| r == 0.0).collect();
        Ok(Self { grid, dt, fwd, inv, free, block, outside, scratch: vec![C64::default(); grid.len()] })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn half_block(&self, s: &mut FieldState) {
        for ((p, f), m) in s.psi.iter_mut().zip(s.phi.iter_mut()).zip(&self.block) {
            let (a, b) = (*p, *f);
            *p = m[0] * a + m[1] * b;
            *f = m[1] * a + m[2] * b;
        }
    }

    /// Checks that `state` lives on this grid with `φ` inside `supp ρ`.
    pub fn check(&self, state: &FieldState) -> Result<()> {
        if state.grid != self.grid {
            return Err(Error::Invalid("state and evolver grids differ".into()));
        }
        let leak = state
            .phi
            .iter()
            .zip(&self.outside)
            .filter(|(_, &o)| o)
            .map(|(z, _)| z.norm())
            .fold(0.0, f64::max);
        if leak > SUPPORT_LEAK {
            return Err(Error::Invalid(format!("φ = {leak:.3e} outside supp ρ")));
        }
        Ok(())
    }

    /// One Strang step, in place.
    pub fn step(&mut self, s: &mut FieldState) {
        self.half_block(s);
        self.scratch.copy_from_slice(&s.psi);
        self.fwd.process(&mut self.scratch);
        for (z, e) in self.scratch.iter_mut().zip(&self.free) {
            *z *= e;
        }
        self.inv.process(&mut self.scratch);
        s.psi.copy_from_slice(&self.scratch);
        self.half_block(s);
        s.t += self.dt;
    }

    /// `steps` steps, calling `observe` on the initial state and after every
    /// step. Fails if the mass drifts by more than [`MASS_DRIFT_LIMIT`].
    pub fn run<F: FnMut(&FieldState)>(&mut self, state: &FieldState, steps: usize, mut observe: F) -> Result<FieldState> {
        self.check(state)?;
        let m0 = state.mass();
        let mut s = state.clone();
        observe(&s);
        for n in 1..=steps {
            self.step(&mut s);
            let m = s.mass();
            let drift = if m0 > 0.0 { (m - m0).abs() / m0 } else { m };
            if !(drift <= MASS_DRIFT_LIMIT) {
                return Err(Error::NoConvergence(format!(
                    "mass drift {drift:.3e} after step {n} (t = {}), dt = {}, N = {}",
                    s.t,
                    self.dt,
                    self.grid.len()
                )));
            }
            observe(&s);
        }
        Ok(s)
    }
}

/// State after `steps` steps of size `dt`.
pub fn evolve(state: &FieldState, dt: f64, steps: usize, params: &PhysicalParams) -> Result<FieldState> {
    Evolver::new(state.grid, params, dt)?.run(state, steps, |_| {})
}

/// `|⟨s₀, s⟩|² / (‖s₀‖²‖s‖²)`.
pub fn survival_probability(state0: &FieldState, state: &FieldState) -> f64 {
    let d = state0.mass() * state.mass();
    if d == 0.0 {
        return 0.0;
    }
    state0.inner(state).norm_sqr() / d
}

/// Initial state with the atoms excited uniformly on `supp ρ` and no photon,
/// at unit mass.
pub fn excited_atoms(grid: Grid, params: &PhysicalParams) -> Result<FieldState> {
    let rho = density_samples(&grid, params);
    let phi = rho.iter().map(|&r| C64::new(if r > 0.0 { 1.0 } else { 0.0 }, 0.0)).collect();
    FieldState::new(grid, vec![C64::default(); grid.len()], phi)?.normalized()
}
