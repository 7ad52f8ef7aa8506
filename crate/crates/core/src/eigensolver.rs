//! Characteristic values of the inclusion operator.
//!
//! A resonance (or bound state) is a frequency ω at which `𝒢^ω_ε` has a
//! nontrivial kernel. The scalar function driving the search is the
//! smallest-magnitude eigenvalue of the Nyström matrix, which vanishes
//! exactly there; Muller's method finds its roots from three seeds without
//! derivatives. Seeds come from the limiting spectrum:
//!
//! - d = 2, 3: `ωⱼ = Ω - μⱼ(L₀)`;
//! - d = 1: the rank-one limit `Ω - g²s₀|B₁|/(πc)` for the first mode, then
//!   `Ω - λⱼ` with `λⱼ` the leading eigenvalues of the full integral part at
//!   `ω = Ω`.
//!
//! Each seed `ω` is spread to `ω(1, 1 - 10⁻³, 1 - 10⁻³i)` to leave the real
//! axis. Modes are solved independently (optionally on several threads);
//! a mode that lands within `DEFLATION_RADIUS` of an earlier one is restarted
//! from perturbed seeds, then merged if it still coincides.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::asymptotics::{limiting_frequency_1d, limiting_modes, resonance_expansion_1d};
use crate::nystrom::{build_full_operator, integral_matrix, Kernel, QuadratureRule, RadialOperator};
use crate::{linalg, Dimension, Error, PhysicalParams, Result, WaveNumber, C64};

/// Roots closer than this are the same root.
pub const DEFLATION_RADIUS: f64 = 1e-8;
/// Largest admissible `Im ω` of a resonance.
pub const IM_SLACK: f64 = 1e-9;
const SEED_SPREAD: f64 = 1e-3;
const RESTARTS: usize = 3;

/// Numerical settings shared by the resonance searches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverOptions {
    pub radial_nodes: usize,
    /// Angular nodes (2D only).
    pub angular_nodes: usize,
    /// Muller stops when `|f(ω)| ≤ tol`.
    pub tol: f64,
    pub max_iter: usize,
    /// Largest accepted `‖M(ω)v‖_w/‖v‖_w`.
    pub residual_tol: f64,
    /// Worker threads for independent modes.
    pub threads: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            radial_nodes: crate::nystrom::DEFAULT_RADIAL_NODES,
            angular_nodes: crate::nystrom::ANGULAR_PER_RADIAL * crate::nystrom::DEFAULT_RADIAL_NODES,
            tol: 1e-10,
            max_iter: 50,
            residual_tol: 1e-8,
            threads: 1,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.residual_tol > 0.0) {
            return Err(Error::Invalid("tolerances must be positive".into()));
        }
        if self.max_iter == 0 || self.threads == 0 {
            return Err(Error::Invalid("max_iter and threads must be at least 1".into()));
        }
        Ok(())
    }

    pub fn rule(&self, dim: Dimension) -> Result<QuadratureRule> {
        QuadratureRule::new(dim, self.radial_nodes, self.angular_nodes)
    }
}

/// A converged root of the characteristic function with its certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    /// 1-based index of the seed mode.
    pub mode: usize,
    pub omega: C64,
    /// Samples of ψ at the rule's nodes, `‖ψ‖_w = 1`.
    pub eigenvector: Vec<C64>,
    /// `‖M(ω)v‖_w / ‖v‖_w`.
    pub residual: f64,
    pub iterations: usize,
    pub seed: C64,
}

/// A mode that failed to converge, with the best iterate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeFailure {
    pub mode: usize,
    pub seed: C64,
    pub best: Option<C64>,
    pub reason: String,
}

/// Outcome of [`find_resonances`]: converged modes sorted by `Re ω`, plus
/// the modes that failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceSet {
    pub found: Vec<SpectrumResult>,
    pub failed: Vec<ModeFailure>,
}

/// One mode followed along a decreasing ε grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceTrace {
    pub mode: usize,
    /// The requested grid; `results[i]` belongs to `epsilons[i]`.
    pub epsilons: Vec<f64>,
    pub results: Vec<SpectrumResult>,
    /// Indices `i` where `|ω_i - ω_{i-1}| > continuity·|ω_{i-1}|`.
    pub continuity_breaks: Vec<usize>,
    /// Set when the trace stopped early: the ε that failed and why.
    pub failure: Option<(f64, String)>,
}

/// Result of one Muller run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MullerOutcome {
    /// Converged root, or the best iterate when `converged` is false.
    pub root: C64,
    pub value: C64,
    pub iterations: usize,
    pub converged: bool,
}

/// Eigenvalue of smallest magnitude of the operator's matrix.
pub fn characteristic_value(op: &RadialOperator) -> Result<C64> {
    linalg::smallest_eigenvalue(&op.matrix)
}

/// Muller's method: quadratic interpolation through the last three iterates,
/// taking the root of the interpolant nearest the newest iterate.
pub fn muller_solve<F>(mut f: F, seeds: [C64; 3], tol: f64, max_iter: usize) -> Result<MullerOutcome>
where
    F: FnMut(C64) -> Result<C64>,
{
    if !(tol > 0.0) || max_iter == 0 {
        return Err(Error::Invalid("Muller needs tol > 0 and max_iter ≥ 1".into()));
    }
    let [mut x0, mut x1, mut x2] = seeds;
    if x0 == x1 || x1 == x2 || x0 == x2 {
        return Err(Error::Invalid(format!("Muller seeds must be distinct, got {seeds:?}")));
    }
    let (mut f0, mut f1, mut f2) = (f(x0)?, f(x1)?, f(x2)?);
    let mut best = [(x0, f0), (x1, f1), (x2, f2)]
        .into_iter()
        .min_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("three seeds");
    if best.1.norm() <= tol {
        return Ok(MullerOutcome { root: best.0, value: best.1, iterations: 0, converged: true });
    }
    for it in 1..=max_iter {
        let (h1, h2) = (x1 - x0, x2 - x1);
        let (d1, d2) = ((f1 - f0) / h1, (f2 - f1) / h2);
        let a = (d2 - d1) / (h2 + h1);
        let b = a * h2 + d2;
        let disc = (b * b - a * f2 * 4.0).sqrt();
        let den = if (b + disc).norm() >= (b - disc).norm() { b + disc } else { b - disc };
        if den.norm() == 0.0 || !(den.re.is_finite() && den.im.is_finite()) {
            // Degenerate interpolant: nudge the newest point and retry.
            x2 += C64::new(1e-8 * x2.norm().max(1.0), 0.0);
            f2 = f(x2)?;
            continue;
        }
        let x3 = x2 - f2 * 2.0 / den;
        let f3 = f(x3)?;
        if f3.norm() < best.1.norm() {
            best = (x3, f3);
        }
        if f3.norm() <= tol {
            return Ok(MullerOutcome { root: x3, value: f3, iterations: it, converged: true });
        }
        if (x3 - x2).norm() <= 4.0 * f64::EPSILON * x3.norm().max(f64::MIN_POSITIVE) {
            break;
        }
        (x0, x1, x2) = (x1, x2, x3);
        (f0, f1, f2) = (f1, f2, f3);
    }
    Ok(MullerOutcome { root: best.0, value: best.1, iterations: max_iter, converged: false })
}

/// `ω(1, 1 - 10⁻³, 1 - 10⁻³i)`.
pub fn seed_triple(omega: C64) -> [C64; 3] {
    [omega, omega * (1.0 - SEED_SPREAD), omega * C64::new(1.0, -SEED_SPREAD)]
}

/// Seeds `ω₁, …, ω_n` from the limiting problem.
pub fn mode_seeds(params: &PhysicalParams, n_modes: usize, rule: &QuadratureRule) -> Result<Vec<C64>> {
    if n_modes == 0 {
        return Err(Error::Invalid("n_modes must be at least 1".into()));
    }
    match params.dim {
        Dimension::Two | Dimension::Three => Ok(limiting_modes(params, n_modes, rule)?
            .into_iter()
            .map(|m| C64::new(m.omega_j, 0.0))
            .collect()),
        Dimension::One => {
            // The leading-order expansion carries the O(1/log ε) width; fall
            // back to the real limit outside its regime.
            let first = resonance_expansion_1d(params, params.epsilon)
                .unwrap_or_else(|_| C64::new(limiting_frequency_1d(params), 0.0));
            let mut seeds = vec![first];
            if n_modes > 1 {
                let omega = C64::new(params.omega_atom, 0.0);
                let k = WaveNumber::from_frequency(omega, params.c)?;
                let w = integral_matrix(rule, Kernel::Green(k), params.epsilon)?;
                let scale = params.g * params.g * params.rho0() / params.c;
                let mut lam = linalg::eigenvalues(&(w * C64::new(scale, 0.0)))?;
                lam.sort_by(|a, b| b.re.total_cmp(&a.re));
                seeds.extend(lam.iter().skip(1).take(n_modes - 1).map(|l| omega - l));
            }
            Ok(seeds)
        }
    }
}

/// Converges one mode from `seed`, rejecting roots listed in `avoid`.
pub fn solve_mode(
    params: &PhysicalParams,
    rule: &QuadratureRule,
    mode: usize,
    seed: C64,
    avoid: &[C64],
    opts: &SolverOptions,
) -> std::result::Result<SpectrumResult, ModeFailure> {
    let fail = |best: Option<C64>, reason: String| ModeFailure { mode, seed, best, reason };
    let f = |omega: C64| characteristic_value(&build_full_operator(params, omega, rule)?);
    let mut last = None;
    for attempt in 0..=RESTARTS {
        let start = if attempt == 0 {
            seed
        } else {
            seed * C64::new(1.0 + 1e-2 * attempt as f64, -1e-2 * attempt as f64)
        };
        let out = match muller_solve(f, seed_triple(start), opts.tol, opts.max_iter) {
            Ok(out) => out,
            Err(e) => return Err(fail(last, e.to_string())),
        };
        last = Some(out.root);
        if !out.converged {
            return Err(fail(last, format!("|f| = {:.3e} after {} iterations", out.value.norm(), out.iterations)));
        }
        if avoid.iter().any(|z| (z - out.root).norm() <= DEFLATION_RADIUS) {
            continue;
        }
        return certify(params, rule, mode, seed, out).map_err(|e| fail(last, e.to_string()));
    }
    Err(fail(last, "converged only to roots already found".into()))
}

fn certify(
    params: &PhysicalParams,
    rule: &QuadratureRule,
    mode: usize,
    seed: C64,
    out: MullerOutcome,
) -> Result<SpectrumResult> {
    let omega = out.root;
    if omega.im > IM_SLACK {
        return Err(Error::NoConvergence(format!("root {omega} has Im ω > {IM_SLACK}")));
    }
    let op = build_full_operator(params, omega, rule)?;
    let v = linalg::eigenvector(&op.matrix, out.value)?;
    let v: Vec<C64> = v.iter().copied().collect();
    let norm = rule.weighted_norm(&v);
    let v: Vec<C64> = v.into_iter().map(|x| x / norm).collect();
    let mv: Vec<C64> = (0..v.len()).map(|i| (0..v.len()).map(|j| op.matrix[(i, j)] * v[j]).sum()).collect();
    let residual = rule.weighted_norm(&mv);
    Ok(SpectrumResult { mode, omega, eigenvector: v, residual, iterations: out.iterations, seed })
}

fn certified(r: &SpectrumResult, opts: &SolverOptions) -> std::result::Result<(), ModeFailure> {
    if r.residual <= opts.residual_tol {
        Ok(())
    } else {
        Err(ModeFailure {
            mode: r.mode,
            seed: r.seed,
            best: Some(r.omega),
            reason: format!("residual {:.3e} above {:.1e}", r.residual, opts.residual_tol),
        })
    }
}

/// Runs `job(i)` for `i < n` on up to `threads` workers, keeping order.
fn parallel_map<T: Send>(n: usize, threads: usize, job: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..n).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..threads.clamp(1, n.max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let v = job(i);
                slots.lock().expect("no worker panics while holding the lock")[i] = Some(v);
            });
        }
    });
    slots.into_inner().expect("workers joined").into_iter().map(|v| v.expect("every slot filled")).collect()
}

/// Resonances seeded from the `n_modes` leading limiting modes.
pub fn find_resonances(params: &PhysicalParams, n_modes: usize, opts: &SolverOptions) -> Result<ResonanceSet> {
    params.validate()?;
    opts.validate()?;
    let rule = opts.rule(params.dim)?;
    let seeds = mode_seeds(params, n_modes, &rule)?;
    let first = parallel_map(seeds.len(), opts.threads, |i| solve_mode(params, &rule, i + 1, seeds[i], &[], opts));
    let mut found: Vec<SpectrumResult> = Vec::new();
    let mut failed = Vec::new();
    for (i, r) in first.into_iter().enumerate() {
        let r = match r {
            Ok(r) if found.iter().any(|f| (f.omega - r.omega).norm() <= DEFLATION_RADIUS) => {
                let avoid: Vec<C64> = found.iter().map(|f| f.omega).collect();
                solve_mode(params, &rule, i + 1, seeds[i], &avoid, opts)
            }
            other => other,
        };
        match r.and_then(|r| certified(&r, opts).map(|_| r)) {
            Ok(r) => found.push(r),
            Err(e) => failed.push(e),
        }
    }
    found.sort_by(|a, b| a.omega.re.total_cmp(&b.omega.re));
    Ok(ResonanceSet { found, failed })
}

/// Follows mode `mode` (1-based) along a strictly decreasing ε grid,
/// warm-starting each solve from the previous root. A failed solve ends the
/// trace; the roots found so far are kept and the failure is recorded.
pub fn trace_in_epsilon(
    params: &PhysicalParams,
    mode: usize,
    epsilons: &[f64],
    continuity: f64,
    opts: &SolverOptions,
) -> Result<ResonanceTrace> {
    opts.validate()?;
    if epsilons.is_empty() {
        return Err(Error::Invalid("ε grid is empty".into()));
    }
    if epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Invalid("ε grid must be strictly decreasing".into()));
    }
    if mode == 0 {
        return Err(Error::Invalid("modes are numbered from 1".into()));
    }
    let rule = opts.rule(params.dim)?;
    let first = params.with_epsilon(epsilons[0]);
    first.validate()?;
    let mut seed = mode_seeds(&first, mode, &rule)?[mode - 1];
    let mut results: Vec<SpectrumResult> = Vec::with_capacity(epsilons.len());
    let mut breaks = Vec::new();
    let mut failure = None;
    for (i, &eps) in epsilons.iter().enumerate() {
        let p = params.with_epsilon(eps);
        p.validate()?;
        let r = match solve_mode(&p, &rule, mode, seed, &[], opts).and_then(|r| certified(&r, opts).map(|_| r)) {
            Ok(r) => r,
            Err(e) => {
                failure = Some((eps, e.reason));
                break;
            }
        };
        if let Some(prev) = results.last() {
            if (r.omega - prev.omega).norm() > continuity * prev.omega.norm() {
                breaks.push(i);
            }
        }
        seed = r.omega;
        results.push(r);
    }
    Ok(ResonanceTrace { mode, epsilons: epsilons.to_vec(), results, continuity_breaks: breaks, failure })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn characteristic_value_of_simple_operators() {
        let rule = QuadratureRule::with_radial(Dimension::Three, 8).unwrap();
        let params = PhysicalParams::scaled(Dimension::Three, 1.0, 1.0, 1.0, 1.0, 0.1);
        let diag = DMatrix::from_diagonal(&DVector::from_vec(vec![c(3.0, 0.0), c(-0.1, 0.0), c(0.0, 2.0)]));
        let op = RadialOperator {
            matrix: diag,
            rule: rule.clone(),
            omega: c(0.0, 0.0),
            params,
            kind: crate::OperatorKind::Full,
        };
        assert_eq!(characteristic_value(&op).unwrap(), c(-0.1, 0.0));
        // -(ω - Ω)I at ω = Ω.
        let op = RadialOperator { matrix: DMatrix::zeros(8, 8), ..op };
        assert_eq!(characteristic_value(&op).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn muller_examples() {
        let r = muller_solve(|z| Ok(z - 2.0), [c(0.0, 0.0), c(1.0, 0.0), c(3.0, 0.0)], 1e-12, 50).unwrap();
        assert!(r.converged && (r.root - 2.0).norm() < 1e-12);
        let r = muller_solve(|z| Ok(z * z + 1.0), [c(0.0, 0.5), c(1.0, 1.0), c(0.0, 2.0)], 1e-12, 50).unwrap();
        assert!(r.converged && (r.root - c(0.0, 1.0)).norm() < 1e-12);
        let r = muller_solve(|z| Ok(z * z * z - z * 2.0 - 5.0), [c(1.9, 0.0), c(2.0, 0.0), c(2.2, 0.0)], 1e-13, 50)
            .unwrap();
        // Oracle: bisection on the sign change in [2, 2.2].
        let (mut lo, mut hi) = (2.0f64, 2.2f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid * mid - 2.0 * mid - 5.0 < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((r.root - lo).norm() < 1e-13, "{} vs {lo}", r.root);
        assert!((lo - 2.0945514815423265).abs() < 1e-15);
    }

    #[test]
    fn muller_rejects_repeated_seeds_and_flags_failure() {
        assert!(muller_solve(Ok, [c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)], 1e-10, 10).is_err());
        // No root: exp has none, so the run ends unconverged with a best iterate.
        let r = muller_solve(|z| Ok(z.exp()), [c(0.0, 0.0), c(0.5, 0.0), c(1.0, 0.0)], 1e-10, 20).unwrap();
        assert!(!r.converged);
        assert!(r.value.norm() > 1e-10);
    }

    #[test]
    fn muller_on_cubics_from_a_seed_grid() {
        let polys: [fn(C64) -> C64; 4] = [
            |z| z - c(0.3, -0.7),
            |z| z * z - c(1.0, 2.0),
            |z| z * z * z - z * 2.0 - 5.0,
            |z| (z - 1.0) * (z + c(0.5, 1.0)) * (z - c(0.0, 2.0)),
        ];
        for p in polys {
            for a in 0..5 {
                for b in 0..5 {
                    let z = c(-3.0 + 1.5 * a as f64, -3.0 + 1.5 * b as f64);
                    let seeds = [z, z + 0.1, z + c(0.0, 0.1)];
                    let r = muller_solve(|z| Ok(p(z)), seeds, 1e-13, 100).unwrap();
                    assert!(r.converged && p(r.root).norm() <= 1e-12, "seed {z}: {r:?}");
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn muller_finds_a_root_of_random_cubics(
            r1 in -2.0..2.0f64, i1 in -2.0..2.0f64,
            r2 in -2.0..2.0f64, i2 in -2.0..2.0f64,
            r3 in -2.0..2.0f64, i3 in -2.0..2.0f64,
            sr in -3.0..3.0f64, si in -3.0..3.0f64,
        ) {
            let roots = [c(r1, i1), c(r2, i2), c(r3, i3)];
            let p = |z: C64| roots.iter().fold(c(1.0, 0.0), |acc, r| acc * (z - r));
            let z = c(sr, si);
            let out = muller_solve(|x| Ok(p(x)), [z, z + 0.1, z + c(0.0, 0.1)], 1e-13, 200).unwrap();
            prop_assert!(out.converged);
            prop_assert!(p(out.root).norm() <= 1e-12);
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let p = PhysicalParams::scaled(Dimension::Three, 1.0, 1.0, 1.0, 1.0, 0.1);
        let o = SolverOptions { radial_nodes: 16, angular_nodes: 64, ..Default::default() };
        assert!(trace_in_epsilon(&p, 1, &[0.1, 0.2], 0.1, &o).is_err());
        assert!(trace_in_epsilon(&p, 1, &[], 0.1, &o).is_err());
        assert!(find_resonances(&p, 0, &o).is_err());
    }

    #[test]
    fn trace_follows_mode_and_records_failure() {
        let p = PhysicalParams::scaled(Dimension::Three, 1.0, 1.0, 1.0, 1.0, 0.1);
        let o = SolverOptions { radial_nodes: 16, angular_nodes: 64, ..Default::default() };
        let t = trace_in_epsilon(&p, 1, &[0.1, 0.08, 0.06], 0.1, &o).unwrap();
        assert!(t.failure.is_none() && t.results.len() == 3 && t.continuity_breaks.is_empty());
        // Smaller ε narrows the resonance.
        assert!(t.results.windows(2).all(|w| w[1].omega.im.abs() < w[0].omega.im.abs()));
        let starved = SolverOptions { max_iter: 1, ..o };
        let t = trace_in_epsilon(&p, 1, &[0.1, 0.08], 0.1, &starved).unwrap();
        assert!(t.results.is_empty());
        assert_eq!(t.failure.as_ref().map(|f| f.0), Some(0.1));
    }

    #[test]
    fn lowest_3d_resonance_is_certified() {
        let p = PhysicalParams::scaled(Dimension::Three, 1.0, 1.0, 1.0, 1.0, 0.1);
        let o = SolverOptions { radial_nodes: 24, angular_nodes: 96, ..Default::default() };
        let set = find_resonances(&p, 1, &o).unwrap();
        assert!(set.failed.is_empty(), "{:?}", set.failed);
        let r = &set.found[0];
        assert!(r.omega.im < 0.0 && r.omega.im > -0.1);
        assert!(r.residual <= 1e-8);
        let rule = o.rule(Dimension::Three).unwrap();
        assert!((rule.weighted_norm(&r.eigenvector) - 1.0).abs() < 1e-12);
        let op = build_full_operator(&p, r.omega, &rule).unwrap();
        assert!(characteristic_value(&op).unwrap().norm() <= 1e-8);
    }

    #[test]
    fn negative_limiting_frequency_gives_real_root() {
        // Strong coupling pushes ω₁ below zero: a bound state with Im ω = 0.
        let p = PhysicalParams::scaled(Dimension::Three, 1.0, 1.0, 0.2, 1.0, 0.1);
        let o = SolverOptions { radial_nodes: 24, angular_nodes: 96, ..Default::default() };
        let set = find_resonances(&p, 1, &o).unwrap();
        let r = &set.found[0];
        assert!(r.omega.re < 0.0);
        assert!(r.omega.im.abs() <= 1e-9, "{}", r.omega);
    }
}
