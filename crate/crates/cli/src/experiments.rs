//! One function per subcommand. Each returns the CSV rows it produced; a
//! solver failure part-way through keeps the rows found so far and marks the
//! outcome as non-converged, while invalid input aborts with no output.

use num_complex::Complex64 as C64;
use photon_resonance::asymptotics::{
    limiting_modes, resonance_expansion_1d, resonance_expansion_2d, resonance_expansion_3d,
};
use photon_resonance::boundstates::{
    bs_rule, no_bound_state_condition, sobolev_threshold, solve_bound_state, square_strength, DensityProfile,
};
use photon_resonance::dynamics::{density_samples, excited_atoms, survival_probability, Evolver, FieldState, Grid};
use photon_resonance::eigensolver::{find_resonances, trace_in_epsilon};
use photon_resonance::greens::{self, WaveNumber};
use photon_resonance::{Dimension, Error, PhysicalParams};
use rayon::prelude::*;

use crate::config::{Experiment, InitialState, ProfileKind, RunConfig};

/// Fixed-width scientific notation with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    NonConvergence,
}

#[derive(Debug)]
pub struct Outcome {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
    pub status: Status,
    pub diagnostics: Vec<String>,
}

impl Outcome {
    fn new(header: &'static [&'static str]) -> Self {
        Self { header, rows: Vec::new(), status: Status::Ok, diagnostics: Vec::new() }
    }

    fn fail(&mut self, msg: String) {
        self.status = Status::NonConvergence;
        self.diagnostics.push(msg);
    }

    /// Files a library error: solver trouble is recorded, bad input aborts.
    fn absorb(&mut self, e: Error) -> Result<(), String> {
        match e {
            Error::NoConvergence(_) | Error::Eigen(_) | Error::NonFinite(_) => {
                self.fail(e.to_string());
                Ok(())
            }
            Error::Invalid(_) | Error::Domain(_) | Error::NotFound(_) => Err(e.to_string()),
        }
    }
}

pub fn run(exp: Experiment, cfg: &RunConfig, threads: usize) -> Result<Outcome, String> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
    match exp {
        Experiment::GreensTable => greens_table(cfg),
        Experiment::Resonances => resonances(cfg, threads),
        Experiment::TraceEpsilon => pool.install(|| trace(cfg)),
        Experiment::BoundStates => bound_states(cfg),
        Experiment::AsymptoticsCompare => pool.install(|| asymptotics_compare(cfg)),
        Experiment::Dynamics => dynamics(cfg),
    }
}

fn greens_table(cfg: &RunConfig) -> Result<Outcome, String> {
    let mut out = Outcome::new(&["d", "re_k", "im_k", "r", "re_G", "im_G"]);
    let g = &cfg.greens;
    for &d in &g.dims {
        let dim = Dimension::from_usize(d).map_err(|e| e.to_string())?;
        for &[re, im] in &g.k {
            let k = WaveNumber::new(C64::new(re, im), g.branch).map_err(|e| e.to_string())?;
            for &r in &g.radii {
                let v = greens::green(dim, k, r).map_err(|e| e.to_string())?;
                out.rows.push(vec![d.to_string(), num(re), num(im), num(r), num(v.re), num(v.im)]);
            }
        }
    }
    Ok(out)
}

fn resonances(cfg: &RunConfig, threads: usize) -> Result<Outcome, String> {
    let mut out = Outcome::new(&["j", "re_omega", "im_omega", "residual", "iterations"]);
    let params = cfg.physical_params();
    let set = match find_resonances(&params, cfg.numerics.n_modes, &cfg.solver_options(threads)) {
        Ok(s) => s,
        Err(e) => {
            out.absorb(e)?;
            return Ok(out);
        }
    };
    for r in &set.found {
        out.rows.push(vec![r.mode.to_string(), num(r.omega.re), num(r.omega.im), num(r.residual), r.iterations.to_string()]);
    }
    for f in &set.failed {
        let best = f.best.map(|b| format!(", best iterate {b}")).unwrap_or_default();
        out.fail(format!("mode {} from seed {}: {}{best}", f.mode, f.seed, f.reason));
    }
    Ok(out)
}

fn trace(cfg: &RunConfig) -> Result<Outcome, String> {
    let mut out = Outcome::new(&["j", "epsilon", "re_omega", "im_omega"]);
    let params = cfg.physical_params();
    let opts = cfg.solver_options(1);
    let n = &cfg.numerics;
    let traces: Vec<_> = (1..=n.n_modes)
        .into_par_iter()
        .map(|j| trace_in_epsilon(&params, j, &n.epsilons, n.continuity, &opts))
        .collect();
    for (j, t) in (1..).zip(traces) {
        let t = match t {
            Ok(t) => t,
            Err(e) => {
                out.absorb(e)?;
                continue;
            }
        };
        for (eps, r) in t.epsilons.iter().zip(&t.results) {
            out.rows.push(vec![j.to_string(), num(*eps), num(r.omega.re), num(r.omega.im)]);
        }
        for &i in &t.continuity_breaks {
            out.diagnostics.push(format!("mode {j}: continuity break at ε = {}", t.epsilons[i]));
        }
        if let Some((eps, why)) = t.failure {
            out.fail(format!("mode {j} at ε = {eps}: {why}"));
        }
    }
    Ok(out)
}

fn bound_states(cfg: &RunConfig) -> Result<Outcome, String> {
    let mut out = Outcome::new(&["mode", "omega", "mu_check"]);
    let params = cfg.physical_params();
    let b = &cfg.bound_states;
    let profile = match b.profile {
        ProfileKind::Square => DensityProfile::square(params.dim, b.rho0, b.half_width, b.center),
        ProfileKind::ScaledInclusion => Ok(DensityProfile::scaled_inclusion(&params)),
    }
    .map_err(|e| e.to_string())?;
    if b.profile == ProfileKind::Square && params.dim != Dimension::One {
        let d = params.dim.as_usize();
        let strength = square_strength(&profile, &params).map_err(|e| e.to_string())?;
        let sd = sobolev_threshold(d).map_err(|e| e.to_string())?;
        let none = no_bound_state_condition(&profile, &params).map_err(|e| e.to_string())?;
        out.diagnostics.push(format!(
            "2g²ρ₀R/(Ωc) = {strength}, S_{d} = {sd}: {}",
            if none { "no bound states expected" } else { "threshold exceeded, bound states possible" }
        ));
    }
    let rule = bs_rule(params.dim, cfg.numerics.radial_nodes).map_err(|e| e.to_string())?;
    for n in 1..=b.modes {
        match solve_bound_state(&profile, &params, n, &rule) {
            Ok(s) => out.rows.push(vec![n.to_string(), num(s.omega), num(s.mu_check)]),
            Err(Error::NotFound(msg)) => {
                // μ_{n+1} ≤ μₙ, so no later mode can cross either.
                out.diagnostics.push(msg);
                break;
            }
            Err(e) => {
                out.absorb(e)?;
                break;
            }
        }
    }
    Ok(out)
}

fn asymptotics_compare(cfg: &RunConfig) -> Result<Outcome, String> {
    let mut out = Outcome::new(&["epsilon", "re_num", "im_num", "re_asym", "im_asym"]);
    let params = cfg.physical_params();
    let opts = cfg.solver_options(1);
    let j = cfg.numerics.mode;
    if params.dim == Dimension::One && j != 1 {
        return Err("the 1D expansion describes mode 1 only".into());
    }
    let limiting = match params.dim {
        Dimension::One => None,
        d => {
            let rule = opts.rule(d).map_err(|e| e.to_string())?;
            let modes = limiting_modes(&params, j, &rule).map_err(|e| e.to_string())?;
            Some(modes[j - 1].clone())
        }
    };
    let asym = |eps: f64| -> Result<C64, Error> {
        let p = params.with_epsilon(eps);
        match (params.dim, &limiting) {
            (Dimension::One, _) => resonance_expansion_1d(&p, eps),
            (Dimension::Two, Some(m)) => resonance_expansion_2d(m, &p, eps),
            (Dimension::Three, Some(m)) => resonance_expansion_3d(m, &p, eps),
            _ => unreachable!("limiting modes exist for d = 2, 3"),
        }
    };
    let solved: Vec<_> = cfg
        .numerics
        .epsilons
        .par_iter()
        .map(|&eps| {
            let set = find_resonances(&params.with_epsilon(eps), j, &opts)?;
            Ok((eps, set.found.into_iter().find(|r| r.mode == j), set.failed))
        })
        .collect::<Vec<Result<_, Error>>>();
    for s in solved {
        let (eps, hit, failed) = match s {
            Ok(v) => v,
            Err(e) => {
                out.absorb(e)?;
                continue;
            }
        };
        let Some(r) = hit else {
            let why = failed.iter().find(|f| f.mode == j).map(|f| f.reason.clone()).unwrap_or_default();
            out.fail(format!("mode {j} at ε = {eps}: {why}"));
            continue;
        };
        let a = asym(eps).map_err(|e| e.to_string())?;
        out.rows.push(vec![num(eps), num(r.omega.re), num(r.omega.im), num(a.re), num(a.im)]);
    }
    Ok(out)
}

fn initial_state(cfg: &RunConfig, grid: Grid, params: &PhysicalParams) -> Result<FieldState, Error> {
    let d = &cfg.dynamics;
    match d.initial {
        InitialState::ExcitedAtoms => excited_atoms(grid, params),
        InitialState::Packet => {
            let psi = grid
                .nodes()
                .iter()
                .map(|&x| {
                    let u = (x - d.packet_center) / d.packet_width;
                    C64::from_polar((-u * u).exp(), d.packet_wavenumber * x)
                })
                .collect();
            FieldState::new(grid, psi, vec![C64::default(); grid.len()])?.normalized()
        }
    }
}

fn dynamics(cfg: &RunConfig) -> Result<Outcome, String> {
    let mut out = Outcome::new(&["t", "mass", "window_mass", "survival"]);
    let params = cfg.physical_params();
    if params.dim != Dimension::One {
        return Err("dynamics runs in one dimension only; set params.dim = 1".into());
    }
    let d = &cfg.dynamics;
    let grid = Grid::new(d.length, d.points).map_err(|e| e.to_string())?;
    if density_samples(&grid, &params).iter().all(|&r| r == 0.0) {
        return Err(format!("the grid spacing {} does not resolve the support of radius {}", grid.dx(), params.epsilon));
    }
    let [a, b] = d.window.unwrap_or([-params.epsilon, params.epsilon]);
    let s0 = initial_state(cfg, grid, &params).map_err(|e| e.to_string())?;
    let mut ev = Evolver::new(grid, &params, d.dt).map_err(|e| e.to_string())?;
    let mut step = 0usize;
    let rows = &mut out.rows;
    let result = ev.run(&s0, d.steps, |s| {
        if step.is_multiple_of(d.record_every) || step == d.steps {
            rows.push(vec![num(s.t), num(s.mass()), num(s.window_mass(a, b)), num(survival_probability(&s0, s))]);
        }
        step += 1;
    });
    if let Err(e) = result {
        out.absorb(e)?;
    }
    Ok(out)
}
