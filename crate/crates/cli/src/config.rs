//! Run configuration: a strict TOML schema with every default made explicit.
//!
//! ```toml
//! experiment = "resonances"      # optional, must match the subcommand
//! output = "out"                 # optional, --out wins
//!
//! [params]                       # c, g, omega_atom default to 1
//! dim = 3
//! s0 = 1.0                       # or rho0 = ..., not both
//! epsilon = 0.1
//!
//! [numerics]
//! radial_nodes = 64
//! n_modes = 5
//! epsilons = [0.1, 0.05, 0.02]
//! ```
//!
//! Tables `[greens]`, `[bound_states]` and `[dynamics]` configure the
//! experiments of the same name. Unknown keys are rejected everywhere.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use photon_resonance::eigensolver::SolverOptions;
use photon_resonance::greens::Branch;
use photon_resonance::{DensityScale, Dimension, PhysicalParams};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    GreensTable,
    Resonances,
    TraceEpsilon,
    BoundStates,
    AsymptoticsCompare,
    Dynamics,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Self::GreensTable => "greens-table",
            Self::Resonances => "resonances",
            Self::TraceEpsilon => "trace-epsilon",
            Self::BoundStates => "bound-states",
            Self::AsymptoticsCompare => "asymptotics-compare",
            Self::Dynamics => "dynamics",
        }
    }

    /// CSV file written by the experiment.
    pub fn csv_name(self) -> String {
        format!("{}.csv", self.name().replace('-', "_"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub experiment: Option<Experiment>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub greens: GreensConfig,
    #[serde(default)]
    pub bound_states: BoundStatesConfig,
    #[serde(default)]
    pub dynamics: DynamicsConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsConfig {
    pub dim: usize,
    pub c: f64,
    pub g: f64,
    pub omega_atom: f64,
    /// Scaled strength; `ρ₀ = s₀/ε` (2D/3D) or `-s₀/(ε log ε)` (1D).
    pub s0: Option<f64>,
    /// Raw peak density, exclusive with `s0`.
    pub rho0: Option<f64>,
    pub epsilon: f64,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self { dim: 3, c: 1.0, g: 1.0, omega_atom: 1.0, s0: None, rho0: None, epsilon: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Numerics {
    pub radial_nodes: usize,
    /// Defaults to four per radial node.
    pub angular_nodes: Option<usize>,
    pub tol: f64,
    pub max_iter: usize,
    pub residual_tol: f64,
    pub n_modes: usize,
    /// Mode compared by `asymptotics-compare`.
    pub mode: usize,
    /// Strictly decreasing.
    pub epsilons: Vec<f64>,
    /// Relative jump between neighbouring ε flagged as a continuity break.
    pub continuity: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        let s = SolverOptions::default();
        Self {
            radial_nodes: s.radial_nodes,
            angular_nodes: None,
            tol: s.tol,
            max_iter: s.max_iter,
            residual_tol: s.residual_tol,
            n_modes: 5,
            mode: 1,
            epsilons: vec![0.1, 0.08, 0.06, 0.04, 0.02, 0.01],
            continuity: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GreensConfig {
    pub dims: Vec<usize>,
    pub branch: Branch,
    /// Wave numbers as `[re, im]`.
    pub k: Vec<[f64; 2]>,
    pub radii: Vec<f64>,
}

impl Default for GreensConfig {
    fn default() -> Self {
        Self {
            dims: vec![1, 2, 3],
            branch: Branch::Outgoing,
            k: vec![[1.0, 0.0]],
            radii: vec![0.1, 0.5, 1.0, 2.0, 5.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    Square,
    ScaledInclusion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundStatesConfig {
    pub profile: ProfileKind,
    pub rho0: f64,
    pub half_width: f64,
    pub center: f64,
    /// Modes `1..=modes` are searched until one is absent.
    pub modes: usize,
}

impl Default for BoundStatesConfig {
    fn default() -> Self {
        Self { profile: ProfileKind::Square, rho0: 1.0, half_width: 1.0, center: 0.0, modes: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    /// Atoms uniformly excited, no photon.
    ExcitedAtoms,
    /// Gaussian photon packet, atoms in the ground state.
    Packet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DynamicsConfig {
    pub length: f64,
    /// Power of two.
    pub points: usize,
    pub dt: f64,
    pub steps: usize,
    pub record_every: usize,
    /// Defaults to the support `[-ε, ε]`.
    pub window: Option<[f64; 2]>,
    pub initial: InitialState,
    pub packet_center: f64,
    pub packet_wavenumber: f64,
    pub packet_width: f64,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        Self {
            length: 51.2,
            points: 4096,
            dt: 0.01,
            steps: 2000,
            record_every: 10,
            window: None,
            initial: InitialState::ExcitedAtoms,
            packet_center: -5.0,
            packet_wavenumber: 4.0,
            packet_width: 1.0,
        }
    }
}

/// A configuration problem, anchored to a line of the file when possible.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: PathBuf,
    pub line: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(l) => write!(f, "{}:{}: {}", self.path.display(), l, self.message),
            None => write!(f, "{}: {}", self.path.display(), self.message),
        }
    }
}

/// 1-based line of `key` inside `[table]` (top level when `table` is empty).
fn locate(src: &str, table: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, raw) in src.lines().enumerate() {
        let line = raw.trim();
        if let Some(h) = line.strip_prefix('[') {
            current = h.trim_end_matches(']').trim().to_string();
            if key.is_empty() && current == table {
                return Some(i + 1);
            }
            continue;
        }
        if current == table {
            if let Some((k, _)) = line.split_once('=') {
                if k.trim() == key {
                    return Some(i + 1);
                }
            }
        }
    }
    None
}

impl RunConfig {
    /// Parses and validates `src`, filling every default.
    pub fn parse(src: &str, path: &Path) -> Result<Self, ConfigError> {
        let mut cfg: RunConfig = toml::from_str(src).map_err(|e| ConfigError {
            path: path.to_path_buf(),
            line: e.span().map(|s| src[..s.start.min(src.len())].matches('\n').count() + 1),
            message: e.message().to_string(),
        })?;
        cfg.resolve();
        cfg.validate(src, path)?;
        Ok(cfg)
    }

    fn resolve(&mut self) {
        if self.params.s0.is_none() && self.params.rho0.is_none() {
            self.params.s0 = Some(1.0);
        }
        if self.numerics.angular_nodes.is_none() {
            self.numerics.angular_nodes = Some(4 * self.numerics.radial_nodes);
        }
    }

    fn validate(&self, src: &str, path: &Path) -> Result<(), ConfigError> {
        let fail = |table: &str, key: &str, message: String| ConfigError {
            path: path.to_path_buf(),
            line: locate(src, table, key).or_else(|| locate(src, table, "")),
            message,
        };
        let positive = |table: &str, key: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(fail(table, key, format!("{table}.{key} must be positive and finite, got {v}")))
            }
        };
        let p = &self.params;
        Dimension::from_usize(p.dim).map_err(|e| fail("params", "dim", e.to_string()))?;
        positive("params", "c", p.c)?;
        positive("params", "g", p.g)?;
        positive("params", "epsilon", p.epsilon)?;
        if !p.omega_atom.is_finite() {
            return Err(fail("params", "omega_atom", "params.omega_atom must be finite".into()));
        }
        match (p.s0, p.rho0) {
            (Some(_), Some(_)) => return Err(fail("params", "rho0", "set either params.s0 or params.rho0, not both".into())),
            (Some(s), None) => positive("params", "s0", s)?,
            (None, Some(r)) => positive("params", "rho0", r)?,
            (None, None) => unreachable!("resolve fills s0"),
        }
        if p.dim == 1 && p.s0.is_some() && p.epsilon >= 1.0 {
            return Err(fail("params", "epsilon", format!("the 1D scaling needs epsilon < 1, got {}", p.epsilon)));
        }

        let n = &self.numerics;
        positive("numerics", "tol", n.tol)?;
        positive("numerics", "residual_tol", n.residual_tol)?;
        positive("numerics", "continuity", n.continuity)?;
        for (key, v, min) in [
            ("radial_nodes", n.radial_nodes, photon_resonance::nystrom::MIN_RADIAL_NODES),
            ("max_iter", n.max_iter, 1),
            ("n_modes", n.n_modes, 1),
            ("mode", n.mode, 1),
        ] {
            if v < min {
                return Err(fail("numerics", key, format!("numerics.{key} must be at least {min}, got {v}")));
            }
        }
        let ang = n.angular_nodes.expect("resolved");
        if ang < 2 || !ang.is_multiple_of(2) {
            return Err(fail("numerics", "angular_nodes", format!("numerics.angular_nodes must be even and ≥ 2, got {ang}")));
        }
        if n.epsilons.is_empty() || n.epsilons.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(fail("numerics", "epsilons", "numerics.epsilons must be a non-empty list of positive values".into()));
        }
        if n.epsilons.windows(2).any(|w| w[1] >= w[0]) {
            return Err(fail("numerics", "epsilons", "numerics.epsilons must be strictly decreasing".into()));
        }

        let g = &self.greens;
        if g.dims.is_empty() || g.dims.iter().any(|d| !(1..=3).contains(d)) {
            return Err(fail("greens", "dims", "greens.dims must list dimensions from 1 to 3".into()));
        }
        if g.radii.is_empty() || g.radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(fail("greens", "radii", "greens.radii must be a non-empty list of positive values".into()));
        }
        if g.k.is_empty() || g.k.iter().flatten().any(|v| !v.is_finite()) {
            return Err(fail("greens", "k", "greens.k must be a non-empty list of finite [re, im] pairs".into()));
        }

        let b = &self.bound_states;
        positive("bound_states", "rho0", b.rho0)?;
        positive("bound_states", "half_width", b.half_width)?;
        if !b.center.is_finite() {
            return Err(fail("bound_states", "center", "bound_states.center must be finite".into()));
        }
        if b.modes == 0 {
            return Err(fail("bound_states", "modes", "bound_states.modes must be at least 1".into()));
        }

        let d = &self.dynamics;
        positive("dynamics", "length", d.length)?;
        positive("dynamics", "dt", d.dt)?;
        positive("dynamics", "packet_width", d.packet_width)?;
        if d.points < 2 || !d.points.is_power_of_two() {
            return Err(fail("dynamics", "points", format!("dynamics.points must be a power of two, got {}", d.points)));
        }
        if d.record_every == 0 {
            return Err(fail("dynamics", "record_every", "dynamics.record_every must be at least 1".into()));
        }
        if let Some([a, b]) = d.window {
            if !(a < b) {
                return Err(fail("dynamics", "window", format!("dynamics.window needs a < b, got [{a}, {b}]")));
            }
        }
        Ok(())
    }

    pub fn physical_params(&self) -> PhysicalParams {
        let p = &self.params;
        let dim = Dimension::from_usize(p.dim).expect("validated");
        let density = match (p.s0, p.rho0) {
            (_, Some(r)) => DensityScale::Raw(r),
            (s, None) => DensityScale::Scaled(s.unwrap_or(1.0)),
        };
        PhysicalParams { c: p.c, g: p.g, omega_atom: p.omega_atom, density, epsilon: p.epsilon, dim }
    }

    pub fn solver_options(&self, threads: usize) -> SolverOptions {
        let n = &self.numerics;
        SolverOptions {
            radial_nodes: n.radial_nodes,
            angular_nodes: n.angular_nodes.unwrap_or(4 * n.radial_nodes),
            tol: n.tol,
            max_iter: n.max_iter,
            residual_tol: n.residual_tol,
            threads,
        }
    }
}
