//! Physical constants of one problem instance.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::{Error, Result};

/// Spatial dimension of the atomic cloud.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Dimension {
    One,
    Two,
    Three,
}

impl Dimension {
    pub fn as_usize(self) -> usize {
        match self {
            Dimension::One => 1,
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }

    pub fn from_usize(d: usize) -> Result<Self> {
        match d {
            1 => Ok(Dimension::One),
            2 => Ok(Dimension::Two),
            3 => Ok(Dimension::Three),
            _ => Err(Error::Invalid(format!("dimension must be 1, 2 or 3, got {d}"))),
        }
    }

    /// Volume of the unit ball `B₁` (length 2 in 1D).
    pub fn unit_ball_volume(self) -> f64 {
        match self {
            Dimension::One => 2.0,
            Dimension::Two => PI,
            Dimension::Three => 4.0 * PI / 3.0,
        }
    }

    /// Surface measure of the unit sphere in this dimension (`2`, `2π`, `4π`).
    pub fn unit_sphere_area(self) -> f64 {
        match self {
            Dimension::One => 2.0,
            Dimension::Two => 2.0 * PI,
            Dimension::Three => 4.0 * PI,
        }
    }
}

impl TryFrom<u8> for Dimension {
    type Error = Error;
    fn try_from(d: u8) -> Result<Self> {
        Dimension::from_usize(d as usize)
    }
}

impl From<Dimension> for u8 {
    fn from(d: Dimension) -> u8 {
        d.as_usize() as u8
    }
}

/// How the peak atomic density is specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityScale {
    /// Density `ρ₀` given directly.
    Raw(f64),
    /// Scaled strength `s₀`: `ρ₀ = s₀/ε` in 2D/3D, `ρ₀ = -s₀/(ε log ε)` in 1D.
    Scaled(f64),
}

/// Constants of one problem instance. The inclusion is `B_ε = ε B₁` with
/// `B₁` the unit ball (the interval `[-1, 1]` in 1D), density `ρ₀` on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Wave speed `c`.
    pub c: f64,
    /// Coupling `g`.
    pub g: f64,
    /// Atomic resonance frequency `Ω`.
    pub omega_atom: f64,
    pub density: DensityScale,
    /// Inclusion radius `ε`.
    pub epsilon: f64,
    pub dim: Dimension,
}

impl PhysicalParams {
    /// Scaled-density instance, the usual setting for small inclusions.
    pub fn scaled(dim: Dimension, c: f64, g: f64, omega_atom: f64, s0: f64, epsilon: f64) -> Self {
        Self {
            c,
            g,
            omega_atom,
            density: DensityScale::Scaled(s0),
            epsilon,
            dim,
        }
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Self {
        Self { epsilon, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64, name: &str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Invalid(format!("{name} must be finite and > 0, got {v}")))
            }
        };
        pos(self.c, "c")?;
        pos(self.g, "g")?;
        pos(self.epsilon, "epsilon")?;
        if !self.omega_atom.is_finite() {
            return Err(Error::Invalid("omega_atom must be finite".into()));
        }
        match self.density {
            DensityScale::Raw(r) => pos(r, "rho0")?,
            DensityScale::Scaled(s) => {
                pos(s, "s0")?;
                if self.dim == Dimension::One && self.epsilon >= 1.0 {
                    return Err(Error::Invalid(format!(
                        "1D scaling needs epsilon < 1, got {}",
                        self.epsilon
                    )));
                }
            }
        }
        Ok(())
    }

    /// Peak density `ρ₀` after applying the scaling law.
    pub fn rho0(&self) -> f64 {
        match self.density {
            DensityScale::Raw(r) => r,
            DensityScale::Scaled(s) => match self.dim {
                Dimension::One => -s / (self.epsilon * self.epsilon.ln()),
                _ => s / self.epsilon,
            },
        }
    }

    /// `s₀`, recovered from `ρ₀` when the density was given raw.
    pub fn s0(&self) -> f64 {
        match self.density {
            DensityScale::Scaled(s) => s,
            DensityScale::Raw(r) => match self.dim {
                Dimension::One => -r * self.epsilon * self.epsilon.ln(),
                _ => r * self.epsilon,
            },
        }
    }

    /// Volume of the inclusion `|B_ε|`.
    pub fn inclusion_volume(&self) -> f64 {
        self.dim.unit_ball_volume() * self.epsilon.powi(self.dim.as_usize() as i32)
    }
}
