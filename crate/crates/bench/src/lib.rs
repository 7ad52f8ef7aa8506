//! Fixtures shared by the benchmarks.

use photon_resonance::dynamics::{excited_atoms, FieldState, Grid};
use photon_resonance::{DensityScale, Dimension, PhysicalParams};

/// Unit constants with `s₀ = 1`, `ε = 0.1` (the five-mode 3D setting).
pub fn small_inclusion(dim: Dimension) -> PhysicalParams {
    let s0 = if dim == Dimension::One { 0.5 } else { 1.0 };
    PhysicalParams::scaled(dim, 1.0, 1.0, 1.0, s0, 0.1)
}

/// 1D square density of height 1 on `[-1, 1]`.
pub fn unit_slab() -> PhysicalParams {
    PhysicalParams { density: DensityScale::Raw(1.0), ..PhysicalParams::scaled(Dimension::One, 1.0, 1.0, 1.0, 1.0, 1.0) }
}

/// Excited atoms on a grid of `points` nodes over `[-25.6, 25.6)`.
pub fn excited_slab(points: usize) -> (Grid, FieldState) {
    let grid = Grid::new(51.2, points).expect("power of two");
    let state = excited_atoms(grid, &unit_slab()).expect("support is resolved");
    (grid, state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid() {
        for d in [Dimension::One, Dimension::Two, Dimension::Three] {
            small_inclusion(d).validate().unwrap();
        }
        let (_, s) = excited_slab(1024);
        assert!((s.mass() - 1.0).abs() < 1e-14);
    }
}
