//! Shared fixtures for the kernel benchmarks.

use ks_core::{Grid, Scheme, SolverConfig, SpectralField, SymbolParams};

/// Gaussian bump `A exp(-(x - L)²)` centred in the period.
pub fn gaussian(n: usize, amplitude: f64) -> SpectralField {
    let grid = Grid::new(32.0, n).expect("valid grid");
    let centre = grid.half_length();
    SpectralField::sample_real(&grid, |x| amplitude * (-(x - centre).powi(2)).exp())
}

pub fn config(t_final: f64, nt: usize, scheme: Scheme) -> SolverConfig {
    SolverConfig {
        t_final,
        nt,
        params: SymbolParams::default(),
        scheme,
        ..SolverConfig::default()
    }
}
