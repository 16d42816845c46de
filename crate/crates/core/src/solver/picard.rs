use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{KsError, Result};
use crate::field::SpectralField;
use crate::symbol::PhiSymbol;

use super::{duhamel_all, x_norm, Scheme, SolverConfig, StepWeights, Trajectory};

/// Result of a converged Picard iteration.
#[derive(Debug, Clone)]
pub struct PicardOutcome {
    pub trajectory: Trajectory,
    pub iterations: usize,
    /// `||u^{(m)} - u^{(m-1)}||_{X_T^s}` for `m = 1, 2, ...`
    pub distances: Vec<f64>,
    /// Successive-distance ratios `d_m / d_{m-1}`.
    pub ratios: Vec<f64>,
}

/// Shared per-window data for applications of the integral map.
struct MildMap {
    linear: Vec<Vec<Complex64>>,
    weights: StepWeights,
    times: Vec<f64>,
    hermitian: bool,
    linear_only: bool,
}

impl MildMap {
    fn new(phi: &SpectralField, cfg: &SolverConfig) -> Self {
        let grid = phi.grid();
        let symbol = PhiSymbol::new(cfg.params).on_grid(grid);
        let times = cfg.times();
        let linear = times
            .iter()
            .map(|&t| {
                phi.coeffs()
                    .iter()
                    .zip(&symbol)
                    .map(|(c, lam)| c * (t * lam).exp())
                    .collect()
            })
            .collect();
        Self {
            linear,
            weights: StepWeights::new(grid, cfg.params, cfg.dt()),
            times,
            hermitian: phi.is_hermitian(),
            linear_only: cfg.linear_only,
        }
    }

    fn linear_trajectory(&self, phi: &SpectralField, cfg: &SolverConfig) -> Trajectory {
        let states = self
            .linear
            .iter()
            .map(|c| SpectralField::from_parts(phi.grid(), c.clone(), self.hermitian))
            .collect();
        Trajectory::from_parts(self.times.clone(), states, cfg.s)
    }

    fn apply(&self, u: &Trajectory) -> Trajectory {
        let grid = u.grid().clone();
        if self.linear_only {
            let states = self
                .linear
                .iter()
                .map(|c| SpectralField::from_parts(&grid, c.clone(), self.hermitian))
                .collect();
            return Trajectory::from_parts(self.times.clone(), states, u.s());
        }
        let forcing: Vec<Vec<Complex64>> = u
            .states()
            .par_iter()
            .map(|state| state.nonlinearity().into_coeffs())
            .collect();
        let integrals = duhamel_all(&forcing, &self.weights);
        let states = self
            .linear
            .iter()
            .zip(integrals)
            .map(|(lin, mut int)| {
                for (a, b) in int.iter_mut().zip(lin) {
                    *a += b;
                }
                SpectralField::from_parts(&grid, int, self.hermitian)
            })
            .collect();
        Trajectory::from_parts(self.times.clone(), states, u.s())
    }
}

/// One application of `F_μ(u)(t) = E_μ(t)φ + ½∫_0^t E_μ(t-τ)(∂_x u)²(τ)dτ`.
pub fn mild_map(phi: &SpectralField, u: &Trajectory, cfg: &SolverConfig) -> Result<Trajectory> {
    cfg.validate()?;
    if u.len() != cfg.nt || u.grid() != phi.grid() {
        return Err(KsError::invalid("trajectory does not match the solver time grid"));
    }
    Ok(MildMap::new(phi, cfg).apply(u))
}

/// Fixed-point iteration of the integral map starting from `E_μ(t)φ`.
///
/// Stops once successive iterates are within `cfg.tol` in `X_T^s`. Fails with
/// [`KsError::NonContraction`] when the distance does not decrease three times
/// in a row or `cfg.max_iter` is exhausted.
pub fn picard_solve(phi: &SpectralField, cfg: &SolverConfig) -> Result<PicardOutcome> {
    if cfg.scheme != Scheme::Picard {
        return Err(KsError::invalid(format!("picard_solve called with scheme {}", cfg.scheme)));
    }
    cfg.validate()?;
    let map = MildMap::new(phi, cfg);
    let mut u = map.linear_trajectory(phi, cfg);
    let mut distances = Vec::new();
    let mut ratios = Vec::new();
    let mut stalls = 0;
    for iteration in 1..=cfg.max_iter {
        let next = map.apply(&u);
        let distance = x_norm(&next.difference(&u)?).x_norm;
        if !distance.is_finite() {
            return Err(non_contraction(cfg, iteration, distance));
        }
        if let Some(&prev) = distances.last() {
            ratios.push(if prev > 0.0 { distance / prev } else { 0.0 });
            if distance >= prev {
                stalls += 1;
            } else {
                stalls = 0;
            }
        }
        distances.push(distance);
        u = next;
        if distance < cfg.tol {
            return Ok(PicardOutcome {
                trajectory: u,
                iterations: iteration,
                distances,
                ratios,
            });
        }
        if stalls >= 3 {
            return Err(non_contraction(cfg, iteration, distance));
        }
    }
    Err(non_contraction(cfg, cfg.max_iter, *distances.last().unwrap_or(&f64::NAN)))
}

fn non_contraction(cfg: &SolverConfig, iterations: usize, last_distance: f64) -> KsError {
    KsError::NonContraction {
        window_start: 0.0,
        window_end: cfg.t_final,
        iterations,
        last_distance,
    }
}
