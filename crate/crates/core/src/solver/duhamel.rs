//! Exponential product integration of `∫_0^{t_j} E_μ(t_j - τ) g(τ) dτ`.
//!
//! On each subinterval `g` is interpolated linearly and the integral against
//! `e^{(t-τ)Φ(k)}` is taken exactly per mode:
//! `∫_0^h e^{(h-σ)Φ} (g_i + (g_{i+1} - g_i) σ/h) dσ = h(φ₁ - φ₂) g_i + h φ₂ g_{i+1}`
//! with `φ_p = φ_p(hΦ(k))`.

use num_complex::Complex64;

use crate::error::{KsError, Result};
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::symbol::{phi_functions, PhiSymbol, SymbolParams};

use super::trajectory::Trajectory;

/// Per-mode weights for a uniform step `h`.
#[derive(Debug, Clone)]
pub(crate) struct StepWeights {
    /// `e^{hΦ(k)}`
    pub decay: Vec<f64>,
    /// `h φ₁(hΦ(k))`
    pub phi1: Vec<f64>,
    /// `h φ₂(hΦ(k))`
    pub phi2: Vec<f64>,
}

impl StepWeights {
    pub fn new(grid: &Grid, params: SymbolParams, h: f64) -> Self {
        let symbol = PhiSymbol::new(params).on_grid(grid);
        let mut decay = Vec::with_capacity(symbol.len());
        let mut phi1 = Vec::with_capacity(symbol.len());
        let mut phi2 = Vec::with_capacity(symbol.len());
        for lam in symbol {
            let z = h * lam;
            let (p1, p2) = phi_functions(z);
            decay.push(z.exp());
            phi1.push(h * p1);
            phi2.push(h * p2);
        }
        Self { decay, phi1, phi2 }
    }
}

/// Duhamel integrals at every node of a uniform time grid, `I_0 = 0`.
pub(crate) fn duhamel_all(forcing: &[Vec<Complex64>], weights: &StepWeights) -> Vec<Vec<Complex64>> {
    let n = weights.decay.len();
    let mut out = Vec::with_capacity(forcing.len());
    let mut acc = vec![Complex64::new(0.0, 0.0); n];
    out.push(acc.clone());
    for pair in forcing.windows(2) {
        let (g0, g1) = (&pair[0], &pair[1]);
        for k in 0..n {
            let w1 = weights.phi2[k];
            let w0 = weights.phi1[k] - w1;
            acc[k] = acc[k] * weights.decay[k] + g0[k] * w0 + g1[k] * w1;
        }
        out.push(acc.clone());
    }
    out
}

fn uniform_step(times: &[f64]) -> Result<f64> {
    if times.len() < 2 {
        return Ok(0.0);
    }
    let h = times[1] - times[0];
    let tol = 1e-9 * h;
    if times.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > tol) || (times[0]).abs() > tol {
        return Err(KsError::invalid("Duhamel quadrature needs uniform nodes starting at t = 0"));
    }
    Ok(h)
}

/// `∫_0^{t_j} E_μ(t_j - τ) g(τ) dτ` for a forcing stored on uniform nodes.
pub fn duhamel_integral(forcing: &Trajectory, t_index: usize, params: SymbolParams) -> Result<SpectralField> {
    if t_index >= forcing.len() {
        return Err(KsError::invalid(format!(
            "node {t_index} outside forcing of length {}",
            forcing.len()
        )));
    }
    let grid = forcing.grid();
    let h = uniform_step(forcing.times())?;
    let hermitian = forcing.states().iter().all(SpectralField::is_hermitian);
    if t_index == 0 {
        return Ok(SpectralField::zeros(grid, hermitian));
    }
    let weights = StepWeights::new(grid, params, h);
    let coeffs: Vec<Vec<Complex64>> = forcing.states()[..=t_index]
        .iter()
        .map(|f| f.coeffs().to_vec())
        .collect();
    let mut all = duhamel_all(&coeffs, &weights);
    Ok(SpectralField::from_parts(grid, all.pop().unwrap(), hermitian))
}
