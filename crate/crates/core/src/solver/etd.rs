use num_complex::Complex64;

use crate::error::{KsError, Result};
use crate::field::SpectralField;

use super::{Scheme, SolverConfig, StepWeights, Trajectory, BLOW_UP_THRESHOLD};

/// Exponential time differencing for the mild formulation.
///
/// * `etd1`: `u⁺ = e^{hΦ}u + hφ₁(hΦ) N(u)`
/// * `etdrk2`: predictor `a` from `etd1`, then `u⁺ = a + hφ₂(hΦ)(N(a) - N(u))`
///
/// `N` is the dealiased `½(∂_x u)²`. The linear part is integrated exactly.
pub fn etd_march(phi: &SpectralField, cfg: &SolverConfig) -> Result<Trajectory> {
    if cfg.scheme == Scheme::Picard {
        return Err(KsError::invalid("etd_march needs scheme etd1 or etdrk2"));
    }
    cfg.validate()?;
    let grid = phi.grid();
    let hermitian = phi.is_hermitian();
    let weights = StepWeights::new(grid, cfg.params, cfg.dt());
    let times = cfg.times();
    let nonlinear = |u: &SpectralField| -> Vec<Complex64> {
        if cfg.linear_only {
            vec![Complex64::new(0.0, 0.0); grid.len()]
        } else {
            u.nonlinearity().into_coeffs()
        }
    };

    let mut states = Vec::with_capacity(cfg.nt);
    states.push(phi.clone());
    for &t in &times[1..] {
        let u = states.last().unwrap();
        let n0 = nonlinear(u);
        let predictor: Vec<Complex64> = u
            .coeffs()
            .iter()
            .zip(&n0)
            .enumerate()
            .map(|(k, (c, n))| c * weights.decay[k] + n * weights.phi1[k])
            .collect();
        let next = match cfg.scheme {
            Scheme::Etd1 => predictor,
            _ => {
                let a = SpectralField::from_parts(grid, predictor, hermitian);
                let na = nonlinear(&a);
                a.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c + (na[k] - n0[k]) * weights.phi2[k])
                    .collect()
            }
        };
        let next = SpectralField::from_parts(grid, next, hermitian);
        let magnitude = next.max_abs_coeff();
        if !(magnitude <= BLOW_UP_THRESHOLD) {
            return Err(KsError::BlowUp { time: t, magnitude });
        }
        states.push(next);
    }
    Ok(Trajectory::from_parts(times, states, cfg.s))
}
