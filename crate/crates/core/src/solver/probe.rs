use crate::error::{KsError, Result};
use crate::field::SpectralField;

use super::{picard_solve, Scheme, SolverConfig};

/// Polarized second difference of the data-to-solution map at zero.
///
/// Returns `[S(ε(φ+ψ)) + S(-ε(φ+ψ)) - S(ε(φ-ψ)) - S(-ε(φ-ψ))] / (4ε²)` at
/// time `cfg.t_final`, which tends to `2∫_0^t E_μ(t-τ) b(E_μφ, E_μψ) dτ`
/// with `b(u, v) = ½ ∂_x u ∂_x v` as `ε → 0`.
pub fn second_derivative_probe(
    phi: &SpectralField,
    psi: &SpectralField,
    eps: f64,
    cfg: &SolverConfig,
) -> Result<SpectralField> {
    if !(eps > 0.0) {
        return Err(KsError::invalid(format!("eps must be positive, got {eps}")));
    }
    let cfg = SolverConfig {
        scheme: Scheme::Picard,
        ..cfg.clone()
    };
    let sum = phi + psi;
    let diff = phi - psi;
    let solve = |data: &SpectralField, sign: f64| -> Result<SpectralField> {
        let out = picard_solve(&data.scaled(sign * eps), &cfg)?;
        Ok(out.trajectory.final_state().clone())
    };
    let plus = &solve(&sum, 1.0)? + &solve(&sum, -1.0)?;
    let minus = &solve(&diff, 1.0)? + &solve(&diff, -1.0)?;
    Ok((&plus - &minus).scaled(1.0 / (4.0 * eps * eps)))
}
