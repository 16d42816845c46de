use crate::error::{KsError, Result};
use crate::field::SpectralField;
use crate::solver::{solve, SolverConfig, Trajectory};
use crate::symbol::SymbolParams;

use super::scan::ScanReport;

/// Node-wise residuals of the two energy identities, interior nodes only.
///
/// With `w = ∂_x u` and centered time differences:
///
/// * `residual_w = |d/dt‖w‖² + 2‖∂_x w‖² - 2μ‖w‖²_{H^{-1/2}}|`
/// * `residual_u = |d/dt‖u‖² - 2<u, ∂²u> - <u, (∂u)²> - 2μ<u, (1-∂²)^{-1/2}u>|`
///
/// When `μ = 0` a check that `‖∂_x u‖` never increases is added.
pub fn energy_residuals(traj: &Trajectory, params: SymbolParams) -> ScanReport {
    let mu = params.mu();
    let times = traj.times();
    let states = traj.states();
    let w_sq: Vec<f64> = states.iter().map(|u| u.derivative(1).l2_norm().powi(2)).collect();
    let u_sq: Vec<f64> = states.iter().map(|u| u.l2_norm().powi(2)).collect();

    let mut abscissae = Vec::new();
    let mut res_w = Vec::new();
    let mut res_u = Vec::new();
    for j in 1..times.len().saturating_sub(1) {
        let dt = times[j + 1] - times[j - 1];
        let u = &states[j];
        let w = u.derivative(1);
        let rhs_w = -2.0 * w.derivative(1).l2_norm().powi(2) + 2.0 * mu * w.sobolev_norm(-0.5).powi(2);
        let rhs_u = 2.0 * u.inner(&u.derivative(2)).re
            + u.inner(&u.nonlinearity().scaled(2.0)).re
            + 2.0 * mu * u.inner(&u.bessel_potential(-1.0)).re;
        abscissae.push(times[j]);
        res_w.push(((w_sq[j + 1] - w_sq[j - 1]) / dt - rhs_w).abs());
        res_u.push(((u_sq[j + 1] - u_sq[j - 1]) / dt - rhs_u).abs());
    }
    let max_w = res_w.iter().copied().fold(0.0, f64::max);
    let max_u = res_u.iter().copied().fold(0.0, f64::max);
    let mut report = ScanReport::new("t", abscissae);
    report.push_series("residual_w", res_w);
    report.push_series("residual_u", res_u);
    report.check("max_residual_w", max_w, f64::INFINITY, max_w.is_finite());
    report.check("max_residual_u", max_u, f64::INFINITY, max_u.is_finite());
    if mu == 0.0 {
        let dx: Vec<f64> = w_sq.iter().map(|v| v.sqrt()).collect();
        let worst = dx
            .windows(2)
            .map(|p| (p[1] - p[0]) / p[0].max(f64::MIN_POSITIVE))
            .fold(f64::NEG_INFINITY, f64::max);
        report.check("dx_nonincreasing", worst, 1e-12, dx.len() < 2 || worst <= 1e-12);
    }
    report
}

/// Minimum accepted convergence order of the residuals.
pub const ENERGY_MIN_ORDER: f64 = 1.8;

/// Max residuals for `nt_j = (nt - 1)·2^j + 1`, `j < levels`, and their order in `Δt`.
pub fn energy_convergence(phi: &SpectralField, cfg: &SolverConfig, levels: usize) -> Result<ScanReport> {
    if levels < 3 {
        return Err(KsError::invalid("energy convergence study needs at least 3 levels"));
    }
    let mut dts = Vec::new();
    let mut max_w = Vec::new();
    let mut max_u = Vec::new();
    for j in 0..levels {
        let run = SolverConfig {
            nt: (cfg.nt - 1) * (1 << j) + 1,
            ..cfg.clone()
        };
        let traj = solve(phi, &run).map_err(|e| e.at("nt", run.nt as f64))?;
        let report = energy_residuals(&traj, cfg.params);
        dts.push(run.dt());
        max_w.push(report.checks[0].measured);
        max_u.push(report.checks[1].measured);
    }
    let mut report = ScanReport::new("dt", dts);
    report.push_series("max_residual_w", max_w);
    report.push_series("max_residual_u", max_u);
    for name in ["max_residual_w", "max_residual_u"] {
        let slope = report.fit_loglog(name).map(|f| f.slope).unwrap_or(f64::NAN);
        report.check(format!("{name}.order"), slope, ENERGY_MIN_ORDER, slope >= ENERGY_MIN_ORDER);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    #[test]
    fn zero_trajectory_has_zero_residuals() {
        let grid = Grid::new(8.0, 32).unwrap();
        let zero = SpectralField::zeros(&grid, true);
        let traj = Trajectory::new(vec![0.0, 0.1, 0.2, 0.3], vec![zero; 4], 0.75).unwrap();
        let report = energy_residuals(&traj, SymbolParams::new(0.0).unwrap());
        assert_eq!(report.abscissae, vec![0.1, 0.2]);
        assert!(report.series("residual_w").unwrap().iter().all(|v| *v == 0.0));
        assert!(report.series("residual_u").unwrap().iter().all(|v| *v == 0.0));
        assert!(report.all_pass());
    }
}
