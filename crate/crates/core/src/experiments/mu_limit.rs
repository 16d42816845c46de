use rayon::prelude::*;

use crate::error::{KsError, Result};
use crate::field::SpectralField;
use crate::solver::{solve, SolverConfig};
use crate::symbol::SymbolParams;

use super::scan::ScanReport;

/// `D(μ) = max_j ‖u_μ(t_j) - u_0(t_j)‖_{H^s}` for each `μ` in a descending list.
///
/// Checks that `D` strictly decreases along the list and, when
/// `μ_max/μ_min >= 8`, that `D(μ_min) <= D(μ_max)/4`. The log-log slope of
/// `D` against `μ` is fitted and reported only.
pub fn mu_limit_experiment(phi: &SpectralField, mu_list: &[f64], cfg: &SolverConfig) -> Result<ScanReport> {
    let s = cfg.s.0;
    if !(s > 0.5 && s < 1.0) {
        return Err(KsError::invalid(format!("mu limit needs 1/2 < s < 1, got {s}")));
    }
    if mu_list.is_empty() {
        return Err(KsError::invalid("mu list is empty"));
    }
    if mu_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(KsError::invalid("mu list must be strictly descending"));
    }
    let run = |mu: f64| -> Result<_> {
        let params = SymbolParams::new(mu)?;
        solve(phi, &SolverConfig { params, ..cfg.clone() }).map_err(|e| e.at("mu", mu))
    };
    let reference = run(0.0)?;
    let sup_diff: Vec<f64> = mu_list
        .par_iter()
        .map(|&mu| {
            let traj = run(mu)?;
            Ok(traj
                .states()
                .iter()
                .zip(reference.states())
                .map(|(a, b)| (a - b).sobolev_norm(s))
                .fold(0.0, f64::max))
        })
        .collect::<Result<_>>()?;

    let mut report = ScanReport::new("mu", mu_list.to_vec());
    report.push_series("sup_diff_hs", sup_diff.clone());
    report.fit_loglog("sup_diff_hs");
    let decreasing = sup_diff.windows(2).all(|w| w[1] < w[0]);
    let worst_ratio = sup_diff
        .windows(2)
        .map(|w| w[1] / w[0])
        .fold(0.0, f64::max);
    report.check("strictly_decreasing", worst_ratio, 1.0, decreasing);
    let (first, last) = (mu_list[0], mu_list[mu_list.len() - 1]);
    if last > 0.0 && first / last >= 8.0 {
        let reduction = sup_diff[sup_diff.len() - 1] / sup_diff[0];
        report.check("reduction_min_over_max", reduction, 0.25, reduction <= 0.25);
    }
    Ok(report)
}
