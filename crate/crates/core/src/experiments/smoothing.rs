use crate::error::{KsError, Result};
use crate::field::SpectralField;
use crate::solver::{solve, SolverConfig, Trajectory};

use super::scan::ScanReport;

/// Checks `1/2 < s < 1`, `0 <= λ < s - 1/2` and `s + λ < 3/2`.
pub fn smoothing_hypotheses(s: f64, lambda: f64) -> Result<()> {
    if !(s > 0.5 && s < 1.0) {
        return Err(KsError::invalid(format!("smoothing needs 1/2 < s < 1, got {s}")));
    }
    if !(lambda >= 0.0 && lambda < s - 0.5) {
        return Err(KsError::invalid(format!("smoothing needs 0 <= lambda < s - 1/2, got {lambda}")));
    }
    if !(s + lambda < 1.5) {
        return Err(KsError::invalid(format!("smoothing needs s + lambda < 3/2, got {}", s + lambda)));
    }
    Ok(())
}

/// `‖u(t_j)‖_{H^{s+λ}}` and `t_j^{λ/2}‖u(t_j)‖_{H^{s+λ}}` along a trajectory.
pub fn smoothing_profile(traj: &Trajectory, lambda: f64) -> (Vec<f64>, Vec<f64>) {
    let index = traj.s().0 + lambda;
    let norms: Vec<f64> = traj.states().iter().map(|u| u.sobolev_norm(index)).collect();
    let weighted = traj
        .times()
        .iter()
        .zip(&norms)
        .map(|(&t, &h)| if t == 0.0 && lambda > 0.0 { 0.0 } else { t.powf(0.5 * lambda) * h })
        .collect();
    (norms, weighted)
}

/// Largest `|h_{j+1} - h_j|` over adjacent nodes with `t_j > 0`, relative to `max h`.
pub fn max_relative_jump(times: &[f64], values: &[f64]) -> f64 {
    let scale = values.iter().copied().fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    times
        .windows(2)
        .zip(values.windows(2))
        .filter(|(t, _)| t[0] > 0.0)
        .map(|(_, h)| (h[1] - h[0]).abs())
        .fold(0.0, f64::max)
        / scale
}

/// Solves from `phi` with `cfg` and reports the `H^{s+λ}` smoothing profile.
pub fn smoothing_scan(phi: &SpectralField, lambda: f64, cfg: &SolverConfig) -> Result<ScanReport> {
    let s = cfg.s.0;
    smoothing_hypotheses(s, lambda)?;
    let traj = solve(phi, cfg)?;
    let (norms, weighted) = smoothing_profile(&traj, lambda);
    let mut report = ScanReport::new("t", traj.times().to_vec());
    let nonfinite = norms.iter().filter(|v| !v.is_finite()).count();
    let sup = weighted.iter().copied().fold(0.0, f64::max);
    let jump = max_relative_jump(traj.times(), &norms);
    report.push_series("hs_plus_lambda", norms);
    report.push_series("weighted", weighted);
    report.check("nonfinite_norms", nonfinite as f64, 0.0, nonfinite == 0);
    report.check("weighted_sup", sup, f64::INFINITY, sup.is_finite());
    report.check("max_relative_jump", jump, 1.0, jump.is_finite());
    Ok(report)
}

/// Tolerance on the spread of the weighted sup across refinements.
pub const SMOOTHING_STABILITY: f64 = 0.05;

/// Repeats [`smoothing_scan`] for each `nt` and checks that the weighted sup
/// varies by at most 5% and the max adjacent-node jump does not grow.
pub fn smoothing_refinement(phi: &SpectralField, lambda: f64, cfg: &SolverConfig, nt_list: &[usize]) -> Result<ScanReport> {
    if nt_list.len() < 2 {
        return Err(KsError::invalid("refinement study needs at least two nt values"));
    }
    let mut sups = Vec::new();
    let mut jumps = Vec::new();
    for &nt in nt_list {
        let run = SolverConfig { nt, ..cfg.clone() };
        let report = smoothing_scan(phi, lambda, &run).map_err(|e| e.at("nt", nt as f64))?;
        let weighted = report.series("weighted").expect("weighted series");
        sups.push(weighted.iter().copied().fold(0.0, f64::max));
        jumps.push(max_relative_jump(&report.abscissae, report.series("hs_plus_lambda").expect("norm series")));
    }
    let hi = sups.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = sups.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = (hi - lo) / hi;
    let jumps_shrink = jumps.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9));
    let mut report = ScanReport::new("nt", nt_list.iter().map(|&n| n as f64).collect());
    report.push_series("weighted_sup", sups);
    report.push_series("max_relative_jump", jumps.clone());
    report.check("weighted_sup_spread", spread, SMOOTHING_STABILITY, spread <= SMOOTHING_STABILITY);
    report.check("jump_nonincreasing", *jumps.last().unwrap(), jumps[0], jumps_shrink);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypotheses() {
        assert!(smoothing_hypotheses(0.8, 0.25).is_ok());
        assert!(smoothing_hypotheses(0.8, 0.35).is_err());
        assert!(smoothing_hypotheses(0.5, 0.0).is_err());
        assert!(smoothing_hypotheses(0.9, -0.1).is_err());
    }

    #[test]
    fn jump_ignores_first_interval() {
        let t = [0.0, 0.5, 1.0];
        let h = [10.0, 2.0, 1.5];
        assert!((max_relative_jump(&t, &h) - 0.05).abs() < 1e-15);
    }
}
