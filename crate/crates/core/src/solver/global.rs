use serde::Serialize;

use crate::error::{KsError, Result};
use crate::field::SpectralField;

use super::{etd_march, picard_solve, Scheme, SolverConfig, Trajectory};

/// Safety factor applied to the contraction time bound.
pub const WINDOW_SAFETY: f64 = 0.9;

/// Window length `0.9 · min{(4C²‖φ‖_{H^s})^{-1/δ(s)}, 1}` with `δ(s) = s/2 + 1/4`.
pub fn local_t_estimate(phi_norm: f64, s: f64, c: f64) -> Result<f64> {
    if !(s > 0.5 && s < 1.0) {
        return Err(KsError::invalid(format!("window estimate needs 1/2 < s < 1, got {s}")));
    }
    if !(c > 0.0) || !(phi_norm >= 0.0) {
        return Err(KsError::invalid("window estimate needs C > 0 and a nonnegative norm"));
    }
    let delta = 0.5 * s + 0.25;
    let uncapped = (4.0 * c * c * phi_norm).powf(-1.0 / delta);
    Ok(WINDOW_SAFETY * uncapped.min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowInfo {
    pub start: f64,
    pub end: f64,
    /// `‖u(start)‖_{H^s}` used to size the window.
    pub hs_norm: f64,
    /// Picard iterations, 0 for marching schemes.
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GronwallRecord {
    pub t: f64,
    /// `‖∂_x u(t)‖²`
    pub dx_sq: f64,
    /// `e^{2μt}‖φ'‖²`
    pub envelope: f64,
}

#[derive(Debug, Clone)]
pub struct GlobalRun {
    pub trajectory: Trajectory,
    pub windows: Vec<WindowInfo>,
    pub gronwall: Vec<GronwallRecord>,
}

impl GlobalRun {
    /// Largest `dx_sq / envelope` over all nodes (0 when the envelope vanishes).
    pub fn worst_gronwall_ratio(&self) -> f64 {
        self.gronwall
            .iter()
            .map(|r| if r.envelope > 0.0 { r.dx_sq / r.envelope } else if r.dx_sq > 0.0 { f64::INFINITY } else { 0.0 })
            .fold(0.0, f64::max)
    }
}

/// Continues the solution to `t_final` window by window.
///
/// With the Picard scheme each window has length
/// `local_t_estimate(‖u(start)‖_{H^s}, s, C)`; marching schemes use windows of
/// length 1. Each window reuses `template.nt` nodes.
pub fn global_solve(phi: &SpectralField, t_final: f64, template: &SolverConfig) -> Result<GlobalRun> {
    if !(t_final > 0.0) || !t_final.is_finite() {
        return Err(KsError::invalid(format!("T_final must be positive, got {t_final}")));
    }
    let s = template.s.0;
    let mu = template.params.mu();
    let dx0 = phi.derivative(1).l2_norm().powi(2);

    let mut times = vec![0.0];
    let mut states = vec![phi.clone()];
    let mut windows = Vec::new();
    let mut start = 0.0;
    while t_final - start > 1e-12 * t_final {
        let current = states.last().unwrap().clone();
        let hs_norm = current.sobolev_norm(s);
        let length = match template.scheme {
            Scheme::Picard => local_t_estimate(hs_norm, s, template.contraction_constant)?,
            _ => 1.0,
        }
        .min(t_final - start);
        let cfg = SolverConfig {
            t_final: length,
            ..template.clone()
        };
        let (window, iterations) = match template.scheme {
            Scheme::Picard => picard_solve(&current, &cfg)
                .map(|out| (out.trajectory, out.iterations))
                .map_err(|e| shift_error(e, start))?,
            _ => (etd_march(&current, &cfg).map_err(|e| shift_error(e, start))?, 0),
        };
        for (t, state) in window.times().iter().zip(window.states()).skip(1) {
            times.push(start + t);
            states.push(state.clone());
        }
        let end = start + length;
        windows.push(WindowInfo {
            start,
            end,
            hs_norm,
            iterations,
        });
        start = end;
    }
    let gronwall = times
        .iter()
        .zip(&states)
        .map(|(&t, u)| GronwallRecord {
            t,
            dx_sq: u.derivative(1).l2_norm().powi(2),
            envelope: (2.0 * mu * t).exp() * dx0,
        })
        .collect();
    Ok(GlobalRun {
        trajectory: Trajectory::new(times, states, template.s)?,
        windows,
        gronwall,
    })
}

fn shift_error(err: KsError, start: f64) -> KsError {
    match err {
        KsError::NonContraction {
            window_start,
            window_end,
            iterations,
            last_distance,
        } => KsError::NonContraction {
            window_start: window_start + start,
            window_end: window_end + start,
            iterations,
            last_distance,
        },
        KsError::BlowUp { time, magnitude } => KsError::BlowUp {
            time: time + start,
            magnitude,
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_estimate_caps_and_scales() {
        assert_eq!(local_t_estimate(0.0, 0.75, 1.0).unwrap(), 0.9);
        assert_eq!(local_t_estimate(1e-6, 0.75, 1.0).unwrap(), 0.9);
        let a = local_t_estimate(10.0, 0.75, 1.0).unwrap();
        let b = local_t_estimate(20.0, 0.75, 1.0).unwrap();
        // δ(3/4) = 5/8
        assert!((b / a - 2f64.powf(-1.0 / 0.625)).abs() < 1e-14);
        assert!(local_t_estimate(1.0, 0.5, 1.0).is_err());
        assert!(local_t_estimate(1.0, 1.0, 1.0).is_err());
        assert!(local_t_estimate(1.0, 0.75, 0.0).is_err());
    }
}
