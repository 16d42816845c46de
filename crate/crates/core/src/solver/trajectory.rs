use serde::Serialize;

use crate::error::{KsError, Result};
use crate::field::{SobolevIndex, SpectralField};
use crate::grid::Grid;

/// Time-gridded solution `u(t_j)`. All states share one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<SpectralField>,
    s: SobolevIndex,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, states: Vec<SpectralField>, s: impl Into<SobolevIndex>) -> Result<Self> {
        if states.is_empty() || times.len() != states.len() {
            return Err(KsError::invalid(format!(
                "trajectory needs matching nonempty times/states ({} vs {})",
                times.len(),
                states.len()
            )));
        }
        let grid = states[0].grid();
        if states.iter().any(|f| f.grid() != grid) {
            return Err(KsError::invalid("trajectory states live on different grids"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(KsError::invalid("trajectory times must be strictly increasing"));
        }
        Ok(Self {
            times,
            states,
            s: s.into(),
        })
    }

    /// Uniform nodes `t_j = j T / (nt - 1)`.
    pub fn uniform_times(t_final: f64, nt: usize) -> Vec<f64> {
        let last = (nt - 1) as f64;
        (0..nt).map(|j| t_final * j as f64 / last).collect()
    }

    pub(crate) fn from_parts(times: Vec<f64>, states: Vec<SpectralField>, s: SobolevIndex) -> Self {
        debug_assert_eq!(times.len(), states.len());
        Self { times, states, s }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[SpectralField] {
        &self.states
    }

    pub fn s(&self) -> SobolevIndex {
        self.s
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn grid(&self) -> &Grid {
        self.states[0].grid()
    }

    pub fn initial_state(&self) -> &SpectralField {
        &self.states[0]
    }

    pub fn final_state(&self) -> &SpectralField {
        self.states.last().expect("trajectory is nonempty")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory is nonempty")
    }

    /// Node-wise difference `self - other` on a shared time grid.
    pub fn difference(&self, other: &Trajectory) -> Result<Trajectory> {
        if self.times.len() != other.times.len()
            || self.times.iter().zip(&other.times).any(|(a, b)| (a - b).abs() > 1e-12 * a.abs().max(1.0))
        {
            return Err(KsError::invalid("trajectories do not share a time grid"));
        }
        let states = self.states.iter().zip(&other.states).map(|(a, b)| a - b).collect();
        Ok(Self::from_parts(self.times.clone(), states, self.s))
    }

    /// Same states, different regularity index.
    pub fn with_index(&self, s: impl Into<SobolevIndex>) -> Trajectory {
        Self::from_parts(self.times.clone(), self.states.clone(), s.into())
    }

    pub fn x_norm(&self) -> XNormReport {
        x_norm(self)
    }
}

/// `t^exponent` with the `t = 0` limit: 0 for positive exponents, 1 for a zero
/// exponent, and 0 (node skipped) for negative exponents where it diverges.
pub(crate) fn time_weight(t: f64, exponent: f64) -> f64 {
    if t > 0.0 {
        t.powf(exponent)
    } else if exponent == 0.0 {
        1.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XNormNode {
    pub t: f64,
    pub hs: f64,
    pub weighted_dx: f64,
}

/// Breakdown of `sup_t (||u(t)||_{H^s} + t^{(1-s)/2} ||∂_x u(t)||_{L²})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct XNormReport {
    pub x_norm: f64,
    pub sup_hs: f64,
    pub sup_weighted: f64,
    pub nodes: Vec<XNormNode>,
}

pub fn x_norm(traj: &Trajectory) -> XNormReport {
    let s = traj.s.0;
    let exponent = 0.5 * (1.0 - s);
    let nodes: Vec<XNormNode> = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, u)| {
            let w = time_weight(t, exponent);
            XNormNode {
                t,
                hs: u.sobolev_norm(s),
                weighted_dx: if w == 0.0 { 0.0 } else { w * u.derivative(1).l2_norm() },
            }
        })
        .collect();
    let fold = |f: fn(&XNormNode) -> f64| nodes.iter().map(f).fold(0.0, f64::max);
    XNormReport {
        x_norm: fold(|n| n.hs + n.weighted_dx),
        sup_hs: fold(|n| n.hs),
        sup_weighted: fold(|n| n.weighted_dx),
        nodes,
    }
}

/// `||u||_{X^{s'}} + sup_t t^{s/2} ||J^{s'-s} u(t)||_{L²}` for `s' > s`.
pub fn tilde_norm(traj: &Trajectory, s: f64, s_prime: f64) -> Result<f64> {
    if !(s_prime > s) {
        return Err(KsError::invalid(format!(
            "tilde norm needs s' > s, got s = {s}, s' = {s_prime}"
        )));
    }
    let base = x_norm(&traj.with_index(s_prime)).x_norm;
    let extra = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, u)| time_weight(t, 0.5 * s) * u.sobolev_norm(s_prime - s))
        .fold(0.0, f64::max);
    Ok(base + extra)
}
