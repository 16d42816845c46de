//! Mild (Duhamel) solutions of `u_t = ∂²u + μ(1-∂²)^{-1/2}u + ½(∂u)²`.
//!
//! [`picard_solve`] iterates the integral map on a whole time window in the
//! time-weighted `X_T^s` norm; [`etd_march`] steps the same mild formulation
//! with exponential integrators. [`global_solve`] chains windows.

mod duhamel;
mod etd;
mod global;
mod picard;
mod probe;
mod trajectory;

use serde::{Deserialize, Serialize};

use crate::error::{KsError, Result};
use crate::field::{SobolevIndex, SpectralField};
use crate::symbol::SymbolParams;

pub use duhamel::duhamel_integral;
pub use etd::etd_march;
pub use global::{global_solve, local_t_estimate, GlobalRun, GronwallRecord, WindowInfo};
pub use picard::{mild_map, picard_solve, PicardOutcome};
pub use probe::second_derivative_probe;
pub use trajectory::{tilde_norm, x_norm, Trajectory, XNormNode, XNormReport};

pub(crate) use duhamel::{duhamel_all, StepWeights};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Picard,
    Etd1,
    Etdrk2,
}

impl std::str::FromStr for Scheme {
    type Err = KsError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "picard" => Ok(Scheme::Picard),
            "etd1" => Ok(Scheme::Etd1),
            "etdrk2" => Ok(Scheme::Etdrk2),
            other => Err(KsError::invalid(format!("unknown scheme '{other}'"))),
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::Picard => "picard",
            Scheme::Etd1 => "etd1",
            Scheme::Etdrk2 => "etdrk2",
        })
    }
}

/// Magnitude above which a mode counts as blown up.
pub const BLOW_UP_THRESHOLD: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Final time of the window.
    pub t_final: f64,
    /// Number of uniform time nodes, including `t = 0`.
    pub nt: usize,
    pub s: SobolevIndex,
    pub params: SymbolParams,
    pub scheme: Scheme,
    /// Picard stopping tolerance on successive distances in `X_T^s`.
    pub tol: f64,
    pub max_iter: usize,
    /// Constant used by [`local_t_estimate`] when sizing windows.
    pub contraction_constant: f64,
    /// Drops the nonlinearity (test hook for the linear Duhamel problem).
    pub linear_only: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            t_final: 1.0,
            nt: 256,
            s: SobolevIndex(0.75),
            params: SymbolParams::default(),
            scheme: Scheme::Picard,
            tol: 1e-10,
            max_iter: 50,
            contraction_constant: 1.0,
            linear_only: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_final > 0.0) || !self.t_final.is_finite() {
            return Err(KsError::invalid(format!("T must be positive, got {}", self.t_final)));
        }
        if self.nt < 2 {
            return Err(KsError::invalid(format!("nt must be >= 2, got {}", self.nt)));
        }
        if !(self.tol > 0.0) {
            return Err(KsError::invalid(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(KsError::invalid("max_iter must be positive"));
        }
        if self.scheme == Scheme::Picard && self.t_final > 1.0 {
            return Err(KsError::invalid(format!(
                "Picard windows need T <= 1, got {}; use global continuation",
                self.t_final
            )));
        }
        if !(self.contraction_constant > 0.0) {
            return Err(KsError::invalid("contraction constant must be positive"));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.t_final / (self.nt - 1) as f64
    }

    pub fn times(&self) -> Vec<f64> {
        Trajectory::uniform_times(self.t_final, self.nt)
    }
}

/// Runs the configured scheme on `[0, cfg.t_final]`.
pub fn solve(phi: &SpectralField, cfg: &SolverConfig) -> Result<Trajectory> {
    match cfg.scheme {
        Scheme::Picard => picard_solve(phi, cfg).map(|out| out.trajectory),
        Scheme::Etd1 | Scheme::Etdrk2 => etd_march(phi, cfg),
    }
}
