//! Theorem-level claims as executable experiments: smoothing, energy
//! identities, the `μ → 0` limit, and the bilinear scaling of box data.

pub mod data;
pub mod energy;
pub mod illposed;
pub mod mu_limit;
pub mod scan;
pub mod smoothing;

pub use data::{gaussian_l2_norm, make_data, BoxMember, DataCatalogEntry, RANDOM_SOBOLEV_EPS};
pub use energy::{energy_convergence, energy_residuals, ENERGY_MIN_ORDER};
pub use illposed::{
    bilinear_duhamel, bilinear_value, box_norm_hs, illposed_scaling_scan, resonance_kernel, AmplitudeRule,
    BilinearOutcome, BoxPairSpec, IllposedGroup, IllposedPoint, IllposedScan, SpectralProfile,
};
pub use mu_limit::mu_limit_experiment;
pub use scan::{loglog_fit, Check, ScanReport, Series, SlopeFit};
pub use smoothing::{max_relative_jump, smoothing_hypotheses, smoothing_profile, smoothing_refinement, smoothing_scan};
