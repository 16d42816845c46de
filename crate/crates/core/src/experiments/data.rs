use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{KsError, Result};
use crate::field::{japanese_bracket_pow, SpectralField};
use crate::grid::Grid;

use super::illposed::BoxPairSpec;

/// Default regularity margin `ε` of random Sobolev data.
pub const RANDOM_SOBOLEV_EPS: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoxMember {
    Phi,
    Psi,
}

/// Initial data families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DataCatalogEntry {
    Zero,
    /// `A exp(-((x - x0)/w)²)`
    Gaussian { amplitude: f64, center: f64, width: f64 },
    /// `A sech((x - x0)/w)`
    Sech { amplitude: f64, center: f64, width: f64 },
    /// Real field with `f̂(k) = A<k>^{-s-1/2-ε} e^{iθ_k}` on the dealiased band,
    /// phases drawn from a ChaCha20 stream seeded with `seed`.
    RandomSobolev { amplitude: f64, s: f64, eps: f64, seed: u64 },
    /// `f̂ = a χ_I` for one member of the pair; `symmetrized` adds the mirror
    /// box `a χ_{-I}` so the field is real.
    BoxPair { spec: BoxPairSpec, member: BoxMember, symmetrized: bool },
}

/// `‖A exp(-(x/w)²)‖_{L²(ℝ)} = A (w √(π/2))^{1/2}`.
pub fn gaussian_l2_norm(amplitude: f64, width: f64) -> f64 {
    amplitude.abs() * (width * (std::f64::consts::PI / 2.0).sqrt()).sqrt()
}

/// Fraction of the lattice cell `[k - Δk/2, k + Δk/2]` lying inside `[lo, hi]`.
fn cell_fraction(k: f64, dk: f64, lo: f64, hi: f64) -> f64 {
    let a = (k - 0.5 * dk).max(lo);
    let b = (k + 0.5 * dk).min(hi);
    ((b - a) / dk).max(0.0)
}

pub fn make_data(entry: &DataCatalogEntry, grid: &Grid) -> Result<SpectralField> {
    match *entry {
        DataCatalogEntry::Zero => Ok(SpectralField::zeros(grid, true)),
        DataCatalogEntry::Gaussian {
            amplitude,
            center,
            width,
        } => {
            check_shape(amplitude, width)?;
            Ok(SpectralField::sample_real(grid, |x| {
                amplitude * (-((x - center) / width).powi(2)).exp()
            }))
        }
        DataCatalogEntry::Sech {
            amplitude,
            center,
            width,
        } => {
            check_shape(amplitude, width)?;
            Ok(SpectralField::sample_real(grid, |x| {
                amplitude / ((x - center) / width).cosh()
            }))
        }
        DataCatalogEntry::RandomSobolev {
            amplitude,
            s,
            eps,
            seed,
        } => {
            if !amplitude.is_finite() || !s.is_finite() || !(eps > 0.0) {
                return Err(KsError::invalid("random Sobolev data needs finite A, s and eps > 0"));
            }
            Ok(random_sobolev(grid, amplitude, s, eps, seed))
        }
        DataCatalogEntry::BoxPair {
            spec,
            member,
            symmetrized,
        } => box_field(grid, &spec, member, symmetrized),
    }
}

fn check_shape(amplitude: f64, width: f64) -> Result<()> {
    if !amplitude.is_finite() || !(width > 0.0) || !width.is_finite() {
        return Err(KsError::invalid(format!(
            "profile needs finite amplitude and positive width, got A = {amplitude}, w = {width}"
        )));
    }
    Ok(())
}

fn random_sobolev(grid: &Grid, amplitude: f64, s: f64, eps: f64, seed: u64) -> SpectralField {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let n = grid.len();
    let two_l = 2.0 * grid.half_length();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    let m_max = grid.dealiased_mmax() as i64;
    for m in 0..=m_max {
        let theta = std::f64::consts::TAU * rng.random::<f64>();
        let k = grid.dk() * m as f64;
        let magnitude = amplitude * japanese_bracket_pow(k, -s - 0.5 - eps) / two_l;
        let i = grid.index_of(m).expect("mode inside the lattice");
        if m == 0 {
            coeffs[i] = Complex64::new(magnitude * theta.cos(), 0.0);
        } else {
            let c = Complex64::from_polar(magnitude, theta);
            coeffs[i] = c;
            coeffs[grid.index_of(-m).expect("mode inside the lattice")] = c.conj();
        }
    }
    SpectralField::from_parts(grid, coeffs, true)
}

fn box_field(grid: &Grid, spec: &BoxPairSpec, member: BoxMember, symmetrized: bool) -> Result<SpectralField> {
    let (lo, hi) = match member {
        BoxMember::Phi => spec.phi_interval(),
        BoxMember::Psi => spec.psi_interval(),
    };
    let kmax = grid.dealiased_kmax();
    if lo.abs().max(hi.abs()) > kmax {
        return Err(KsError::invalid(format!(
            "box [{lo}, {hi}] exceeds the dealiased band |k| <= {kmax}"
        )));
    }
    let a = spec.amplitude();
    let dk = grid.dk();
    let scale = a / (2.0 * grid.half_length());
    let coeffs = (0..grid.len())
        .map(|i| {
            let k = grid.wavenumber(i);
            let mut w = cell_fraction(k, dk, lo, hi);
            if symmetrized {
                w += cell_fraction(k, dk, -hi, -lo);
            }
            Complex64::new(scale * w, 0.0)
        })
        .collect();
    SpectralField::from_coeffs(grid, coeffs, symmetrized)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::illposed::AmplitudeRule;

    #[test]
    fn gaussian_norm_matches_closed_form() {
        let grid = Grid::new(32.0, 1024).unwrap();
        let f = make_data(
            &DataCatalogEntry::Gaussian {
                amplitude: 0.7,
                center: 32.0,
                width: 1.5,
            },
            &grid,
        )
        .unwrap();
        assert!((f.sobolev_norm(0.0) / gaussian_l2_norm(0.7, 1.5) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn random_sobolev_is_seed_deterministic() {
        let grid = Grid::new(32.0, 256).unwrap();
        let entry = |seed| DataCatalogEntry::RandomSobolev {
            amplitude: 1.0,
            s: 0.8,
            eps: RANDOM_SOBOLEV_EPS,
            seed,
        };
        let a = make_data(&entry(7), &grid).unwrap();
        let b = make_data(&entry(7), &grid).unwrap();
        let c = make_data(&entry(8), &grid).unwrap();
        assert_eq!(a.coeffs(), b.coeffs());
        assert_ne!(a.coeffs(), c.coeffs());
        assert!(a.is_hermitian());
        for i in 0..grid.len() {
            if !grid.in_dealiased_band(i) {
                assert_eq!(a.coeffs()[i], Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn box_mass_is_exact_and_band_checked() {
        let spec = BoxPairSpec::new(8.0, 1.0, 0.25, AmplitudeRule::Paper).unwrap();
        let grid = Grid::new(16.0 * std::f64::consts::PI, 2048).unwrap();
        let f = make_data(
            &DataCatalogEntry::BoxPair {
                spec,
                member: BoxMember::Phi,
                symmetrized: false,
            },
            &grid,
        )
        .unwrap();
        // Σ f̂(k) Δk = a r
        let mass: f64 = f.coeffs().iter().map(|c| c.re * 2.0 * grid.half_length() * grid.dk()).sum();
        assert!((mass - spec.amplitude()).abs() < 1e-12);
        let small = Grid::new(16.0 * std::f64::consts::PI, 256).unwrap();
        let far = BoxPairSpec::new(64.0, 1.0, 0.25, AmplitudeRule::Paper).unwrap();
        assert!(make_data(
            &DataCatalogEntry::BoxPair {
                spec: far,
                member: BoxMember::Psi,
                symmetrized: false
            },
            &small
        )
        .is_err());
    }
}
