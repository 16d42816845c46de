//! The linear symbol `Φ(ξ) = -ξ² + μ<ξ>^{-1}`, its semigroup, and the
//! φ-functions used as exponential quadrature weights.

use serde::{Deserialize, Serialize};

use crate::error::{KsError, Result};
use crate::field::SpectralField;
use crate::grid::Grid;

/// Parameter `μ >= 0` of the nonlocal term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolParams {
    mu: f64,
}

impl SymbolParams {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu >= 0.0) || !mu.is_finite() {
            return Err(KsError::invalid(format!("mu must be finite and >= 0, got {mu}")));
        }
        Ok(Self { mu })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

impl Default for SymbolParams {
    fn default() -> Self {
        Self { mu: 1.0 }
    }
}

/// `Φ(ξ) = -ξ² + μ (1 + ξ²)^{-1/2}`.
#[inline]
pub fn phi(xi: f64, params: SymbolParams) -> f64 {
    -xi * xi + params.mu / (1.0 + xi * xi).sqrt()
}

/// The symbol bound to a parameter set. Even, bounded above by `μ`, strictly
/// decreasing in `|ξ|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiSymbol {
    pub params: SymbolParams,
}

impl PhiSymbol {
    pub fn new(params: SymbolParams) -> Self {
        Self { params }
    }

    #[inline]
    pub fn eval(&self, xi: f64) -> f64 {
        phi(xi, self.params)
    }

    /// Symbol values in grid storage order.
    pub fn on_grid(&self, grid: &Grid) -> Vec<f64> {
        (0..grid.len()).map(|i| self.eval(grid.wavenumber(i))).collect()
    }
}

/// `E_μ(t) f`: multiplies mode `k` by `e^{tΦ(k)}`.
pub fn semigroup_apply(t: f64, field: &SpectralField, params: SymbolParams) -> Result<SpectralField> {
    if !(t >= 0.0) {
        return Err(KsError::invalid(format!("semigroup time must be >= 0, got {t}")));
    }
    Ok(field.apply_multiplier(|k| (t * phi(k, params)).exp()))
}

/// Below this magnitude φ₁ and φ₂ come from their Taylor series.
pub const PHI_SERIES_CUTOFF: f64 = 1e-4;

/// `(φ₁(z), φ₂(z))` with `φ₁(z) = (e^z - 1)/z`, `φ₂(z) = (e^z - z - 1)/z²`.
///
/// `φ₁` uses `exp_m1` outside the series branch. `φ₂` suffers cancellation
/// for `|z| < 1`, so there it is summed from its Taylor series to full precision.
pub fn phi_functions(z: f64) -> (f64, f64) {
    let az = z.abs();
    if az < PHI_SERIES_CUTOFF {
        // Truncation error below z^4/120 < 1e-18.
        let phi1 = 1.0 + z * (1.0 / 2.0 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)));
        let phi2 = 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z / 720.0)));
        return (phi1, phi2);
    }
    let phi1 = z.exp_m1() / z;
    let phi2 = if az < 1.0 {
        // sum_{j>=0} z^j / (j+2)!
        let mut term: f64 = 0.5;
        let mut sum: f64 = 0.5;
        let mut j = 0.0;
        while term.abs() > 1e-17 * sum.abs() {
            j += 1.0;
            term *= z / (j + 2.0);
            sum += term;
        }
        sum
    } else {
        (z.exp_m1() - z) / (z * z)
    };
    (phi1, phi2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn p(mu: f64) -> SymbolParams {
        SymbolParams::new(mu).unwrap()
    }

    #[test]
    fn symbol_values() {
        assert_eq!(phi(0.0, p(1.0)), 1.0);
        assert_eq!(phi(2.0, p(0.0)), -4.0);
        assert!((phi(1.0, p(1.0)) - (-1.0 + 0.5f64.sqrt())).abs() < 1e-15);
        assert!((phi(1.0, p(1.0)) + 0.292_893_218_813_452_5).abs() < 1e-15);
        assert!(SymbolParams::new(-0.1).is_err());
        assert!(SymbolParams::new(f64::NAN).is_err());
    }

    #[test]
    fn symbol_is_even_bounded_and_decreasing() {
        for mu in [0.0, 0.5, 1.0, 4.0] {
            let sym = PhiSymbol::new(p(mu));
            let mut prev = f64::INFINITY;
            for i in 0..2000 {
                let xi = i as f64 * 0.01;
                let v = sym.eval(xi);
                assert!(v <= mu);
                assert_eq!(v, sym.eval(-xi));
                assert!(v < prev);
                prev = v;
            }
        }
    }

    #[test]
    fn semigroup_identity_and_single_mode() {
        let g = Grid::new(PI, 16).unwrap();
        let f = SpectralField::sample_real(&g, f64::cos);
        assert_eq!(semigroup_apply(0.0, &f, p(1.0)).unwrap(), f);
        let e = semigroup_apply(1.0, &f, p(0.0)).unwrap();
        assert!((e.coeff(1).re - 0.5 * (-1.0f64).exp()).abs() < 1e-16);
        assert!(e.is_hermitian());
        assert!(semigroup_apply(-1.0, &f, p(0.0)).is_err());
    }

    #[test]
    fn semigroup_composes() {
        let g = Grid::new(4.0, 64).unwrap();
        let f = SpectralField::sample_real(&g, |x| (-(x - 4.0).powi(2)).exp());
        let params = p(1.0);
        let a = semigroup_apply(0.3, &semigroup_apply(0.2, &f, params).unwrap(), params).unwrap();
        let b = semigroup_apply(0.5, &f, params).unwrap();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).norm() <= 1e-12 * y.norm().max(1e-300) + 1e-300);
        }
    }

    #[test]
    fn phi_function_values() {
        assert_eq!(phi_functions(0.0), (1.0, 0.5));
        let (p1, p2) = phi_functions(1.0);
        assert!((p1 - (E - 1.0)).abs() < 1e-15);
        assert!((p2 - (E - 2.0)).abs() < 1e-15);
        let (p1, p2) = phi_functions(-50.0);
        assert!((p1 - (1.0 - (-50.0f64).exp()) / 50.0).abs() < 1e-17);
        assert!((p2 - ((-50.0f64).exp() + 49.0) / 2500.0).abs() < 1e-17);
    }

    #[test]
    fn phi_branches_agree_at_cutoff() {
        for sign in [-1.0, 1.0] {
            let below = sign * PHI_SERIES_CUTOFF * (1.0 - 1e-12);
            let above = sign * PHI_SERIES_CUTOFF * (1.0 + 1e-12);
            let (a1, a2) = phi_functions(below);
            let (b1, b2) = phi_functions(above);
            assert!((a1 - b1).abs() < 1e-12);
            assert!((a2 - b2).abs() < 1e-12);
        }
    }
}
