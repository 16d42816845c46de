//! Fourier-series representation of fields on a [`Grid`], Sobolev norms,
//! derivatives and the dealiased quadratic nonlinearity.
//!
//! All norms use the discrete convention
//! `||f||_{H^s}^2 = 2L * sum_k <k>^{2s} |c_k|^2`, `<k> = (1 + k^2)^{1/2}`,
//! which equals `(1/2pi) int <xi>^{2s} |f^(xi)|^2 dxi` for the transform
//! `f^(xi) = int e^{-i xi x} f(x) dx` under the identification `f^(k) = 2L c_k`.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{KsError, Result};
use crate::grid::Grid;

/// Regularity exponent `s` of `H^s`. Any finite real is legal.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct SobolevIndex(pub f64);

impl SobolevIndex {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<f64> for SobolevIndex {
    fn from(s: f64) -> Self {
        SobolevIndex(s)
    }
}

/// `<k>^p = (1 + k^2)^{p/2}`.
#[inline]
pub fn japanese_bracket_pow(k: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else {
        (1.0 + k * k).powf(0.5 * p)
    }
}

const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
    hermitian: bool,
}

impl SpectralField {
    pub fn zeros(grid: &Grid, hermitian: bool) -> Self {
        Self {
            grid: grid.clone(),
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
            hermitian,
        }
    }

    /// Builds a field from coefficients in FFT storage order.
    ///
    /// When `hermitian` is set the coefficients must satisfy `c_{-k} = conj(c_k)`
    /// and have a real Nyquist entry up to `1e-12` relative to the largest
    /// coefficient; they are then symmetrized exactly.
    pub fn from_coeffs(grid: &Grid, coeffs: Vec<Complex64>, hermitian: bool) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(KsError::invalid(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coeffs.len()
            )));
        }
        let mut field = Self {
            grid: grid.clone(),
            coeffs,
            hermitian,
        };
        if hermitian {
            let defect = field.hermitian_defect();
            let scale = field.max_abs_coeff().max(f64::MIN_POSITIVE);
            if defect > HERMITIAN_TOL * scale {
                return Err(KsError::invalid(format!(
                    "coefficients are not Hermitian (defect {defect:e})"
                )));
            }
            field.symmetrize();
        }
        Ok(field)
    }

    pub(crate) fn from_parts(grid: &Grid, coeffs: Vec<Complex64>, hermitian: bool) -> Self {
        debug_assert_eq!(coeffs.len(), grid.len());
        let mut field = Self {
            grid: grid.clone(),
            coeffs,
            hermitian,
        };
        if hermitian {
            field.symmetrize();
        }
        field
    }

    /// Samples a real profile at the collocation points and transforms it.
    pub fn sample_real(grid: &Grid, profile: impl Fn(f64) -> f64) -> Self {
        let values: Vec<Complex64> = grid.points().map(|x| Complex64::new(profile(x), 0.0)).collect();
        Self::from_parts(grid, grid.forward(&values), true)
    }

    /// Samples a complex profile; the result is not flagged Hermitian.
    pub fn sample_complex(grid: &Grid, profile: impl Fn(f64) -> Complex64) -> Self {
        let values: Vec<Complex64> = grid.points().map(profile).collect();
        Self::from_parts(grid, grid.forward(&values), false)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of integer mode `m`, zero off the lattice.
    pub fn coeff(&self, m: i64) -> Complex64 {
        self.grid
            .index_of(m)
            .map_or(Complex64::new(0.0, 0.0), |i| self.coeffs[i])
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.grid.inverse(&self.coeffs)
    }

    /// Point values with the imaginary part dropped.
    pub fn real_values(&self) -> Vec<f64> {
        self.values().into_iter().map(|v| v.re).collect()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    fn hermitian_defect(&self) -> f64 {
        let mut defect: f64 = 0.0;
        for i in 0..self.coeffs.len() {
            let j = self.grid.mirror(i);
            defect = defect.max((self.coeffs[i] - self.coeffs[j].conj()).norm());
        }
        defect
    }

    fn symmetrize(&mut self) {
        let n = self.coeffs.len();
        self.coeffs[0].im = 0.0;
        self.coeffs[n / 2].im = 0.0;
        for i in 1..n / 2 {
            let j = n - i;
            let avg = 0.5 * (self.coeffs[i] + self.coeffs[j].conj());
            self.coeffs[i] = avg;
            self.coeffs[j] = avg.conj();
        }
    }

    /// Applies a per-mode multiplier `c_k -> m(k) c_k`.
    pub fn apply_multiplier(&self, multiplier: impl Fn(f64) -> f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * multiplier(self.grid.wavenumber(i)))
            .collect();
        Self::from_parts(&self.grid, coeffs, self.hermitian)
    }

    /// `||f||_{H^s}` in the discrete convention of this module.
    pub fn sobolev_norm(&self, s: impl Into<SobolevIndex>) -> f64 {
        let s = s.into().0;
        let sum: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| japanese_bracket_pow(self.grid.wavenumber(i), 2.0 * s) * c.norm_sqr())
            .sum();
        (2.0 * self.grid.half_length() * sum).sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.sobolev_norm(0.0)
    }

    /// `∂_x^order f`. Odd orders zero the unpaired Nyquist mode.
    pub fn derivative(&self, order: u32) -> Self {
        let i_pow = Complex64::new(0.0, 1.0).powu(order);
        let nyq = self.grid.nyquist_index();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if order % 2 == 1 && i == nyq {
                    Complex64::new(0.0, 0.0)
                } else {
                    c * i_pow * self.grid.wavenumber(i).powi(order as i32)
                }
            })
            .collect();
        Self::from_parts(&self.grid, coeffs, self.hermitian)
    }

    /// Bessel potential `J^s`: multiplies mode `k` by `<k>^s`.
    pub fn bessel_potential(&self, s: impl Into<SobolevIndex>) -> Self {
        let s = s.into().0;
        self.apply_multiplier(|k| japanese_bracket_pow(k, s))
    }

    /// `∫ f conj(g) dx` over one period.
    pub fn inner(&self, other: &SpectralField) -> Complex64 {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        let sum: Complex64 = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum();
        sum * (2.0 * self.grid.half_length())
    }

    /// Dealiased spectral representation of `½ (∂_x u)^2`.
    ///
    /// The product is formed pointwise and every mode outside the 2/3 band is zeroed.
    pub fn nonlinearity(&self) -> Self {
        let ux = self.derivative(1);
        let values = ux.values();
        let squared: Vec<Complex64> = if self.hermitian {
            values.iter().map(|v| Complex64::new(0.5 * v.re * v.re, 0.0)).collect()
        } else {
            values.iter().map(|v| 0.5 * v * v).collect()
        };
        let mut coeffs = self.grid.forward(&squared);
        for (i, c) in coeffs.iter_mut().enumerate() {
            if !self.grid.in_dealiased_band(i) {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        Self::from_parts(&self.grid, coeffs, self.hermitian)
    }

    /// Dealiased spectral representation of `½ ∂_x u ∂_x v`.
    pub fn bilinear(&self, other: &SpectralField) -> Self {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        let a = self.derivative(1).values();
        let b = other.derivative(1).values();
        let hermitian = self.hermitian && other.hermitian;
        let prod: Vec<Complex64> = a
            .iter()
            .zip(&b)
            .map(|(x, y)| {
                if hermitian {
                    Complex64::new(0.5 * x.re * y.re, 0.0)
                } else {
                    0.5 * x * y
                }
            })
            .collect();
        let mut coeffs = self.grid.forward(&prod);
        for (i, c) in coeffs.iter_mut().enumerate() {
            if !self.grid.in_dealiased_band(i) {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        Self::from_parts(&self.grid, coeffs, hermitian)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            hermitian: self.hermitian,
        }
    }

    fn zip_with(&self, other: &SpectralField, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        Self {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| op(*a, *b))
                .collect(),
            hermitian: self.hermitian && other.hermitian,
        }
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        self.scaled(rhs)
    }
}
