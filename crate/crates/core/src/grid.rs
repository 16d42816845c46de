//! Periodic truncation of the real line.
//!
//! The domain is `[0, 2L)` sampled at `n` equispaced points. Coefficients are
//! stored in FFT order: storage index `i` holds mode `m = i` for `i < n/2` and
//! `m = i - n` otherwise, so the single unpaired mode is `m = -n/2`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{KsError, Result};

#[derive(Clone)]
pub struct Grid {
    half_length: f64,
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Grid {
    pub fn new(half_length: f64, n: usize) -> Result<Self> {
        if !(half_length > 0.0) || !half_length.is_finite() {
            return Err(KsError::invalid(format!(
                "half length must be positive, got {half_length}"
            )));
        }
        if n < 8 || n & 1 == 1 {
            return Err(KsError::invalid(format!(
                "mode count must be even and at least 8, got {n}"
            )));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            half_length,
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_length / self.n as f64
    }

    /// Lattice spacing `pi / L`.
    pub fn dk(&self) -> f64 {
        PI / self.half_length
    }

    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.dx()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.x(j))
    }

    /// Integer mode number at storage index `i`.
    #[inline]
    pub fn mode(&self, i: usize) -> i64 {
        let half = self.n / 2;
        if i < half {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Storage index of mode `m`, if it lies on the lattice.
    pub fn index_of(&self, m: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if m < -half || m >= half {
            None
        } else if m >= 0 {
            Some(m as usize)
        } else {
            Some((m + self.n as i64) as usize)
        }
    }

    #[inline]
    pub fn wavenumber(&self, i: usize) -> f64 {
        self.dk() * self.mode(i) as f64
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.wavenumber(i)).collect()
    }

    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    /// Storage index of `-m` for the mode at index `i`. The Nyquist mode pairs with itself.
    #[inline]
    pub fn mirror(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.n - i
        }
    }

    /// Modes kept by the 2/3 rule: `3|m| < n`, so products of kept modes never alias into the band.
    #[inline]
    pub fn in_dealiased_band(&self, i: usize) -> bool {
        3 * (self.mode(i).unsigned_abs() as usize) < self.n
    }

    /// Largest kept mode index of the 2/3 rule.
    pub fn dealiased_mmax(&self) -> usize {
        (self.n - 1) / 3
    }

    /// Largest wavenumber kept by the 2/3 rule.
    pub fn dealiased_kmax(&self) -> f64 {
        self.dk() * self.dealiased_mmax() as f64
    }

    /// Point values to Fourier-series coefficients `c_k = (1/n) sum_j f(x_j) e^{-i k x_j}`.
    pub fn forward(&self, values: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(values.len(), self.n, "value count does not match grid");
        let mut buf = values.to_vec();
        self.forward.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }

    /// Coefficients to point values `f(x_j) = sum_k c_k e^{i k x_j}`.
    pub fn inverse(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(coeffs.len(), self.n, "coefficient count does not match grid");
        let mut buf = coeffs.to_vec();
        self.inverse.process(&mut buf);
        buf
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.half_length == other.half_length
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("half_length", &self.half_length)
            .field("n", &self.n)
            .finish()
    }
}
