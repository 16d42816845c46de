use std::f64::consts::PI;

use ks_core::{Grid, SpectralField};
use num_complex::Complex64;
use proptest::prelude::*;

fn grid() -> Grid {
    Grid::new(PI, 64).unwrap()
}

/// Real field with random coefficients on `|m| <= m_max`.
fn band_field(g: &Grid, coeffs: &[(f64, f64)]) -> SpectralField {
    let mut c = vec![Complex64::new(0.0, 0.0); g.len()];
    c[0] = Complex64::new(coeffs[0].0, 0.0);
    for (m, &(re, im)) in coeffs.iter().enumerate().skip(1) {
        let v = Complex64::new(re, im);
        c[g.index_of(m as i64).unwrap()] = v;
        c[g.index_of(-(m as i64)).unwrap()] = v.conj();
    }
    SpectralField::from_coeffs(g, c, true).unwrap()
}

fn coeff_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 22)
}

#[test]
fn nonlinearity_matches_direct_convolution() {
    let g = grid();
    let coeffs: Vec<(f64, f64)> = (0..22)
        .map(|m| ((0.3 * m as f64).sin() / (1.0 + m as f64), (0.7 * m as f64).cos() / (1.0 + m as f64)))
        .collect();
    let u = band_field(&g, &coeffs);
    let fast = u.nonlinearity();
    let mmax = g.dealiased_mmax() as i64;
    for m in -mmax..=mmax {
        let mut exact = Complex64::new(0.0, 0.0);
        for p in -mmax..=mmax {
            let q = m - p;
            if q.abs() > mmax {
                continue;
            }
            let a = u.coeff(p) * Complex64::new(0.0, g.dk() * p as f64);
            let b = u.coeff(q) * Complex64::new(0.0, g.dk() * q as f64);
            exact += 0.5 * a * b;
        }
        let got = fast.coeff(m);
        assert!((got - exact).norm() < 1e-12, "mode {m}: {got} vs {exact}");
    }
    for i in 0..g.len() {
        if !g.in_dealiased_band(i) {
            assert_eq!(fast.coeffs()[i], Complex64::new(0.0, 0.0));
        }
    }
}

proptest! {
    #[test]
    fn fft_round_trip(values in prop::collection::vec(-10.0..10.0f64, 64)) {
        let g = grid();
        let f = SpectralField::sample_real(&g, |x| values[(x / g.dx()).round() as usize % 64]);
        let back = f.real_values();
        for (a, b) in values.iter().zip(&back) {
            prop_assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn parseval(coeffs in coeff_strategy()) {
        let g = grid();
        let f = band_field(&g, &coeffs);
        let physical: f64 = f.real_values().iter().map(|v| v * v).sum::<f64>() * g.dx();
        let spectral = f.l2_norm().powi(2);
        prop_assert!((physical - spectral).abs() <= 1e-12 * (1.0 + spectral));
    }

    #[test]
    fn sobolev_norm_is_monotone_in_s(coeffs in coeff_strategy(), s in -1.0..2.0f64, ds in 0.0..1.0f64) {
        let f = band_field(&grid(), &coeffs);
        prop_assert!(f.sobolev_norm(s) <= f.sobolev_norm(s + ds) * (1.0 + 1e-14));
    }

    #[test]
    fn derivative_is_bounded_by_h1(coeffs in coeff_strategy()) {
        let f = band_field(&grid(), &coeffs);
        prop_assert!(f.derivative(1).l2_norm() <= f.sobolev_norm(1.0) * (1.0 + 1e-14));
    }

    #[test]
    fn nonlinearity_of_real_field_is_hermitian(coeffs in coeff_strategy()) {
        let g = grid();
        let n = band_field(&g, &coeffs).nonlinearity();
        prop_assert!(n.is_hermitian());
        for m in 1..32i64 {
            prop_assert!((n.coeff(m) - n.coeff(-m).conj()).norm() < 1e-14);
        }
        let f = band_field(&g, &coeffs);
        let mean = 0.5 * f.derivative(1).l2_norm().powi(2) / (2.0 * g.half_length());
        prop_assert!((n.coeff(0).re - mean).abs() <= 1e-12 * (1.0 + mean));
    }

    #[test]
    fn bessel_potential_links_norms(coeffs in coeff_strategy(), s in -1.0..2.0f64) {
        let f = band_field(&grid(), &coeffs);
        let j = f.bessel_potential(-0.5);
        prop_assert!((j.sobolev_norm(s) - f.sobolev_norm(s - 0.5)).abs() <= 1e-12 * (1.0 + f.sobolev_norm(s)));
    }
}
