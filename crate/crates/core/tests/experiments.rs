use std::f64::consts::TAU;

use ks_core::experiments::{
    bilinear_duhamel, bilinear_value, box_norm_hs, energy_residuals, loglog_fit, make_data, max_relative_jump,
    mu_limit_experiment, smoothing_hypotheses, AmplitudeRule, BoxMember, BoxPairSpec, DataCatalogEntry, SpectralProfile,
};
use ks_core::{japanese_bracket_pow, Grid, KsError, Scheme, SolverConfig, SpectralField, SymbolParams};
use num_complex::Complex64;

#[test]
fn bilinear_duhamel_is_symmetric_in_its_arguments() {
    let spec = BoxPairSpec::new(16.0, 1.0, 0.25, AmplitudeRule::Paper).unwrap();
    let params = SymbolParams::default();
    let (a, b) = (spec.phi_profile(false), spec.psi_profile(false));
    for xi in [1.1, 1.7, 2.0, 2.6] {
        let fwd = bilinear_value(&a, &b, xi, params, 0.1, 64).unwrap();
        let rev = bilinear_value(&b, &a, xi, params, 0.1, 64).unwrap();
        assert!((fwd - rev).norm() <= 1e-10 * fwd.norm(), "xi = {xi}");
    }
    let fwd = bilinear_duhamel(&a, &b, 0.25, params, 0.1, 64, spec.window()).unwrap();
    let rev = bilinear_duhamel(&b, &a, 0.25, params, 0.1, 64, spec.window()).unwrap();
    assert!((fwd.window_norm - rev.window_norm).abs() <= 1e-9 * fwd.window_norm);
    assert!((fwd.window_norm - fwd.refined_norm).abs() <= 1e-3 * fwd.window_norm);
}

#[test]
fn bilinear_value_vanishes_outside_the_sum_support() {
    let spec = BoxPairSpec::new(16.0, 1.0, 0.25, AmplitudeRule::Paper).unwrap();
    let params = SymbolParams::default();
    let (a, b) = (spec.phi_profile(false), spec.psi_profile(false));
    // supp φ̂ + supp ψ̂ = [r, 3r]
    for xi in [0.5, 3.5, -2.0] {
        assert_eq!(bilinear_value(&a, &b, xi, params, 0.1, 32).unwrap(), Complex64::new(0.0, 0.0));
    }
    assert_eq!(bilinear_value(&a, &b, 2.0, params, 0.0, 32).unwrap(), Complex64::new(0.0, 0.0));
}

#[test]
fn smooth_profile_quadrature_matches_closed_form() {
    // Constant profiles with μ = 0 on a narrow pair: the integrand is explicit.
    let params = SymbolParams::new(0.0).unwrap();
    let a = SpectralProfile::boxed(-10.0, -9.0, Complex64::new(1.0, 0.0));
    let b = SpectralProfile::boxed(11.0, 12.0, Complex64::new(1.0, 0.0));
    let (xi, t) = (2.0, 0.05);
    let got = bilinear_value(&a, &b, xi, params, t, 64).unwrap();
    let fine = ks_core::quadrature::trapezoid(
        |eta: f64| {
            let z = xi - eta;
            let d = xi * xi - z * z - eta * eta;
            z * eta * (t * d).exp_m1() / d
        },
        11.0,
        12.0,
        200_000,
    );
    let expected = -(-t * xi * xi).exp() / (2.0 * TAU) * fine;
    assert!((got.re - expected).abs() < 1e-6 * expected.abs(), "{got} vs {expected}");
}

#[test]
fn discrete_box_norm_is_within_a_first_order_bound() {
    let spec = BoxPairSpec::new(10.0, 1.0, 0.75, AmplitudeRule::Normalized).unwrap();
    let a = spec.amplitude();
    let (lo, hi) = spec.psi_interval();
    let exact = box_norm_hs(lo, hi, a, spec.s);
    let mut last = f64::INFINITY;
    for half_length in [7.3, 14.6, 29.2, 58.4] {
        let grid = Grid::new(half_length, 1024).unwrap();
        let f = make_data(
            &DataCatalogEntry::BoxPair {
                spec,
                member: BoxMember::Psi,
                symmetrized: false,
            },
            &grid,
        )
        .unwrap();
        let dk = grid.dk();
        let gap = (f.sobolev_norm(spec.s).powi(2) - exact.powi(2)).abs();
        let bound = a * a / TAU * dk * japanese_bracket_pow(hi + dk, 2.0 * spec.s) * (2.0 + spec.r);
        assert!(gap <= bound, "L = {half_length}: gap {gap}, bound {bound}");
        assert!(gap < last);
        last = gap;
    }
}

#[test]
fn box_pair_validates_its_geometry() {
    assert!(BoxPairSpec::new(4.0, 0.5, 0.25, AmplitudeRule::Paper).is_err());
    assert!(BoxPairSpec::new(8.0, 2.0, 0.25, AmplitudeRule::Paper).is_err());
    assert!(BoxPairSpec::new(8.0, 1.0, 0.25, AmplitudeRule::Paper).is_ok());
}

#[test]
fn mu_limit_of_the_limit_itself_is_zero() {
    let g = Grid::new(16.0, 64).unwrap();
    let phi0 = SpectralField::sample_real(&g, |x| 0.3 * (-(x - 16.0).powi(2)).exp());
    let cfg = SolverConfig {
        t_final: 0.25,
        nt: 17,
        scheme: Scheme::Etdrk2,
        ..SolverConfig::default()
    };
    let report = mu_limit_experiment(&phi0, &[0.0], &cfg).unwrap();
    assert_eq!(report.series("sup_diff_hs").unwrap(), &[0.0]);

    let report = mu_limit_experiment(&phi0, &[1.0, 0.5, 0.25, 0.125], &cfg).unwrap();
    assert!(report.all_pass(), "{:?}", report.failed_checks().collect::<Vec<_>>());
    assert!(mu_limit_experiment(&phi0, &[0.5, 1.0], &cfg).is_err());
}

#[test]
fn energy_residuals_vanish_for_zero_data() {
    let g = Grid::new(16.0, 64).unwrap();
    let cfg = SolverConfig {
        t_final: 0.25,
        nt: 17,
        scheme: Scheme::Etdrk2,
        ..SolverConfig::default()
    };
    let traj = ks_core::solver::solve(&SpectralField::zeros(&g, true), &cfg).unwrap();
    let report = energy_residuals(&traj, cfg.params);
    for series in &report.series {
        assert!(series.values.iter().all(|v| *v == 0.0), "{}", series.name);
    }
}

#[test]
fn loglog_fit_recovers_power_laws() {
    let x = [8.0, 16.0, 32.0, 64.0];
    let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-0.5)).collect();
    let (slope, intercept, residual) = loglog_fit(&x, &y).unwrap();
    assert!((slope + 0.5).abs() < 1e-12);
    assert!((intercept - 3f64.ln()).abs() < 1e-12);
    assert!(residual < 1e-12);
    assert!(loglog_fit(&x[..2], &y[..2]).is_none());
}

#[test]
fn smoothing_helpers() {
    assert!(smoothing_hypotheses(0.75, 0.2).is_ok());
    assert!(matches!(smoothing_hypotheses(0.75, 0.3), Err(KsError::InvalidParameter(_))));
    let times = [0.0, 0.1, 0.2, 0.3];
    assert_eq!(max_relative_jump(&times, &[5.0, 1.0, 1.0, 1.0]), 0.0);
    assert!((max_relative_jump(&times, &[5.0, 1.0, 1.5, 1.5]) - 0.1).abs() < 1e-12);
}
