//! High-frequency box data and the bilinear Duhamel term they generate at low
//! frequency.
//!
//! For `φ̂ = a χ_{I₁}`, `ψ̂ = a χ_{I₂}` with `I₁ = [-N, -N+r]`,
//! `I₂ = [N+r, N+2r]`, the second-order response
//!
//! ```text
//! f(ξ,t) = -(e^{tΦ(ξ)}/2) (1/2π) ∫ zη φ̂(z) ψ̂(η) (e^{tD} - 1)/D dη,
//! z = ξ - η,  D = -Φ(ξ) + Φ(z) + Φ(η)
//! ```
//!
//! lives on `ξ ∈ [r, 3r]`. Its `H^s` norm there scales like `a²`, while
//! `‖φ‖_{H^s}` scales like `a N^s`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{KsError, Result};
use crate::field::japanese_bracket_pow;
use crate::quadrature::gauss_legendre;
use crate::symbol::{phi, phi_functions, SymbolParams};

use super::scan::ScanReport;

/// Relative change allowed when the per-box quadrature density is doubled.
pub const QUADRATURE_TOLERANCE: f64 = 1e-3;

const INNER_TOLERANCE: f64 = 1e-8;
const MAX_DOUBLINGS: usize = 14;
const WINDOW_PANELS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AmplitudeRule {
    /// `a = r^{-1/2} N^{-(s-1/2)}`
    Paper,
    /// `a = r^{-1/2} N^{-s}`
    Normalized,
}

impl std::str::FromStr for AmplitudeRule {
    type Err = KsError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(AmplitudeRule::Paper),
            "normalized" => Ok(AmplitudeRule::Normalized),
            other => Err(KsError::invalid(format!("unknown amplitude rule '{other}'"))),
        }
    }
}

impl fmt::Display for AmplitudeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AmplitudeRule::Paper => "paper",
            AmplitudeRule::Normalized => "normalized",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxPairSpec {
    /// Frequency offset `N`.
    pub n_offset: f64,
    /// Box width `r`.
    pub r: f64,
    pub s: f64,
    pub amplitude_rule: AmplitudeRule,
}

impl BoxPairSpec {
    pub fn new(n_offset: f64, r: f64, s: f64, amplitude_rule: AmplitudeRule) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() || !s.is_finite() {
            return Err(KsError::invalid(format!("box pair needs r > 0 and finite s, got r = {r}, s = {s}")));
        }
        if !(n_offset >= 8.0) || !(n_offset > 4.0 * r) || !n_offset.is_finite() {
            return Err(KsError::invalid(format!(
                "box pair needs N >= 8 and N > 4r, got N = {n_offset}, r = {r}"
            )));
        }
        Ok(Self {
            n_offset,
            r,
            s,
            amplitude_rule,
        })
    }

    pub fn amplitude(&self) -> f64 {
        let exponent = match self.amplitude_rule {
            AmplitudeRule::Paper => -(self.s - 0.5),
            AmplitudeRule::Normalized => -self.s,
        };
        self.r.powf(-0.5) * self.n_offset.powf(exponent)
    }

    /// `I₁ = [-N, -N+r]`
    pub fn phi_interval(&self) -> (f64, f64) {
        (-self.n_offset, -self.n_offset + self.r)
    }

    /// `I₂ = [N+r, N+2r]`
    pub fn psi_interval(&self) -> (f64, f64) {
        (self.n_offset + self.r, self.n_offset + 2.0 * self.r)
    }

    /// Output window `[r, 3r]`.
    pub fn window(&self) -> (f64, f64) {
        (self.r, 3.0 * self.r)
    }

    pub fn phi_profile(&self, symmetrized: bool) -> SpectralProfile {
        box_profile(self.phi_interval(), self.amplitude(), symmetrized)
    }

    pub fn psi_profile(&self, symmetrized: bool) -> SpectralProfile {
        box_profile(self.psi_interval(), self.amplitude(), symmetrized)
    }

    pub fn phi_norm_hs(&self) -> f64 {
        let (lo, hi) = self.phi_interval();
        box_norm_hs(lo, hi, self.amplitude(), self.s)
    }

    pub fn psi_norm_hs(&self) -> f64 {
        let (lo, hi) = self.psi_interval();
        box_norm_hs(lo, hi, self.amplitude(), self.s)
    }
}

fn box_profile((lo, hi): (f64, f64), a: f64, symmetrized: bool) -> SpectralProfile {
    let profile = SpectralProfile::boxed(lo, hi, Complex64::new(a, 0.0));
    if symmetrized {
        profile.with_mirror()
    } else {
        profile
    }
}

/// `|a| ((1/2π) ∫_lo^hi <ξ>^{2s} dξ)^{1/2}`, the `H^s` norm of `a χ_{[lo,hi]}` on the Fourier side.
pub fn box_norm_hs(lo: f64, hi: f64, a: f64, s: f64) -> f64 {
    let panels = ((hi - lo).abs().ceil() as usize).max(4);
    let integral = gauss_legendre(|xi| japanese_bracket_pow(xi, 2.0 * s), lo, hi, panels);
    a.abs() * (integral / std::f64::consts::TAU).sqrt()
}

type ProfileFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
struct ProfilePiece {
    lo: f64,
    hi: f64,
    value: ProfileFn,
}

/// Compactly supported Fourier-side profile made of smooth pieces.
#[derive(Clone, Default)]
pub struct SpectralProfile {
    pieces: Vec<ProfilePiece>,
}

impl fmt::Debug for SpectralProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let supports: Vec<(f64, f64)> = self.pieces.iter().map(|p| (p.lo, p.hi)).collect();
        f.debug_struct("SpectralProfile").field("pieces", &supports).finish()
    }
}

impl SpectralProfile {
    pub fn boxed(lo: f64, hi: f64, amplitude: Complex64) -> Self {
        Self::smooth(lo, hi, move |_| amplitude)
    }

    /// A single piece `value` on `[lo, hi]`, zero elsewhere.
    pub fn smooth(lo: f64, hi: f64, value: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        assert!(lo < hi, "profile support must be a nonempty interval");
        Self {
            pieces: vec![ProfilePiece {
                lo,
                hi,
                value: Arc::new(value),
            }],
        }
    }

    pub fn plus(mut self, other: SpectralProfile) -> Self {
        self.pieces.extend(other.pieces);
        self
    }

    /// Adds `conj(p(-ξ))` so the profile is the transform of a real function.
    pub fn with_mirror(self) -> Self {
        let mirrored: Vec<ProfilePiece> = self
            .pieces
            .iter()
            .map(|p| {
                let value = p.value.clone();
                ProfilePiece {
                    lo: -p.hi,
                    hi: -p.lo,
                    value: Arc::new(move |xi| value(-xi).conj()),
                }
            })
            .collect();
        let mut out = self;
        out.pieces.extend(mirrored);
        out
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            pieces: self
                .pieces
                .iter()
                .map(|p| {
                    let value = p.value.clone();
                    ProfilePiece {
                        lo: p.lo,
                        hi: p.hi,
                        value: Arc::new(move |xi| c * value(xi)),
                    }
                })
                .collect(),
        }
    }

    pub fn eval(&self, xi: f64) -> Complex64 {
        self.pieces
            .iter()
            .filter(|p| xi >= p.lo && xi <= p.hi)
            .map(|p| (p.value)(xi))
            .sum()
    }

    pub fn supports(&self) -> Vec<(f64, f64)> {
        self.pieces.iter().map(|p| (p.lo, p.hi)).collect()
    }

    fn min_width(&self) -> f64 {
        self.pieces.iter().map(|p| p.hi - p.lo).fold(f64::INFINITY, f64::min)
    }
}

/// `(e^{tD} - 1)/D` in the form `t φ₁(tD)`, finite at `D = 0`.
pub fn resonance_kernel(t: f64, d: f64) -> f64 {
    t * phi_functions(t * d).0
}

/// Nested trapezoid on `[a, b]` starting from `intervals` cells, doubling
/// until successive values agree to `INNER_TOLERANCE`.
fn adaptive_trapezoid(f: impl Fn(f64) -> Complex64, a: f64, b: f64, intervals: usize) -> std::result::Result<Complex64, f64> {
    let mut m = intervals.max(2);
    let mut h = (b - a) / m as f64;
    let mut sum: Complex64 = (1..m).map(|j| f(a + h * j as f64)).sum::<Complex64>() + 0.5 * (f(a) + f(b));
    let mut estimate = sum * h;
    let mut change = f64::INFINITY;
    for _ in 0..MAX_DOUBLINGS {
        let midpoints: Complex64 = (0..m).map(|j| f(a + h * (j as f64 + 0.5))).sum();
        sum += midpoints;
        m *= 2;
        h *= 0.5;
        let refined = sum * h;
        change = (refined - estimate).norm() / refined.norm().max(f64::MIN_POSITIVE);
        estimate = refined;
        if change <= INNER_TOLERANCE || refined.norm() == 0.0 {
            return Ok(estimate);
        }
    }
    Err(change)
}

/// `f(ξ, t)` for the profile pair at a single frequency.
///
/// `quad_points` is the initial trapezoid density per narrowest-piece width.
pub fn bilinear_value(
    phi_hat: &SpectralProfile,
    psi_hat: &SpectralProfile,
    xi: f64,
    params: SymbolParams,
    t: f64,
    quad_points: usize,
) -> Result<Complex64> {
    if !(t >= 0.0) {
        return Err(KsError::invalid(format!("t must be nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let width = phi_hat.min_width().min(psi_hat.min_width());
    let phi_xi = phi(xi, params);
    let mut total = Complex64::new(0.0, 0.0);
    for p in &phi_hat.pieces {
        for q in &psi_hat.pieces {
            let lo = q.lo.max(xi - p.hi);
            let hi = q.hi.min(xi - p.lo);
            if hi <= lo {
                continue;
            }
            let integrand = |eta: f64| {
                let z = xi - eta;
                let d = -phi_xi + phi(z, params) + phi(eta, params);
                (p.value)(z) * (q.value)(eta) * (z * eta * resonance_kernel(t, d))
            };
            let intervals = (quad_points as f64 * (hi - lo) / width).ceil() as usize;
            total += adaptive_trapezoid(integrand, lo, hi, intervals).map_err(|relative_change| {
                KsError::QuadratureNonConvergence { xi, relative_change }
            })?;
        }
    }
    Ok(total * (-(t * phi_xi).exp() / (2.0 * std::f64::consts::TAU)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BilinearOutcome {
    pub window: (f64, f64),
    /// Gauss-Legendre nodes in the window.
    pub xi: Vec<f64>,
    pub weights: Vec<f64>,
    pub f: Vec<Complex64>,
    /// `((1/2π) ∫_window <ξ>^{2s} |f|² dξ)^{1/2}`
    pub window_norm: f64,
    /// Window norm with doubled quadrature density.
    pub refined_norm: f64,
}

/// Gauss-Legendre nodes and weights on `[lo, hi]`, split at `breaks`.
fn window_nodes(lo: f64, hi: f64, breaks: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|b| *b > lo && *b < hi).collect();
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let (nodes, weights) = crate::quadrature::gauss_legendre_rule(20);
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for seg in cuts.windows(2) {
        let panel = (seg[1] - seg[0]) / WINDOW_PANELS as f64;
        for j in 0..WINDOW_PANELS {
            let a = seg[0] + panel * j as f64;
            for (x, w) in nodes.iter().zip(&weights) {
                xs.push(a + 0.5 * panel * (x + 1.0));
                ws.push(0.5 * panel * w);
            }
        }
    }
    (xs, ws)
}

fn window_norm(xi: &[f64], weights: &[f64], f: &[Complex64], s: f64) -> f64 {
    let integral: f64 = xi
        .iter()
        .zip(weights)
        .zip(f)
        .map(|((x, w), v)| w * japanese_bracket_pow(*x, 2.0 * s) * v.norm_sqr())
        .sum();
    (integral / std::f64::consts::TAU).sqrt()
}

/// Evaluates `f(·, t)` on the window and its restricted `H^s` norm.
///
/// The whole window is recomputed with `2 · quad_points`; a relative change of
/// the norm above [`QUADRATURE_TOLERANCE`] is reported as non-convergence.
pub fn bilinear_duhamel(
    phi_hat: &SpectralProfile,
    psi_hat: &SpectralProfile,
    s: f64,
    params: SymbolParams,
    t: f64,
    quad_points: usize,
    window: (f64, f64),
) -> Result<BilinearOutcome> {
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(KsError::invalid(format!("empty window [{lo}, {hi}]")));
    }
    if quad_points < 2 {
        return Err(KsError::invalid("need at least 2 quadrature points per box"));
    }
    let mut breaks = Vec::new();
    for (a, b) in phi_hat.supports() {
        for (c, d) in psi_hat.supports() {
            breaks.extend([a + c, a + d, b + c, b + d]);
        }
    }
    let (xi, weights) = window_nodes(lo, hi, &breaks);
    let evaluate = |points: usize| -> Result<Vec<Complex64>> {
        xi.par_iter()
            .map(|&x| bilinear_value(phi_hat, psi_hat, x, params, t, points))
            .collect()
    };
    let f = evaluate(quad_points)?;
    let refined = evaluate(2 * quad_points)?;
    let norm = window_norm(&xi, &weights, &f, s);
    let refined_norm = window_norm(&xi, &weights, &refined, s);
    let change = (norm - refined_norm).abs() / refined_norm.max(f64::MIN_POSITIVE);
    if refined_norm > 0.0 && change > QUADRATURE_TOLERANCE {
        return Err(KsError::QuadratureNonConvergence {
            xi: 0.5 * (lo + hi),
            relative_change: change,
        });
    }
    Ok(BilinearOutcome {
        window,
        xi,
        weights,
        f,
        window_norm: norm,
        refined_norm,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IllposedPoint {
    pub s: f64,
    pub n_offset: f64,
    pub r: f64,
    pub t: f64,
    pub amplitude_rule: AmplitudeRule,
    pub norm_f_hs: f64,
    pub norm_phi_hs: f64,
    pub norm_psi_hs: f64,
    /// `‖f‖_{H^s} / (‖φ‖_{H^s} ‖ψ‖_{H^s})`
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IllposedGroup {
    pub s: f64,
    pub amplitude_rule: AmplitudeRule,
    pub report: ScanReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IllposedScan {
    pub points: Vec<IllposedPoint>,
    pub groups: Vec<IllposedGroup>,
}

impl IllposedScan {
    pub fn all_pass(&self) -> bool {
        self.groups.iter().all(|g| g.report.all_pass())
    }

    pub fn group(&self, s: f64, rule: AmplitudeRule) -> Option<&IllposedGroup> {
        self.groups.iter().find(|g| g.s == s && g.amplitude_rule == rule)
    }
}

/// Slope tolerances gated for each amplitude rule.
pub const F_SLOPE_TOL: f64 = 0.15;
pub const PHI_SLOPE_TOL_PAPER: f64 = 0.1;
pub const PHI_SLOPE_TOL_NORMALIZED: f64 = 0.05;
pub const MAX_LOGLOG_RESIDUAL: f64 = 0.05;

/// Runs the box-pair construction for every `s`, `N` and both amplitude rules.
///
/// Gates: under the paper rule `‖f‖_{H^s} ~ N^{1-2s}` and `‖φ‖_{H^s} ~ N^{1/2}`;
/// under the normalized rule `‖φ‖_{H^s} ~ N^0`. The ratio slope is fitted and
/// reported for both rules.
pub fn illposed_scaling_scan(
    template: &BoxPairSpec,
    n_list: &[f64],
    t: f64,
    s_list: &[f64],
    params: SymbolParams,
    quad_points: usize,
) -> Result<IllposedScan> {
    if n_list.len() < 3 {
        return Err(KsError::invalid("N scan needs at least 3 values"));
    }
    if s_list.is_empty() {
        return Err(KsError::invalid("s list is empty"));
    }
    let n_min = n_list.iter().copied().fold(f64::INFINITY, f64::min);
    if !(n_min >= 8.0) {
        return Err(KsError::invalid(format!("every N must be >= 8, got {n_min}")));
    }
    if !(t * n_min * n_min >= 20.0) {
        return Err(KsError::invalid(format!(
            "need t N_min² >= 20 for the resonance factor to saturate, got {}",
            t * n_min * n_min
        )));
    }
    let rules = [AmplitudeRule::Paper, AmplitudeRule::Normalized];
    let mut specs = Vec::new();
    for &s in s_list {
        for rule in rules {
            for &n in n_list {
                specs.push(BoxPairSpec::new(n, template.r, s, rule)?);
            }
        }
    }
    let points: Vec<IllposedPoint> = specs
        .par_iter()
        .map(|spec| {
            let out = bilinear_duhamel(
                &spec.phi_profile(false),
                &spec.psi_profile(false),
                spec.s,
                params,
                t,
                quad_points,
                spec.window(),
            )?;
            let norm_phi_hs = spec.phi_norm_hs();
            let norm_psi_hs = spec.psi_norm_hs();
            Ok(IllposedPoint {
                s: spec.s,
                n_offset: spec.n_offset,
                r: spec.r,
                t,
                amplitude_rule: spec.amplitude_rule,
                norm_f_hs: out.window_norm,
                norm_phi_hs,
                norm_psi_hs,
                ratio: out.window_norm / (norm_phi_hs * norm_psi_hs),
            })
        })
        .collect::<Result<_>>()?;

    let groups = points
        .chunks(n_list.len())
        .map(|chunk| {
            let s = chunk[0].s;
            let rule = chunk[0].amplitude_rule;
            let mut report = ScanReport::new("N", n_list.to_vec());
            report.push_series("norm_f_hs", chunk.iter().map(|p| p.norm_f_hs).collect());
            report.push_series("norm_phi_hs", chunk.iter().map(|p| p.norm_phi_hs).collect());
            report.push_series("norm_psi_hs", chunk.iter().map(|p| p.norm_psi_hs).collect());
            report.push_series("ratio", chunk.iter().map(|p| p.ratio).collect());
            for name in ["norm_f_hs", "norm_phi_hs", "norm_psi_hs", "ratio"] {
                report.fit_loglog(name);
            }
            match rule {
                AmplitudeRule::Paper => {
                    report.check_slope("norm_f_hs", 1.0 - 2.0 * s, F_SLOPE_TOL, MAX_LOGLOG_RESIDUAL);
                    report.check_slope("norm_phi_hs", 0.5, PHI_SLOPE_TOL_PAPER, MAX_LOGLOG_RESIDUAL);
                }
                AmplitudeRule::Normalized => {
                    report.check_slope("norm_phi_hs", 0.0, PHI_SLOPE_TOL_NORMALIZED, MAX_LOGLOG_RESIDUAL);
                }
            }
            IllposedGroup {
                s,
                amplitude_rule: rule,
                report,
            }
        })
        .collect();
    Ok(IllposedScan { points, groups })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn amplitude_rules() {
        let paper = BoxPairSpec::new(64.0, 1.0, 0.25, AmplitudeRule::Paper).unwrap();
        assert!((paper.amplitude() - 64f64.powf(0.25)).abs() < 1e-12);
        let normalized = BoxPairSpec { amplitude_rule: AmplitudeRule::Normalized, ..paper };
        assert!((normalized.amplitude() - 64f64.powf(-0.25)).abs() < 1e-12);
        assert!(BoxPairSpec::new(4.0, 1.0, 0.0, AmplitudeRule::Paper).is_err());
        assert!(BoxPairSpec::new(8.0, 2.0, 0.0, AmplitudeRule::Paper).is_err());
    }

    #[test]
    fn box_norm_against_antiderivatives() {
        // s = 1: ∫(1 + ξ²) = ξ + ξ³/3
        let exact1 = |x: f64| x + x.powi(3) / 3.0;
        let v = box_norm_hs(-64.0, -63.0, 1.0, 1.0);
        let want = ((exact1(-63.0) - exact1(-64.0)) / std::f64::consts::TAU).sqrt();
        assert!((v / want - 1.0).abs() < 1e-10);
        // s = 1/2: ∫<ξ> = ½(ξ<ξ> + asinh ξ)
        let exact_half = |x: f64| 0.5 * (x * (1.0 + x * x).sqrt() + x.asinh());
        let v = box_norm_hs(9.0, 10.0, 2.0, 0.5);
        let want = 2.0 * ((exact_half(10.0) - exact_half(9.0)) / std::f64::consts::TAU).sqrt();
        assert!((v / want - 1.0).abs() < 1e-10);
    }

    #[test]
    fn kernel_limit_at_zero_denominator() {
        assert_eq!(resonance_kernel(0.3, 0.0), 0.3);
        let d = 1e-9;
        assert!((resonance_kernel(0.3, d) - 0.3).abs() < 1e-9);
        assert!((resonance_kernel(0.1, -5.0) - (((-0.5f64).exp() - 1.0) / -5.0)).abs() < 1e-15);
    }

    #[test]
    fn zero_time_gives_zero() {
        let spec = BoxPairSpec::new(32.0, 1.0, 0.0, AmplitudeRule::Paper).unwrap();
        let out = bilinear_duhamel(
            &spec.phi_profile(false),
            &spec.psi_profile(false),
            0.0,
            SymbolParams::default(),
            0.0,
            16,
            spec.window(),
        )
        .unwrap();
        assert!(out.f.iter().all(|v| v.norm() == 0.0));
        assert_eq!(out.window_norm, 0.0);
    }

    #[test]
    fn bilinear_in_each_argument() {
        let spec = BoxPairSpec::new(16.0, 1.0, 0.0, AmplitudeRule::Paper).unwrap();
        let p = SymbolParams::default();
        let base = bilinear_value(&spec.phi_profile(false), &spec.psi_profile(false), 1.7, p, 0.1, 32).unwrap();
        let c = Complex64::new(-2.5, 0.5);
        let scaled =
            bilinear_value(&spec.phi_profile(false).scaled(c), &spec.psi_profile(false), 1.7, p, 0.1, 32).unwrap();
        assert!((scaled - c * base).norm() <= 1e-12 * base.norm());
    }

    #[test]
    fn scan_preconditions() {
        let spec = BoxPairSpec::new(32.0, 1.0, 0.0, AmplitudeRule::Paper).unwrap();
        let p = SymbolParams::default();
        assert!(illposed_scaling_scan(&spec, &[32.0, 64.0], 0.1, &[0.0], p, 16).is_err());
        assert!(illposed_scaling_scan(&spec, &[8.0, 16.0, 32.0], 0.1, &[0.0], p, 16).is_err());
    }
}
