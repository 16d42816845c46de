use serde::Serialize;

/// A named measured quantity, one value per abscissa.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub name: String,
    pub values: Vec<f64>,
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeFit {
    pub series: String,
    pub slope: f64,
    pub intercept: f64,
    /// RMS of the log-log residuals.
    pub residual: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    /// Target or limit the measurement is compared with.
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub abscissa: String,
    pub abscissae: Vec<f64>,
    pub series: Vec<Series>,
    pub fits: Vec<SlopeFit>,
    pub checks: Vec<Check>,
}

/// Log-log least squares; `None` with fewer than 3 points or any nonpositive value.
pub fn loglog_fit(x: &[f64], y: &[f64]) -> Option<(f64, f64, f64)> {
    if x.len() != y.len() || x.len() < 3 {
        return None;
    }
    if x.iter().chain(y).any(|v| !(v.is_finite() && *v > 0.0)) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    Some((slope, intercept, (rss / n).sqrt()))
}

impl ScanReport {
    pub fn new(abscissa: impl Into<String>, abscissae: Vec<f64>) -> Self {
        Self {
            abscissa: abscissa.into(),
            abscissae,
            series: Vec::new(),
            fits: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn push_series(&mut self, name: impl Into<String>, values: Vec<f64>) {
        debug_assert_eq!(values.len(), self.abscissae.len());
        self.series.push(Series {
            name: name.into(),
            values,
        });
    }

    pub fn series(&self, name: &str) -> Option<&[f64]> {
        self.series
            .iter()
            .find(|s| s.name == name)
            .map(|s| s.values.as_slice())
    }

    /// Fits `series` against the abscissae and records the fit if defined.
    pub fn fit_loglog(&mut self, series: &str) -> Option<SlopeFit> {
        let values = self.series(series)?;
        let (slope, intercept, residual) = loglog_fit(&self.abscissae, values)?;
        let fit = SlopeFit {
            series: series.to_string(),
            slope,
            intercept,
            residual,
            points: values.len(),
        };
        self.fits.push(fit.clone());
        Some(fit)
    }

    pub fn fit(&self, series: &str) -> Option<&SlopeFit> {
        self.fits.iter().find(|f| f.series == series)
    }

    pub fn check(&mut self, name: impl Into<String>, measured: f64, bound: f64, pass: bool) {
        self.checks.push(Check {
            name: name.into(),
            measured,
            bound,
            pass,
        });
    }

    /// Records `|slope - target| <= tol` and `residual < max_residual` for a fit.
    /// A missing fit fails both checks.
    pub fn check_slope(&mut self, series: &str, target: f64, tol: f64, max_residual: f64) {
        let (slope, residual) = self
            .fit(series)
            .map(|f| (f.slope, f.residual))
            .unwrap_or((f64::NAN, f64::NAN));
        self.check(
            format!("{series}.slope_within_{tol}"),
            slope,
            target,
            (slope - target).abs() <= tol,
        );
        self.check(
            format!("{series}.residual"),
            residual,
            max_residual,
            residual < max_residual,
        );
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law_has_zero_residual() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-1.5)).collect();
        let (slope, intercept, residual) = loglog_fit(&x, &y).unwrap();
        assert!((slope + 1.5).abs() < 1e-12);
        assert!((intercept - 3f64.ln()).abs() < 1e-12);
        assert!(residual < 1e-12);
    }

    #[test]
    fn fit_needs_three_positive_points() {
        assert!(loglog_fit(&[1.0, 2.0], &[1.0, 2.0]).is_none());
        assert!(loglog_fit(&[1.0, 2.0, 3.0], &[1.0, 0.0, 2.0]).is_none());
    }

    #[test]
    fn slope_checks_fail_without_fit() {
        let mut r = ScanReport::new("N", vec![1.0, 2.0]);
        r.push_series("y", vec![1.0, 2.0]);
        assert!(r.fit_loglog("y").is_none());
        r.check_slope("y", 1.0, 0.1, 0.05);
        assert!(!r.all_pass());
    }
}
