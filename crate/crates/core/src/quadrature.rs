//! Small quadrature toolkit: double-exponential rule on `[0, ∞)`,
//! composite Gauss-Legendre, and the composite trapezoid rule.

use std::f64::consts::{FRAC_PI_2, PI};

/// `∫_0^∞ f(x) dx` by the exp-sinh substitution `x = exp(π/2 sinh t)`,
/// halving the step until successive estimates agree to `rel_tol`.
///
/// Handles integrable algebraic endpoint singularities at 0 and
/// exponential decay at infinity. Returns `(value, last relative change)`.
pub fn exp_sinh(f: impl Fn(f64) -> f64, rel_tol: f64) -> (f64, f64) {
    let eval = |t: f64| -> f64 {
        let x = (FRAC_PI_2 * t.sinh()).exp();
        if x == 0.0 || !x.is_finite() {
            return 0.0;
        }
        let w = x * FRAC_PI_2 * t.cosh();
        let v = f(x) * w;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    // t beyond ±4.5 maps to x < e^{-70} or x > e^{70}.
    let t_max = 4.5;
    let mut h = 0.5;
    let mut sum: f64 = {
        let k = (t_max / h) as i64;
        (-k..=k).map(|i| eval(i as f64 * h)).sum()
    };
    let mut estimate = h * sum;
    let mut change = f64::INFINITY;
    for _ in 0..12 {
        h *= 0.5;
        let k = (t_max / h) as i64;
        let odd: f64 = (-k..=k).filter(|i| i % 2 != 0).map(|i| eval(i as f64 * h)).sum();
        sum += odd;
        let next = h * sum;
        change = ((next - estimate) / next).abs();
        estimate = next;
        if change < rel_tol {
            break;
        }
    }
    (estimate, change)
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre on `[a, b]` with `panels` equal panels of a 20-point rule.
pub fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let (nodes, weights) = gauss_legendre_rule(20);
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let mid = lo + 0.5 * width;
        let half = 0.5 * width;
        total += nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half;
    }
    total
}

/// Composite trapezoid rule with `intervals` subintervals.
pub fn trapezoid<T>(f: impl Fn(f64) -> T, a: f64, b: f64, intervals: usize) -> T
where
    T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Copy,
{
    let h = (b - a) / intervals as f64;
    let mut sum = (f(a) + f(b)) * 0.5;
    for i in 1..intervals {
        sum = sum + f(a + i as f64 * h);
    }
    sum * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_sinh_gaussian_and_singular() {
        let (v, _) = exp_sinh(|x| (-x * x).exp(), 1e-14);
        assert!((v - PI.sqrt() / 2.0).abs() < 1e-13);
        // ∫_0^∞ x^{-1/2} e^{-x} dx = Γ(1/2)
        let (v, _) = exp_sinh(|x| x.powf(-0.5) * (-x).exp(), 1e-14);
        assert!((v - PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre_rule(5);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let m8: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((m8 - 2.0 / 9.0).abs() < 1e-14);
        let v = gauss_legendre(|x| x.powi(7) - 3.0 * x, 1.0, 3.0, 1);
        let exact = (3f64.powi(8) - 1.0) / 8.0 - 1.5 * (9.0 - 1.0);
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn trapezoid_is_exact_for_lines() {
        let v = trapezoid(|x| 2.0 * x + 1.0, 0.0, 3.0, 7);
        assert!((v - 12.0).abs() < 1e-13);
    }
}
