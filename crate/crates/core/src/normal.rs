//! Standard normal density, distribution function and the bivariate
//! distribution function.

use libm::erfc;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density.
pub fn pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal distribution function, accurate in relative terms in
/// both tails.
pub fn cdf(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// `φ(x) / Φ(x)`, the inverse Mills ratio of the lower tail.
pub fn mills_lower(x: f64) -> f64 {
    if x > -30.0 {
        pdf(x) / cdf(x)
    } else {
        // asymptotic series, Φ(x) underflows relative to φ(x) out here
        let y = 1.0 / (x * x);
        -x / (1.0 - y + 3.0 * y * y - 15.0 * y * y * y)
    }
}

/// `P(Z1 ≤ h, Z2 ≤ k)` for standard normals with correlation `rho`.
///
/// Integrates `φ(z) Φ((k − ρ z)/√(1−ρ²))` over `z ≤ h` with adaptive
/// Simpson quadrature.
pub fn bivariate_cdf(h: f64, k: f64, rho: f64) -> f64 {
    assert!(
        (-1.0..=1.0).contains(&rho),
        "correlation {rho} outside [-1, 1]"
    );
    if h == f64::NEG_INFINITY || k == f64::NEG_INFINITY {
        return 0.0;
    }
    if rho >= 1.0 {
        return cdf(h.min(k));
    }
    if rho <= -1.0 {
        return (cdf(h) - cdf(-k)).max(0.0);
    }
    if h > 12.0 {
        // mass of Z1 above 12 sigma is below 1e-32
        return cdf(k);
    }
    let lo = -12.0_f64;
    if h <= lo {
        return 0.0;
    }
    let s = (1.0 - rho * rho).sqrt();
    let integrand = |z: f64| pdf(z) * cdf((k - rho * z) / s);
    adaptive_simpson(&integrand, lo, h, 1e-14, 48)
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Log density of `N(mean, sd²)` at `y`.
pub(crate) fn log_likelihood(y: f64, mean: f64, sd: f64) -> f64 {
    let z = (y - mean) / sd;
    -0.5 * z * z - sd.ln() - 0.5 * (2.0 * PI).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_reference_values() {
        assert!((cdf(0.0) - 0.5).abs() < 1e-16);
        assert!((cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-15);
        assert!((cdf(-1.0) - 0.158_655_253_931_457_05).abs() < 1e-16);
        // deep lower tail keeps relative accuracy
        let v = cdf(-10.0);
        assert!(((v - 7.619_853_024_160_527e-24) / v).abs() < 1e-13);
    }

    #[test]
    fn mills_ratio_is_continuous_across_the_switch() {
        let a = mills_lower(-30.0 + 1e-9);
        let b = mills_lower(-30.0 - 1e-9);
        assert!(((a - b) / a).abs() < 1e-6);
    }

    #[test]
    fn bivariate_matches_independent_and_comonotone_cases() {
        for &(h, k) in &[(0.3, -0.2), (-1.0, 1.5), (2.0, 2.0)] {
            let ind = bivariate_cdf(h, k, 0.0);
            assert!((ind - cdf(h) * cdf(k)).abs() < 1e-12);
        }
        // P(Z1 ≤ 0, Z2 ≤ 0) = 1/4 + asin(ρ)/(2π)
        for &rho in &[-0.9, -0.3, 0.5, 0.95] {
            let exact = 0.25 + f64::asin(rho) / (2.0 * PI);
            assert!(
                (bivariate_cdf(0.0, 0.0, rho) - exact).abs() < 1e-11,
                "rho {rho}"
            );
        }
    }
}
