//! Theoretical K-function of an LGCP with exponential covariance.
//!
//! For pair correlation g(s) = exp(sigma^2 exp(-s/phi)) the K-function is
//! K(r) = 2 pi int_0^r s g(s) ds, evaluated here by adaptive Simpson
//! quadrature.

use super::CovarianceParams;

fn integrand(s: f64, phi: f64, sigma2: f64) -> f64 {
    s * (sigma2 * (-s / phi).exp()).exp()
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    phi: f64,
    sigma2: f64,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = integrand(lm, phi, sigma2);
    let frm = integrand(rm, phi, sigma2);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, phi, sigma2)
        + adaptive(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, phi, sigma2)
}

fn integrate(a: f64, b: f64, phi: f64, sigma2: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let fa = integrand(a, phi, sigma2);
    let fm = integrand(m, phi, sigma2);
    let fb = integrand(b, phi, sigma2);
    let whole = simpson(fa, fm, fb, b - a);
    adaptive(a, b, fa, fm, fb, whole, tol, 40, phi, sigma2)
}

/// K(r) for the given covariance parameters, to relative accuracy better
/// than 1e-8. Negative `r` is treated as zero.
pub fn theoretical_k(r: f64, cov: &CovarianceParams) -> f64 {
    let r = r.max(0.0);
    if r == 0.0 {
        return 0.0;
    }
    // scale-free absolute tolerance: the integral is at least r^2/2
    let tol = 1e-11 * 0.5 * r * r;
    2.0 * std::f64::consts::PI * integrate(0.0, r, cov.phi, cov.sigma2, tol)
}

/// K at every grid value, sharing the cumulative integral across nodes.
/// The grid must be nondecreasing and nonnegative.
pub fn theoretical_k_grid(rs: &[f64], cov: &CovarianceParams) -> Vec<f64> {
    let mut out = Vec::with_capacity(rs.len());
    let mut acc = 0.0;
    let mut prev = 0.0;
    for &r in rs {
        debug_assert!(r >= prev, "r grid must be nondecreasing");
        let seg_tol = 1e-12 * (1.0 + acc) + 1e-14;
        acc += integrate(prev, r, cov.phi, cov.sigma2, seg_tol);
        prev = r;
        out.push(2.0 * std::f64::consts::PI * acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Brute-force composite Simpson reference at fixed subinterval count.
    fn composite_simpson_oracle(r: f64, phi: f64, sigma2: f64, n: usize) -> f64 {
        let n = if n % 2 == 0 { n } else { n + 1 };
        let h = r / n as f64;
        let mut acc = integrand(0.0, phi, sigma2) + integrand(r, phi, sigma2);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * integrand(i as f64 * h, phi, sigma2);
        }
        2.0 * std::f64::consts::PI * acc * h / 3.0
    }

    #[test]
    fn poisson_degenerate_is_pi_r_squared() {
        let cov = CovarianceParams::degenerate(20.0);
        for r in [1.0, 5.0, 20.0, 100.0] {
            assert_relative_eq!(
                theoretical_k(r, &cov),
                std::f64::consts::PI * r * r,
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn zero_distance_is_zero() {
        let cov = CovarianceParams::new(20.0, 2.0).unwrap();
        assert_eq!(theoretical_k(0.0, &cov), 0.0);
    }

    #[test]
    fn matches_brute_force_quadrature() {
        let cov = CovarianceParams::new(20.0, 2.0).unwrap();
        let oracle = composite_simpson_oracle(20.0, 20.0, 2.0, 1_000_000);
        assert_relative_eq!(theoretical_k(20.0, &cov), oracle, max_relative = 1e-8);
    }

    #[test]
    fn grid_agrees_with_pointwise() {
        let cov = CovarianceParams::new(15.0, 1.5).unwrap();
        let rs: Vec<f64> = (0..=64).map(|i| i as f64 * 2.0).collect();
        let grid = theoretical_k_grid(&rs, &cov);
        for (i, &r) in rs.iter().enumerate() {
            assert_relative_eq!(grid[i], theoretical_k(r, &cov), max_relative = 1e-9, epsilon = 1e-12);
        }
    }

    proptest! {
        #[test]
        fn increasing_in_r_and_sigma2_and_above_poisson(
            phi in 1.0f64..50.0,
            sigma2 in 0.1f64..5.0,
            r in 0.5f64..150.0,
        ) {
            let cov = CovarianceParams::new(phi, sigma2).unwrap();
            let k = theoretical_k(r, &cov);
            prop_assert!(k >= std::f64::consts::PI * r * r);
            prop_assert!(theoretical_k(r * 1.1, &cov) > k);
            let cov_hi = CovarianceParams::new(phi, sigma2 * 1.5).unwrap();
            prop_assert!(theoretical_k(r, &cov_hi) > k);
        }
    }
}
