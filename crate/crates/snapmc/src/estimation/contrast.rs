//! The (modified) minimum-contrast discrepancy between an empirical
//! K-function and the theoretical LGCP K-function.

use crate::error::{Error, Result};
use crate::kfunction::KEstimate;
use crate::simulate::{theoretical_k_grid, CovarianceParams};

/// Exponent applied to both K curves inside the squared difference.
pub const CONTRAST_EXPONENT: f64 = 0.25;

/// Integration range of the contrast: `[delta, r_max]`. A positive `delta`
/// screens out the small-distance artifacts created by duplicated points;
/// `delta = 0` recovers the plain minimum-contrast criterion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContrastConfig {
    pub delta: f64,
    pub r_max: f64,
}

impl ContrastConfig {
    pub fn new(delta: f64, r_max: f64) -> Result<Self> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::Config(format!("delta must be >= 0, got {delta}")));
        }
        if !(r_max > delta) {
            return Err(Error::Config(format!(
                "r_max {r_max} must exceed delta {delta}"
            )));
        }
        Ok(ContrastConfig { delta, r_max })
    }

    /// Plain minimum contrast: integration from zero.
    pub fn mc(r_max: f64) -> Result<Self> {
        ContrastConfig::new(0.0, r_max)
    }
}

fn nearest_node(r: &[f64], x: f64) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, &v) in r.iter().enumerate() {
        let d = (v - x).abs();
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

/// Precomputed state for repeated contrast evaluations against one curve:
/// the grid slice between the snapped bounds and the powered empirical
/// values.
pub(crate) struct ContrastEvaluator {
    rs: Vec<f64>,
    khat_pow: Vec<f64>,
    pub delta_snapped: f64,
    pub r_max_snapped: f64,
}

impl ContrastEvaluator {
    pub fn new(khat: &KEstimate, config: &ContrastConfig) -> Result<Self> {
        let r = &khat.r;
        let span = khat.r_max();
        if config.r_max > span * (1.0 + 1e-9) {
            return Err(Error::Config(format!(
                "K grid reaches {span} but r_max is {}",
                config.r_max
            )));
        }
        let i0 = nearest_node(r, config.delta);
        let i1 = nearest_node(r, config.r_max);
        if i0 >= i1 {
            return Err(Error::Config(format!(
                "integration range [{}, {}] snaps to an empty grid slice",
                config.delta, config.r_max
            )));
        }
        let rs = r[i0..=i1].to_vec();
        let khat_pow = khat.khat[i0..=i1]
            .iter()
            .map(|&v| v.max(0.0).powf(CONTRAST_EXPONENT))
            .collect();
        Ok(ContrastEvaluator {
            delta_snapped: r[i0],
            r_max_snapped: r[i1],
            rs,
            khat_pow,
        })
    }

    /// Composite-trapezoid integral of the squared difference of the powered
    /// curves over the snapped range.
    pub fn evaluate(&self, phi: f64, sigma2: f64) -> f64 {
        let cov = CovarianceParams { phi, sigma2 };
        let ktheo = theoretical_k_grid(&self.rs, &cov);
        let f: Vec<f64> = self
            .khat_pow
            .iter()
            .zip(ktheo.iter())
            .map(|(a, k)| {
                let d = a - k.powf(CONTRAST_EXPONENT);
                d * d
            })
            .collect();
        let mut acc = 0.0;
        for i in 1..self.rs.len() {
            acc += 0.5 * (f[i - 1] + f[i]) * (self.rs[i] - self.rs[i - 1]);
        }
        acc
    }
}

/// Contrast value at one parameter point. `sigma2 = 0` is admitted (the
/// theoretical curve degenerates to the Poisson K).
pub fn contrast(
    khat: &KEstimate,
    phi: f64,
    sigma2: f64,
    config: &ContrastConfig,
) -> Result<f64> {
    if !(phi > 0.0 && phi.is_finite()) || !(sigma2 >= 0.0 && sigma2.is_finite()) {
        return Err(Error::Domain(format!(
            "invalid contrast parameters phi = {phi}, sigma2 = {sigma2}"
        )));
    }
    Ok(ContrastEvaluator::new(khat, config)?.evaluate(phi, sigma2))
}
