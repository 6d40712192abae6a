//! Gaussian random field and LGCP simulation, the theoretical LGCP
//! K-function, and the snapping corruption mechanism.

mod corrupt;
mod grf;
mod ktheory;
mod lgcp;

pub use corrupt::{corrupt, CorruptionSpec};
pub use grf::simulate_grf;
pub use ktheory::{theoretical_k, theoretical_k_grid};
pub use lgcp::{simulate_lgcp, MeanModel};

use crate::error::{Error, Result};

/// Parameters of the isotropic exponential covariance
/// `c(h) = sigma2 * exp(-h / phi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovarianceParams {
    /// spatial range (length units), > 0
    pub phi: f64,
    /// variance, > 0 (zero only via [`CovarianceParams::degenerate`])
    pub sigma2: f64,
}

impl CovarianceParams {
    pub fn new(phi: f64, sigma2: f64) -> Result<Self> {
        if !(phi > 0.0 && phi.is_finite()) {
            return Err(Error::Domain(format!("phi must be positive, got {phi}")));
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::Domain(format!(
                "sigma2 must be positive, got {sigma2}"
            )));
        }
        Ok(CovarianceParams { phi, sigma2 })
    }

    /// sigma2 = 0: the Poisson limit, admitted only for evaluating the
    /// theoretical K-function.
    pub fn degenerate(phi: f64) -> Self {
        CovarianceParams { phi, sigma2: 0.0 }
    }
}
