//! LGCP point-pattern simulation on a discretized intensity.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::geometry::{Point, PointPattern, Window};
use crate::raster::RasterField;
use crate::rng::{derive_seed, rng_from_seed};

use super::{simulate_grf, CovarianceParams};

/// Deterministic mean structure of the log intensity.
#[derive(Clone, Debug)]
pub enum MeanModel {
    /// log Lambda has constant mean `value` (plus the random field).
    Constant(f64),
    /// Linear in the coordinates: `intercept + coef_x * x + coef_y * y`.
    CoordLinear {
        intercept: f64,
        coef_x: f64,
        coef_y: f64,
    },
    /// Linear in covariate rasters sampled on the simulation grid.
    CovariateLinear {
        intercept: f64,
        coefs: Vec<f64>,
        covariates: Vec<RasterField>,
    },
}

impl MeanModel {
    /// Evaluate the mean on the cell centers of an `nx x ny` grid, row-major.
    pub fn evaluate_grid(&self, window: &Window, nx: usize, ny: usize) -> Result<Vec<f64>> {
        let rect = window.as_rect().ok_or_else(|| {
            Error::UnsupportedGeometry("mean evaluation requires a rectangular window".into())
        })?;
        match self {
            MeanModel::Constant(v) => Ok(vec![*v; nx * ny]),
            MeanModel::CoordLinear {
                intercept,
                coef_x,
                coef_y,
            } => {
                let f = RasterField::from_fn(rect, nx, ny, |p| {
                    intercept + coef_x * p.x + coef_y * p.y
                })?;
                Ok(f.values().to_vec())
            }
            MeanModel::CovariateLinear {
                intercept,
                coefs,
                covariates,
            } => {
                if coefs.len() != covariates.len() {
                    return Err(Error::Config(format!(
                        "{} coefficients for {} covariates",
                        coefs.len(),
                        covariates.len()
                    )));
                }
                for c in covariates {
                    if c.nx() != nx || c.ny() != ny || c.bounds() != rect {
                        return Err(Error::Config(
                            "covariate raster does not share the simulation grid".into(),
                        ));
                    }
                }
                let mut out = vec![*intercept; nx * ny];
                for (b, c) in coefs.iter().zip(covariates.iter()) {
                    for (o, v) in out.iter_mut().zip(c.values().iter()) {
                        *o += b * v;
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Exponent beyond which `exp` rounds to infinity.
const EXP_OVERFLOW: f64 = 700.0;
/// Guard on the total expected point count.
const MAX_EXPECTED_POINTS: f64 = 1e8;

/// Draw Lambda = exp(m + Z) on the grid, then an inhomogeneous Poisson
/// pattern with piecewise-constant intensity: per-cell Poisson counts with
/// mean Lambda * cell area, points uniform within their cell.
pub fn simulate_lgcp(
    mean: &MeanModel,
    cov: &CovarianceParams,
    window: &Window,
    nx: usize,
    ny: usize,
    seed: u64,
) -> Result<PointPattern> {
    let rect = window.as_rect().ok_or_else(|| {
        Error::UnsupportedGeometry("LGCP simulation requires a rectangular window".into())
    })?;
    let m = mean.evaluate_grid(window, nx, ny)?;
    let z = simulate_grf(window, nx, ny, cov, derive_seed(seed, 0x6772_66))?;
    let dx = rect.width() / nx as f64;
    let dy = rect.height() / ny as f64;
    let cell_area = dx * dy;

    let mut mu = Vec::with_capacity(nx * ny);
    let mut total = 0.0;
    for (mv, zv) in m.iter().zip(z.values().iter()) {
        let log_lambda = mv + zv;
        if log_lambda > EXP_OVERFLOW {
            return Err(Error::SimulationOverflow(format!(
                "log intensity {log_lambda} overflows exp"
            )));
        }
        let cell_mu = log_lambda.exp() * cell_area;
        total += cell_mu;
        mu.push(cell_mu);
    }
    if !total.is_finite() || total > MAX_EXPECTED_POINTS {
        return Err(Error::SimulationOverflow(format!(
            "expected point count {total} is not tractable"
        )));
    }

    let mut rng = rng_from_seed(derive_seed(seed, 0x7074_73));
    let mut points = Vec::new();
    for iy in 0..ny {
        for ix in 0..nx {
            let cell_mu = mu[iy * nx + ix];
            if cell_mu <= 0.0 {
                continue;
            }
            let count = Poisson::new(cell_mu)
                .map_err(|e| Error::Sampling(format!("poisson({cell_mu}): {e}")))?
                .sample(&mut rng) as usize;
            let x0 = rect.x0 + ix as f64 * dx;
            let y0 = rect.y0 + iy as f64 * dy;
            for _ in 0..count {
                let x = x0 + rng.random_range(0.0..1.0) * dx;
                let y = y0 + rng.random_range(0.0..1.0) * dy;
                points.push(Point::new(x, y));
            }
        }
    }
    PointPattern::new(window.clone(), points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window() -> Window {
        Window::rect(0.0, 810.0, 0.0, 810.0).unwrap()
    }

    #[test]
    fn homogeneous_scenario_mean_count() {
        // constant mean log(1000 / |W|) with centered field: E(N) = 1000
        let area = 810.0f64 * 810.0;
        let mean = MeanModel::Constant((1000.0 / area).ln());
        let cov = CovarianceParams::new(20.0, 2.0).unwrap();
        let reps = 200;
        let mut total = 0usize;
        for s in 0..reps {
            let p = simulate_lgcp(&mean, &cov, &window(), 128, 128, 40_000 + s).unwrap();
            total += p.len();
        }
        let avg = total as f64 / reps as f64;
        assert!((avg - 1000.0).abs() < 50.0, "mean count {avg} not near 1000");
    }

    #[test]
    fn coordinate_linear_mean_count() {
        let mean = MeanModel::CoordLinear {
            intercept: -7.0753,
            coef_x: -0.0018,
            coef_y: 0.0026,
        };
        let cov = CovarianceParams::new(20.0, 2.0).unwrap();
        let reps = 200;
        let mut total = 0usize;
        for s in 0..reps {
            let p = simulate_lgcp(&mean, &cov, &window(), 128, 128, 55_000 + s).unwrap();
            total += p.len();
        }
        let avg = total as f64 / reps as f64;
        assert!((avg - 1000.0).abs() < 60.0, "mean count {avg} not near 1000");
    }

    #[test]
    fn near_degenerate_field_behaves_like_poisson() {
        // tiny sigma^2: intensity is essentially constant
        let area = 810.0f64 * 810.0;
        let mean = MeanModel::Constant((500.0 / area).ln());
        let cov = CovarianceParams::new(20.0, 1e-9).unwrap();
        let p = simulate_lgcp(&mean, &cov, &window(), 64, 64, 7).unwrap();
        assert!(p.len() > 350 && p.len() < 650, "count {}", p.len());
    }

    #[test]
    fn overflow_detected() {
        let mean = MeanModel::Constant(800.0);
        let cov = CovarianceParams::new(20.0, 2.0).unwrap();
        assert!(matches!(
            simulate_lgcp(&mean, &cov, &window(), 16, 16, 1),
            Err(Error::SimulationOverflow(_))
        ));
    }

    #[test]
    fn covariate_grid_mismatch_rejected() {
        let r = RasterField::constant(
            crate::geometry::Rect {
                x0: 0.0,
                x1: 810.0,
                y0: 0.0,
                y1: 810.0,
            },
            8,
            8,
            1.0,
        )
        .unwrap();
        let mean = MeanModel::CovariateLinear {
            intercept: 0.0,
            coefs: vec![1.0],
            covariates: vec![r],
        };
        assert!(mean.evaluate_grid(&window(), 16, 16).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let mean = MeanModel::Constant((200.0 / (810.0f64 * 810.0)).ln());
        let cov = CovarianceParams::new(15.0, 1.0).unwrap();
        let a = simulate_lgcp(&mean, &cov, &window(), 64, 64, 123).unwrap();
        let b = simulate_lgcp(&mean, &cov, &window(), 64, 64, 123).unwrap();
        assert_eq!(a.points(), b.points());
    }
}
