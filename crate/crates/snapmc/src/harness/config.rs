//! Scenario configuration: the nine Table-style presets plus a TOML-backed
//! config file format for custom studies.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::MethodLabel;
use crate::geometry::{Partition, Point, Window};
use crate::raster::RasterField;
use crate::rng::rng_from_seed;
use crate::simulate::MeanModel;

/// How the corruption partition is produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PartitionSpec {
    /// regular nx x ny grid
    Grid { nx: usize, ny: usize },
    /// Dirichlet tessellation from `cells` seeded uniform points
    Tessellation { cells: usize, seed: u64 },
    /// JSON partition document (e.g. administrative districts)
    File { path: String },
}

/// Serializable description of the mean structure. Covariate scenarios are
/// described by generator settings; the rasters are materialized on the
/// simulation grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeanSpec {
    Constant { value: f64 },
    CoordLinear {
        intercept: f64,
        coef_x: f64,
        coef_y: f64,
    },
    /// Two synthetic covariates standing in for geographic distance fields:
    /// log distance to `anchors` seeded random points, and log distance to a
    /// fixed cross-window segment. When `expected_n` is set the intercept is
    /// recalibrated so the expected point count matches it.
    SyntheticCovariates {
        intercept: f64,
        coef_anchors: f64,
        coef_segment: f64,
        anchors: usize,
        raster_seed: u64,
        expected_n: Option<f64>,
    },
}

/// Which first-order intensity feeds the K-function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntensitySpec {
    /// constant (N-1)/|W|: the homogeneous estimator
    Constant,
    /// fixed-bandwidth kernel estimate rescaled by N
    FixedKernel { h: f64 },
    /// adaptive kernel with global bandwidth selected per replication by
    /// Cronie-van Lieshout unless `h0` pins it
    AdaptiveCvl { h0: Option<f64> },
}

/// Full description of one simulation study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub label: String,
    /// rectangular domain (x0, x1, y0, y1)
    pub window: (f64, f64, f64, f64),
    pub mean: MeanSpec,
    pub phi: f64,
    pub sigma2: f64,
    pub reps: usize,
    /// simulation grid for the random field / intensity discretization
    pub sim_grid: (usize, usize),
    pub corruption: PartitionSpec,
    pub fractions: Vec<f64>,
    pub methods: Vec<MethodLabel>,
    /// jitter radius d for MC-II
    pub jitter_d: f64,
    /// MMC lower bound; when absent the rule of thirds is applied to the
    /// mean cell area of the corruption partition
    pub delta: Option<f64>,
    /// contrast upper bound; when absent the quarter-side rule is applied
    pub r_max: Option<f64>,
    pub intensity: IntensitySpec,
    /// evaluation grid for kernel intensity estimates
    pub intensity_grid: (usize, usize),
    pub base_seed: u64,
}

impl ScenarioConfig {
    /// The Table-1-style presets: H.1-H.3, IH1.1-IH1.3, IH2.1-IH2.3.
    pub fn preset(label: &str) -> Result<Self> {
        let (family, idx) = match label {
            "H.1" => ("H", 0),
            "H.2" => ("H", 1),
            "H.3" => ("H", 2),
            "IH1.1" => ("IH1", 0),
            "IH1.2" => ("IH1", 1),
            "IH1.3" => ("IH1", 2),
            "IH2.1" => ("IH2", 0),
            "IH2.2" => ("IH2", 1),
            "IH2.3" => ("IH2", 2),
            other => {
                return Err(Error::Config(format!(
                    "unknown scenario {other:?}; presets are H.1-H.3, IH1.1-IH1.3, IH2.1-IH2.3"
                )))
            }
        };
        let phis = [15.0, 20.0, 30.0];
        let phi = phis[idx];
        let area = 810.0f64 * 810.0;
        let (mean, corruption, intensity) = match family {
            "H" => (
                MeanSpec::Constant {
                    value: (1000.0 / area).ln(),
                },
                PartitionSpec::Grid { nx: 18, ny: 18 },
                IntensitySpec::Constant,
            ),
            "IH1" => (
                MeanSpec::CoordLinear {
                    intercept: -7.0753,
                    coef_x: -0.0018,
                    coef_y: 0.0026,
                },
                PartitionSpec::Grid { nx: 18, ny: 18 },
                // bandwidths chosen by the RED criterion per range parameter
                IntensitySpec::FixedKernel {
                    h: [270.0, 285.0, 325.0][idx],
                },
            ),
            _ => (
                MeanSpec::SyntheticCovariates {
                    intercept: -1.16,
                    coef_anchors: -0.392,
                    coef_segment: -1.075,
                    anchors: 10,
                    raster_seed: 1889,
                    expected_n: Some(1000.0),
                },
                // a 328-cell tessellation stands in for district boundaries
                PartitionSpec::Tessellation {
                    cells: 328,
                    seed: 1889,
                },
                IntensitySpec::AdaptiveCvl { h0: None },
            ),
        };
        Ok(ScenarioConfig {
            label: label.to_string(),
            window: (0.0, 810.0, 0.0, 810.0),
            mean,
            phi,
            sigma2: 2.0,
            reps: 100,
            sim_grid: (256, 256),
            corruption,
            fractions: vec![0.0, 0.2, 0.4, 0.6],
            methods: vec![
                MethodLabel::Mc,
                MethodLabel::McI,
                MethodLabel::McII,
                MethodLabel::McIII,
                MethodLabel::Mmc,
            ],
            jitter_d: 25.0,
            delta: None,
            r_max: None,
            intensity,
            intensity_grid: (128, 128),
            base_seed: 20_240_001,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("scenario config serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("config file: {e}")))
    }

    pub fn window_obj(&self) -> Result<Window> {
        let (x0, x1, y0, y1) = self.window;
        Window::rect(x0, x1, y0, y1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::Config("replication count must be at least 1".into()));
        }
        if self.fractions.is_empty() || self.fractions.iter().any(|f| !(0.0..=1.0).contains(f)) {
            return Err(Error::Config(
                "corruption fractions must be a nonempty subset of [0, 1]".into(),
            ));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("method list is empty".into()));
        }
        self.window_obj()?;
        Ok(())
    }

    /// Materialize the corruption partition.
    pub fn build_partition(&self) -> Result<Partition> {
        let window = self.window_obj()?;
        match &self.corruption {
            PartitionSpec::Grid { nx, ny } => Partition::regular_grid(&window, *nx, *ny),
            PartitionSpec::Tessellation { cells, seed } => {
                let b = window.bbox();
                let mut rng = rng_from_seed(*seed);
                let seeds: Vec<Point> = (0..*cells)
                    .map(|_| {
                        Point::new(
                            rng.random_range(b.x0..b.x1),
                            rng.random_range(b.y0..b.y1),
                        )
                    })
                    .collect();
                Partition::dirichlet(&window, &seeds)
            }
            PartitionSpec::File { path } => {
                crate::io::read_partition(Path::new(path), &window)
            }
        }
    }

    /// Materialize the mean model on the simulation grid.
    pub fn build_mean(&self) -> Result<MeanModel> {
        let window = self.window_obj()?;
        let (nx, ny) = self.sim_grid;
        match &self.mean {
            MeanSpec::Constant { value } => Ok(MeanModel::Constant(*value)),
            MeanSpec::CoordLinear {
                intercept,
                coef_x,
                coef_y,
            } => Ok(MeanModel::CoordLinear {
                intercept: *intercept,
                coef_x: *coef_x,
                coef_y: *coef_y,
            }),
            MeanSpec::SyntheticCovariates {
                intercept,
                coef_anchors,
                coef_segment,
                anchors,
                raster_seed,
                expected_n,
            } => {
                let covs = synthetic_covariates(&window, nx, ny, *anchors, *raster_seed)?;
                let mut model = MeanModel::CovariateLinear {
                    intercept: *intercept,
                    coefs: vec![*coef_anchors, *coef_segment],
                    covariates: covs,
                };
                if let Some(target) = expected_n {
                    let values = model.evaluate_grid(&window, nx, ny)?;
                    let cell = window.area() / (nx * ny) as f64;
                    let total: f64 = values.iter().map(|m| m.exp() * cell).sum();
                    let shift = (target / total).ln();
                    if let MeanModel::CovariateLinear { intercept, .. } = &mut model {
                        *intercept += shift;
                    }
                }
                Ok(model)
            }
        }
    }

    /// Contrast upper bound: configured value or the quarter-side rule.
    pub fn resolve_r_max(&self) -> Result<f64> {
        match self.r_max {
            Some(r) => Ok(r),
            None => crate::estimation::rmax_rule(&self.window_obj()?),
        }
    }

    /// MMC lower bound: configured value or the rule of thirds on the mean
    /// cell area of the corruption partition.
    pub fn resolve_delta(&self, partition: &Partition) -> Result<f64> {
        match self.delta {
            Some(d) => Ok(d),
            None => crate::estimation::delta_rule(partition.mean_cell_area()),
        }
    }
}

use std::path::Path;

/// Distance floor when taking logs, half a grid cell.
fn log_dist(d: f64, eps: f64) -> f64 {
    d.max(eps).ln()
}

fn seg_dist(p: Point, a: Point, b: Point) -> f64 {
    crate::geometry::poly::seg_point_dist(a, b, p)
}

/// Synthetic stand-ins for geographic covariates: log distance to seeded
/// anchor points (population centers) and to a fixed cross-window segment
/// (a trunk road).
pub fn synthetic_covariates(
    window: &Window,
    nx: usize,
    ny: usize,
    anchors: usize,
    seed: u64,
) -> Result<Vec<RasterField>> {
    let rect = window.as_rect().ok_or_else(|| {
        Error::UnsupportedGeometry("synthetic covariates need a rectangular window".into())
    })?;
    let mut rng = rng_from_seed(seed);
    let pts: Vec<Point> = (0..anchors.max(1))
        .map(|_| {
            Point::new(
                rng.random_range(rect.x0..rect.x1),
                rng.random_range(rect.y0..rect.y1),
            )
        })
        .collect();
    let eps = 0.5 * (rect.width() / nx as f64).max(rect.height() / ny as f64);
    let a = Point::new(
        rect.x0 + 0.2 * rect.width(),
        rect.y0 + 0.3 * rect.height(),
    );
    let b = Point::new(
        rect.x0 + 0.8 * rect.width(),
        rect.y0 + 0.7 * rect.height(),
    );
    let anchors_field = RasterField::from_fn(rect, nx, ny, |p| {
        let d = pts
            .iter()
            .map(|q| p.dist(*q))
            .fold(f64::INFINITY, f64::min);
        log_dist(d, eps)
    })?;
    let segment_field = RasterField::from_fn(rect, nx, ny, |p| log_dist(seg_dist(p, a, b), eps))?;
    Ok(vec![anchors_field, segment_field])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_cover_table() {
        for label in ["H.1", "H.2", "H.3", "IH1.1", "IH1.2", "IH1.3", "IH2.1", "IH2.2", "IH2.3"] {
            let c = ScenarioConfig::preset(label).unwrap();
            assert_eq!(c.label, label);
            c.validate().unwrap();
        }
        assert!(ScenarioConfig::preset("H.9").is_err());
        let h2 = ScenarioConfig::preset("H.2").unwrap();
        assert_eq!(h2.phi, 20.0);
        assert_eq!(h2.sigma2, 2.0);
        let ih13 = ScenarioConfig::preset("IH1.3").unwrap();
        assert_eq!(ih13.intensity, IntensitySpec::FixedKernel { h: 325.0 });
    }

    #[test]
    fn toml_round_trip() {
        let c = ScenarioConfig::preset("IH2.2").unwrap();
        let text = c.to_toml();
        let back = ScenarioConfig::from_toml(&text).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn delta_and_rmax_rules_resolve() {
        let c = ScenarioConfig::preset("H.2").unwrap();
        let part = c.build_partition().unwrap();
        let delta = c.resolve_delta(&part).unwrap();
        assert!((delta - 16.93).abs() < 0.01);
        assert_eq!(c.resolve_r_max().unwrap(), 202.5);
    }

    #[test]
    fn synthetic_mean_calibrates_expected_count() {
        let c = ScenarioConfig::preset("IH2.1").unwrap();
        let mean = c.build_mean().unwrap();
        let w = c.window_obj().unwrap();
        let values = mean.evaluate_grid(&w, 256, 256).unwrap();
        let cell = w.area() / (256.0 * 256.0);
        let total: f64 = values.iter().map(|m| m.exp() * cell).sum();
        assert!((total - 1000.0).abs() < 1.0, "calibrated E(N) = {total}");
    }
}
