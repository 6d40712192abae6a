//! Snapping corruption: relocate a random share of points to the centroid
//! of their containing partition cell.

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{Partition, PointPattern};
use crate::rng::rng_from_seed;

/// How a pattern is corrupted: which partition supplies the snap targets,
/// what share of points is snapped, and the selection seed.
#[derive(Clone, Debug)]
pub struct CorruptionSpec {
    pub partition: Partition,
    pub fraction: f64,
    pub seed: u64,
}

impl CorruptionSpec {
    pub fn new(partition: Partition, fraction: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(Error::Config(format!(
                "corruption fraction {fraction} outside [0, 1]"
            )));
        }
        Ok(CorruptionSpec {
            partition,
            fraction,
            seed,
        })
    }
}

/// Snap `floor(fraction * N)` points, selected uniformly without replacement
/// by a seeded Fisher-Yates prefix, to their cell's snap target. All other
/// points are unchanged; the point count is preserved.
pub fn corrupt(pattern: &PointPattern, spec: &CorruptionSpec) -> Result<PointPattern> {
    if spec.partition.window() != pattern.window() {
        return Err(Error::Config(
            "pattern window and partition window differ".into(),
        ));
    }
    let n = pattern.len();
    let n_snap = (spec.fraction * n as f64).floor() as usize;
    let mut points = pattern.points().to_vec();
    if n_snap == 0 {
        return Ok(pattern.clone());
    }
    let mut idx: Vec<usize> = (0..n).collect();
    let mut rng = rng_from_seed(spec.seed);
    for i in 0..n_snap {
        let j = rng.random_range(i..n);
        idx.swap(i, j);
    }
    for &i in &idx[..n_snap] {
        let cell = spec.partition.locate(points[i])?;
        points[i] = spec.partition.cells()[cell].snap_target();
    }
    pattern.with_points(points)
}
