//! Observation windows, partitions of the domain, point containment,
//! centroids, and duplicate detection.

mod dups;
mod partition;
pub mod poly;
mod window;

pub use dups::MultiplicityMap;
pub(crate) use dups::duplicate_groups;
pub use partition::{Cell, Partition};
pub use window::{Point, PointPattern, Rect, Window};

use crate::error::{Error, Result};

/// Diameter of the circle whose area equals `area`: `2 sqrt(area / pi)`.
pub fn equivalent_diameter(area: f64) -> Result<f64> {
    if !(area > 0.0) {
        return Err(Error::Domain(format!("non-positive area {area}")));
    }
    Ok(2.0 * (area / std::f64::consts::PI).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn equivalent_diameter_values() {
        assert_relative_eq!(
            equivalent_diameter(45.0 * 45.0).unwrap(),
            50.779,
            max_relative = 1e-4
        );
        assert_relative_eq!(equivalent_diameter(std::f64::consts::PI).unwrap(), 2.0);
        assert_relative_eq!(
            equivalent_diameter(30.0 * 30.0).unwrap(),
            33.851,
            max_relative = 1e-4
        );
        assert!(equivalent_diameter(0.0).is_err());
        assert!(equivalent_diameter(-1.0).is_err());
    }

    proptest! {
        #[test]
        fn equivalent_diameter_monotone(a in 1e-6f64..1e6, b in 1e-6f64..1e6) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assume!(lo < hi);
            prop_assert!(equivalent_diameter(lo).unwrap() < equivalent_diameter(hi).unwrap());
        }

        #[test]
        fn equivalent_diameter_inverts_circle_area(r in 1e-3f64..1e3) {
            let d = equivalent_diameter(std::f64::consts::PI * r * r).unwrap();
            prop_assert!((d - 2.0 * r).abs() <= 1e-12 * (2.0 * r));
        }

        #[test]
        fn partition_areas_sum_to_window(nx in 1usize..12, ny in 1usize..12) {
            let w = Window::rect(0.0, 810.0, 0.0, 810.0).unwrap();
            let g = Partition::regular_grid(&w, nx, ny).unwrap();
            let total: f64 = g.cells().iter().map(|c| c.area()).sum();
            prop_assert!(((total - w.area()) / w.area()).abs() < 1e-6);
        }

        #[test]
        fn tessellation_areas_sum_to_window(seed in 0u64..200, k in 2usize..40) {
            use rand::Rng;
            let w = Window::rect(0.0, 100.0, 0.0, 100.0).unwrap();
            let mut rng = crate::rng::rng_from_seed(seed);
            let seeds: Vec<Point> = (0..k)
                .map(|_| Point::new(rng.random_range(0.0..100.0), rng.random_range(0.0..100.0)))
                .collect();
            let t = Partition::dirichlet(&w, &seeds).unwrap();
            let total: f64 = t.cells().iter().map(|c| c.area()).sum();
            prop_assert!(((total - w.area()) / w.area()).abs() < 1e-6);
        }

        #[test]
        fn locate_roundtrip_on_cell_samples(seed in 0u64..100) {
            use rand::Rng;
            let w = Window::rect(0.0, 90.0, 0.0, 90.0).unwrap();
            let g = Partition::regular_grid(&w, 6, 6).unwrap();
            let mut rng = crate::rng::rng_from_seed(seed);
            for (k, c) in g.cells().iter().enumerate() {
                // sample strictly inside the cell bbox interior
                let b = c.bbox();
                let p = Point::new(
                    rng.random_range(b.x0 + 1e-6..b.x1 - 1e-6),
                    rng.random_range(b.y0 + 1e-6..b.y1 - 1e-6),
                );
                prop_assert_eq!(g.locate(p).unwrap(), k);
            }
        }
    }
}
