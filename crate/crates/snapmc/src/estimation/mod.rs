//! Minimum-contrast and modified minimum-contrast fitting of (phi, sigma2),
//! selection rules for delta and r_max, and the ad-hoc duplicate remedies.

mod contrast;
mod optim;
mod remedies;

pub use contrast::{contrast, ContrastConfig, CONTRAST_EXPONENT};
pub use optim::{fit, FitResult, MethodLabel, OptimizerSpec, ParamBounds};
pub use remedies::{dedup, jitter, redistribute};

use crate::error::{Error, Result};
use crate::geometry::{equivalent_diameter, Window};

/// Rule of thirds for the contrast lower bound: one third of the diameter of
/// the circle with the mean cell area.
pub fn delta_rule(mean_cell_area: f64) -> Result<f64> {
    Ok(equivalent_diameter(mean_cell_area)? / 3.0)
}

/// Rule of thumb for the upper integration limit: a quarter of the shorter
/// window side. Polygon windows have no canonical side, so callers must
/// supply r_max themselves.
pub fn rmax_rule(window: &Window) -> Result<f64> {
    match window.as_rect() {
        Some(r) => Ok(r.width().min(r.height()) / 4.0),
        None => Err(Error::UnsupportedGeometry(
            "r_max rule needs a rectangular window; pass r_max explicitly".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use approx::assert_relative_eq;

    #[test]
    fn delta_rule_matches_reported_values() {
        // the three corruption resolutions round to 11, 17, 20
        let cases = [(30.0f64, 11.0), (45.0, 17.0), (54.0, 20.0)];
        for (side, reported) in cases {
            let d = delta_rule(side * side).unwrap();
            assert_eq!(d.round(), reported);
        }
        assert_relative_eq!(delta_rule(45.0 * 45.0).unwrap(), 16.926, max_relative = 1e-4);
        assert_relative_eq!(delta_rule(30.0 * 30.0).unwrap(), 11.284, max_relative = 1e-4);
        assert_relative_eq!(delta_rule(54.0 * 54.0).unwrap(), 20.312, max_relative = 1e-4);
    }

    #[test]
    fn rmax_rule_values() {
        let sq = Window::rect(0.0, 810.0, 0.0, 810.0).unwrap();
        assert_relative_eq!(rmax_rule(&sq).unwrap(), 202.5);
        let rect = Window::rect(0.0, 100.0, 0.0, 400.0).unwrap();
        assert_relative_eq!(rmax_rule(&rect).unwrap(), 25.0);
        assert_relative_eq!(rmax_rule(&Window::unit_square()).unwrap(), 0.25);
        let poly = Window::polygon(vec![
            Point::new(0.0, 0.0),
            Point::new(4.0, 0.0),
            Point::new(2.0, 3.0),
        ])
        .unwrap();
        assert!(rmax_rule(&poly).is_err());
    }
}
