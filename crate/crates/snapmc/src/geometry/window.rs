//! Observation windows and point patterns.

use serde::{Deserialize, Serialize};

use super::poly;
use crate::error::{Error, Result};

/// A planar location.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        p.x >= self.x0 - tol && p.x <= self.x1 + tol && p.y >= self.y0 - tol && p.y <= self.y1 + tol
    }

    pub fn ring(&self) -> Vec<Point> {
        vec![
            Point::new(self.x0, self.y0),
            Point::new(self.x1, self.y0),
            Point::new(self.x1, self.y1),
            Point::new(self.x0, self.y1),
        ]
    }
}

/// Observation domain: a rectangle or a simple polygon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Window {
    Rect(Rect),
    Polygon { ring: Vec<Point> },
}

impl Window {
    /// Rectangular window `[x0, x1] x [y0, y1]`.
    pub fn rect(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x1 > x0 && y1 > y0) || ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
            return Err(Error::Domain(format!(
                "degenerate rectangle [{x0}, {x1}] x [{y0}, {y1}]"
            )));
        }
        Ok(Window::Rect(Rect { x0, x1, y0, y1 }))
    }

    /// Unit square helper used widely in tests.
    pub fn unit_square() -> Self {
        Window::Rect(Rect {
            x0: 0.0,
            x1: 1.0,
            y0: 0.0,
            y1: 1.0,
        })
    }

    /// Simple polygon window. Vertices are normalized to counterclockwise
    /// order; the closing edge is implicit.
    pub fn polygon(mut ring: Vec<Point>) -> Result<Self> {
        if ring.len() < 3 {
            return Err(Error::Domain("polygon needs at least 3 vertices".into()));
        }
        if !ring.iter().all(|p| p.x.is_finite() && p.y.is_finite()) {
            return Err(Error::Domain("polygon has non-finite vertices".into()));
        }
        let a = poly::signed_area(&ring);
        if a == 0.0 {
            return Err(Error::Domain("polygon has zero area".into()));
        }
        if a < 0.0 {
            ring.reverse();
        }
        if !poly::is_simple(&ring) {
            return Err(Error::Domain("polygon ring self-intersects".into()));
        }
        Ok(Window::Polygon { ring })
    }

    pub fn is_rect(&self) -> bool {
        matches!(self, Window::Rect(_))
    }

    pub fn as_rect(&self) -> Option<Rect> {
        match self {
            Window::Rect(r) => Some(*r),
            Window::Polygon { .. } => None,
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Window::Rect(r) => r.area(),
            Window::Polygon { ring } => poly::signed_area(ring),
        }
    }

    pub fn bbox(&self) -> Rect {
        match self {
            Window::Rect(r) => *r,
            Window::Polygon { ring } => poly::bbox(ring),
        }
    }

    /// Containment tolerance: 1e-9 of the larger bbox dimension.
    pub fn tolerance(&self) -> f64 {
        let b = self.bbox();
        1e-9 * b.width().max(b.height())
    }

    /// Boundary-inclusive containment.
    pub fn contains(&self, p: Point) -> bool {
        let tol = self.tolerance();
        match self {
            Window::Rect(r) => r.contains(p, tol),
            Window::Polygon { ring } => poly::contains(ring, p, tol),
        }
    }

    /// Distance from an interior point to the window boundary.
    pub fn boundary_dist(&self, p: Point) -> f64 {
        match self {
            Window::Rect(r) => (p.x - r.x0)
                .min(r.x1 - p.x)
                .min(p.y - r.y0)
                .min(r.y1 - p.y)
                .max(0.0),
            Window::Polygon { ring } => poly::boundary_dist(ring, p),
        }
    }

    /// Bounding-box diagonal; used to scale bandwidth candidate grids.
    pub fn diameter(&self) -> f64 {
        let b = self.bbox();
        b.width().hypot(b.height())
    }

    pub fn ring(&self) -> Vec<Point> {
        match self {
            Window::Rect(r) => r.ring(),
            Window::Polygon { ring } => ring.clone(),
        }
    }
}

/// A finite set of locations observed inside a window.
#[derive(Clone, Debug, PartialEq)]
pub struct PointPattern {
    window: Window,
    points: Vec<Point>,
}

impl PointPattern {
    /// Build a pattern, checking every point against the window (boundary
    /// inclusive).
    pub fn new(window: Window, points: Vec<Point>) -> Result<Self> {
        for p in &points {
            if !window.contains(*p) {
                return Err(Error::OutOfDomain(p.x, p.y));
            }
        }
        Ok(PointPattern { window, points })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Default tolerance for grouping coincident points: relative to the
    /// window scale so text round-trips of coordinates stay grouped.
    pub fn default_duplicate_tol(&self) -> f64 {
        let b = self.window.bbox();
        1e-9 * b.width().max(b.height())
    }

    /// Replace the point list, revalidating containment.
    pub fn with_points(&self, points: Vec<Point>) -> Result<Self> {
        PointPattern::new(self.window.clone(), points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_window_basics() {
        let w = Window::rect(0.0, 810.0, 0.0, 810.0).unwrap();
        assert_eq!(w.area(), 810.0 * 810.0);
        assert!(w.contains(Point::new(0.0, 0.0)));
        assert!(w.contains(Point::new(810.0, 810.0)));
        assert!(!w.contains(Point::new(-1.0, 5.0)));
        assert!(Window::rect(1.0, 1.0, 0.0, 2.0).is_err());
    }

    #[test]
    fn polygon_window_orientation_normalized() {
        // clockwise input
        let w = Window::polygon(vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
        ])
        .unwrap();
        assert!((w.area() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn self_intersecting_polygon_rejected() {
        let r = Window::polygon(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ]);
        assert!(r.is_err());
    }

    #[test]
    fn pattern_rejects_outside_points() {
        let w = Window::unit_square();
        assert!(PointPattern::new(w.clone(), vec![Point::new(0.5, 0.5)]).is_ok());
        assert!(PointPattern::new(w, vec![Point::new(1.5, 0.5)]).is_err());
    }

    #[test]
    fn boundary_distance_rect() {
        let w = Window::rect(0.0, 10.0, 0.0, 4.0).unwrap();
        assert_eq!(w.boundary_dist(Point::new(5.0, 2.0)), 2.0);
        assert_eq!(w.boundary_dist(Point::new(1.0, 2.0)), 1.0);
    }
}
