//! Partitions of the observation window into polygonal cells.

use crate::error::{Error, Result};

use super::poly;
use super::{Point, Rect, Window};

/// One partition cell: a simple polygon with its area, centroid, and the
/// location that snapped points are assigned to.
#[derive(Clone, Debug)]
pub struct Cell {
    ring: Vec<Point>,
    area: f64,
    centroid: Point,
    snap_target: Point,
    bbox: Rect,
}

impl Cell {
    fn build(mut ring: Vec<Point>, window: &Window) -> Result<Self> {
        if ring.len() < 3 {
            return Err(Error::InvalidPartition("cell ring with < 3 vertices".into()));
        }
        let a = poly::signed_area(&ring);
        if a == 0.0 {
            return Err(Error::InvalidPartition("cell with zero area".into()));
        }
        if a < 0.0 {
            ring.reverse();
        }
        if !poly::is_simple(&ring) {
            return Err(Error::InvalidPartition("cell ring self-intersects".into()));
        }
        let area = poly::signed_area(&ring);
        let centroid = poly::centroid(&ring);
        // Non-convex cells can place the shoelace centroid outside; snapping
        // keeps it when it is still somewhere in the window, otherwise falls
        // back to the closest point of the cell itself.
        let snap_target = if window.contains(centroid) {
            centroid
        } else {
            poly::nearest_on_boundary(&ring, centroid)
        };
        let bbox = poly::bbox(&ring);
        Ok(Cell {
            ring,
            area,
            centroid,
            snap_target,
            bbox,
        })
    }

    pub fn ring(&self) -> &[Point] {
        &self.ring
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn centroid(&self) -> Point {
        self.centroid
    }

    /// Location corrupted points are moved to.
    pub fn snap_target(&self) -> Point {
        self.snap_target
    }

    pub fn bbox(&self) -> Rect {
        self.bbox
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        self.bbox.contains(p, tol) && poly::contains(&self.ring, p, tol)
    }
}

/// A tiling of the window into cells.
#[derive(Clone, Debug)]
pub struct Partition {
    window: Window,
    cells: Vec<Cell>,
}

/// Relative tolerance on the cell-area sum against the window area.
const COVERAGE_RTOL: f64 = 1e-6;

impl Partition {
    /// Regular `nx x ny` grid over a rectangular window.
    pub fn regular_grid(window: &Window, nx: usize, ny: usize) -> Result<Self> {
        let rect = window.as_rect().ok_or_else(|| {
            Error::UnsupportedGeometry("regular grid requires a rectangular window".into())
        })?;
        if nx == 0 || ny == 0 {
            return Err(Error::Domain("grid dimensions must be positive".into()));
        }
        let dx = rect.width() / nx as f64;
        let dy = rect.height() / ny as f64;
        let mut cells = Vec::with_capacity(nx * ny);
        for iy in 0..ny {
            for ix in 0..nx {
                let x0 = rect.x0 + ix as f64 * dx;
                let y0 = rect.y0 + iy as f64 * dy;
                let ring = vec![
                    Point::new(x0, y0),
                    Point::new(x0 + dx, y0),
                    Point::new(x0 + dx, y0 + dy),
                    Point::new(x0, y0 + dy),
                ];
                cells.push(Cell::build(ring, window)?);
            }
        }
        Ok(Partition {
            window: window.clone(),
            cells,
        })
    }

    /// Dirichlet (Voronoi) tessellation of the window from seed points,
    /// built by half-plane intersection per seed and clipped to the window.
    pub fn dirichlet(window: &Window, seeds: &[Point]) -> Result<Self> {
        if seeds.is_empty() {
            return Err(Error::DegenerateSeeds("no seeds supplied".into()));
        }
        let tol = window.tolerance();
        for (i, s) in seeds.iter().enumerate() {
            if !window.contains(*s) {
                return Err(Error::OutOfDomain(s.x, s.y));
            }
            for t in &seeds[..i] {
                if s.dist(*t) <= tol {
                    return Err(Error::DegenerateSeeds(format!(
                        "seeds ({}, {}) and ({}, {}) coincide",
                        t.x, t.y, s.x, s.y
                    )));
                }
            }
        }
        let base = window.ring();
        let mut cells = Vec::with_capacity(seeds.len());
        for (i, si) in seeds.iter().enumerate() {
            let mut ring = base.clone();
            for (j, sj) in seeds.iter().enumerate() {
                if i == j {
                    continue;
                }
                // keep { x : |x - si| <= |x - sj| }, i.e. n.x <= n.m with
                // n = sj - si and m the midpoint.
                let n = (sj.x - si.x, sj.y - si.y);
                let m = Point::new(0.5 * (si.x + sj.x), 0.5 * (si.y + sj.y));
                let c = n.0 * m.x + n.1 * m.y;
                ring = poly::clip_halfplane(&ring, n, c);
                if ring.len() < 3 {
                    break;
                }
            }
            if ring.len() < 3 {
                return Err(Error::DegenerateSeeds(format!(
                    "seed ({}, {}) produced an empty cell",
                    si.x, si.y
                )));
            }
            cells.push(Cell::build(ring, window)?);
        }
        let part = Partition {
            window: window.clone(),
            cells,
        };
        part.check_area_sum()?;
        Ok(part)
    }

    /// Partition from explicit cell rings (e.g. administrative districts).
    /// Validates simplicity, coverage of the window and pairwise disjoint
    /// interiors.
    pub fn from_rings(window: &Window, rings: Vec<Vec<Point>>) -> Result<Self> {
        if rings.is_empty() {
            return Err(Error::InvalidPartition("no cells in document".into()));
        }
        let cells = rings
            .into_iter()
            .map(|r| Cell::build(r, window))
            .collect::<Result<Vec<_>>>()?;
        let part = Partition {
            window: window.clone(),
            cells,
        };
        part.check_area_sum()?;
        part.check_tiling()?;
        Ok(part)
    }

    fn check_area_sum(&self) -> Result<()> {
        let total: f64 = self.cells.iter().map(|c| c.area).sum();
        let wa = self.window.area();
        if ((total - wa) / wa).abs() > COVERAGE_RTOL {
            return Err(Error::InvalidPartition(format!(
                "cell areas sum to {total}, window area is {wa}"
            )));
        }
        Ok(())
    }

    /// Probe the window on an off-lattice grid: every probe must be covered
    /// by exactly one cell interior. Catches overlaps and gaps that the
    /// area-sum check alone cannot.
    fn check_tiling(&self) -> Result<()> {
        let b = self.window.bbox();
        let n = 48usize;
        let dx = b.width() / n as f64;
        let dy = b.height() / n as f64;
        for j in 0..n {
            for i in 0..n {
                // golden-ratio offsets keep probes off common edge lattices
                let p = Point::new(
                    b.x0 + (i as f64 + 0.381_966) * dx,
                    b.y0 + (j as f64 + 0.618_034) * dy,
                );
                if !self.window.contains(p) {
                    continue;
                }
                let mut hits = 0usize;
                for c in &self.cells {
                    if c.bbox.contains(p, 0.0) && poly::winding_contains(&c.ring, p) {
                        hits += 1;
                        if hits > 1 {
                            return Err(Error::InvalidPartition(format!(
                                "cells overlap near ({}, {})",
                                p.x, p.y
                            )));
                        }
                    }
                }
                if hits == 0 && self.window.boundary_dist(p) > dx.max(dy) {
                    return Err(Error::InvalidPartition(format!(
                        "coverage gap near ({}, {})",
                        p.x, p.y
                    )));
                }
            }
        }
        Ok(())
    }

    /// Index of the first cell (ascending index) whose closure contains `p`.
    pub fn locate(&self, p: Point) -> Result<usize> {
        if !self.window.contains(p) {
            return Err(Error::OutOfDomain(p.x, p.y));
        }
        let tol = self.window.tolerance();
        for (k, c) in self.cells.iter().enumerate() {
            if c.contains(p, tol) {
                return Ok(k);
            }
        }
        // p passed the window test but probe tolerance missed every cell;
        // fall back to the nearest cell boundary.
        let k = self
            .cells
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                poly::boundary_dist(&a.ring, p)
                    .partial_cmp(&poly::boundary_dist(&b.ring, p))
                    .unwrap()
            })
            .map(|(k, _)| k)
            .unwrap();
        Ok(k)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn mean_cell_area(&self) -> f64 {
        self.window.area() / self.cells.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn grid_cells_and_areas() {
        let w = Window::rect(0.0, 810.0, 0.0, 810.0).unwrap();
        let g = Partition::regular_grid(&w, 18, 18).unwrap();
        assert_eq!(g.len(), 324);
        for c in g.cells() {
            assert_relative_eq!(c.area(), 45.0 * 45.0, max_relative = 1e-12);
        }
        let g27 = Partition::regular_grid(&w, 27, 27).unwrap();
        assert_eq!(g27.len(), 729);
        assert_relative_eq!(g27.cells()[0].area(), 900.0, max_relative = 1e-12);
    }

    #[test]
    fn single_cell_grid_is_window() {
        let w = Window::unit_square();
        let g = Partition::regular_grid(&w, 1, 1).unwrap();
        assert_eq!(g.len(), 1);
        let c = g.cells()[0].centroid();
        assert_relative_eq!(c.x, 0.5);
        assert_relative_eq!(c.y, 0.5);
    }

    #[test]
    fn grid_requires_rectangle() {
        let w = Window::polygon(vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(1.0, 2.0),
        ])
        .unwrap();
        assert!(matches!(
            Partition::regular_grid(&w, 2, 2),
            Err(Error::UnsupportedGeometry(_))
        ));
    }

    #[test]
    fn two_seed_tessellation_bisects() {
        let w = Window::unit_square();
        let seeds = [Point::new(0.25, 0.5), Point::new(0.75, 0.5)];
        let t = Partition::dirichlet(&w, &seeds).unwrap();
        assert_eq!(t.len(), 2);
        assert_relative_eq!(t.cells()[0].area(), 0.5, max_relative = 1e-12);
        assert_relative_eq!(t.cells()[1].area(), 0.5, max_relative = 1e-12);
        // p right of the bisector belongs to the second seed's cell
        assert_eq!(t.locate(Point::new(0.6, 0.5)).unwrap(), 1);
    }

    #[test]
    fn single_seed_cell_is_window() {
        let w = Window::unit_square();
        let t = Partition::dirichlet(&w, &[Point::new(0.3, 0.8)]).unwrap();
        assert_eq!(t.len(), 1);
        assert_relative_eq!(t.cells()[0].area(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn duplicate_seeds_rejected() {
        let w = Window::unit_square();
        let seeds = [Point::new(0.5, 0.5), Point::new(0.5, 0.5)];
        assert!(matches!(
            Partition::dirichlet(&w, &seeds),
            Err(Error::DegenerateSeeds(_))
        ));
    }

    #[test]
    fn locate_grid_tie_breaks_low_index() {
        let w = Window::rect(0.0, 810.0, 0.0, 810.0).unwrap();
        let g = Partition::regular_grid(&w, 18, 18).unwrap();
        assert_eq!(g.locate(Point::new(1.0, 1.0)).unwrap(), 0);
        // shared edge x = 45: both cells 0 and 1 contain it; lowest wins
        assert_eq!(g.locate(Point::new(45.0, 1.0)).unwrap(), 0);
        assert!(g.locate(Point::new(-5.0, 1.0)).is_err());
    }

    #[test]
    fn from_rings_valid_and_overlapping() {
        let w = Window::rect(0.0, 2.0, 0.0, 1.0).unwrap();
        let ok = Partition::from_rings(
            &w,
            vec![
                vec![
                    Point::new(0.0, 0.0),
                    Point::new(1.0, 0.0),
                    Point::new(1.0, 1.0),
                    Point::new(0.0, 1.0),
                ],
                vec![
                    Point::new(1.0, 0.0),
                    Point::new(2.0, 0.0),
                    Point::new(2.0, 1.0),
                    Point::new(1.0, 1.0),
                ],
            ],
        )
        .unwrap();
        assert_eq!(ok.len(), 2);
        assert_relative_eq!(ok.cells()[0].area(), 1.0);

        // overlapping pair: same area sum, but probes hit two interiors
        let bad = Partition::from_rings(
            &w,
            vec![
                vec![
                    Point::new(0.0, 0.0),
                    Point::new(1.5, 0.0),
                    Point::new(1.5, 1.0),
                    Point::new(0.0, 1.0),
                ],
                vec![
                    Point::new(1.0, 0.0),
                    Point::new(1.5, 0.0),
                    Point::new(1.5, 1.0),
                    Point::new(1.0, 1.0),
                ],
            ],
        );
        assert!(matches!(bad, Err(Error::InvalidPartition(_))));
    }

    #[test]
    fn l_shaped_single_cell() {
        let w = Window::polygon(vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 2.0),
            Point::new(0.0, 2.0),
        ])
        .unwrap();
        let ring = w.ring();
        let p = Partition::from_rings(&w, vec![ring]).unwrap();
        assert_eq!(p.len(), 1);
        let c = p.cells()[0].centroid();
        assert_relative_eq!(c.x, (2.0 * 1.0 + 1.0 * 0.5) / 3.0, max_relative = 1e-12);
        assert_relative_eq!(c.y, (2.0 * 0.5 + 1.0 * 1.5) / 3.0, max_relative = 1e-12);
    }
}
