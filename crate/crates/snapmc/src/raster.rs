//! Gridded scalar fields over a rectangular extent (simulated random fields,
//! estimated intensity surfaces, covariates).

use crate::error::{Error, Result};
use crate::geometry::{Point, Rect};

/// An `nx x ny` grid of cell-center values over `bounds`. Storage is
/// row-major with row 0 at the low-y edge; the file format writes north-up
/// (see the I/O module).
#[derive(Clone, Debug, PartialEq)]
pub struct RasterField {
    bounds: Rect,
    nx: usize,
    ny: usize,
    values: Vec<f64>,
}

impl RasterField {
    pub fn new(bounds: Rect, nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        if nx == 0 || ny == 0 || values.len() != nx * ny {
            return Err(Error::Domain(format!(
                "raster dimensions {nx} x {ny} do not match {} values",
                values.len()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::Domain("raster contains non-finite values".into()));
        }
        Ok(RasterField {
            bounds,
            nx,
            ny,
            values,
        })
    }

    pub fn constant(bounds: Rect, nx: usize, ny: usize, value: f64) -> Result<Self> {
        RasterField::new(bounds, nx, ny, vec![value; nx * ny])
    }

    /// Evaluate `f` at every cell center.
    pub fn from_fn(
        bounds: Rect,
        nx: usize,
        ny: usize,
        mut f: impl FnMut(Point) -> f64,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(nx * ny);
        let dx = bounds.width() / nx as f64;
        let dy = bounds.height() / ny as f64;
        for iy in 0..ny {
            let y = bounds.y0 + (iy as f64 + 0.5) * dy;
            for ix in 0..nx {
                let x = bounds.x0 + (ix as f64 + 0.5) * dx;
                values.push(f(Point::new(x, y)));
            }
        }
        RasterField::new(bounds, nx, ny, values)
    }

    pub fn bounds(&self) -> Rect {
        self.bounds
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn cell_dx(&self) -> f64 {
        self.bounds.width() / self.nx as f64
    }

    pub fn cell_dy(&self) -> f64 {
        self.bounds.height() / self.ny as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.cell_dx() * self.cell_dy()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }

    pub fn set(&mut self, ix: usize, iy: usize, v: f64) {
        self.values[iy * self.nx + ix] = v;
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> Point {
        Point::new(
            self.bounds.x0 + (ix as f64 + 0.5) * self.cell_dx(),
            self.bounds.y0 + (iy as f64 + 0.5) * self.cell_dy(),
        )
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Midpoint-rule integral over the full extent.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_area()
    }

    /// Multiply every value by `factor` (e.g. to rescale a density that
    /// integrates to one into an intensity that integrates to n).
    pub fn scaled(&self, factor: f64) -> RasterField {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= factor;
        }
        out
    }

    /// Bilinear interpolation between cell centers; coordinates beyond the
    /// outermost centers are clamped (constant extension).
    pub fn interpolate(&self, p: Point) -> f64 {
        let dx = self.cell_dx();
        let dy = self.cell_dy();
        let fx = ((p.x - self.bounds.x0) / dx - 0.5).clamp(0.0, (self.nx - 1) as f64);
        let fy = ((p.y - self.bounds.y0) / dy - 0.5).clamp(0.0, (self.ny - 1) as f64);
        let ix = (fx.floor() as usize).min(self.nx - 1);
        let iy = (fy.floor() as usize).min(self.ny - 1);
        let ix1 = (ix + 1).min(self.nx - 1);
        let iy1 = (iy + 1).min(self.ny - 1);
        let tx = fx - ix as f64;
        let ty = fy - iy as f64;
        let v00 = self.get(ix, iy);
        let v10 = self.get(ix1, iy);
        let v01 = self.get(ix, iy1);
        let v11 = self.get(ix1, iy1);
        v00 * (1.0 - tx) * (1.0 - ty) + v10 * tx * (1.0 - ty) + v01 * (1.0 - tx) * ty
            + v11 * tx * ty
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn bounds() -> Rect {
        Rect {
            x0: 0.0,
            x1: 4.0,
            y0: 0.0,
            y1: 2.0,
        }
    }

    #[test]
    fn construction_checks() {
        assert!(RasterField::new(bounds(), 2, 2, vec![0.0; 3]).is_err());
        assert!(RasterField::new(bounds(), 2, 2, vec![f64::NAN; 4]).is_err());
    }

    #[test]
    fn from_fn_layout_and_centers() {
        let r = RasterField::from_fn(bounds(), 4, 2, |p| p.x + 10.0 * p.y).unwrap();
        assert_relative_eq!(r.get(0, 0), 0.5 + 10.0 * 0.5);
        assert_relative_eq!(r.get(3, 1), 3.5 + 10.0 * 1.5);
        assert_relative_eq!(r.cell_area(), 1.0);
    }

    #[test]
    fn interpolation_linear_field_exact() {
        let r = RasterField::from_fn(bounds(), 8, 4, |p| 2.0 * p.x - 3.0 * p.y).unwrap();
        // exact away from the clamped border strip
        let p = Point::new(1.7, 1.1);
        assert_relative_eq!(r.interpolate(p), 2.0 * 1.7 - 3.0 * 1.1, max_relative = 1e-12);
    }

    #[test]
    fn integral_of_constant() {
        let r = RasterField::constant(bounds(), 5, 3, 2.5).unwrap();
        assert_relative_eq!(r.integral(), 2.5 * 8.0);
        assert_relative_eq!(r.scaled(2.0).integral(), 5.0 * 8.0);
    }
}
