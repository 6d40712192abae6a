//! Low-level planar polygon routines on vertex rings.
//!
//! A ring is a list of vertices; the closing edge from the last vertex back
//! to the first is implicit. All routines assume finite coordinates.

use super::{Point, Rect};

/// Signed area of a ring (positive when counterclockwise).
pub fn signed_area(ring: &[Point]) -> f64 {
    let n = ring.len();
    let mut acc = 0.0;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        acc += a.x * b.y - b.x * a.y;
    }
    0.5 * acc
}

/// Area-weighted centroid via the shoelace formula. Requires nonzero area.
pub fn centroid(ring: &[Point]) -> Point {
    let n = ring.len();
    let a = signed_area(ring);
    let mut cx = 0.0;
    let mut cy = 0.0;
    for i in 0..n {
        let p = ring[i];
        let q = ring[(i + 1) % n];
        let cross = p.x * q.y - q.x * p.y;
        cx += (p.x + q.x) * cross;
        cy += (p.y + q.y) * cross;
    }
    Point::new(cx / (6.0 * a), cy / (6.0 * a))
}

pub fn bbox(ring: &[Point]) -> Rect {
    let mut x0 = f64::INFINITY;
    let mut x1 = f64::NEG_INFINITY;
    let mut y0 = f64::INFINITY;
    let mut y1 = f64::NEG_INFINITY;
    for p in ring {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    Rect { x0, x1, y0, y1 }
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn on_segment_collinear(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Proper or improper intersection of closed segments ab and cd.
fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment_collinear(c, d, a))
        || (d2 == 0.0 && on_segment_collinear(c, d, b))
        || (d3 == 0.0 && on_segment_collinear(a, b, c))
        || (d4 == 0.0 && on_segment_collinear(a, b, d))
}

/// Check that the ring has no self-intersections. Adjacent edges may share
/// their common endpoint; any other contact fails.
pub fn is_simple(ring: &[Point]) -> bool {
    let n = ring.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        for j in (i + 1)..n {
            // Skip the edge itself and the two adjacent edges.
            if j == i || (j + 1) % n == i || (i + 1) % n == j {
                continue;
            }
            let c = ring[j];
            let d = ring[(j + 1) % n];
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

/// Distance from `p` to the closed segment ab.
pub fn seg_point_dist(a: Point, b: Point, p: Point) -> f64 {
    nearest_on_segment(a, b, p).dist(p)
}

/// Closest point of the closed segment ab to `p`.
pub fn nearest_on_segment(a: Point, b: Point, p: Point) -> Point {
    let vx = b.x - a.x;
    let vy = b.y - a.y;
    let len2 = vx * vx + vy * vy;
    if len2 == 0.0 {
        return a;
    }
    let t = (((p.x - a.x) * vx + (p.y - a.y) * vy) / len2).clamp(0.0, 1.0);
    Point::new(a.x + t * vx, a.y + t * vy)
}

/// Distance from `p` to the ring boundary.
pub fn boundary_dist(ring: &[Point], p: Point) -> f64 {
    let n = ring.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        best = best.min(seg_point_dist(ring[i], ring[(i + 1) % n], p));
    }
    best
}

/// Closest boundary point of the ring to `p`.
pub fn nearest_on_boundary(ring: &[Point], p: Point) -> Point {
    let n = ring.len();
    let mut best = ring[0];
    let mut best_d = f64::INFINITY;
    for i in 0..n {
        let q = nearest_on_segment(ring[i], ring[(i + 1) % n], p);
        let d = q.dist(p);
        if d < best_d {
            best_d = d;
            best = q;
        }
    }
    best
}

/// Point-in-ring test, boundary-inclusive up to `tol`.
pub fn contains(ring: &[Point], p: Point, tol: f64) -> bool {
    if boundary_dist(ring, p) <= tol {
        return true;
    }
    winding_contains(ring, p)
}

/// Strict interior test by even-odd ray casting (no boundary tolerance).
pub fn winding_contains(ring: &[Point], p: Point) -> bool {
    let n = ring.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let a = ring[i];
        let b = ring[j];
        if (a.y > p.y) != (b.y > p.y) {
            let x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x_cross {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Keep the part of `ring` with `n . x <= c` (Sutherland–Hodgman step
/// against one half-plane). Returns an empty ring when nothing remains.
pub fn clip_halfplane(ring: &[Point], normal: (f64, f64), c: f64) -> Vec<Point> {
    let n = ring.len();
    let side = |p: Point| normal.0 * p.x + normal.1 * p.y - c;
    let mut out = Vec::with_capacity(n + 4);
    for i in 0..n {
        let cur = ring[i];
        let nxt = ring[(i + 1) % n];
        let sc = side(cur);
        let sn = side(nxt);
        if sc <= 0.0 {
            out.push(cur);
        }
        if (sc < 0.0 && sn > 0.0) || (sc > 0.0 && sn < 0.0) {
            let t = sc / (sc - sn);
            out.push(Point::new(
                cur.x + t * (nxt.x - cur.x),
                cur.y + t * (nxt.y - cur.y),
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_square() -> Vec<Point> {
        vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ]
    }

    #[test]
    fn area_and_centroid_of_square() {
        let sq = unit_square();
        assert_relative_eq!(signed_area(&sq), 1.0);
        let c = centroid(&sq);
        assert_relative_eq!(c.x, 0.5);
        assert_relative_eq!(c.y, 0.5);
    }

    #[test]
    fn l_shape_centroid_matches_rectangle_decomposition() {
        // L-shape = [0,2]x[0,1] plus [0,1]x[1,2].
        let l = vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 2.0),
            Point::new(0.0, 2.0),
        ];
        assert_relative_eq!(signed_area(&l), 3.0);
        // area-weighted mean of the two rectangle centroids (1.0,0.5), (0.5,1.5)
        let c = centroid(&l);
        assert_relative_eq!(c.x, (2.0 * 1.0 + 1.0 * 0.5) / 3.0);
        assert_relative_eq!(c.y, (2.0 * 0.5 + 1.0 * 1.5) / 3.0);
    }

    #[test]
    fn simplicity() {
        assert!(is_simple(&unit_square()));
        let bowtie = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ];
        assert!(!is_simple(&bowtie));
    }

    #[test]
    fn containment_and_boundary() {
        let sq = unit_square();
        assert!(contains(&sq, Point::new(0.5, 0.5), 1e-12));
        assert!(contains(&sq, Point::new(0.0, 0.5), 1e-12)); // on edge
        assert!(!contains(&sq, Point::new(1.5, 0.5), 1e-12));
        assert_relative_eq!(boundary_dist(&sq, Point::new(0.5, 0.5)), 0.5);
    }

    #[test]
    fn halfplane_clip_splits_square() {
        // keep x <= 0.5
        let clipped = clip_halfplane(&unit_square(), (1.0, 0.0), 0.5);
        assert_relative_eq!(signed_area(&clipped), 0.5, epsilon = 1e-12);
    }
}
