//! The three ad-hoc duplicate remedies, as preprocessing transforms.
//!
//! All three act on members of duplicate groups (multiplicity > 1); points
//! with a unique location are never moved.

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{duplicate_groups, Partition, Point, PointPattern};
use crate::rng::rng_from_seed;

/// Method I: keep one representative (the first by input order) per
/// duplicate group.
pub fn dedup(pattern: &PointPattern, tol: f64) -> PointPattern {
    let groups = duplicate_groups(pattern.points(), tol.max(0.0));
    let points = groups
        .rep
        .iter()
        .map(|&i| pattern.points()[i])
        .collect();
    pattern
        .with_points(points)
        .expect("representatives come from a valid pattern")
}

/// Method II: add independent U(-d, d) offsets to each coordinate of every
/// duplicated point. Jittered points that land outside the window are
/// dropped rather than resampled, so the count may shrink.
pub fn jitter(pattern: &PointPattern, d: f64, seed: u64) -> Result<PointPattern> {
    if !(d > 0.0) {
        return Err(Error::Domain(format!(
            "jitter radius must be positive, got {d}"
        )));
    }
    let groups = duplicate_groups(pattern.points(), pattern.default_duplicate_tol());
    let mut rng = rng_from_seed(seed);
    let mut points = Vec::with_capacity(pattern.len());
    for (i, &p) in pattern.points().iter().enumerate() {
        if groups.count[groups.group_of[i]] > 1 {
            let q = Point::new(
                p.x + rng.random_range(-d..d),
                p.y + rng.random_range(-d..d),
            );
            if pattern.window().contains(q) {
                points.push(q);
            }
        } else {
            points.push(p);
        }
    }
    pattern.with_points(points)
}

/// Retry cap for rejection sampling inside one cell.
const MAX_REJECTION_TRIES: usize = 1_000_000;

/// Method III: replace every duplicated point with a uniform draw inside its
/// containing partition cell. The count is preserved and boundary points
/// stay in the window by construction.
pub fn redistribute(
    pattern: &PointPattern,
    partition: &Partition,
    seed: u64,
) -> Result<PointPattern> {
    if partition.window() != pattern.window() {
        return Err(Error::Config(
            "pattern window and partition window differ".into(),
        ));
    }
    let groups = duplicate_groups(pattern.points(), pattern.default_duplicate_tol());
    let mut rng = rng_from_seed(seed);
    let mut points = Vec::with_capacity(pattern.len());
    for (i, &p) in pattern.points().iter().enumerate() {
        if groups.count[groups.group_of[i]] > 1 {
            let cell = &partition.cells()[partition.locate(p)?];
            let b = cell.bbox();
            let mut placed = None;
            for _ in 0..MAX_REJECTION_TRIES {
                let q = Point::new(
                    rng.random_range(b.x0..b.x1),
                    rng.random_range(b.y0..b.y1),
                );
                if crate::geometry::poly::winding_contains(cell.ring(), q) {
                    placed = Some(q);
                    break;
                }
            }
            points.push(placed.ok_or_else(|| {
                Error::Sampling(format!(
                    "rejection sampling failed in cell containing ({}, {})",
                    p.x, p.y
                ))
            })?);
        } else {
            points.push(p);
        }
    }
    pattern.with_points(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Window;

    fn pattern(points: Vec<Point>) -> PointPattern {
        PointPattern::new(Window::rect(0.0, 810.0, 0.0, 810.0).unwrap(), points).unwrap()
    }

    fn triple_plus_one() -> PointPattern {
        pattern(vec![
            Point::new(1.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(2.0, 2.0),
        ])
    }

    #[test]
    fn dedup_keeps_first_representatives() {
        let d = dedup(&triple_plus_one(), 0.0);
        assert_eq!(d.points(), &[Point::new(1.0, 1.0), Point::new(2.0, 2.0)]);
        let distinct = pattern(vec![Point::new(3.0, 3.0), Point::new(4.0, 4.0)]);
        assert_eq!(dedup(&distinct, 0.0).points(), distinct.points());
    }

    #[test]
    fn dedup_fully_corrupted_single_cell() {
        let p = pattern(vec![Point::new(405.0, 405.0); 37]);
        assert_eq!(dedup(&p, 0.0).len(), 1);
    }

    #[test]
    fn jitter_leaves_unique_points_alone() {
        let p = pattern(vec![Point::new(10.0, 10.0), Point::new(700.0, 9.0)]);
        let j = jitter(&p, 25.0, 3).unwrap();
        assert_eq!(j.points(), p.points());
    }

    #[test]
    fn jitter_spreads_duplicates_and_drops_outsiders() {
        let p = pattern(vec![Point::new(5.0, 5.0); 10]);
        let j = jitter(&p, 25.0, 11).unwrap();
        assert!(j.len() <= 10);
        for q in j.points() {
            assert!(q.x >= 0.0 && q.x <= 30.0 && q.y >= 0.0 && q.y <= 30.0);
        }
        assert_eq!(j.find_duplicates(0.0).max_multiplicity(), 1);
    }

    #[test]
    fn redistribute_preserves_count_and_cells() {
        let p = pattern(vec![
            Point::new(22.5, 22.5),
            Point::new(22.5, 22.5),
            Point::new(22.5, 22.5),
            Point::new(500.0, 600.0),
        ]);
        let part = Partition::regular_grid(p.window(), 18, 18).unwrap();
        let r = redistribute(&p, &part, 7).unwrap();
        assert_eq!(r.len(), 4);
        // duplicated points stay inside cell 0, unique point untouched
        for q in &r.points()[..3] {
            assert_eq!(part.locate(*q).unwrap(), 0);
        }
        assert_eq!(r.points()[3], Point::new(500.0, 600.0));
        assert_eq!(r.find_duplicates(0.0).max_multiplicity(), 1);
    }

    #[test]
    fn redistribute_no_duplicates_is_identity() {
        let p = pattern(vec![Point::new(100.0, 100.0), Point::new(300.0, 300.0)]);
        let part = Partition::regular_grid(p.window(), 6, 6).unwrap();
        let r = redistribute(&p, &part, 7).unwrap();
        assert_eq!(r.points(), p.points());
    }
}
