//! Detection of coincident (duplicated) points.

use super::{Point, PointPattern};

/// Distinct locations of a pattern with the number of coincident points at
/// each. Entry order follows first occurrence in the input.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicityMap {
    entries: Vec<(Point, usize)>,
}

impl MultiplicityMap {
    pub fn entries(&self) -> &[(Point, usize)] {
        &self.entries
    }

    /// Number of distinct locations.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total point count (sums to the pattern size).
    pub fn total(&self) -> usize {
        self.entries.iter().map(|(_, c)| c).sum()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.entries.iter().map(|(_, c)| *c).max().unwrap_or(0)
    }

    /// Number of points belonging to a location with multiplicity > 1.
    pub fn duplicated_points(&self) -> usize {
        self.entries
            .iter()
            .filter(|(_, c)| *c > 1)
            .map(|(_, c)| c)
            .sum()
    }
}

/// Per-point group assignment. Group representatives are first occurrences;
/// a point joins the earliest representative within `tol` of it.
pub(crate) struct DuplicateGroups {
    /// group index of each input point
    pub group_of: Vec<usize>,
    /// representative point index per group
    pub rep: Vec<usize>,
    /// member count per group
    pub count: Vec<usize>,
}

pub(crate) fn duplicate_groups(points: &[Point], tol: f64) -> DuplicateGroups {
    let mut group_of = Vec::with_capacity(points.len());
    let mut rep: Vec<usize> = Vec::new();
    let mut count: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let mut found = None;
        for (g, &r) in rep.iter().enumerate() {
            let q = points[r];
            if (tol == 0.0 && p.x == q.x && p.y == q.y) || (tol > 0.0 && p.dist(q) <= tol) {
                found = Some(g);
                break;
            }
        }
        match found {
            Some(g) => {
                count[g] += 1;
                group_of.push(g);
            }
            None => {
                rep.push(i);
                count.push(1);
                group_of.push(rep.len() - 1);
            }
        }
    }
    DuplicateGroups {
        group_of,
        rep,
        count,
    }
}

impl PointPattern {
    /// Group coincident points (pairwise distance to the group representative
    /// at most `tol`) and report each distinct location with its count.
    pub fn find_duplicates(&self, tol: f64) -> MultiplicityMap {
        let g = duplicate_groups(self.points(), tol.max(0.0));
        let entries = g
            .rep
            .iter()
            .zip(g.count.iter())
            .map(|(&r, &c)| (self.points()[r], c))
            .collect();
        MultiplicityMap { entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Window;

    fn pat(points: Vec<Point>) -> PointPattern {
        PointPattern::new(Window::rect(-10.0, 10.0, -10.0, 10.0).unwrap(), points).unwrap()
    }

    #[test]
    fn exact_duplicates_grouped() {
        let p = pat(vec![
            Point::new(1.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(2.0, 2.0),
        ]);
        let m = p.find_duplicates(0.0);
        assert_eq!(m.entries(), &[(Point::new(1.0, 1.0), 2), (Point::new(2.0, 2.0), 1)]);
        assert_eq!(m.total(), 3);
    }

    #[test]
    fn distinct_points_all_count_one() {
        let p = pat(vec![Point::new(0.0, 0.0), Point::new(3.0, 4.0)]);
        let m = p.find_duplicates(0.0);
        assert!(m.entries().iter().all(|(_, c)| *c == 1));
        assert_eq!(m.max_multiplicity(), 1);
        assert_eq!(m.duplicated_points(), 0);
    }

    #[test]
    fn tolerance_groups_near_coincident() {
        let p = pat(vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 1e-10),
            Point::new(5.0, 5.0),
        ]);
        let m = p.find_duplicates(1e-9);
        assert_eq!(m.len(), 2);
        assert_eq!(m.entries()[0], (Point::new(0.0, 0.0), 2));
        assert_eq!(m.entries()[1], (Point::new(5.0, 5.0), 1));
    }
}
