//! The metaphorical map model: a planar subdivision whose faces are simple
//! polygonal regions. Internal regions represent graph vertices; hole
//! regions fill space without representing a vertex. Regions tile their
//! union; the outer boundary is derived, not stored in files.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::geom::{polygon_signed_area, segments_properly_intersect, Point2};
use crate::graph::VertexId;
use crate::{Error, Result};

/// Identifier of a subdivision point (region corner).
#[derive(
    Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct PointId(pub u32);

impl std::fmt::Display for PointId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Identifier of a region.
#[derive(
    Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct RegionId(pub u32);

impl std::fmt::Display for RegionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    /// Represents a graph vertex; its area should approximate the weight.
    Internal,
    /// Fills space left by a non-triangular face; has a synthetic weight.
    Hole,
}

/// A simple polygonal region of the subdivision.
#[derive(Clone, Debug)]
pub struct Region {
    pub id: RegionId,
    pub kind: RegionKind,
    /// Corner points in counterclockwise cyclic order.
    pub boundary: Vec<PointId>,
    /// Area the simulation aims for (vertex weight, or synthetic for holes).
    pub target_weight: f64,
    /// The represented graph vertex; absent for holes.
    pub source_vertex: Option<VertexId>,
}

/// A planar subdivision of simple polygons sharing a point pool.
#[derive(Clone, Debug)]
pub struct MetaphoricalMap {
    points: BTreeMap<PointId, Point2>,
    regions: Vec<Region>,
    /// Derived outer boundary cycle, counterclockwise.
    outer_boundary: Vec<PointId>,
    /// Sum of all region target weights (holes included).
    total_weight: f64,
}

impl MetaphoricalMap {
    /// Builds and fully validates a map: simple regions in counterclockwise
    /// order, positive weights, a consistent tiling (every boundary segment
    /// shared by exactly two of regions-plus-outer) and a crossing-free
    /// drawing.
    pub fn new(points: BTreeMap<PointId, Point2>, regions: Vec<Region>) -> Result<Self> {
        for (id, p) in &points {
            if !p.is_finite() {
                return Err(Error::Validation(format!(
                    "point {id} has non-finite coordinates"
                )));
            }
        }
        let mut seen_region = std::collections::BTreeSet::new();
        for r in &regions {
            if !seen_region.insert(r.id) {
                return Err(Error::Validation(format!("duplicate region id {}", r.id)));
            }
            if !(r.target_weight > 0.0) || !r.target_weight.is_finite() {
                return Err(Error::Validation(format!(
                    "region {} has non-positive target weight {}",
                    r.id, r.target_weight
                )));
            }
            if r.boundary.len() < 3 {
                return Err(Error::Validation(format!(
                    "region {} has fewer than 3 corners",
                    r.id
                )));
            }
            let mut uniq = r.boundary.clone();
            uniq.sort();
            uniq.dedup();
            if uniq.len() != r.boundary.len() {
                return Err(Error::Validation(format!(
                    "region {} repeats a corner",
                    r.id
                )));
            }
            for p in &r.boundary {
                if !points.contains_key(p) {
                    return Err(Error::Validation(format!(
                        "region {} references unknown point {p}",
                        r.id
                    )));
                }
            }
        }
        if regions.is_empty() {
            return Err(Error::Validation("map has no regions".into()));
        }

        let outer_boundary = derive_outer_boundary(&points, &regions)?;
        let total_weight = regions.iter().map(|r| r.target_weight).sum();

        let map = MetaphoricalMap {
            points,
            regions,
            outer_boundary,
            total_weight,
        };
        map.validate()?;
        Ok(map)
    }

    /// Re-checks geometric invariants: regions simple and counterclockwise
    /// with positive area, and no two subdivision segments properly cross.
    pub fn validate(&self) -> Result<()> {
        for r in &self.regions {
            let poly = self.region_polygon(r);
            let area = polygon_signed_area(&poly);
            if !(area > 1e-12) {
                return Err(Error::Validation(format!(
                    "region {} is not counterclockwise with positive area (signed area {area})",
                    r.id
                )));
            }
            let k = poly.len();
            for i in 0..k {
                for j in (i + 1)..k {
                    if segments_properly_intersect(
                        poly[i],
                        poly[(i + 1) % k],
                        poly[j],
                        poly[(j + 1) % k],
                    ) {
                        return Err(Error::Validation(format!(
                            "region {} is not a simple polygon",
                            r.id
                        )));
                    }
                }
            }
        }
        // Global planarity across all unique segments.
        let segs = self.unique_segments();
        for (i, &(a1, a2)) in segs.iter().enumerate() {
            let (p1, p2) = (self.points[&a1], self.points[&a2]);
            for &(b1, b2) in segs.iter().skip(i + 1) {
                let (q1, q2) = (self.points[&b1], self.points[&b2]);
                if segments_properly_intersect(p1, p2, q1, q2) {
                    return Err(Error::Validation(format!(
                        "segments ({a1}, {a2}) and ({b1}, {b2}) cross"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn points(&self) -> &BTreeMap<PointId, Point2> {
        &self.points
    }

    pub fn pos(&self, id: PointId) -> Point2 {
        self.points[&id]
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn region(&self, id: RegionId) -> Option<&Region> {
        self.regions.iter().find(|r| r.id == id)
    }

    pub fn non_hole_regions(&self) -> impl Iterator<Item = &Region> {
        self.regions
            .iter()
            .filter(|r| r.kind == RegionKind::Internal)
    }

    pub fn holes(&self) -> impl Iterator<Item = &Region> {
        self.regions.iter().filter(|r| r.kind == RegionKind::Hole)
    }

    /// Counterclockwise outer boundary of the subdivision.
    pub fn outer_boundary(&self) -> &[PointId] {
        &self.outer_boundary
    }

    /// Sum of all region target weights, holes included.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn region_polygon(&self, r: &Region) -> Vec<Point2> {
        r.boundary.iter().map(|p| self.points[p]).collect()
    }

    /// All unique undirected boundary segments, each listed once.
    pub fn unique_segments(&self) -> Vec<(PointId, PointId)> {
        let mut set = std::collections::BTreeSet::new();
        for r in &self.regions {
            let k = r.boundary.len();
            for i in 0..k {
                let a = r.boundary[i];
                let b = r.boundary[(i + 1) % k];
                let e = if a.0 < b.0 { (a, b) } else { (b, a) };
                set.insert(e);
            }
        }
        set.into_iter().collect()
    }

    /// Average length over the unique subdivision segments.
    pub fn average_segment_length(&self) -> f64 {
        let segs = self.unique_segments();
        if segs.is_empty() {
            return 0.0;
        }
        let total: f64 = segs
            .iter()
            .map(|&(a, b)| self.points[&a].dist(self.points[&b]))
            .sum();
        total / segs.len() as f64
    }
}

/// Every segment used by exactly one region lies on the outer boundary;
/// stitches those into a single counterclockwise cycle.
fn derive_outer_boundary(
    points: &BTreeMap<PointId, Point2>,
    regions: &[Region],
) -> Result<Vec<PointId>> {
    let mut count: BTreeMap<(PointId, PointId), usize> = BTreeMap::new();
    for r in regions {
        let k = r.boundary.len();
        for i in 0..k {
            let a = r.boundary[i];
            let b = r.boundary[(i + 1) % k];
            let e = if a.0 < b.0 { (a, b) } else { (b, a) };
            *count.entry(e).or_insert(0) += 1;
        }
    }
    let mut adjacency: BTreeMap<PointId, Vec<PointId>> = BTreeMap::new();
    for (&(a, b), &c) in &count {
        match c {
            1 => {
                adjacency.entry(a).or_default().push(b);
                adjacency.entry(b).or_default().push(a);
            }
            2 => {}
            _ => {
                return Err(Error::Validation(format!(
                    "segment ({a}, {b}) is used by {c} region boundaries"
                )))
            }
        }
    }
    if adjacency.is_empty() {
        return Err(Error::Validation("map has no outer boundary".into()));
    }
    for (p, nb) in &adjacency {
        if nb.len() != 2 {
            return Err(Error::Validation(format!(
                "outer boundary is not a single cycle at point {p}"
            )));
        }
    }
    let start = *adjacency.keys().next().unwrap();
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = adjacency[&start][0];
    while cur != start {
        cycle.push(cur);
        let nb = &adjacency[&cur];
        let next = if nb[0] == prev { nb[1] } else { nb[0] };
        prev = cur;
        cur = next;
        if cycle.len() > adjacency.len() {
            return Err(Error::Validation(
                "outer boundary walk did not close".into(),
            ));
        }
    }
    if cycle.len() != adjacency.len() {
        return Err(Error::Validation(
            "outer boundary has more than one component".into(),
        ));
    }
    let poly: Vec<Point2> = cycle.iter().map(|p| points[p]).collect();
    if polygon_signed_area(&poly) < 0.0 {
        cycle.reverse();
    }
    Ok(cycle)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    /// Two unit squares side by side sharing an edge.
    fn two_squares() -> MetaphoricalMap {
        let coords = [
            (0, 0.0, 0.0),
            (1, 1.0, 0.0),
            (2, 2.0, 0.0),
            (3, 2.0, 1.0),
            (4, 1.0, 1.0),
            (5, 0.0, 1.0),
        ];
        let points: BTreeMap<PointId, Point2> = coords
            .iter()
            .map(|&(id, x, y)| (PointId(id), pt(x, y)))
            .collect();
        let regions = vec![
            Region {
                id: RegionId(0),
                kind: RegionKind::Internal,
                boundary: vec![PointId(0), PointId(1), PointId(4), PointId(5)],
                target_weight: 1.0,
                source_vertex: Some(VertexId(0)),
            },
            Region {
                id: RegionId(1),
                kind: RegionKind::Internal,
                boundary: vec![PointId(1), PointId(2), PointId(3), PointId(4)],
                target_weight: 2.0,
                source_vertex: Some(VertexId(1)),
            },
        ];
        MetaphoricalMap::new(points, regions).unwrap()
    }

    #[test]
    fn outer_boundary_is_derived_and_ccw() {
        let m = two_squares();
        let outer = m.outer_boundary();
        assert_eq!(outer.len(), 6);
        assert!(!outer.contains(&PointId(u32::MAX)));
        let poly: Vec<Point2> = outer.iter().map(|p| m.pos(*p)).collect();
        assert!(polygon_signed_area(&poly) > 0.0);
        // The shared edge (1,4) is interior, so both 1 and 4 appear on the
        // outer boundary but the cycle must not use the shared segment.
        for i in 0..outer.len() {
            let a = outer[i];
            let b = outer[(i + 1) % outer.len()];
            assert!(!(a == PointId(1) && b == PointId(4) || a == PointId(4) && b == PointId(1)));
        }
    }

    #[test]
    fn total_weight_sums_regions() {
        let m = two_squares();
        assert_eq!(m.total_weight(), 3.0);
    }

    #[test]
    fn average_segment_length_counts_shared_edge_once() {
        let m = two_squares();
        // 7 unique segments, all of length 1.
        assert_eq!(m.unique_segments().len(), 7);
        assert!((m.average_segment_length() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn clockwise_region_is_rejected() {
        let coords = [(0, 0.0, 0.0), (1, 0.0, 1.0), (2, 1.0, 0.0)];
        let points: BTreeMap<PointId, Point2> = coords
            .iter()
            .map(|&(id, x, y)| (PointId(id), pt(x, y)))
            .collect();
        let regions = vec![Region {
            id: RegionId(0),
            kind: RegionKind::Internal,
            boundary: vec![PointId(0), PointId(1), PointId(2)],
            target_weight: 1.0,
            source_vertex: None,
        }];
        assert!(MetaphoricalMap::new(points, regions).is_err());
    }

    #[test]
    fn overlapping_regions_are_rejected() {
        // Two triangles that overlap rather than tile.
        let coords = [
            (0, 0.0, 0.0),
            (1, 2.0, 0.0),
            (2, 1.0, 2.0),
            (3, 1.0, -1.0),
            (4, 1.5, 1.5),
        ];
        let points: BTreeMap<PointId, Point2> = coords
            .iter()
            .map(|&(id, x, y)| (PointId(id), pt(x, y)))
            .collect();
        let regions = vec![
            Region {
                id: RegionId(0),
                kind: RegionKind::Internal,
                boundary: vec![PointId(0), PointId(1), PointId(2)],
                target_weight: 1.0,
                source_vertex: None,
            },
            Region {
                id: RegionId(1),
                kind: RegionKind::Internal,
                boundary: vec![PointId(0), PointId(3), PointId(4)],
                target_weight: 1.0,
                source_vertex: None,
            },
        ];
        assert!(MetaphoricalMap::new(points, regions).is_err());
    }

    #[test]
    fn missing_point_reference_is_rejected() {
        let coords = [(0, 0.0, 0.0), (1, 1.0, 0.0), (2, 0.0, 1.0)];
        let points: BTreeMap<PointId, Point2> = coords
            .iter()
            .map(|&(id, x, y)| (PointId(id), pt(x, y)))
            .collect();
        let regions = vec![Region {
            id: RegionId(0),
            kind: RegionKind::Internal,
            boundary: vec![PointId(0), PointId(1), PointId(9)],
            target_weight: 1.0,
            source_vertex: None,
        }];
        assert!(matches!(
            MetaphoricalMap::new(points, regions),
            Err(Error::Validation(_))
        ));
    }
}
