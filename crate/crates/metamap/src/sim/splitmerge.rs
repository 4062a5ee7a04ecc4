//! Boundary resolution maintenance: split segments that have grown too
//! long and merge corners that have drifted too close to a neighbor.
//!
//! Both phases use the average segment length measured once at the start.
//! Splits insert the midpoint into every face bordering the segment.
//! Merges only ever remove degree-2 corners (junctions where three or more
//! regions meet are structural) and are vetoed whenever removal would leave
//! a face with fewer than three corners, shortcut across foreign geometry,
//! duplicate an existing segment, or flip a face.

use crate::geom::{polygon_signed_area, segments_properly_intersect, Point2, Vec2};

use super::SimState;

pub(crate) fn split_and_merge(st: &mut SimState) {
    let lbar = st.average_segment_length();
    if !(lbar > 0.0) || !lbar.is_finite() {
        return;
    }
    split_long_segments(st, lbar);
    merge_close_corners(st, lbar);
}

fn split_long_segments(st: &mut SimState, lbar: f64) {
    let threshold = st.params.split_factor * lbar;
    for (a, b) in st.unique_segments() {
        let pa = st.pos[a as usize];
        let pb = st.pos[b as usize];
        if pa.dist(pb) <= threshold {
            continue;
        }
        let mid = Point2::new((pa.x + pb.x) / 2.0, (pa.y + pb.y) / 2.0);
        let m = st.pos.len() as u32;
        st.pos.push(mid);
        st.alive.push(true);
        st.forces.push(Vec2::ZERO);
        for f in &mut st.faces {
            let k = f.boundary.len();
            for i in 0..k {
                let u = f.boundary[i];
                let v = f.boundary[(i + 1) % k];
                if (u == a && v == b) || (u == b && v == a) {
                    f.boundary.insert(i + 1, m);
                    break;
                }
            }
        }
    }
}

fn merge_close_corners(st: &mut SimState, lbar: f64) {
    let threshold = st.params.merge_fraction * lbar;
    let mut topo = st.topology();
    for v in 0..st.pos.len() {
        if !st.alive[v] {
            continue;
        }
        let nbrs = &topo.adjacency[v];
        if nbrs.len() != 2 {
            continue;
        }
        let (x, y) = (nbrs[0], nbrs[1]);
        let p = st.pos[v];
        let dmin = p
            .dist(st.pos[x as usize])
            .min(p.dist(st.pos[y as usize]));
        if dmin >= threshold {
            continue;
        }
        if merge_is_safe(st, &topo, v as u32, x, y) {
            for &fi in &topo.vertex_faces[v] {
                st.faces[fi].boundary.retain(|&u| u != v as u32);
            }
            st.alive[v] = false;
            topo = st.topology();
        }
    }
}

/// Checks every veto for replacing the path `x - v - y` by the segment
/// `(x, y)` in the faces around `v`.
fn merge_is_safe(st: &SimState, topo: &super::Topology, v: u32, x: u32, y: u32) -> bool {
    // The shortcut must not duplicate an existing segment.
    if topo.adjacency[x as usize].binary_search(&y).is_ok() {
        return false;
    }
    let px = st.pos[x as usize];
    let py = st.pos[y as usize];
    for &fi in &topo.vertex_faces[v as usize] {
        let b = &st.faces[fi].boundary;
        let k = b.len();
        // A face must keep at least three corners.
        if k < 4 {
            return false;
        }
        // The shortcut must not cross any surviving edge of the face.
        for i in 0..k {
            let u = b[i];
            let w = b[(i + 1) % k];
            if u == v || w == v {
                continue;
            }
            if segments_properly_intersect(px, py, st.pos[u as usize], st.pos[w as usize]) {
                return false;
            }
        }
        // The face must stay positively oriented without the corner.
        let poly: Vec<Point2> = b
            .iter()
            .filter(|&&u| u != v)
            .map(|&u| st.pos[u as usize])
            .collect();
        if !(polygon_signed_area(&poly) > 1e-12) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use crate::geom::Point2;
    use crate::map::{MetaphoricalMap, PointId, Region, RegionId, RegionKind};
    use crate::sim::{SimParams, SimState};
    use std::collections::BTreeMap;

    fn rectangle_map(corners: &[(f64, f64)]) -> MetaphoricalMap {
        let points: BTreeMap<PointId, Point2> = corners
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| (PointId(i as u32), Point2::new(x, y)))
            .collect();
        let boundary = (0..corners.len() as u32).map(PointId).collect();
        let regions = vec![Region {
            id: RegionId(0),
            kind: RegionKind::Internal,
            boundary,
            target_weight: 1.0,
            source_vertex: None,
        }];
        MetaphoricalMap::new(points, regions).unwrap()
    }

    #[test]
    fn long_segments_split_at_their_midpoints() {
        let map = rectangle_map(&[(0.0, 0.0), (10.0, 0.0), (10.0, 1.0), (0.0, 1.0)]);
        let params = SimParams {
            split_factor: 1.5,
            ..SimParams::default()
        };
        let mut st = SimState::from_map(&map, &params).unwrap();
        // Average length 5.5; both long sides exceed 1.5 * 5.5.
        st.split_and_merge();
        let out = st.to_map().unwrap();
        assert_eq!(out.points().len(), 6);
        assert_eq!(out.regions()[0].boundary.len(), 6);
        assert!(out
            .points()
            .values()
            .any(|p| (p.x - 5.0).abs() < 1e-12 && p.y == 0.0));
        assert!(out
            .points()
            .values()
            .any(|p| (p.x - 5.0).abs() < 1e-12 && (p.y - 1.0).abs() < 1e-12));
        out.validate().unwrap();
    }

    #[test]
    fn near_coincident_corner_merges_away() {
        let map = rectangle_map(&[
            (0.0, 0.0),
            (0.05, 0.0),
            (4.0, 0.0),
            (4.0, 1.0),
            (0.0, 1.0),
        ]);
        let mut st = SimState::from_map(&map, &SimParams::default()).unwrap();
        st.split_and_merge();
        let out = st.to_map().unwrap();
        // The corner at (0, 0) is within a tenth of the average segment
        // length of its neighbor and is absorbed; the rest survive.
        assert_eq!(out.points().len(), 4);
        assert!(!out.points().values().any(|p| p.x == 0.0 && p.y == 0.0));
        assert!(out
            .points()
            .values()
            .any(|p| (p.x - 0.05).abs() < 1e-12 && p.y == 0.0));
        out.validate().unwrap();
    }

    #[test]
    fn merge_never_reduces_a_face_below_three_corners() {
        let map = rectangle_map(&[(0.0, 0.0), (1.0, 0.0), (0.02, 0.02)]);
        let mut st = SimState::from_map(&map, &SimParams::default()).unwrap();
        st.split_and_merge();
        let out = st.to_map().unwrap();
        assert_eq!(out.points().len(), 3);
        assert_eq!(out.regions()[0].boundary.len(), 3);
    }

    #[test]
    fn junction_corners_survive_merging() {
        // Two squares; the degree-2 outer corner at (0.9, 1) sits close to
        // the degree-3 junction at (0.95, 1). The corner goes, the
        // junction stays.
        let pts = [
            (0.0, 0.0),
            (1.0, 0.0),
            (2.0, 0.0),
            (2.0, 1.0),
            (0.95, 1.0),
            (0.9, 1.0),
        ];
        let points: BTreeMap<PointId, Point2> = pts
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| (PointId(i as u32), Point2::new(x, y)))
            .collect();
        let regions = vec![
            Region {
                id: RegionId(0),
                kind: RegionKind::Internal,
                boundary: vec![PointId(0), PointId(1), PointId(4), PointId(5)],
                target_weight: 1.0,
                source_vertex: None,
            },
            Region {
                id: RegionId(1),
                kind: RegionKind::Internal,
                boundary: vec![PointId(1), PointId(2), PointId(3), PointId(4)],
                target_weight: 1.0,
                source_vertex: None,
            },
        ];
        let map = MetaphoricalMap::new(points, regions).unwrap();
        let mut st = SimState::from_map(&map, &SimParams::default()).unwrap();
        st.split_and_merge();
        let out = st.to_map().unwrap();
        assert!(!out
            .points()
            .values()
            .any(|p| (p.x - 0.9).abs() < 1e-12 && (p.y - 1.0).abs() < 1e-12));
        assert!(out
            .points()
            .values()
            .any(|p| (p.x - 0.95).abs() < 1e-12 && (p.y - 1.0).abs() < 1e-12));
        out.validate().unwrap();
    }

    #[test]
    fn merge_vetoed_when_shortcut_would_duplicate_an_edge() {
        // A sliver triangle hanging off a square: corner 4 has degree 2
        // and hugs corner 0, but its neighbors 0 and 1 are already
        // adjacent, so merging would create a doubled edge.
        let pts = [
            (0.0, 0.0),
            (1.0, 0.0),
            (1.0, 1.0),
            (0.0, 1.0),
            (0.05, -0.005),
        ];
        let points: BTreeMap<PointId, Point2> = pts
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| (PointId(i as u32), Point2::new(x, y)))
            .collect();
        let regions = vec![
            Region {
                id: RegionId(0),
                kind: RegionKind::Internal,
                boundary: vec![PointId(0), PointId(1), PointId(2), PointId(3)],
                target_weight: 1.0,
                source_vertex: None,
            },
            Region {
                id: RegionId(1),
                kind: RegionKind::Internal,
                boundary: vec![PointId(0), PointId(4), PointId(1)],
                target_weight: 1.0,
                source_vertex: None,
            },
        ];
        let map = MetaphoricalMap::new(points, regions).unwrap();
        let mut st = SimState::from_map(&map, &SimParams::default()).unwrap();
        st.split_and_merge();
        let out = st.to_map().unwrap();
        // The sliver corner is close enough to merge but must survive.
        assert_eq!(out.points().len(), 5);
        out.validate().unwrap();
    }
}
