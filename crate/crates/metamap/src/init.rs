//! Initial map construction.
//!
//! Triangulated plane graphs map directly to a contact subdivision: every
//! inner face contributes a corner at its barycenter, every edge a corner at
//! its midpoint, and each vertex collects the corners around it into its
//! region. Non-triangulated graphs are first Steiner-triangulated (one
//! auxiliary vertex per big face), re-embedded barycentrically, and then
//! either the auxiliary vertices are dropped again (point contacts) or their
//! regions are kept as holes with a synthetic weight.

use std::collections::BTreeMap;

use crate::geom::Point2;
use crate::graph::{Vertex, VertexId, WeightedPlaneGraph};
use crate::map::{MetaphoricalMap, PointId, Region, RegionId, RegionKind};
use crate::{Error, Result};

/// Residual threshold of the barycentric embedding, relative to the layout
/// diameter.
pub const EMBED_TOL: f64 = 1e-7;

/// Sweep cap for the barycentric embedding.
pub const EMBED_MAX_SWEEPS: usize = 50_000;

/// Adds one auxiliary vertex inside every non-triangular inner face,
/// connected to all face vertices. Returns the augmented graph and the ids
/// of the auxiliary vertices. Auxiliary vertices carry the synthetic hole
/// weight of their face so the holes variant can use it directly.
pub fn steiner_triangulate(
    g: &WeightedPlaneGraph,
) -> Result<(WeightedPlaneGraph, Vec<VertexId>)> {
    let faces = g.faces().clone();
    let mut next_id = g.vertices().iter().map(|v| v.id.0).max().unwrap_or(0) + 1;

    let mut vertices: Vec<Vertex> = g.vertices().to_vec();
    let mut edges: Vec<(VertexId, VertexId)> = g.edges().to_vec();
    // Rotation lists in counterclockwise order, to be spliced.
    let mut rotation: BTreeMap<VertexId, Vec<VertexId>> = vertices
        .iter()
        .map(|v| (v.id, g.neighbors_ccw(v.id)))
        .collect();
    let mut aux_ids = Vec::new();

    for (fi, face) in faces.faces.iter().enumerate() {
        if fi == faces.outer_index || face.len() == 3 {
            continue;
        }
        let k = face.len();
        let aux = VertexId(next_id);
        next_id += 1;
        aux_ids.push(aux);

        let mut bx = 0.0;
        let mut by = 0.0;
        for v in face {
            let p = g.pos(*v);
            bx += p.x;
            by += p.y;
        }
        let weights: Vec<f64> = face.iter().map(|v| g.weight(*v)).collect();
        vertices.push(Vertex {
            id: aux,
            weight: hole_weight(&weights, k),
            pos: Point2::new(bx / k as f64, by / k as f64),
        });
        // Facing an inner face traced counterclockwise, its vertices appear
        // in counterclockwise order around the auxiliary vertex.
        rotation.insert(aux, face.clone());
        for i in 0..k {
            let v = face[i];
            let next = face[(i + 1) % k];
            edges.push((v, aux));
            // The face wedge at v opens counterclockwise from `next`; the
            // new edge goes inside it, right after `next`.
            let rot = rotation.get_mut(&v).unwrap();
            let at = rot
                .iter()
                .position(|&w| w == next)
                .ok_or_else(|| Error::Embedding(format!("face edge ({v}, {next}) not in rotation")))?;
            rot.insert(at + 1, aux);
        }
    }

    let outer = g.outer_face().to_vec();
    let g2 = WeightedPlaneGraph::with_rotation(vertices, edges, Some(outer), rotation)?;
    Ok((g2, aux_ids))
}

/// Barycentric re-embedding: the outer face is fixed on the unit circle in
/// stored cyclic order, every inner vertex moves to the barycenter of its
/// neighbors via Gauss-Seidel sweeps until the largest move in a sweep drops
/// below [`EMBED_TOL`] times the layout diameter.
pub fn tutte_embed(g: &WeightedPlaneGraph) -> Result<WeightedPlaneGraph> {
    if !g.is_biconnected() {
        return Err(Error::Embedding(
            "barycentric embedding requires a biconnected graph".into(),
        ));
    }
    let outer: Vec<VertexId> = g.outer_face().to_vec();
    let m = outer.len();
    let mut pos: BTreeMap<VertexId, Point2> = BTreeMap::new();
    for (k, &v) in outer.iter().enumerate() {
        let a = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
        pos.insert(v, Point2::new(a.cos(), a.sin()));
    }
    let inner: Vec<VertexId> = g
        .vertices()
        .iter()
        .map(|v| v.id)
        .filter(|id| !pos.contains_key(id))
        .collect();
    for &v in &inner {
        pos.insert(v, Point2::new(0.0, 0.0));
    }
    let neighbors: BTreeMap<VertexId, Vec<VertexId>> = inner
        .iter()
        .map(|&v| (v, g.neighbors_ccw(v)))
        .collect();

    let diameter = 2.0;
    let tol = EMBED_TOL * diameter;
    let mut sweeps = 0;
    loop {
        let mut max_move: f64 = 0.0;
        for &v in &inner {
            let nb = &neighbors[&v];
            let mut sx = 0.0;
            let mut sy = 0.0;
            for w in nb {
                let p = pos[w];
                sx += p.x;
                sy += p.y;
            }
            let np = Point2::new(sx / nb.len() as f64, sy / nb.len() as f64);
            let old = pos[&v];
            max_move = max_move.max(old.dist(np));
            pos.insert(v, np);
        }
        sweeps += 1;
        if max_move <= tol {
            break;
        }
        if sweeps >= EMBED_MAX_SWEEPS {
            return Err(Error::EmbeddingConvergence { sweeps });
        }
    }
    g.with_positions(&pos)
}

/// Synthetic weight of a hole of the given degree surrounded by vertices of
/// the given weights: the squared sum of the root weights over four times
/// the degree.
pub fn hole_weight(adjacent_weights: &[f64], degree: usize) -> f64 {
    assert!(degree >= 3, "hole degree must be at least 3");
    let s: f64 = adjacent_weights.iter().map(|w| w.sqrt()).sum();
    s * s / (4.0 * degree as f64)
}

/// Turns a drawn plane graph into a contact subdivision: one region per
/// vertex, corners at edge midpoints and inner-face barycenters, original
/// positions kept as corners along the outer boundary. Requires every inner
/// face to see its corners from its barycenter.
pub fn dual_transform(g: &WeightedPlaneGraph) -> Result<MetaphoricalMap> {
    if !g.barycenter_visibility_holds() {
        return Err(Error::Init(
            "a face barycenter cannot see all its corners; re-embed first".into(),
        ));
    }
    let faces = g.faces();
    let outer_idx = faces.outer_index;
    let outer_vertices: std::collections::BTreeSet<VertexId> =
        g.outer_face().iter().copied().collect();

    let mut points: BTreeMap<PointId, Point2> = BTreeMap::new();
    let mut next_point = 0u32;
    let mut alloc = |points: &mut BTreeMap<PointId, Point2>, p: Point2| {
        let id = PointId(next_point);
        next_point += 1;
        points.insert(id, p);
        id
    };

    // Outer graph vertices stay as corners.
    let mut vertex_corner: BTreeMap<VertexId, PointId> = BTreeMap::new();
    for &v in g.outer_face() {
        let id = alloc(&mut points, g.pos(v));
        vertex_corner.insert(v, id);
    }
    // One corner per edge at its midpoint.
    let mut edge_mid: BTreeMap<(VertexId, VertexId), PointId> = BTreeMap::new();
    for &(a, b) in g.edges() {
        let id = alloc(&mut points, g.pos(a).midpoint(g.pos(b)));
        edge_mid.insert((a, b), id);
    }
    // One corner per inner face at the barycenter of its vertices.
    let mut face_corner: BTreeMap<usize, PointId> = BTreeMap::new();
    for (fi, face) in faces.faces.iter().enumerate() {
        if fi == outer_idx {
            continue;
        }
        let mut bx = 0.0;
        let mut by = 0.0;
        for v in face {
            let p = g.pos(*v);
            bx += p.x;
            by += p.y;
        }
        let k = face.len() as f64;
        let id = alloc(&mut points, Point2::new(bx / k, by / k));
        face_corner.insert(fi, id);
    }

    let mid = |a: VertexId, b: VertexId| -> PointId {
        let e = if a.0 < b.0 { (a, b) } else { (b, a) };
        edge_mid[&e]
    };

    let mut regions = Vec::new();
    for (ri, v) in g.vertices().iter().enumerate() {
        let nbrs = g.neighbors_ccw(v.id);
        let d = nbrs.len();
        // Sector i (counterclockwise from neighbor i to neighbor i+1)
        // belongs to the face left of the directed edge v -> neighbor i.
        let sector_face: Vec<usize> = nbrs.iter().map(|&u| g.face_left_of(v.id, u)).collect();
        let mut boundary: Vec<PointId> = Vec::with_capacity(2 * d);
        if outer_vertices.contains(&v.id) {
            let k = sector_face
                .iter()
                .position(|&f| f == outer_idx)
                .ok_or_else(|| {
                    Error::Init(format!("outer vertex {} has no outer sector", v.id))
                })?;
            if sector_face.iter().filter(|&&f| f == outer_idx).count() != 1 {
                return Err(Error::Init(format!(
                    "outer vertex {} touches the outer face more than once",
                    v.id
                )));
            }
            boundary.push(vertex_corner[&v.id]);
            for off in 1..=d {
                let i = (k + off) % d;
                boundary.push(mid(v.id, nbrs[i]));
                if i != k {
                    boundary.push(face_corner[&sector_face[i]]);
                }
            }
        } else {
            for i in 0..d {
                boundary.push(mid(v.id, nbrs[i]));
                boundary.push(face_corner[&sector_face[i]]);
            }
        }
        regions.push(Region {
            id: RegionId(ri as u32),
            kind: RegionKind::Internal,
            boundary,
            target_weight: v.weight,
            source_vertex: Some(v.id),
        });
    }

    MetaphoricalMap::new(points, regions)
}

/// Initial map with point contacts: non-triangular faces are triangulated
/// with auxiliary vertices, the graph is re-embedded barycentrically, the
/// auxiliary vertices are removed again and the subdivision is built on the
/// resulting drawing. Around each former auxiliary position all regions of
/// the big face meet in a single point.
pub fn init_with_point_contacts(g: &WeightedPlaneGraph) -> Result<MetaphoricalMap> {
    let (g2, aux) = steiner_triangulate(g)?;
    let embedded = tutte_embed(&g2)?;
    let restored = embedded.remove_vertices(&aux)?;
    dual_transform(&restored)
}

/// Initial map with holes: like [`init_with_point_contacts`], but the
/// auxiliary vertices stay and their regions become holes whose synthetic
/// target weight blends the weights of the surrounding vertices.
pub fn init_with_holes(g: &WeightedPlaneGraph) -> Result<MetaphoricalMap> {
    let (g2, aux) = steiner_triangulate(g)?;
    let embedded = tutte_embed(&g2)?;
    let aux_set: std::collections::BTreeSet<VertexId> = aux.iter().copied().collect();
    let mut map = dual_transform(&embedded)?;
    let points = map.points().clone();
    let mut regions = map.regions().to_vec();
    for r in &mut regions {
        if let Some(v) = r.source_vertex {
            if aux_set.contains(&v) {
                r.kind = RegionKind::Hole;
                r.source_vertex = None;
            }
        }
    }
    map = MetaphoricalMap::new(points, regions)?;
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::polygon_signed_area;
    use crate::graph::graph_from_parts;

    fn quad_with_diagonal_missing() -> WeightedPlaneGraph {
        // A square face (no diagonal): one non-triangular inner face.
        graph_from_parts(
            &[
                (0, 1.0, 0.0, 0.0),
                (1, 1.0, 2.0, 0.0),
                (2, 1.0, 2.0, 2.0),
                (3, 1.0, 0.0, 2.0),
            ],
            &[(0, 1), (1, 2), (2, 3), (0, 3)],
            None,
        )
        .unwrap()
    }

    #[test]
    fn steiner_is_identity_for_triangulated_graphs() {
        let g = graph_from_parts(
            &[
                (0, 1.0, 0.0, 0.0),
                (1, 1.0, 2.0, 0.0),
                (2, 1.0, 0.0, 2.0),
            ],
            &[(0, 1), (1, 2), (0, 2)],
            None,
        )
        .unwrap();
        let (g2, aux) = steiner_triangulate(&g).unwrap();
        assert!(aux.is_empty());
        assert_eq!(g2.n(), 3);
        assert_eq!(g2.edges().len(), 3);
    }

    #[test]
    fn steiner_fills_quad_face_with_degree_four_aux() {
        let g = quad_with_diagonal_missing();
        let (g2, aux) = steiner_triangulate(&g).unwrap();
        assert_eq!(aux.len(), 1);
        assert_eq!(g2.n(), 5);
        assert_eq!(g2.degree(aux[0]), 4);
        assert!(g2.is_internally_triangulated());
        // Synthetic weight of a degree-4 hole over unit weights is 1.
        assert!((g2.weight(aux[0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn steiner_fills_hexagon_with_degree_six_aux() {
        let mut verts = Vec::new();
        for k in 0..6u32 {
            let a = std::f64::consts::PI / 3.0 * k as f64;
            verts.push((k, 1.0, 2.0 * a.cos(), 2.0 * a.sin()));
        }
        let edges: Vec<(u32, u32)> = (0..6).map(|k| (k, (k + 1) % 6)).collect();
        let g = graph_from_parts(&verts, &edges, None).unwrap();
        let (g2, aux) = steiner_triangulate(&g).unwrap();
        assert_eq!(aux.len(), 1);
        assert_eq!(g2.degree(aux[0]), 6);
        assert!(g2.is_internally_triangulated());
    }

    #[test]
    fn hole_weight_examples() {
        assert!((hole_weight(&[1.0, 1.0, 1.0, 1.0], 4) - 1.0).abs() < 1e-12);
        assert!((hole_weight(&[4.0, 4.0, 4.0], 3) - 3.0).abs() < 1e-12);
        assert!((hole_weight(&[1.0; 6], 6) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn tutte_places_single_inner_vertex_at_barycenter() {
        // Triangle with one inner vertex connected to all corners.
        let g = graph_from_parts(
            &[
                (0, 1.0, 0.0, 0.0),
                (1, 1.0, 4.0, 0.0),
                (2, 1.0, 2.0, 3.0),
                (3, 1.0, 1.0, 1.0),
            ],
            &[(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3)],
            None,
        )
        .unwrap();
        let e = tutte_embed(&g).unwrap();
        let outer: Vec<Point2> = e.outer_face().iter().map(|&v| e.pos(v)).collect();
        for p in &outer {
            assert!((p.dist(Point2::new(0.0, 0.0)) - 1.0).abs() < 1e-12);
        }
        let inner = e.pos(VertexId(3));
        let bx = outer.iter().map(|p| p.x).sum::<f64>() / 3.0;
        let by = outer.iter().map(|p| p.y).sum::<f64>() / 3.0;
        assert!((inner.x - bx).abs() < 1e-6);
        assert!((inner.y - by).abs() < 1e-6);
        // Residual: every inner vertex sits at its neighbor barycenter.
        assert!(max_embed_residual(&e) <= EMBED_TOL * 2.0 * 1.01);
    }

    fn max_embed_residual(g: &WeightedPlaneGraph) -> f64 {
        let outer: std::collections::BTreeSet<VertexId> =
            g.outer_face().iter().copied().collect();
        let mut worst: f64 = 0.0;
        for v in g.vertices() {
            if outer.contains(&v.id) {
                continue;
            }
            let nb = g.neighbors_ccw(v.id);
            let mut sx = 0.0;
            let mut sy = 0.0;
            for w in &nb {
                let p = g.pos(*w);
                sx += p.x;
                sy += p.y;
            }
            let b = Point2::new(sx / nb.len() as f64, sy / nb.len() as f64);
            worst = worst.max(b.dist(v.pos));
        }
        worst
    }

    #[test]
    fn dual_of_triangle_matches_hand_construction() {
        let g = graph_from_parts(
            &[
                (0, 2.0, 0.0, 0.0),
                (1, 1.0, 2.0, 0.0),
                (2, 1.0, 0.0, 2.0),
            ],
            &[(0, 1), (1, 2), (0, 2)],
            None,
        )
        .unwrap();
        let m = dual_transform(&g).unwrap();
        assert_eq!(m.regions().len(), 3);
        let r0 = m
            .regions()
            .iter()
            .find(|r| r.source_vertex == Some(VertexId(0)))
            .unwrap();
        assert_eq!(r0.target_weight, 2.0);
        let poly = m.region_polygon(r0);
        assert_eq!(poly.len(), 4);
        let expect = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(2.0 / 3.0, 2.0 / 3.0),
            Point2::new(0.0, 1.0),
        ];
        // Same cyclic order, possibly rotated.
        let start = poly
            .iter()
            .position(|p| p.dist(expect[0]) < 1e-12)
            .expect("corner (0,0) present");
        for (i, e) in expect.iter().enumerate() {
            assert!(poly[(start + i) % 4].dist(*e) < 1e-12, "corner {i}");
        }
        // Regions tile the triangle: areas sum to the face area.
        let total: f64 = m
            .regions()
            .iter()
            .map(|r| polygon_signed_area(&m.region_polygon(r)))
            .sum();
        assert!((total - 2.0).abs() < 1e-9);
    }

    #[test]
    fn dual_gives_internal_vertex_twice_degree_corners() {
        // Wheel: hexagon around a center of degree 6.
        let mut verts = vec![(0u32, 1.0, 0.0, 0.0)];
        for k in 0..6u32 {
            let a = std::f64::consts::PI / 3.0 * k as f64;
            verts.push((k + 1, 1.0, 2.0 * a.cos(), 2.0 * a.sin()));
        }
        let mut all: Vec<(u32, u32)> = (1..=6).map(|k| (0, k)).collect();
        all.extend((0..6u32).map(|k| (k + 1, ((k + 1) % 6) + 1)));
        let g = graph_from_parts(&verts, &all, None).unwrap();
        let m = dual_transform(&g).unwrap();
        let center = m
            .regions()
            .iter()
            .find(|r| r.source_vertex == Some(VertexId(0)))
            .unwrap();
        assert_eq!(center.boundary.len(), 12);
        // Ring vertices have degree 3 (center plus two ring neighbors) and
        // sit on the outer face: still twice the degree.
        let rim = m
            .regions()
            .iter()
            .find(|r| r.source_vertex == Some(VertexId(1)))
            .unwrap();
        assert_eq!(rim.boundary.len(), 6);
    }

    #[test]
    fn point_contact_init_shares_former_aux_position() {
        let g = quad_with_diagonal_missing();
        let m = init_with_point_contacts(&g).unwrap();
        assert_eq!(m.regions().len(), 4);
        assert!(m.holes().count() == 0);
        // All four regions share one corner (the former aux position).
        use std::collections::BTreeMap;
        let mut corner_count: BTreeMap<PointId, usize> = BTreeMap::new();
        for r in m.regions() {
            for p in &r.boundary {
                *corner_count.entry(*p).or_insert(0) += 1;
            }
        }
        let shared = corner_count.values().filter(|&&c| c == 4).count();
        assert_eq!(shared, 1);
    }

    #[test]
    fn holes_init_keeps_one_hole_per_big_face() {
        let g = quad_with_diagonal_missing();
        let m = init_with_holes(&g).unwrap();
        assert_eq!(m.regions().len(), 5);
        assert_eq!(m.holes().count(), 1);
        let hole = m.holes().next().unwrap();
        assert!(hole.source_vertex.is_none());
        assert!((hole.target_weight - 1.0).abs() < 1e-12);
        assert_eq!(hole.boundary.len(), 8);
    }

    #[test]
    fn triangulated_input_needs_no_holes() {
        let g = graph_from_parts(
            &[
                (0, 1.0, 0.0, 0.0),
                (1, 1.0, 4.0, 0.0),
                (2, 1.0, 2.0, 3.0),
                (3, 1.0, 2.0, 1.0),
            ],
            &[(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3)],
            None,
        )
        .unwrap();
        let m = init_with_holes(&g).unwrap();
        assert_eq!(m.holes().count(), 0);
        assert_eq!(m.regions().len(), 4);
    }
}
