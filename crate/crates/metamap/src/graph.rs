//! Vertex-weighted plane graphs: a straight-line planar drawing together
//! with the combinatorial embedding it induces (rotation system, faces,
//! outer face).
//!
//! Graphs are immutable after construction; all pipeline stages that change
//! a graph build a new one. Construction validates structure eagerly, so the
//! accessors and face queries cannot fail afterwards.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::geom::{
    point_strictly_inside, polygon_signed_area, segments_properly_intersect, Point2,
};
use crate::{Error, Result};

/// Opaque vertex identifier; stable across files and pipeline stages.
#[derive(
    Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A weighted vertex with its drawing position.
#[derive(Clone, Copy, Debug)]
pub struct Vertex {
    pub id: VertexId,
    pub weight: f64,
    pub pos: Point2,
}

/// The faces of a plane graph. Each face is a cyclic vertex sequence; inner
/// faces are traced counterclockwise, the outer face clockwise.
#[derive(Clone, Debug)]
pub struct FaceSet {
    pub faces: Vec<Vec<VertexId>>,
    pub outer_index: usize,
}

impl FaceSet {
    pub fn outer(&self) -> &[VertexId] {
        &self.faces[self.outer_index]
    }

    pub fn inner_faces(&self) -> impl Iterator<Item = (usize, &Vec<VertexId>)> {
        self.faces
            .iter()
            .enumerate()
            .filter(move |(i, _)| *i != self.outer_index)
    }
}

/// A connected vertex-weighted plane graph with a straight-line drawing.
#[derive(Clone, Debug)]
pub struct WeightedPlaneGraph {
    vertices: Vec<Vertex>,
    index: BTreeMap<VertexId, usize>,
    /// Unordered edges, normalized to `(lo, hi)` by id.
    edges: Vec<(VertexId, VertexId)>,
    /// Rotation system: neighbors of each vertex in counterclockwise order.
    rotation: Vec<Vec<usize>>,
    faces: FaceSet,
    outer_face: Vec<VertexId>,
    /// Face index owning each directed edge `(from, to)`.
    directed_face: BTreeMap<(usize, usize), usize>,
}

impl WeightedPlaneGraph {
    /// Builds a graph from vertices, edges and an optional outer face,
    /// deriving the rotation system from vertex positions. Validates ids,
    /// weights, connectivity, drawing planarity and the embedding.
    pub fn new(
        vertices: Vec<Vertex>,
        edges: Vec<(VertexId, VertexId)>,
        outer_face: Option<Vec<VertexId>>,
    ) -> Result<Self> {
        Self::build(vertices, edges, outer_face, None, true)
    }

    /// Builds a graph with an explicitly supplied rotation system, skipping
    /// the geometric planarity check. Used for combinatorial intermediates
    /// whose positions are not yet a planar drawing (before re-embedding).
    pub(crate) fn with_rotation(
        vertices: Vec<Vertex>,
        edges: Vec<(VertexId, VertexId)>,
        outer_face: Option<Vec<VertexId>>,
        rotation: BTreeMap<VertexId, Vec<VertexId>>,
    ) -> Result<Self> {
        Self::build(vertices, edges, outer_face, Some(rotation), false)
    }

    fn build(
        vertices: Vec<Vertex>,
        raw_edges: Vec<(VertexId, VertexId)>,
        outer_face: Option<Vec<VertexId>>,
        rotation: Option<BTreeMap<VertexId, Vec<VertexId>>>,
        check_drawing: bool,
    ) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::Validation(format!(
                "graph needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        let mut index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.id, i).is_some() {
                return Err(Error::Validation(format!("duplicate vertex id {}", v.id)));
            }
            if !(v.weight > 0.0) || !v.weight.is_finite() {
                return Err(Error::Validation(format!(
                    "vertex {} has non-positive weight {}",
                    v.id, v.weight
                )));
            }
            if !v.pos.is_finite() {
                return Err(Error::Validation(format!(
                    "vertex {} has non-finite position",
                    v.id
                )));
            }
        }

        let mut edges: Vec<(VertexId, VertexId)> = Vec::with_capacity(raw_edges.len());
        let mut seen = std::collections::BTreeSet::new();
        for &(a, b) in &raw_edges {
            if a == b {
                return Err(Error::Validation(format!("self-loop at vertex {a}")));
            }
            for id in [a, b] {
                if !index.contains_key(&id) {
                    return Err(Error::Validation(format!(
                        "edge ({a}, {b}) references unknown vertex {id}"
                    )));
                }
            }
            let e = if a.0 < b.0 { (a, b) } else { (b, a) };
            if !seen.insert(e) {
                return Err(Error::Validation(format!("duplicate edge ({a}, {b})")));
            }
            edges.push(e);
        }
        edges.sort();

        let n = vertices.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in &edges {
            let (ia, ib) = (index[&a], index[&b]);
            adj[ia].push(ib);
            adj[ib].push(ia);
        }
        for (i, nb) in adj.iter().enumerate() {
            if nb.is_empty() {
                return Err(Error::Validation(format!(
                    "vertex {} is isolated",
                    vertices[i].id
                )));
            }
        }
        if !is_connected(&adj) {
            return Err(Error::Validation("graph is not connected".into()));
        }

        // Rotation system: supplied, or sorted counterclockwise by angle.
        let rotation: Vec<Vec<usize>> = match rotation {
            Some(rot) => {
                let mut out = vec![Vec::new(); n];
                for (id, nbrs) in &rot {
                    let i = *index
                        .get(id)
                        .ok_or_else(|| Error::Embedding(format!("rotation of unknown {id}")))?;
                    let mut list = Vec::with_capacity(nbrs.len());
                    for nb in nbrs {
                        list.push(
                            *index.get(nb).ok_or_else(|| {
                                Error::Embedding(format!("rotation names unknown {nb}"))
                            })?,
                        );
                    }
                    out[i] = list;
                }
                for i in 0..n {
                    let mut a = adj[i].clone();
                    let mut b = out[i].clone();
                    a.sort_unstable();
                    b.sort_unstable();
                    if a != b {
                        return Err(Error::Embedding(format!(
                            "rotation of {} does not match its incident edges",
                            vertices[i].id
                        )));
                    }
                }
                out
            }
            None => {
                let mut out = adj.clone();
                for (i, list) in out.iter_mut().enumerate() {
                    let p = vertices[i].pos;
                    list.sort_by(|&x, &y| {
                        let ax = (vertices[x].pos - p).angle();
                        let ay = (vertices[y].pos - p).angle();
                        ax.partial_cmp(&ay).unwrap()
                    });
                }
                out
            }
        };

        if check_drawing {
            check_planar_drawing(&vertices, &edges, &index)?;
        }

        let (faces, directed_face) = trace_faces(&vertices, &edges, &rotation)?;

        let derived_outer = faces.faces[faces.outer_index].clone();
        let outer_face = match outer_face {
            None => derived_outer,
            Some(given) => {
                if !cycles_equal(&given, &derived_outer) {
                    return Err(Error::Validation(format!(
                        "declared outer face {:?} does not match the drawing's outer face {:?}",
                        given, derived_outer
                    )));
                }
                given
            }
        };

        Ok(WeightedPlaneGraph {
            vertices,
            index,
            edges,
            rotation,
            faces,
            outer_face,
            directed_face,
        })
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn outer_face(&self) -> &[VertexId] {
        &self.outer_face
    }

    pub fn contains_vertex(&self, id: VertexId) -> bool {
        self.index.contains_key(&id)
    }

    pub fn vertex(&self, id: VertexId) -> &Vertex {
        &self.vertices[self.index[&id]]
    }

    pub fn pos(&self, id: VertexId) -> Point2 {
        self.vertex(id).pos
    }

    pub fn weight(&self, id: VertexId) -> f64 {
        self.vertex(id).weight
    }

    pub fn degree(&self, id: VertexId) -> usize {
        self.rotation[self.index[&id]].len()
    }

    pub fn contains_edge(&self, a: VertexId, b: VertexId) -> bool {
        let e = if a.0 < b.0 { (a, b) } else { (b, a) };
        self.edges.binary_search(&e).is_ok()
    }

    /// Neighbors of `id` in counterclockwise order around its position.
    pub fn neighbors_ccw(&self, id: VertexId) -> Vec<VertexId> {
        self.rotation[self.index[&id]]
            .iter()
            .map(|&i| self.vertices[i].id)
            .collect()
    }

    /// All faces induced by the rotation system.
    pub fn faces(&self) -> &FaceSet {
        &self.faces
    }

    /// Index (into `faces()`) of the face lying to the left of the directed
    /// edge `from -> to`.
    pub fn face_left_of(&self, from: VertexId, to: VertexId) -> usize {
        self.directed_face[&(self.index[&from], self.index[&to])]
    }

    /// Whether every inner face is a triangle.
    pub fn is_internally_triangulated(&self) -> bool {
        self.faces.inner_faces().all(|(_, f)| f.len() == 3)
    }

    /// Whether the graph is biconnected: connected, at least three vertices
    /// and no cut vertex.
    pub fn is_biconnected(&self) -> bool {
        let n = self.n();
        let adj: Vec<Vec<usize>> = self.rotation.clone();
        is_biconnected_adj(n, &adj)
    }

    /// Whether every inner face contains the barycenter of its vertices
    /// strictly inside and fully "sees" all its corners: each open segment
    /// from the barycenter to a corner stays in the face interior.
    pub fn barycenter_visibility_holds(&self) -> bool {
        for (_, face) in self.faces.inner_faces() {
            let poly: Vec<Point2> = face.iter().map(|&v| self.pos(v)).collect();
            let k = poly.len();
            let mut bx = 0.0;
            let mut by = 0.0;
            for p in &poly {
                bx += p.x;
                by += p.y;
            }
            let b = Point2::new(bx / k as f64, by / k as f64);
            if !point_strictly_inside(b, &poly) {
                return false;
            }
            for i in 0..k {
                for j in 0..k {
                    // Edges incident to corner i share only that endpoint.
                    if j == i || (j + 1) % k == i {
                        continue;
                    }
                    if segments_properly_intersect(b, poly[i], poly[j], poly[(j + 1) % k]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Copy of the graph with the given vertices (and their incident edges)
    /// removed, re-deriving the embedding from positions.
    pub fn remove_vertices(&self, ids: &[VertexId]) -> Result<WeightedPlaneGraph> {
        let drop: std::collections::BTreeSet<VertexId> = ids.iter().copied().collect();
        let vertices: Vec<Vertex> = self
            .vertices
            .iter()
            .filter(|v| !drop.contains(&v.id))
            .copied()
            .collect();
        let edges: Vec<(VertexId, VertexId)> = self
            .edges
            .iter()
            .filter(|(a, b)| !drop.contains(a) && !drop.contains(b))
            .copied()
            .collect();
        let outer: Vec<VertexId> = self
            .outer_face
            .iter()
            .filter(|v| !drop.contains(v))
            .copied()
            .collect();
        WeightedPlaneGraph::new(vertices, edges, Some(outer))
    }

    /// Copy with new positions (same structure); rotation is re-derived and
    /// the drawing re-validated.
    pub fn with_positions(&self, pos: &BTreeMap<VertexId, Point2>) -> Result<WeightedPlaneGraph> {
        let vertices: Vec<Vertex> = self
            .vertices
            .iter()
            .map(|v| Vertex {
                id: v.id,
                weight: v.weight,
                pos: pos[&v.id],
            })
            .collect();
        WeightedPlaneGraph::new(vertices, self.edges.clone(), Some(self.outer_face.clone()))
    }
}

fn is_connected(adj: &[Vec<usize>]) -> bool {
    let n = adj.len();
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

/// Biconnectivity over an adjacency list (iterative lowpoint DFS).
pub(crate) fn is_biconnected_adj(n: usize, adj: &[Vec<usize>]) -> bool {
    if n < 3 || !is_connected(adj) {
        return false;
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut parent = vec![usize::MAX; n];
    let mut timer = 0usize;
    let mut root_children = 0usize;
    // Stack of (vertex, next neighbor index).
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    disc[0] = timer;
    low[0] = timer;
    timer += 1;
    while let Some(&mut (v, ref mut i)) = stack.last_mut() {
        if *i < adj[v].len() {
            let w = adj[v][*i];
            *i += 1;
            if disc[w] == usize::MAX {
                parent[w] = v;
                if v == 0 {
                    root_children += 1;
                }
                disc[w] = timer;
                low[w] = timer;
                timer += 1;
                stack.push((w, 0));
            } else if w != parent[v] {
                low[v] = low[v].min(disc[w]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _)) = stack.last() {
                low[p] = low[p].min(low[v]);
                if p != 0 && low[v] >= disc[p] {
                    return false; // p is a cut vertex
                }
            }
        }
    }
    root_children <= 1
}

/// Pairwise proper-intersection check over all drawn edges.
fn check_planar_drawing(
    vertices: &[Vertex],
    edges: &[(VertexId, VertexId)],
    index: &BTreeMap<VertexId, usize>,
) -> Result<()> {
    let segs: Vec<(Point2, Point2, VertexId, VertexId)> = edges
        .iter()
        .map(|&(a, b)| {
            (
                vertices[index[&a]].pos,
                vertices[index[&b]].pos,
                a,
                b,
            )
        })
        .collect();
    for (i, s) in segs.iter().enumerate() {
        if s.0.dist(s.1) < 1e-12 {
            return Err(Error::Validation(format!(
                "edge ({}, {}) has (near-)zero length",
                s.2, s.3
            )));
        }
        for t in segs.iter().skip(i + 1) {
            if segments_properly_intersect(s.0, s.1, t.0, t.1) {
                return Err(Error::Validation(format!(
                    "drawing is not planar: edges ({}, {}) and ({}, {}) cross",
                    s.2, s.3, t.2, t.3
                )));
            }
        }
    }
    // A vertex lying in the interior of a non-incident edge also breaks the
    // subdivision even though the segments test cannot see it.
    for v in vertices {
        for s in segs.iter() {
            if s.2 == v.id || s.3 == v.id {
                continue;
            }
            let (_, d) = crate::geom::closest_point_on_segment(v.pos, s.0, s.1);
            if d < 1e-12 {
                return Err(Error::Validation(format!(
                    "vertex {} lies on edge ({}, {})",
                    v.id, s.2, s.3
                )));
            }
        }
    }
    Ok(())
}

/// Traces all faces of the rotation system. Each directed edge is used
/// exactly once: the successor of `u -> v` is `v -> w` where `w` precedes `u`
/// in the counterclockwise rotation around `v`. With counterclockwise
/// rotations this traces inner faces counterclockwise and the outer face
/// clockwise; the outer face is the one with the most negative signed area.
fn trace_faces(
    vertices: &[Vertex],
    edges: &[(VertexId, VertexId)],
    rotation: &[Vec<usize>],
) -> Result<(FaceSet, BTreeMap<(usize, usize), usize>)> {
    let n = vertices.len();
    let mut pos_in_rot: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
    for (v, rot) in rotation.iter().enumerate() {
        for (k, &w) in rot.iter().enumerate() {
            pos_in_rot[v].insert(w, k);
        }
    }

    let mut directed_face: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut faces: Vec<Vec<VertexId>> = Vec::new();

    let mut directed: Vec<(usize, usize)> = Vec::with_capacity(2 * edges.len());
    for (v, rot) in rotation.iter().enumerate() {
        for &w in rot {
            directed.push((v, w));
        }
    }
    directed.sort_unstable();

    for &start in &directed {
        if directed_face.contains_key(&start) {
            continue;
        }
        let face_idx = faces.len();
        let mut cycle = Vec::new();
        let (mut u, mut v) = start;
        loop {
            directed_face.insert((u, v), face_idx);
            cycle.push(vertices[u].id);
            let k = pos_in_rot[v][&u];
            let len = rotation[v].len();
            let w = rotation[v][(k + len - 1) % len];
            u = v;
            v = w;
            if (u, v) == start {
                break;
            }
            if cycle.len() > 2 * directed.len() {
                return Err(Error::Embedding("face tracing did not close".into()));
            }
        }
        faces.push(cycle);
    }

    // Euler check: a genus-0 embedding satisfies |V| - |E| + |F| = 2.
    let f = faces.len();
    if n as i64 - edges.len() as i64 + f as i64 != 2 {
        return Err(Error::Embedding(format!(
            "rotation system is not planar: V={} E={} F={}",
            n,
            edges.len(),
            f
        )));
    }

    let mut outer_index = 0usize;
    let mut min_area = f64::INFINITY;
    for (i, face) in faces.iter().enumerate() {
        let poly: Vec<Point2> = face
            .iter()
            .map(|id| {
                vertices
                    .iter()
                    .find(|v| v.id == *id)
                    .expect("face vertex")
                    .pos
            })
            .collect();
        let area = polygon_signed_area(&poly);
        if area < min_area {
            min_area = area;
            outer_index = i;
        }
    }

    Ok((FaceSet { faces, outer_index }, directed_face))
}

/// Whether two cyclic sequences are equal up to rotation and direction.
fn cycles_equal(a: &[VertexId], b: &[VertexId]) -> bool {
    if a.len() != b.len() || a.is_empty() {
        return a.len() == b.len();
    }
    let n = a.len();
    let mut fw = b.to_vec();
    for _ in 0..n {
        if fw == a {
            return true;
        }
        fw.rotate_left(1);
    }
    let mut rv: Vec<VertexId> = b.iter().rev().copied().collect();
    for _ in 0..n {
        if rv == a {
            return true;
        }
        rv.rotate_left(1);
    }
    false
}

/// Convenience constructor used across tests and generators.
pub fn graph_from_parts(
    verts: &[(u32, f64, f64, f64)],
    edges: &[(u32, u32)],
    outer: Option<&[u32]>,
) -> Result<WeightedPlaneGraph> {
    let vertices = verts
        .iter()
        .map(|&(id, w, x, y)| Vertex {
            id: VertexId(id),
            weight: w,
            pos: Point2::new(x, y),
        })
        .collect();
    let edges = edges
        .iter()
        .map(|&(a, b)| (VertexId(a), VertexId(b)))
        .collect();
    let outer = outer.map(|o| o.iter().map(|&v| VertexId(v)).collect());
    WeightedPlaneGraph::new(vertices, edges, outer)
}
