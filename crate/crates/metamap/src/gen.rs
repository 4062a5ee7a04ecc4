//! Seeded generation of benchmark instances: Delaunay triangulations of
//! random points with optional nesting, random weights, and optional
//! thinning by edge removal.
//!
//! Nesting first triangulates a set of base points, then drops extra
//! points uniformly into random triangles of that triangulation, and
//! finally re-triangulates everything; this yields graphs with many
//! interior vertices. Edge removal deletes a seeded random sample of
//! non-boundary edges, skipping any whose removal would break
//! biconnectivity, producing bigger (non-triangular) faces.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geom::Point2;
use crate::graph::{is_biconnected_adj, graph_from_parts, WeightedPlaneGraph};
use crate::{Error, Result};

/// Side of the square the base points are sampled from.
const DOMAIN: f64 = 100.0;
/// Minimum pairwise separation between generated points.
const MIN_SEPARATION: f64 = 1e-3;
/// Retries for the whole construction when a degenerate configuration
/// slips through.
const MAX_ATTEMPTS: usize = 8;
/// Retries for placing one nested point away from existing ones.
const MAX_PLACEMENTS: usize = 1000;

#[derive(Clone, Debug)]
pub struct GenParams {
    /// Total number of vertices.
    pub n: usize,
    /// Fraction of vertices nested inside the base triangulation.
    pub nest: f64,
    /// Fraction of internal (non-boundary) edges to remove.
    pub rem: f64,
    /// Weights are drawn uniformly from [1, weight_ratio].
    pub weight_ratio: f64,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n: 20,
            nest: 0.0,
            rem: 0.0,
            weight_ratio: 4.0,
            seed: 0,
        }
    }
}

impl GenParams {
    pub fn validate(&self) -> Result<()> {
        if self.n < 4 {
            return Err(Error::Validation(
                "generator needs at least 4 vertices".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.nest) {
            return Err(Error::Validation("nest must lie in [0, 1)".into()));
        }
        if !(0.0..1.0).contains(&self.rem) {
            return Err(Error::Validation("rem must lie in [0, 1)".into()));
        }
        if !(self.weight_ratio >= 1.0) || !self.weight_ratio.is_finite() {
            return Err(Error::Validation("weight_ratio must be at least 1".into()));
        }
        Ok(())
    }
}

/// Generates a biconnected vertex-weighted plane graph. Identical
/// parameters always produce the identical graph.
pub fn generate_benchmark_graph(params: &GenParams) -> Result<WeightedPlaneGraph> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut last_err = None;
    for _ in 0..MAX_ATTEMPTS {
        match try_generate(params, &mut rng) {
            Ok(g) => return Ok(g),
            Err(e) => last_err = Some(e),
        }
    }
    Err(Error::Generation(format!(
        "no valid instance after {MAX_ATTEMPTS} attempts: {}",
        last_err.expect("at least one attempt")
    )))
}

fn try_generate(params: &GenParams, rng: &mut ChaCha8Rng) -> Result<WeightedPlaneGraph> {
    let n = params.n;
    // At least three vertices must stay on the base level so the initial
    // triangulation exists; the nested count is clamped accordingly.
    let n_nested = ((params.nest * n as f64).ceil() as usize).min(n - 3);
    let n_base = n - n_nested;

    let mut points = Vec::with_capacity(n);
    for _ in 0..n_base {
        let p = Point2::new(
            rng.random_range(0.0..DOMAIN),
            rng.random_range(0.0..DOMAIN),
        );
        points.push(p);
    }
    if min_separation_violated(&points) {
        return Err(Error::Generation("base points too close".into()));
    }

    if n_nested > 0 {
        let base_tris = delaunay_triangulation(&points)?;
        if base_tris.is_empty() {
            return Err(Error::Generation("degenerate base triangulation".into()));
        }
        for _ in 0..n_nested {
            let p = place_nested_point(&points, &base_tris, rng)?;
            points.push(p);
        }
    }

    let tris = delaunay_triangulation(&points)?;
    let mut edge_set = std::collections::BTreeSet::new();
    for t in &tris {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            edge_set.insert(if a < b { (a as u32, b as u32) } else { (b as u32, a as u32) });
        }
    }
    let weights: Vec<f64> = (0..n)
        .map(|_| rng.random_range(1.0..=params.weight_ratio))
        .collect();
    let verts: Vec<(u32, f64, f64, f64)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (i as u32, weights[i], p.x, p.y))
        .collect();
    let edges: Vec<(u32, u32)> = edge_set.into_iter().collect();
    let graph = graph_from_parts(&verts, &edges, None)?;

    if params.rem == 0.0 {
        return Ok(graph);
    }
    let kept = remove_internal_edges(&graph, params.rem, rng);
    graph_from_parts(&verts, &kept, None)
}

/// Deletes a random sample of non-boundary edges, keeping the graph
/// biconnected. Returns the surviving edge list.
fn remove_internal_edges(
    graph: &WeightedPlaneGraph,
    rem: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<(u32, u32)> {
    let outer = graph.faces().outer();
    let k = outer.len();
    let mut boundary = std::collections::BTreeSet::new();
    for i in 0..k {
        let (a, b) = (outer[i].0, outer[(i + 1) % k].0);
        boundary.insert(if a < b { (a, b) } else { (b, a) });
    }
    let all: Vec<(u32, u32)> = graph.edges().iter().map(|&(a, b)| (a.0, b.0)).collect();
    let mut internal: Vec<(u32, u32)> = all
        .iter()
        .copied()
        .filter(|e| !boundary.contains(e))
        .collect();
    internal.shuffle(rng);
    let quota = (rem * internal.len() as f64).floor() as usize;

    let n = graph.n();
    let index: std::collections::BTreeMap<u32, usize> = graph
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| (v.id.0, i))
        .collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in &all {
        adj[index[&a]].push(index[&b]);
        adj[index[&b]].push(index[&a]);
    }
    let mut removed = std::collections::BTreeSet::new();
    let mut taken = 0;
    for &(a, b) in &internal {
        if taken == quota {
            break;
        }
        let (ia, ib) = (index[&a], index[&b]);
        adj[ia].retain(|&w| w != ib);
        adj[ib].retain(|&w| w != ia);
        if is_biconnected_adj(n, &adj) {
            removed.insert((a, b));
            taken += 1;
        } else {
            adj[ia].push(ib);
            adj[ib].push(ia);
        }
    }
    all.into_iter().filter(|e| !removed.contains(e)).collect()
}

fn min_separation_violated(points: &[Point2]) -> bool {
    for (i, p) in points.iter().enumerate() {
        for q in points.iter().skip(i + 1) {
            if p.dist(*q) < MIN_SEPARATION {
                return true;
            }
        }
    }
    false
}

/// Uniform sample inside a uniformly chosen triangle of the base
/// triangulation, kept clear of existing points.
fn place_nested_point(
    points: &[Point2],
    tris: &[[usize; 3]],
    rng: &mut ChaCha8Rng,
) -> Result<Point2> {
    for _ in 0..MAX_PLACEMENTS {
        let t = tris[rng.random_range(0..tris.len())];
        let (a, b, c) = (points[t[0]], points[t[1]], points[t[2]]);
        let r1: f64 = rng.random_range(0.0..1.0);
        let r2: f64 = rng.random_range(0.0..1.0);
        let s = r1.sqrt();
        let p = Point2::new(
            (1.0 - s) * a.x + s * (1.0 - r2) * b.x + s * r2 * c.x,
            (1.0 - s) * a.y + s * (1.0 - r2) * b.y + s * r2 * c.y,
        );
        if points.iter().all(|q| q.dist(p) >= MIN_SEPARATION) {
            return Ok(p);
        }
    }
    Err(Error::Generation(
        "could not place a nested point clear of existing ones".into(),
    ))
}

/// Delaunay triangulation via incremental insertion with a super-triangle.
/// Returns index triples; points on a shared circumcircle are never
/// considered "inside", which makes ties deterministic.
pub fn delaunay_triangulation(points: &[Point2]) -> Result<Vec<[usize; 3]>> {
    let n = points.len();
    if n < 3 {
        return Err(Error::Generation("need at least 3 points".into()));
    }
    let mut min = points[0];
    let mut max = points[0];
    for p in points {
        min = Point2::new(min.x.min(p.x), min.y.min(p.y));
        max = Point2::new(max.x.max(p.x), max.y.max(p.y));
    }
    let cx = (min.x + max.x) / 2.0;
    let cy = (min.y + max.y) / 2.0;
    let r = ((max.x - min.x).hypot(max.y - min.y)).max(1.0) * 16.0;
    let mut pts: Vec<Point2> = points.to_vec();
    let s0 = n;
    pts.push(Point2::new(cx, cy + r));
    pts.push(Point2::new(cx - r * 0.866_025_403_784_438_6, cy - r / 2.0));
    pts.push(Point2::new(cx + r * 0.866_025_403_784_438_6, cy - r / 2.0));
    let mut tris: Vec<[usize; 3]> = vec![[s0, s0 + 1, s0 + 2]];

    for pi in 0..n {
        let p = pts[pi];
        let mut bad = Vec::new();
        for (ti, t) in tris.iter().enumerate() {
            if in_circumcircle(pts[t[0]], pts[t[1]], pts[t[2]], p) {
                bad.push(ti);
            }
        }
        // Boundary of the cavity: edges used by exactly one bad triangle.
        let mut edge_count: std::collections::BTreeMap<(usize, usize), usize> =
            std::collections::BTreeMap::new();
        let mut edge_dir: std::collections::BTreeMap<(usize, usize), (usize, usize)> =
            std::collections::BTreeMap::new();
        for &ti in &bad {
            let t = tris[ti];
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                *edge_count.entry(key).or_insert(0) += 1;
                edge_dir.insert(key, (a, b));
            }
        }
        for &ti in bad.iter().rev() {
            tris.swap_remove(ti);
        }
        for (key, count) in edge_count {
            if count == 1 {
                let (a, b) = edge_dir[&key];
                tris.push([a, b, pi]);
            }
        }
    }
    tris.retain(|t| t.iter().all(|&v| v < n));
    if tris.is_empty() {
        return Err(Error::Generation("all points collinear".into()));
    }
    Ok(tris)
}

/// Strict in-circumcircle test, orientation-normalized.
fn in_circumcircle(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let orient = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    let (b, c) = if orient < 0.0 { (c, b) } else { (b, c) };
    let ax = a.x - d.x;
    let ay = a.y - d.y;
    let bx = b.x - d.x;
    let by = b.y - d.y;
    let cx = c.x - d.x;
    let cy = c.y - d.y;
    let det = (ax * ax + ay * ay) * (bx * cy - by * cx)
        - (bx * bx + by * by) * (ax * cy - ay * cx)
        + (cx * cx + cy * cy) * (ax * by - ay * bx);
    det > 0.0
}
