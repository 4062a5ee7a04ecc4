//! Pure force terms: boundary air pressure with narrow-passage weighting,
//! pairwise repulsion, and angular resolution at corners.
//!
//! All functions operate on plain polygons and points so they can be tested
//! in isolation; polygon boundaries are counterclockwise with the face
//! interior on the left of each directed edge.

use crate::geom::{closest_point_on_segment, Point2, Vec2};

/// Distance-based narrow-passage factor. `delta` is the ratio of the
/// passage scale to the measured passage width; values above 1 boost the
/// local pressure logarithmically, values below damp it, and 1 leaves it
/// unchanged. Always positive.
pub fn beta_value(delta: f64) -> f64 {
    let d = delta - 1.0;
    1.0 + d.signum() * (1.0 + d.abs()).ln()
}

/// Finds the pairing edge of boundary vertex `i`: the nearest edge not
/// incident to it whose straight-line distance is less than `threshold`
/// times the shorter boundary walk to the closest point on that edge.
/// Returns the edge index (edge `j` runs from vertex `j` to `j + 1`) and
/// the straight-line distance.
pub fn pairing_edge(poly: &[Point2], i: usize, threshold: f64) -> Option<(usize, f64)> {
    let n = poly.len();
    if n < 3 {
        return None;
    }
    let v = poly[i];
    let mut lens = Vec::with_capacity(n);
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for j in 0..n {
        let l = poly[j].dist(poly[(j + 1) % n]);
        lens.push(l);
        prefix.push(prefix[j] + l);
    }
    let perimeter = prefix[n];
    if !(perimeter > 0.0) {
        return None;
    }
    let mut best: Option<(usize, f64)> = None;
    for j in 0..n {
        if j == i || (j + 1) % n == i {
            continue;
        }
        let a = poly[j];
        let b = poly[(j + 1) % n];
        let (x, d_e) = closest_point_on_segment(v, a, b);
        // Walk distance from vertex i to x along the boundary, the shorter
        // way around.
        let along = prefix[j] + a.dist(x);
        let forward = (along - prefix[i]).rem_euclid(perimeter);
        let d_p = forward.min(perimeter - forward);
        if d_e < threshold * d_p {
            let better = match best {
                None => true,
                Some((_, best_d)) => d_e < best_d,
            };
            if better {
                best = Some((j, d_e));
            }
        }
    }
    best
}

/// Narrow-passage factors for every vertex of a region boundary. `rho` is
/// the equivalent radius of the whole map; vertices without a pairing edge
/// get factor 1.
pub fn compute_betas(
    poly: &[Point2],
    rho: f64,
    passage_fraction: f64,
    pairing_threshold: f64,
) -> Vec<f64> {
    (0..poly.len())
        .map(|i| match pairing_edge(poly, i, pairing_threshold) {
            Some((_, d_e)) => beta_value(passage_fraction * rho / d_e.max(1e-12)),
            None => 1.0,
        })
        .collect()
}

/// Air pressure contributions of one region boundary. Each edge pushes
/// both of its endpoints along its outward normal; an endpoint's share is
/// proportional to its own narrow-passage factor and the edge length, and
/// the whole boundary is normalized so the magnitudes sum to exactly
/// `2 * strength * pressure * stiffness`. Returns `(vertex index, force)`
/// pairs, two per edge.
pub fn air_pressure_contributions(
    poly: &[Point2],
    pressure: f64,
    stiffness: f64,
    betas: &[f64],
    strength: f64,
) -> Vec<(usize, Vec2)> {
    let n = poly.len();
    assert_eq!(betas.len(), n);
    let mut lens = vec![0.0; n];
    let mut norm = 0.0;
    for j in 0..n {
        lens[j] = poly[j].dist(poly[(j + 1) % n]);
        norm += lens[j] * (betas[j] + betas[(j + 1) % n]);
    }
    if !(norm > 0.0) {
        return Vec::new();
    }
    let scale = strength * pressure * stiffness / norm;
    let mut out = Vec::with_capacity(2 * n);
    for j in 0..n {
        let a = poly[j];
        let b = poly[(j + 1) % n];
        let dir = match (b - a).normalized() {
            Some(d) => d,
            None => continue,
        };
        // Interior on the left of a -> b, so outward is the right normal.
        let outward = dir.perp_cw();
        let k = (j + 1) % n;
        out.push((j, outward * (scale * 2.0 * betas[j] * lens[j])));
        out.push((k, outward * (scale * 2.0 * betas[k] * lens[j])));
    }
    out
}

/// Repulsion on a vertex at `pu` away from a same-face vertex at `pv`,
/// with inverse-square falloff. `dist_floor` bounds the magnitude blowup.
pub fn repulsion_on_vertex(pu: Point2, pv: Point2, strength: f64, dist_floor: f64) -> Vec2 {
    let w = pu - pv;
    let dir = match w.normalized() {
        Some(d) => d,
        None => return Vec2::ZERO,
    };
    let d = w.norm().max(dist_floor);
    dir * (strength / (d * d))
}

/// Repulsion on a vertex at `pv` away from the same-face edge `(a, b)` it
/// is not incident to. The push acts along the line to the closest edge
/// point and is scaled by how perpendicular that line is to the edge, so
/// sliding past an endpoint fades the force out smoothly. The edge itself
/// feels nothing.
pub fn repulsion_from_edge(
    pv: Point2,
    a: Point2,
    b: Point2,
    strength: f64,
    dist_floor: f64,
) -> Vec2 {
    let (x, _) = closest_point_on_segment(pv, a, b);
    let w = pv - x;
    let dir = match w.normalized() {
        Some(d) => d,
        None => return Vec2::ZERO,
    };
    let alignment = match (b - a).normalized() {
        Some(ed) => {
            let perp = w - ed * w.dot(ed);
            perp.norm() / w.norm()
        }
        // Degenerate edge: treat as a point, fully aligned.
        None => 1.0,
    };
    let d = w.norm().max(dist_floor);
    dir * (strength * alignment / (d * d))
}

/// Angular-resolution force of one wedge at a corner: pushes the corner
/// along the wedge bisector when the wedge is narrower than its fair share
/// and against it when wider, relative to the wedge's own size.
pub fn wedge_force(alpha: f64, fair: f64, bisector: Vec2, strength: f64) -> Vec2 {
    bisector * (strength * (fair - alpha) / alpha.max(1e-9))
}
