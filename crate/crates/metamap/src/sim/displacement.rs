//! Planarity-preserving application of accumulated forces.
//!
//! Moves are bounded by two-sided gap constraints. For every point and every
//! nearby boundary segment the point is not an endpoint of, the gap between
//! them is a budget: the point may spend at most half of it (minus a tiny
//! clearance) moving toward the segment, and each segment endpoint may spend
//! at most the same half moving toward the point. The segment lies entirely
//! on its own side of the gap (the closest point of a convex set supports a
//! separating line), so the two halves can meet but never overlap: every gap
//! stays at least the clearance wide, nothing touches or crosses, and a face
//! cannot flip without its boundary touching itself first. Motion away from
//! or along a gap is never restricted, so even a point squeezed against a
//! foreign segment stays free to escape. A trial-and-back-off pass remains
//! as a final floating-point safety net.

use std::collections::{HashMap, HashSet};

use crate::geom::{
    closest_point_on_segment, polygon_signed_area, segments_properly_intersect, Point2, Vec2,
};

use super::SimState;

/// Rounds of halving before offenders are frozen outright.
const HALVING_ROUNDS: usize = 20;
/// Fraction of the average segment length kept clear between any point and
/// any boundary segment it is not an endpoint of.
const CLEARANCE_FRACTION: f64 = 1e-9;
/// Fraction of the average segment length no single move may exceed.
const STEP_FRACTION: f64 = 0.5;

pub(crate) fn safe_apply(st: &mut SimState) {
    let lbar = st.average_segment_length();
    if !(lbar > 0.0) || !lbar.is_finite() {
        return;
    }
    let delta = CLEARANCE_FRACTION * lbar;
    let segments = st.unique_segments();
    let grid = SegGrid::build(&segments, &st.pos, lbar);
    let n = st.pos.len();

    let cap = STEP_FRACTION * lbar;
    let mut disp = vec![Vec2::ZERO; n];
    for v in 0..n {
        if !st.alive[v] {
            continue;
        }
        let f = st.forces[v];
        let norm = f.norm();
        disp[v] = if norm > cap { f * (cap / norm) } else { f };
    }

    // Gap constraints. Only segments within twice the step cap of a point
    // can close their gap in one move, so a two-cell grid query finds every
    // pair that needs one. Constraints only ever scale moves down, so the
    // order they are applied in cannot un-satisfy an earlier one.
    let mut seen: HashSet<usize> = HashSet::new();
    for v in 0..n {
        if !st.alive[v] {
            continue;
        }
        seen.clear();
        for si in grid.candidates_near(st.pos[v], 2) {
            if !seen.insert(si) {
                continue;
            }
            let (a, b) = segments[si];
            let (a, b) = (a as usize, b as usize);
            if a == v || b == v {
                continue;
            }
            let (q, g) = closest_point_on_segment(st.pos[v], st.pos[a], st.pos[b]);
            if g < f64::EPSILON * lbar {
                // Exact contact leaves no usable gap direction; freeze all
                // three points for this iteration.
                disp[v] = Vec2::ZERO;
                disp[a] = Vec2::ZERO;
                disp[b] = Vec2::ZERO;
                continue;
            }
            let ghat = (st.pos[v] - q) * (1.0 / g);
            let budget = (0.5 * (g - delta)).max(0.0);
            limit_component(&mut disp[v], -ghat, budget);
            limit_component(&mut disp[a], ghat, budget);
            limit_component(&mut disp[b], ghat, budget);
        }
    }

    // Floating-point safety net: trial application with halving back-off.
    let mut factors = vec![1.0_f64; n];
    let mut trial = st.pos.clone();
    for round in 0..=(HALVING_ROUNDS + 1) {
        for v in 0..n {
            trial[v] = st.pos[v] + disp[v] * factors[v];
        }
        let offenders = find_offenders(st, &segments, &trial, lbar);
        if offenders.is_empty() {
            st.pos = trial;
            return;
        }
        for v in offenders {
            factors[v] = if round < HALVING_ROUNDS {
                factors[v] * 0.5
            } else {
                0.0
            };
        }
    }
    // A violation that survives even frozen offenders predates this call;
    // skip the whole move rather than commit anything on top of it.
}

/// Scales `d` down just enough that its component along the unit vector
/// `dir` does not exceed `budget`. Components at or below the budget
/// (including receding ones) are left alone.
fn limit_component(d: &mut Vec2, dir: Vec2, budget: f64) {
    let c = d.dot(dir);
    if c > budget {
        *d = *d * (budget / c);
    }
}

/// Uniform grid over segment bounding boxes: segments are rasterized into
/// every cell their bounding box touches, so a query with ring `r` sees
/// every segment within `r` cell sizes of the query point.
struct SegGrid {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl SegGrid {
    fn build(segments: &[(u32, u32)], pos: &[Point2], cell: f64) -> SegGrid {
        let cell = if cell.is_finite() && cell > 0.0 { cell } else { 1.0 };
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (si, &(a, b)) in segments.iter().enumerate() {
            let (pa, pb) = (pos[a as usize], pos[b as usize]);
            let x0 = (pa.x.min(pb.x) / cell).floor() as i64;
            let x1 = (pa.x.max(pb.x) / cell).floor() as i64;
            let y0 = (pa.y.min(pb.y) / cell).floor() as i64;
            let y1 = (pa.y.max(pb.y) / cell).floor() as i64;
            for ix in x0..=x1 {
                for iy in y0..=y1 {
                    buckets.entry((ix, iy)).or_default().push(si);
                }
            }
        }
        SegGrid { cell, buckets }
    }

    /// Indices of all segments that could lie within `ring` cell sizes of
    /// `p`; duplicates are possible when a segment spans several cells.
    fn candidates_near(&self, p: Point2, ring: i64) -> impl Iterator<Item = usize> + '_ {
        let cx = (p.x / self.cell).floor() as i64;
        let cy = (p.y / self.cell).floor() as i64;
        (-ring..=ring).flat_map(move |dx| {
            (-ring..=ring).flat_map(move |dy| {
                self.buckets
                    .get(&(cx + dx, cy + dy))
                    .into_iter()
                    .flatten()
                    .copied()
            })
        })
    }
}

/// Points involved in any planarity violation under the trial positions:
/// endpoints of crossing segment pairs and corners of flipped faces.
fn find_offenders(
    st: &SimState,
    segments: &[(u32, u32)],
    trial: &[Point2],
    lbar: f64,
) -> HashSet<usize> {
    let mut offenders = HashSet::new();
    for &((a, b), (c, d)) in &find_crossings(segments, trial, lbar) {
        offenders.extend([a as usize, b as usize, c as usize, d as usize]);
    }
    for f in &st.faces {
        let poly: Vec<Point2> = f.boundary.iter().map(|&i| trial[i as usize]).collect();
        if !(polygon_signed_area(&poly) > 1e-12) {
            offenders.extend(f.boundary.iter().map(|&i| i as usize));
        }
    }
    offenders
}

/// All properly crossing pairs among the given segments, found with a
/// uniform grid over segment bounding boxes. Pairs sharing an endpoint
/// index are legitimate contacts and are skipped.
fn find_crossings(
    segments: &[(u32, u32)],
    pos: &[Point2],
    lbar: f64,
) -> Vec<((u32, u32), (u32, u32))> {
    let grid = SegGrid::build(segments, pos, lbar.max(1e-9));
    let mut tested: HashSet<(usize, usize)> = HashSet::new();
    let mut crossings = Vec::new();
    for bucket in grid.buckets.values() {
        for (i, &si) in bucket.iter().enumerate() {
            for &sj in &bucket[i + 1..] {
                let key = (si.min(sj), si.max(sj));
                if !tested.insert(key) {
                    continue;
                }
                let (a, b) = segments[key.0];
                let (c, d) = segments[key.1];
                if a == c || a == d || b == c || b == d {
                    continue;
                }
                if segments_properly_intersect(
                    pos[a as usize],
                    pos[b as usize],
                    pos[c as usize],
                    pos[d as usize],
                ) {
                    crossings.push(((a, b), (c, d)));
                }
            }
        }
    }
    crossings.sort_unstable();
    crossings
}

/// Exhaustive all-pairs crossing scan of the current positions; used by
/// the paranoid verification mode.
pub(crate) fn find_crossing_exhaustive(st: &SimState) -> Option<((u32, u32), (u32, u32))> {
    let segments = st.unique_segments();
    for (i, &(a, b)) in segments.iter().enumerate() {
        for &(c, d) in &segments[i + 1..] {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if segments_properly_intersect(
                st.pos[a as usize],
                st.pos[b as usize],
                st.pos[c as usize],
                st.pos[d as usize],
            ) {
                return Some(((a, b), (c, d)));
            }
        }
    }
    None
}
