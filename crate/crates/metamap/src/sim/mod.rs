//! Force-directed improvement of a metaphorical map.
//!
//! Each iteration measures region pressures (weight/area ratios against the
//! global ratio), adapts per-region stiffness, accumulates four forces
//! against a frozen position snapshot (air pressure along outward normals,
//! vertex-vertex and vertex-edge repulsion within faces, angular resolution
//! at corners), applies displacement-capped moves that keep the subdivision
//! planar, and finally splits long boundary segments and merges vanishing
//! ones.
//!
//! The baseline mode (`ms_mode`) pins stiffness to one and distributes air
//! pressure uniformly along the boundary instead of shifting it toward
//! narrow passages.

mod displacement;
mod forces;
mod splitmerge;

pub use forces::{
    air_pressure_contributions, beta_value, compute_betas, pairing_edge, repulsion_from_edge,
    repulsion_on_vertex, wedge_force,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::geom::{polygon_signed_area, Point2, Vec2};
use crate::graph::VertexId;
use crate::map::{MetaphoricalMap, PointId, Region, RegionId, RegionKind};
use crate::metrics::{evaluate_polygons, QualityReport};
use crate::{Error, Result};

/// Distances in repulsion terms are clamped below this fraction of the
/// average segment length.
const REPULSION_DIST_FLOOR: f64 = 1e-6;

/// Simulation parameters. Defaults reproduce the tuned constants of the
/// engine; `iterations` defaults to `800 + 10 * n` for `n` internal regions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimParams {
    /// Vertex-vertex repulsion strength within a face.
    pub vertex_repulsion: f64,
    /// Vertex-edge repulsion strength within a face.
    pub edge_repulsion: f64,
    /// Air pressure strength along region boundaries.
    pub pressure_strength: f64,
    /// Angular-resolution force strength at subdivision corners.
    pub angular_strength: f64,
    /// Additive stiffness step per iteration.
    pub step: f64,
    /// Stiffness ceiling; the floor is its reciprocal.
    pub s_high: f64,
    /// Iteration count override.
    pub iterations: Option<usize>,
    /// Narrow-passage scale as a fraction of the map's equivalent radius.
    pub passage_fraction: f64,
    /// A boundary edge pairs with a vertex when its straight-line distance
    /// is below this fraction of the boundary-walk distance.
    pub pairing_threshold: f64,
    /// Merge a degree-2 corner when closer than this fraction of the
    /// average segment length to a neighbor.
    pub merge_fraction: f64,
    /// Split a boundary segment longer than this multiple of the average
    /// segment length.
    pub split_factor: f64,
    /// Baseline mode: stiffness pinned to 1, uniform pressure distribution.
    pub ms_mode: bool,
    /// Apply the angular force at degree-2 corners too.
    pub angular_on_degree2: bool,
    /// Record per-iteration quality rows.
    pub trace: bool,
    /// Re-verify planarity exhaustively after every iteration.
    pub exhaustive_planarity_check: bool,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            vertex_repulsion: 25.0,
            edge_repulsion: 10.0,
            pressure_strength: 3.0,
            angular_strength: 0.5,
            step: 0.02,
            s_high: 8.0,
            iterations: None,
            passage_fraction: 0.05,
            pairing_threshold: 0.9,
            merge_fraction: 0.1,
            split_factor: 2.0,
            ms_mode: false,
            angular_on_degree2: true,
            trace: false,
            exhaustive_planarity_check: false,
        }
    }
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        let positives = [
            ("vertex_repulsion", self.vertex_repulsion),
            ("edge_repulsion", self.edge_repulsion),
            ("pressure_strength", self.pressure_strength),
            ("angular_strength", self.angular_strength),
            ("s_high", self.s_high),
            ("passage_fraction", self.passage_fraction),
            ("merge_fraction", self.merge_fraction),
            ("split_factor", self.split_factor),
        ];
        for (name, v) in positives {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Validation(format!("{name} must be positive")));
            }
        }
        if !(self.step >= 0.0) || !self.step.is_finite() {
            return Err(Error::Validation("step must be non-negative".into()));
        }
        if !(self.s_high >= 1.0) {
            return Err(Error::Validation("s_high must be at least 1".into()));
        }
        if !(self.pairing_threshold > 0.0 && self.pairing_threshold < 1.0) {
            return Err(Error::Validation(
                "pairing_threshold must lie in (0, 1)".into(),
            ));
        }
        Ok(())
    }

    /// Stiffness ceiling actually in effect (the baseline pins it to 1).
    pub fn effective_s_high(&self) -> f64 {
        if self.ms_mode {
            1.0
        } else {
            self.s_high
        }
    }

    pub fn s_low(&self) -> f64 {
        1.0 / self.effective_s_high()
    }

    /// Narrow-passage weighting is disabled in the baseline mode.
    pub fn beta_enabled(&self) -> bool {
        !self.ms_mode
    }

    pub fn iterations_for(&self, internal_regions: usize) -> usize {
        self.iterations.unwrap_or(800 + 10 * internal_regions)
    }
}

/// One per-iteration quality sample.
#[derive(Clone, Debug, Serialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub avg_error: f64,
    pub max_error: f64,
    pub avg_complexity: f64,
    pub max_complexity: f64,
}

/// Final result of a simulation run.
#[derive(Debug)]
pub struct SimOutcome {
    pub map: MetaphoricalMap,
    pub report: QualityReport,
    pub trace: Vec<TraceRow>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FaceKind {
    Internal,
    Hole,
    Outer,
}

/// A face of the working subdivision: an internal region, a hole, or the
/// outer face. Boundaries are dense point indices in counterclockwise
/// polygon order.
#[derive(Clone, Debug)]
pub(crate) struct Face {
    pub kind: FaceKind,
    pub weight: f64,
    pub boundary: Vec<u32>,
    pub region: RegionId,
    pub source: Option<VertexId>,
}

/// Normalized pressure of a region: its weight/area ratio relative to the
/// global weight/area ratio. 1 means the area already matches the weight.
pub fn region_pressure(weight: f64, area: f64, total_area: f64, total_weight: f64) -> f64 {
    (weight / area) * (total_area / total_weight)
}

/// Mutable simulation state over a dense point pool.
pub struct SimState {
    params: SimParams,
    pos: Vec<Point2>,
    alive: Vec<bool>,
    faces: Vec<Face>,
    /// Per-face stiffness; holes and the outer face stay at 1.
    stiffness: Vec<f64>,
    /// Per-face pressure measured on the geometry entering the iteration.
    pressures: Vec<f64>,
    iteration: usize,
    forces: Vec<Vec2>,
}

/// Derived per-iteration connectivity of the subdivision.
pub(crate) struct Topology {
    /// Faces around each point.
    pub vertex_faces: Vec<Vec<usize>>,
    /// Sorted unique neighbors of each point.
    pub adjacency: Vec<Vec<u32>>,
}

impl SimState {
    pub fn from_map(map: &MetaphoricalMap, params: &SimParams) -> Result<SimState> {
        params.validate()?;
        let dense: BTreeMap<PointId, u32> = map
            .points()
            .keys()
            .enumerate()
            .map(|(i, id)| (*id, i as u32))
            .collect();
        let pos: Vec<Point2> = map.points().values().copied().collect();
        let mut faces: Vec<Face> = Vec::with_capacity(map.regions().len() + 1);
        for r in map.regions() {
            faces.push(Face {
                kind: match r.kind {
                    RegionKind::Internal => FaceKind::Internal,
                    RegionKind::Hole => FaceKind::Hole,
                },
                weight: r.target_weight,
                boundary: r.boundary.iter().map(|p| dense[p]).collect(),
                region: r.id,
                source: r.source_vertex,
            });
        }
        faces.push(Face {
            kind: FaceKind::Outer,
            weight: 0.0,
            boundary: map.outer_boundary().iter().map(|p| dense[p]).collect(),
            region: RegionId(u32::MAX),
            source: None,
        });
        let n_faces = faces.len();
        let n_points = pos.len();
        Ok(SimState {
            params: params.clone(),
            pos,
            alive: vec![true; n_points],
            faces,
            stiffness: vec![1.0; n_faces],
            pressures: vec![1.0; n_faces],
            iteration: 0,
            forces: vec![Vec2::ZERO; n_points],
        })
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn pressures(&self) -> &[f64] {
        &self.pressures
    }

    pub fn stiffness(&self) -> &[f64] {
        &self.stiffness
    }

    /// Number of faces, the outer face included (always the last index).
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Current coordinates of the dense point pool (merged points keep a
    /// tombstoned slot).
    pub fn positions(&self) -> &[Point2] {
        &self.pos
    }

    fn face_polygon(&self, f: &Face) -> Vec<Point2> {
        f.boundary.iter().map(|&i| self.pos[i as usize]).collect()
    }

    /// Uniformly rescales the map so the average segment length is 1.
    pub fn normalize_scale(&mut self) -> Result<()> {
        let lbar = self.average_segment_length();
        if !(lbar > 0.0) || !lbar.is_finite() {
            return Err(Error::DegenerateMap(
                "cannot normalize: zero average segment length".into(),
            ));
        }
        for p in &mut self.pos {
            p.x /= lbar;
            p.y /= lbar;
        }
        Ok(())
    }

    pub(crate) fn unique_segments(&self) -> Vec<(u32, u32)> {
        let mut set = std::collections::BTreeSet::new();
        for f in &self.faces {
            let k = f.boundary.len();
            for i in 0..k {
                let a = f.boundary[i];
                let b = f.boundary[(i + 1) % k];
                set.insert(if a < b { (a, b) } else { (b, a) });
            }
        }
        set.into_iter().collect()
    }

    pub fn average_segment_length(&self) -> f64 {
        let segs = self.unique_segments();
        if segs.is_empty() {
            return 0.0;
        }
        let total: f64 = segs
            .iter()
            .map(|&(a, b)| self.pos[a as usize].dist(self.pos[b as usize]))
            .sum();
        total / segs.len() as f64
    }

    pub(crate) fn topology(&self) -> Topology {
        let mut segments: std::collections::BTreeSet<(u32, u32)> = std::collections::BTreeSet::new();
        let mut vertex_faces: Vec<Vec<usize>> = vec![Vec::new(); self.pos.len()];
        let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); self.pos.len()];
        for (fi, f) in self.faces.iter().enumerate() {
            let k = f.boundary.len();
            for i in 0..k {
                let a = f.boundary[i];
                let b = f.boundary[(i + 1) % k];
                segments.insert(if a < b { (a, b) } else { (b, a) });
                vertex_faces[a as usize].push(fi);
            }
        }
        for list in &mut vertex_faces {
            list.sort_unstable();
            list.dedup();
        }
        for &(a, b) in &segments {
            adjacency[a as usize].push(b);
            adjacency[b as usize].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Topology {
            vertex_faces,
            adjacency,
        }
    }

    /// Areas of all faces; for the outer face this is the area enclosed by
    /// the outer boundary. Errors on degenerate or flipped regions.
    fn face_areas(&self) -> Result<Vec<f64>> {
        let mut areas = Vec::with_capacity(self.faces.len());
        for f in &self.faces {
            let poly = self.face_polygon(f);
            let area = polygon_signed_area(&poly);
            if !(area > 1e-12) || !area.is_finite() {
                let name = match f.kind {
                    FaceKind::Outer => "outer boundary".to_string(),
                    _ => format!("region {}", f.region),
                };
                return Err(Error::DegenerateMap(format!(
                    "{name} collapsed at iteration {} (signed area {area})",
                    self.iteration
                )));
            }
            areas.push(area);
        }
        Ok(areas)
    }

    /// Measures pressures on the current geometry.
    pub fn compute_pressures(&mut self) -> Result<()> {
        let areas = self.face_areas()?;
        let mut total_area = 0.0;
        let mut total_weight = 0.0;
        for (f, &a) in self.faces.iter().zip(&areas) {
            if f.kind != FaceKind::Outer {
                total_area += a;
                total_weight += f.weight;
            }
        }
        if !(total_area > 0.0) || !(total_weight > 0.0) {
            return Err(Error::DegenerateMap("empty map".into()));
        }
        for (i, f) in self.faces.iter().enumerate() {
            self.pressures[i] = match f.kind {
                FaceKind::Outer => 1.0,
                _ => region_pressure(f.weight, areas[i], total_area, total_weight),
            };
        }
        Ok(())
    }

    /// Advances stiffness by one additive step toward the pressure sign:
    /// over-pressured regions stiffen, under-pressured ones soften, clamped
    /// to the reciprocal band around 1. Holes and the outer face stay at 1.
    pub fn update_stiffness(&mut self) {
        let hi = self.params.effective_s_high();
        let lo = self.params.s_low();
        for (i, f) in self.faces.iter().enumerate() {
            if f.kind != FaceKind::Internal {
                continue;
            }
            let p = self.pressures[i];
            let dir = if p > 1.0 {
                1.0
            } else if p < 1.0 {
                -1.0
            } else {
                0.0
            };
            self.stiffness[i] = (self.stiffness[i] + dir * self.params.step).clamp(lo, hi);
        }
    }

    /// Equivalent radius of the map: the radius of the disc with the same
    /// total area (holes included).
    fn equivalent_radius(&self) -> f64 {
        let mut total = 0.0;
        for f in &self.faces {
            if f.kind != FaceKind::Outer {
                total += polygon_signed_area(&self.face_polygon(f)).abs();
            }
        }
        (total / std::f64::consts::PI).sqrt()
    }

    /// Accumulates all four forces against the frozen position snapshot.
    pub fn accumulate_forces(&mut self) {
        for f in &mut self.forces {
            *f = Vec2::ZERO;
        }
        let lbar = self.average_segment_length();
        let dist_floor = REPULSION_DIST_FLOOR * lbar;
        let rho = self.equivalent_radius();
        let topo = self.topology();

        self.add_air_pressure_forces(rho);
        self.add_repulsion_forces(dist_floor);
        self.add_angular_forces(&topo);
    }

    fn add_air_pressure_forces(&mut self, rho: f64) {
        let p = &self.params;
        for (fi, f) in self.faces.iter().enumerate() {
            let poly = self.face_polygon(f);
            let pressure = self.pressures[fi];
            let stiff = self.stiffness[fi];
            let betas = if f.kind == FaceKind::Outer || !p.beta_enabled() {
                vec![1.0; poly.len()]
            } else {
                compute_betas(&poly, rho, p.passage_fraction, p.pairing_threshold)
            };
            // Internal faces push outward across their boundary; the outer
            // face pushes inward (outward of the unbounded side).
            let invert = f.kind == FaceKind::Outer;
            for (vi, force) in
                air_pressure_contributions(&poly, pressure, stiff, &betas, p.pressure_strength)
            {
                let idx = f.boundary[vi] as usize;
                self.forces[idx] += if invert { -force } else { force };
            }
        }
    }

    fn add_repulsion_forces(&mut self, dist_floor: f64) {
        let c_vv = self.params.vertex_repulsion;
        let c_ve = self.params.edge_repulsion;
        let mut seen_pairs: std::collections::HashSet<(u32, u32)> = std::collections::HashSet::new();
        let mut seen_ve: std::collections::HashSet<(u32, u32, u32)> =
            std::collections::HashSet::new();
        for f in &self.faces {
            let b = &f.boundary;
            let k = b.len();
            // Vertex-vertex repulsion between all pairs sharing this face.
            for i in 0..k {
                for j in (i + 1)..k {
                    let (x, y) = if b[i] < b[j] { (b[i], b[j]) } else { (b[j], b[i]) };
                    if !seen_pairs.insert((x, y)) {
                        continue;
                    }
                    let fu = repulsion_on_vertex(
                        self.pos[b[i] as usize],
                        self.pos[b[j] as usize],
                        c_vv,
                        dist_floor,
                    );
                    self.forces[b[i] as usize] += fu;
                    self.forces[b[j] as usize] += -fu;
                }
            }
            // Vertex-edge repulsion from every non-incident edge of the face.
            for i in 0..k {
                let v = b[i];
                for j in 0..k {
                    let a = b[j];
                    let c = b[(j + 1) % k];
                    if a == v || c == v {
                        continue;
                    }
                    let key = (v, a.min(c), a.max(c));
                    if !seen_ve.insert(key) {
                        continue;
                    }
                    let force = repulsion_from_edge(
                        self.pos[v as usize],
                        self.pos[a as usize],
                        self.pos[c as usize],
                        c_ve,
                        dist_floor,
                    );
                    self.forces[v as usize] += force;
                }
            }
        }
    }

    fn add_angular_forces(&mut self, topo: &Topology) {
        let c = self.params.angular_strength;
        let tau = 2.0 * std::f64::consts::PI;
        for v in 0..self.pos.len() {
            if !self.alive[v] {
                continue;
            }
            let nbrs = &topo.adjacency[v];
            let deg = nbrs.len();
            if deg < 2 || (deg == 2 && !self.params.angular_on_degree2) {
                continue;
            }
            let p = self.pos[v];
            let mut angles: Vec<f64> = nbrs
                .iter()
                .map(|&w| (self.pos[w as usize] - p).angle())
                .collect();
            angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let fair = tau / deg as f64;
            let mut total = Vec2::ZERO;
            for i in 0..deg {
                let a0 = angles[i];
                let a1 = angles[(i + 1) % deg];
                let mut alpha = a1 - a0;
                if alpha <= 0.0 {
                    alpha += tau;
                }
                let bisector = Vec2::new((a0 + alpha / 2.0).cos(), (a0 + alpha / 2.0).sin());
                total += wedge_force(alpha, fair, bisector, c);
            }
            self.forces[v] += total;
        }
    }

    /// One full iteration.
    pub fn step(&mut self) -> Result<()> {
        self.iteration += 1;
        self.compute_pressures()?;
        self.update_stiffness();
        self.accumulate_forces();
        self.safe_apply_displacements();
        self.split_and_merge();
        if self.params.exhaustive_planarity_check {
            self.assert_planar_exhaustive()?;
        }
        Ok(())
    }

    fn assert_planar_exhaustive(&self) -> Result<()> {
        if let Some(((a, b), (c, d))) = displacement::find_crossing_exhaustive(self) {
            return Err(Error::DegenerateMap(format!(
                "segments ({a}, {b}) and ({c}, {d}) cross at iteration {}",
                self.iteration
            )));
        }
        Ok(())
    }

    pub fn safe_apply_displacements(&mut self) {
        displacement::safe_apply(self);
    }

    pub fn split_and_merge(&mut self) {
        splitmerge::split_and_merge(self);
    }

    fn quality_entries(&self) -> Vec<(RegionId, Vec<Point2>, f64)> {
        self.faces
            .iter()
            .filter(|f| f.kind == FaceKind::Internal)
            .map(|f| (f.region, self.face_polygon(f), f.weight))
            .collect()
    }

    /// Exports the current state as a validated map with freshly numbered
    /// points.
    pub fn to_map(&self) -> Result<MetaphoricalMap> {
        let mut renumber: BTreeMap<u32, PointId> = BTreeMap::new();
        let mut points: BTreeMap<PointId, Point2> = BTreeMap::new();
        for (i, alive) in self.alive.iter().enumerate() {
            if *alive {
                let id = PointId(renumber.len() as u32);
                renumber.insert(i as u32, id);
                points.insert(id, self.pos[i]);
            }
        }
        let mut regions = Vec::new();
        for f in &self.faces {
            if f.kind == FaceKind::Outer {
                continue;
            }
            regions.push(Region {
                id: f.region,
                kind: match f.kind {
                    FaceKind::Internal => RegionKind::Internal,
                    _ => RegionKind::Hole,
                },
                boundary: f.boundary.iter().map(|i| renumber[i]).collect(),
                target_weight: f.weight,
                source_vertex: f.source,
            });
        }
        MetaphoricalMap::new(points, regions)
    }
}

/// Runs the simulation on a copy of the given map and returns the improved
/// map with its quality report (and per-iteration trace when enabled).
pub fn run(map: &MetaphoricalMap, params: &SimParams) -> Result<SimOutcome> {
    let mut state = SimState::from_map(map, params)?;
    state.normalize_scale()?;
    let internal = map.non_hole_regions().count();
    let iterations = params.iterations_for(internal);
    let mut trace = Vec::new();
    if params.trace {
        let q = evaluate_polygons(&state.quality_entries())?;
        trace.push(TraceRow {
            iteration: 0,
            avg_error: q.avg_error,
            max_error: q.max_error,
            avg_complexity: q.avg_complexity,
            max_complexity: q.max_complexity,
        });
    }
    for _ in 0..iterations {
        state.step()?;
        if params.trace {
            let q = evaluate_polygons(&state.quality_entries())?;
            trace.push(TraceRow {
                iteration: state.iteration,
                avg_error: q.avg_error,
                max_error: q.max_error,
                avg_complexity: q.avg_complexity,
                max_complexity: q.max_complexity,
            });
        }
    }
    let out = state.to_map()?;
    let report = evaluate_polygons(&state.quality_entries())?;
    Ok(SimOutcome {
        map: out,
        report,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph_from_parts;
    use crate::init::dual_transform;

    fn small_map() -> MetaphoricalMap {
        let g = graph_from_parts(
            &[
                (0, 2.0, 0.0, 0.0),
                (1, 1.0, 4.0, 0.0),
                (2, 1.0, 2.0, 3.0),
                (3, 3.0, 2.0, 1.0),
            ],
            &[(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3)],
            None,
        )
        .unwrap();
        dual_transform(&g).unwrap()
    }

    #[test]
    fn pressure_is_relative_to_global_ratio() {
        // Region of weight 2 and area 1 in a map whose totals match:
        // pressure 2.
        assert_eq!(region_pressure(2.0, 1.0, 10.0, 10.0), 2.0);
        // Matching ratio gives pressure 1.
        assert_eq!(region_pressure(5.0, 2.5, 20.0, 40.0), 1.0);
    }

    #[test]
    fn outer_face_pressure_is_one() {
        let map = small_map();
        let mut st = SimState::from_map(&map, &SimParams::default()).unwrap();
        st.compute_pressures().unwrap();
        let outer_idx = st.face_count() - 1;
        assert_eq!(st.pressures()[outer_idx], 1.0);
    }

    #[test]
    fn stiffness_walks_and_clamps() {
        let map = small_map();
        let mut st = SimState::from_map(&map, &SimParams::default()).unwrap();
        st.compute_pressures().unwrap();
        // Force a known pressure pattern.
        let n = st.face_count();
        st.pressures = vec![2.0; n];
        st.update_stiffness();
        assert!((st.stiffness()[0] - 1.02).abs() < 1e-12);
        for _ in 0..1000 {
            st.update_stiffness();
        }
        assert!((st.stiffness()[0] - 8.0).abs() < 1e-12);
        st.pressures = vec![0.5; n];
        for _ in 0..2000 {
            st.update_stiffness();
        }
        assert!((st.stiffness()[0] - 0.125).abs() < 1e-12);
        // Outer face never stiffens.
        assert_eq!(st.stiffness()[n - 1], 1.0);
    }

    #[test]
    fn ms_mode_pins_stiffness_to_one() {
        let map = small_map();
        let params = SimParams {
            ms_mode: true,
            ..SimParams::default()
        };
        let mut st = SimState::from_map(&map, &params).unwrap();
        st.compute_pressures().unwrap();
        let n = st.face_count();
        st.pressures = vec![3.0; n];
        for _ in 0..100 {
            st.update_stiffness();
        }
        assert!(st.stiffness().iter().all(|&s| s == 1.0));
    }

    #[test]
    fn normalization_sets_average_segment_length_to_one() {
        let map = small_map();
        let mut st = SimState::from_map(&map, &SimParams::default()).unwrap();
        st.normalize_scale().unwrap();
        assert!((st.average_segment_length() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_forces_leave_positions_unchanged() {
        let map = small_map();
        let mut st = SimState::from_map(&map, &SimParams::default()).unwrap();
        let before = st.positions().to_vec();
        st.safe_apply_displacements();
        for (a, b) in before.iter().zip(st.positions()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn short_run_keeps_map_valid() {
        let map = small_map();
        let params = SimParams {
            iterations: Some(50),
            exhaustive_planarity_check: true,
            ..SimParams::default()
        };
        let out = run(&map, &params).unwrap();
        out.map.validate().unwrap();
        assert_eq!(out.map.non_hole_regions().count(), 4);
    }

    #[test]
    fn trace_records_every_iteration() {
        let map = small_map();
        let params = SimParams {
            iterations: Some(10),
            trace: true,
            ..SimParams::default()
        };
        let out = run(&map, &params).unwrap();
        assert_eq!(out.trace.len(), 11);
        assert_eq!(out.trace[0].iteration, 0);
        assert_eq!(out.trace[10].iteration, 10);
    }

    #[test]
    fn scale_invariance_for_power_of_two_prescaling() {
        let map = small_map();
        let points2: BTreeMap<PointId, Point2> = map
            .points()
            .iter()
            .map(|(id, p)| (*id, Point2::new(p.x * 4.0, p.y * 4.0)))
            .collect();
        let map2 = MetaphoricalMap::new(points2, map.regions().to_vec()).unwrap();
        let params = SimParams {
            iterations: Some(40),
            trace: true,
            ..SimParams::default()
        };
        let a = run(&map, &params).unwrap();
        let b = run(&map2, &params).unwrap();
        for (ra, rb) in a.trace.iter().zip(&b.trace) {
            assert_eq!(ra.avg_error.to_bits(), rb.avg_error.to_bits());
            assert_eq!(ra.avg_complexity.to_bits(), rb.avg_complexity.to_bits());
        }
    }
}
