//! Map quality metrics: normalized cartographic error per region and a
//! polygon complexity score blending boundary wiggliness (frequency and
//! amplitude of notches) with deviation from convexity.
//!
//! All metrics are scale invariant and lie in the unit interval. Aggregates
//! ignore hole regions: holes fill space but do not represent vertices.

use serde::Serialize;

use crate::geom::{
    convex_hull, min_enclosing_circle, polygon_area, polygon_perimeter, polygon_signed_area,
    Point2,
};
use crate::map::{MetaphoricalMap, Region, RegionId, RegionKind};
use crate::{Error, Result};

/// Turn angles flatter than this sine are treated as straight (convex).
const COLLINEAR_EPS: f64 = 1e-9;

/// Per-region quality values.
#[derive(Clone, Debug, Serialize)]
pub struct RegionQuality {
    pub region: RegionId,
    pub cart_error: f64,
    pub complexity: f64,
}

/// Quality summary of one map.
#[derive(Clone, Debug, Serialize)]
pub struct QualityReport {
    pub per_region: Vec<RegionQuality>,
    pub avg_error: f64,
    pub max_error: f64,
    pub avg_complexity: f64,
    pub max_complexity: f64,
}

/// Region area rescaled so the map's total area matches the total weight
/// (both sums over non-hole regions).
pub fn normalized_area(region: &Region, map: &MetaphoricalMap) -> Result<f64> {
    let mut total_area = 0.0;
    let mut total_weight = 0.0;
    for r in map.non_hole_regions() {
        total_area += polygon_area(&map.region_polygon(r))?;
        total_weight += r.target_weight;
    }
    if !(total_area > 0.0) {
        return Err(Error::DegenerateMap("map has zero total area".into()));
    }
    let area = polygon_area(&map.region_polygon(region))?;
    Ok(area * total_weight / total_area)
}

/// Normalized cartographic error: relative mismatch between a region's
/// normalized area and its target weight, in [0, 1).
pub fn cartographic_error(region: &Region, map: &MetaphoricalMap) -> Result<f64> {
    let a = normalized_area(region, map)?;
    let w = region.target_weight;
    Ok((a - w).abs() / a.max(w))
}

/// Number of concave (reflex) corners of a simple polygon. Straight corners
/// count as convex.
pub fn concave_count(poly: &[Point2]) -> usize {
    let n = poly.len();
    let orientation = if polygon_signed_area(poly) >= 0.0 {
        1.0
    } else {
        -1.0
    };
    let mut count = 0;
    for i in 0..n {
        let a = poly[(i + n - 1) % n];
        let b = poly[i];
        let c = poly[(i + 1) % n];
        let u = b - a;
        let v = c - b;
        let cross = u.cross(v);
        let scale = u.norm() * v.norm();
        if scale <= 0.0 {
            continue;
        }
        if cross * orientation / scale < -COLLINEAR_EPS {
            count += 1;
        }
    }
    count
}

/// Notch frequency score in [0, 1]: how balanced the number of concave
/// corners is against the maximum possible for the vertex count. Extremes
/// (fully convex or maximally notched) score 0; the midpoint scores 1.
pub fn freq(poly: &[Point2]) -> f64 {
    let n = poly.len();
    if n <= 3 {
        return 0.0;
    }
    let l = concave_count(poly) as f64 / (n as f64 - 3.0);
    let t = l - 0.5;
    (1.0 + 16.0 * t.powi(4) - 8.0 * t.powi(2)).clamp(0.0, 1.0)
}

/// Notch amplitude in [0, 1): share of the perimeter spent on deviations
/// from the convex hull.
pub fn ampl(poly: &[Point2]) -> f64 {
    let circ = polygon_perimeter(poly);
    if circ <= 0.0 {
        return 0.0;
    }
    let hull = convex_hull(poly);
    let hull_circ = polygon_perimeter(&hull);
    ((circ - hull_circ) / circ).max(0.0)
}

/// Deviation from convexity in [0, 1]: area shortfall against the largest
/// n-gon inscribed in the polygon's smallest enclosing circle.
pub fn conv(poly: &[Point2]) -> f64 {
    let n = poly.len() as f64;
    let area = polygon_signed_area(poly).abs();
    let circle = min_enclosing_circle(poly);
    let tau = 2.0 * std::f64::consts::PI;
    let reference = circle.area() * (tau / n).sin() * n / tau;
    if !(reference > 0.0) {
        return 0.0;
    }
    (1.0 - area / reference).clamp(0.0, 1.0)
}

/// Combined polygon complexity in [0, 1]: dominated by boundary wiggliness
/// (amplitude times frequency), with a smaller convexity-deviation term.
pub fn polygon_complexity(poly: &[Point2]) -> f64 {
    0.8 * ampl(poly) * freq(poly) + 0.2 * conv(poly)
}

/// Evaluates every non-hole region of a map.
pub fn evaluate(map: &MetaphoricalMap) -> Result<QualityReport> {
    let entries: Vec<(RegionId, Vec<Point2>, f64)> = map
        .regions()
        .iter()
        .filter(|r| r.kind == RegionKind::Internal)
        .map(|r| (r.id, map.region_polygon(r), r.target_weight))
        .collect();
    evaluate_polygons(&entries)
}

/// Evaluates explicit (id, polygon, weight) entries; used by the simulation
/// trace to avoid exporting a map every iteration.
pub fn evaluate_polygons(entries: &[(RegionId, Vec<Point2>, f64)]) -> Result<QualityReport> {
    if entries.is_empty() {
        return Err(Error::Validation("no regions to evaluate".into()));
    }
    let mut total_area = 0.0;
    let mut total_weight = 0.0;
    for (_, poly, w) in entries {
        total_area += polygon_area(poly)?;
        total_weight += w;
    }
    if !(total_area > 0.0) {
        return Err(Error::DegenerateMap("zero total area".into()));
    }
    let mut per_region = Vec::with_capacity(entries.len());
    let mut sum_err = 0.0;
    let mut max_err: f64 = 0.0;
    let mut sum_compl = 0.0;
    let mut max_compl: f64 = 0.0;
    for (id, poly, w) in entries {
        let a = polygon_area(poly)? * total_weight / total_area;
        let err = (a - w).abs() / a.max(*w);
        let compl = polygon_complexity(poly);
        sum_err += err;
        max_err = max_err.max(err);
        sum_compl += compl;
        max_compl = max_compl.max(compl);
        per_region.push(RegionQuality {
            region: *id,
            cart_error: err,
            complexity: compl,
        });
    }
    let n = entries.len() as f64;
    Ok(QualityReport {
        per_region,
        avg_error: sum_err / n,
        max_error: max_err,
        avg_complexity: sum_compl / n,
        max_complexity: max_compl,
    })
}
