//! SVG rendering of metaphorical maps.
//!
//! Regions are filled on a diverging blue-white-red scale by signed
//! relative area error (blue undersized, white exact, red oversized),
//! holes are hatched, and a legend explains the scale. Output is plain
//! deterministic text: same map, same bytes.

use std::fmt::Write as _;

use crate::geom::Point2;
use crate::map::{MetaphoricalMap, RegionKind};
use crate::metrics::normalized_area;
use crate::Result;

const CANVAS: f64 = 720.0;
const MARGIN: f64 = 36.0;
const LEGEND_HEIGHT: f64 = 56.0;

/// Signed relative area error in [-1, 1]: negative when the region is
/// smaller than its weight demands, positive when larger.
fn signed_error(normalized: f64, weight: f64) -> f64 {
    ((normalized - weight) / normalized.max(weight)).clamp(-1.0, 1.0)
}

/// Diverging color: -1 saturated blue, 0 white, +1 saturated red.
fn diverging_color(e: f64) -> String {
    let t = e.clamp(-1.0, 1.0);
    let (r, g, b) = if t < 0.0 {
        let u = 1.0 + t; // 0 at -1, 1 at 0
        (
            (49.0 + (255.0 - 49.0) * u).round() as u8,
            (108.0 + (255.0 - 108.0) * u).round() as u8,
            (193.0 + (255.0 - 193.0) * u).round() as u8,
        )
    } else {
        let u = 1.0 - t; // 1 at 0, 0 at +1
        (
            (202.0 + (255.0 - 202.0) * u).round() as u8,
            (32.0 + (255.0 - 32.0) * u).round() as u8,
            (38.0 + (255.0 - 38.0) * u).round() as u8,
        )
    };
    format!("#{r:02x}{g:02x}{b:02x}")
}

/// Renders the map as a standalone SVG document.
pub fn render_svg(map: &MetaphoricalMap) -> Result<String> {
    let mut min = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut max = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in map.points().values() {
        min = Point2::new(min.x.min(p.x), min.y.min(p.y));
        max = Point2::new(max.x.max(p.x), max.y.max(p.y));
    }
    let span = (max.x - min.x).max(max.y - min.y).max(1e-12);
    let scale = (CANVAS - 2.0 * MARGIN) / span;
    let height = CANVAS + LEGEND_HEIGHT;
    // SVG y grows downward; map y grows upward.
    let tx = |p: Point2| -> (f64, f64) {
        (
            MARGIN + (p.x - min.x) * scale,
            MARGIN + (max.y - p.y) * scale,
        )
    };

    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{CANVAS}\" height=\"{height}\" \
         viewBox=\"0 0 {CANVAS} {height}\">"
    )
    .unwrap();
    writeln!(
        svg,
        "  <defs>\n    <pattern id=\"hatch\" width=\"6\" height=\"6\" \
         patternTransform=\"rotate(45)\" patternUnits=\"userSpaceOnUse\">\n      \
         <rect width=\"6\" height=\"6\" fill=\"#f2f2f2\"/>\n      \
         <line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#9a9a9a\" stroke-width=\"1.5\"/>\n    \
         </pattern>\n  </defs>"
    )
    .unwrap();
    writeln!(svg, "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>").unwrap();

    for r in map.regions() {
        let poly = map.region_polygon(r);
        let mut d = String::new();
        for (i, p) in poly.iter().enumerate() {
            let (x, y) = tx(*p);
            let cmd = if i == 0 { 'M' } else { 'L' };
            write!(d, "{cmd}{x:.3},{y:.3} ").unwrap();
        }
        d.push('Z');
        let fill = match r.kind {
            RegionKind::Hole => "url(#hatch)".to_string(),
            RegionKind::Internal => {
                let a_norm = normalized_area(r, map)?;
                diverging_color(signed_error(a_norm, r.target_weight))
            }
        };
        writeln!(
            svg,
            "  <path d=\"{d}\" fill=\"{fill}\" stroke=\"#1a1a1a\" stroke-width=\"1\" \
             stroke-linejoin=\"round\"><title>region {} (weight {})</title></path>",
            r.id, r.target_weight
        )
        .unwrap();
    }

    // Legend: discrete diverging ramp anchored at 0.
    let steps = 9;
    let bar_w = 28.0;
    let bar_y = CANVAS + 14.0;
    let bar_x0 = CANVAS / 2.0 - bar_w * steps as f64 / 2.0;
    for k in 0..steps {
        let e = -1.0 + 2.0 * k as f64 / (steps - 1) as f64;
        let x = bar_x0 + bar_w * k as f64;
        writeln!(
            svg,
            "  <rect x=\"{x:.3}\" y=\"{bar_y:.3}\" width=\"{bar_w}\" height=\"14\" \
             fill=\"{}\" stroke=\"#1a1a1a\" stroke-width=\"0.5\"/>",
            diverging_color(e)
        )
        .unwrap();
    }
    for (label, frac) in [("-100%", 0.0), ("0", 0.5), ("+100%", 1.0)] {
        let x = bar_x0 + bar_w * steps as f64 * frac;
        writeln!(
            svg,
            "  <text x=\"{x:.3}\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"12\" \
             text-anchor=\"middle\">{label}</text>",
            bar_y + 28.0
        )
        .unwrap();
    }
    writeln!(
        svg,
        "  <text x=\"{:.3}\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"middle\">area vs. weight (blue: too small, red: too large; \
         hatched: hole)</text>",
        CANVAS / 2.0,
        bar_y + 42.0
    )
    .unwrap();
    svg.push_str("</svg>\n");
    Ok(svg)
}
