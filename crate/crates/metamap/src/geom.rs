//! Planar geometry primitives: points, vectors, polygons, convex hulls,
//! smallest enclosing circles and segment intersection tests.
//!
//! All polygon functions take vertices in cyclic order (the closing edge is
//! implicit). Orientation predicates use a fixed epsilon; callers are
//! expected to work on coordinates of roughly unit scale.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tolerance for orientation sign tests on unit-scale coordinates.
pub const ORIENT_EPS: f64 = 1e-12;

/// Tolerance below which two points are treated as coincident.
const COINCIDENT_EPS: f64 = 1e-9;

/// A point in the plane.
#[derive(Clone, Copy, PartialEq, Debug, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn dist_sq(self, other: Point2) -> f64 {
        (self - other).norm_sq()
    }

    pub fn midpoint(self, other: Point2) -> Point2 {
        Point2::new((self.x + other.x) / 2.0, (self.y + other.y) / 2.0)
    }
}

/// A displacement in the plane.
#[derive(Clone, Copy, PartialEq, Debug, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Unit vector, or `None` for a (near-)zero vector.
    pub fn normalized(self) -> Option<Vec2> {
        let n = self.norm();
        if n < 1e-15 {
            None
        } else {
            Some(Vec2::new(self.x / n, self.y / n))
        }
    }

    /// Counterclockwise perpendicular (rotates by +90 degrees).
    pub fn perp_ccw(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    /// Clockwise perpendicular (rotates by -90 degrees).
    pub fn perp_cw(self) -> Vec2 {
        Vec2::new(self.y, -self.x)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }
}

impl std::ops::Sub for Point2 {
    type Output = Vec2;
    fn sub(self, o: Point2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Add<Vec2> for Point2 {
    type Output = Point2;
    fn add(self, v: Vec2) -> Point2 {
        Point2::new(self.x + v.x, self.y + v.y)
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl std::ops::Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// A circle given by center and radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

impl Circle {
    pub fn contains(&self, p: Point2, slack: f64) -> bool {
        self.center.dist(p) <= self.radius + slack
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius
    }
}

/// Twice the signed area of triangle `(a, b, c)`; positive for a left turn.
#[inline]
pub fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

/// Orientation sign with tolerance: +1 left turn, -1 right turn, 0 collinear.
#[inline]
pub fn orient_sign(a: Point2, b: Point2, c: Point2) -> i8 {
    let v = orient(a, b, c);
    if v > ORIENT_EPS {
        1
    } else if v < -ORIENT_EPS {
        -1
    } else {
        0
    }
}

/// Signed polygon area via the shoelace formula; positive when the boundary
/// is counterclockwise.
pub fn polygon_signed_area(poly: &[Point2]) -> f64 {
    let n = poly.len();
    let mut sum = 0.0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        sum += a.x * b.y - b.x * a.y;
    }
    sum / 2.0
}

/// Absolute polygon area. Errors on fewer than three vertices.
pub fn polygon_area(poly: &[Point2]) -> Result<f64> {
    if poly.len() < 3 {
        return Err(Error::DegeneratePolygon { len: poly.len() });
    }
    Ok(polygon_signed_area(poly).abs())
}

/// Perimeter of the closed polygon (degenerate one/two point input allowed).
pub fn polygon_perimeter(poly: &[Point2]) -> f64 {
    let n = poly.len();
    if n < 2 {
        return 0.0;
    }
    (0..n).map(|i| poly[i].dist(poly[(i + 1) % n])).sum()
}

/// Convex hull in counterclockwise order with collinear points dropped
/// (monotone chain). Collinear input yields the two extreme points; a single
/// point yields itself.
pub fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| {
        a.x.partial_cmp(&b.x)
            .unwrap()
            .then(a.y.partial_cmp(&b.y).unwrap())
    });
    pts.dedup();
    let n = pts.len();
    if n <= 2 {
        return pts;
    }
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * n);
    // Lower hull, then upper hull; strict left turns only.
    for &p in pts.iter() {
        while hull.len() >= 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= ORIENT_EPS
        {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= ORIENT_EPS
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Smallest circle containing all the given points (Welzl's algorithm,
/// incremental form). Deterministic: the internal shuffle is fixed-seeded.
/// Panics on empty input.
pub fn min_enclosing_circle(points: &[Point2]) -> Circle {
    assert!(!points.is_empty(), "min_enclosing_circle of no points");
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut shuffled: Vec<Point2> = points.to_vec();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6d45_43_u64 ^ points.len() as u64);
    shuffled.shuffle(&mut rng);

    let mut c = Circle {
        center: shuffled[0],
        radius: 0.0,
    };
    for (i, &p) in shuffled.iter().enumerate().skip(1) {
        if !contains_mul(&c, p) {
            c = circle_one_point(&shuffled[..=i], p);
        }
    }
    c
}

/// Multiplicative-slack containment used while growing the circle.
fn contains_mul(c: &Circle, p: Point2) -> bool {
    c.center.dist(p) <= c.radius * (1.0 + 1e-14) + 1e-300
}

fn circle_one_point(pts: &[Point2], p: Point2) -> Circle {
    let mut c = Circle {
        center: p,
        radius: 0.0,
    };
    for (i, &q) in pts.iter().enumerate() {
        if !contains_mul(&c, q) {
            if c.radius == 0.0 {
                c = circle_diameter(p, q);
            } else {
                c = circle_two_points(&pts[..=i], p, q);
            }
        }
    }
    c
}

fn circle_two_points(pts: &[Point2], p: Point2, q: Point2) -> Circle {
    let circ = circle_diameter(p, q);
    let mut left: Option<Circle> = None;
    let mut right: Option<Circle> = None;
    let pq = q - p;
    for &r in pts {
        if contains_mul(&circ, r) {
            continue;
        }
        let cross = pq.cross(r - p);
        let c = match circumcircle(p, q, r) {
            Some(c) => c,
            None => continue,
        };
        let side = pq.cross(c.center - p);
        if cross > 0.0 && (left.is_none() || side > pq.cross(left.unwrap().center - p)) {
            left = Some(c);
        } else if cross < 0.0 && (right.is_none() || side < pq.cross(right.unwrap().center - p)) {
            right = Some(c);
        }
    }
    match (left, right) {
        (None, None) => circ,
        (Some(l), None) => l,
        (None, Some(r)) => r,
        (Some(l), Some(r)) => {
            if l.radius <= r.radius {
                l
            } else {
                r
            }
        }
    }
}

fn circle_diameter(a: Point2, b: Point2) -> Circle {
    let center = a.midpoint(b);
    let radius = center.dist(a).max(center.dist(b));
    Circle { center, radius }
}

/// Circumcircle of three points, `None` when (near-)collinear.
pub fn circumcircle(a: Point2, b: Point2, c: Point2) -> Option<Circle> {
    // Relative coordinates for numerical stability.
    let ox = (a.x.min(b.x).min(c.x) + a.x.max(b.x).max(c.x)) / 2.0;
    let oy = (a.y.min(b.y).min(c.y) + a.y.max(b.y).max(c.y)) / 2.0;
    let (ax, ay) = (a.x - ox, a.y - oy);
    let (bx, by) = (b.x - ox, b.y - oy);
    let (cx, cy) = (c.x - ox, c.y - oy);
    let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if d.abs() < 1e-30 {
        return None;
    }
    let x = ((ax * ax + ay * ay) * (by - cy)
        + (bx * bx + by * by) * (cy - ay)
        + (cx * cx + cy * cy) * (ay - by))
        / d;
    let y = ((ax * ax + ay * ay) * (cx - bx)
        + (bx * bx + by * by) * (ax - cx)
        + (cx * cx + cy * cy) * (bx - ax))
        / d;
    let center = Point2::new(ox + x, oy + y);
    let radius = center.dist(a).max(center.dist(b)).max(center.dist(c));
    Some(Circle { center, radius })
}

/// Whether point `p` lies on segment `(a, b)` strictly between its endpoints
/// (within tolerance of the segment, farther than tolerance from each end).
fn strictly_interior_to_segment(p: Point2, a: Point2, b: Point2) -> bool {
    let (q, d) = closest_point_on_segment(p, a, b);
    d <= COINCIDENT_EPS && q.dist(a) > COINCIDENT_EPS && q.dist(b) > COINCIDENT_EPS
}

/// Proper segment intersection: the segments cross in their interiors, or an
/// endpoint of one lies strictly inside the other's interior, or the segments
/// are collinear and overlap in more than a point. Segments that only share
/// endpoints do not properly intersect.
pub fn segments_properly_intersect(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool {
    let d1 = orient_sign(q1, q2, p1);
    let d2 = orient_sign(q1, q2, p2);
    let d3 = orient_sign(p1, p2, q1);
    let d4 = orient_sign(p1, p2, q2);

    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }

    if d1 == 0 && d2 == 0 && d3 == 0 && d4 == 0 {
        // Collinear: properly intersecting iff the overlap is longer than a point.
        let dir = p2 - p1;
        let axis = if dir.x.abs() >= dir.y.abs() {
            |p: Point2| p.x
        } else {
            |p: Point2| p.y
        };
        let (alo, ahi) = minmax(axis(p1), axis(p2));
        let (blo, bhi) = minmax(axis(q1), axis(q2));
        let lo = alo.max(blo);
        let hi = ahi.min(bhi);
        return hi - lo > COINCIDENT_EPS;
    }

    // T-shaped contact: an endpoint in the other segment's open interior.
    (d1 == 0 && strictly_interior_to_segment(p1, q1, q2))
        || (d2 == 0 && strictly_interior_to_segment(p2, q1, q2))
        || (d3 == 0 && strictly_interior_to_segment(q1, p1, p2))
        || (d4 == 0 && strictly_interior_to_segment(q2, p1, p2))
}

fn minmax(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Closest point of segment `(a, b)` to `p`, with the distance.
pub fn closest_point_on_segment(p: Point2, a: Point2, b: Point2) -> (Point2, f64) {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq < 1e-300 {
        return (a, p.dist(a));
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    let q = a + ab * t;
    (q, p.dist(q))
}

/// Whether `p` lies strictly inside the simple polygon (boundary excluded).
pub fn point_strictly_inside(p: Point2, poly: &[Point2]) -> bool {
    let n = poly.len();
    for i in 0..n {
        let (_, d) = closest_point_on_segment(p, poly[i], poly[(i + 1) % n]);
        if d <= COINCIDENT_EPS {
            return false;
        }
    }
    // Ray cast along +x.
    let mut inside = false;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if x > p.x {
                inside = !inside;
            }
        }
    }
    inside
}
