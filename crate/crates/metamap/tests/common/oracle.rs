//! Independent brute-force re-implementations of the polygon metrics,
//! written against the definitions rather than the production code: hulls
//! by gift wrapping, enclosing circles by exhaustive candidate search, and
//! reflex corners by interior-angle accumulation. Deliberately slow and
//! deliberately sharing no geometry helpers with the crate under test.

use metamap::geom::Point2;

fn cross(o: Point2, a: Point2, b: Point2) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn dist(a: Point2, b: Point2) -> f64 {
    ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt()
}

pub fn shoelace(poly: &[Point2]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        s += a.x * b.y - b.x * a.y;
    }
    s / 2.0
}

pub fn perimeter(poly: &[Point2]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| dist(poly[i], poly[(i + 1) % n])).sum()
}

/// Convex hull by gift wrapping, O(n * h).
pub fn hull_gift_wrap(points: &[Point2]) -> Vec<Point2> {
    let start = points
        .iter()
        .copied()
        .min_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap())
        .unwrap();
    let mut hull = vec![start];
    loop {
        let cur = *hull.last().unwrap();
        let mut next = points[0];
        for &p in points.iter() {
            if p.x == cur.x && p.y == cur.y {
                continue;
            }
            if next.x == cur.x && next.y == cur.y {
                next = p;
                continue;
            }
            let c = cross(cur, next, p);
            // Keep the most counterclockwise candidate; on ties take the
            // farther point so collinear interior points are skipped.
            if c < 0.0 || (c == 0.0 && dist(cur, p) > dist(cur, next)) {
                next = p;
            }
        }
        if next.x == start.x && next.y == start.y {
            return hull;
        }
        hull.push(next);
        if hull.len() > points.len() {
            panic!("gift wrapping failed to close");
        }
    }
}

/// Smallest enclosing circle by exhaustive candidate search over all pairs
/// (diametral circles) and triples (circumcircles), O(n^4).
pub fn enclosing_circle_brute(points: &[Point2]) -> (Point2, f64) {
    let n = points.len();
    let slack = 1e-12;
    let mut best: Option<(Point2, f64)> = None;
    let mut consider = |c: Point2, r: f64| {
        if points.iter().all(|&p| dist(c, p) <= r + slack * (1.0 + r)) {
            match best {
                Some((_, br)) if br <= r => {}
                _ => best = Some((c, r)),
            }
        }
    };
    for i in 0..n {
        for j in i + 1..n {
            let c = Point2::new(
                (points[i].x + points[j].x) / 2.0,
                (points[i].y + points[j].y) / 2.0,
            );
            consider(c, dist(points[i], points[j]) / 2.0);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (points[i], points[j], points[k]);
                let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
                if d.abs() < 1e-12 {
                    continue;
                }
                let (na, nb, nc) = (
                    a.x * a.x + a.y * a.y,
                    b.x * b.x + b.y * b.y,
                    c.x * c.x + c.y * c.y,
                );
                let ux = (na * (b.y - c.y) + nb * (c.y - a.y) + nc * (a.y - b.y)) / d;
                let uy = (na * (c.x - b.x) + nb * (a.x - c.x) + nc * (b.x - a.x)) / d;
                let center = Point2::new(ux, uy);
                consider(center, dist(center, a));
            }
        }
    }
    best.expect("no enclosing circle found")
}

/// Reflex-corner count: corners whose interior turn bends away from the
/// polygon's orientation by more than the collinearity tolerance.
pub fn concave_count_oracle(poly: &[Point2]) -> usize {
    let n = poly.len();
    let ccw = shoelace(poly) >= 0.0;
    let mut count = 0;
    for i in 0..n {
        let a = poly[(i + n - 1) % n];
        let b = poly[i];
        let c = poly[(i + 1) % n];
        // Signed turn angle at b in (-pi, pi]; reflex when it turns against
        // the orientation by more than asin(1e-9).
        let ang_in = (b.y - a.y).atan2(b.x - a.x);
        let ang_out = (c.y - b.y).atan2(c.x - b.x);
        let mut turn = ang_out - ang_in;
        while turn > std::f64::consts::PI {
            turn -= std::f64::consts::TAU;
        }
        while turn <= -std::f64::consts::PI {
            turn += std::f64::consts::TAU;
        }
        let against = if ccw { -turn } else { turn };
        if against.sin() > 1e-9 {
            count += 1;
        }
    }
    count
}

pub fn freq_oracle(poly: &[Point2]) -> f64 {
    let n = poly.len();
    if n <= 3 {
        return 0.0;
    }
    let share = concave_count_oracle(poly) as f64 / (n - 3) as f64;
    let t = share - 0.5;
    (1.0 + 16.0 * t * t * t * t - 8.0 * t * t).clamp(0.0, 1.0)
}

pub fn ampl_oracle(poly: &[Point2]) -> f64 {
    let circ = perimeter(poly);
    if circ <= 0.0 {
        return 0.0;
    }
    let hull = hull_gift_wrap(poly);
    ((circ - perimeter(&hull)) / circ).max(0.0)
}

pub fn conv_oracle(poly: &[Point2]) -> f64 {
    let n = poly.len() as f64;
    let (_, r) = enclosing_circle_brute(poly);
    let tau = std::f64::consts::TAU;
    let reference = std::f64::consts::PI * r * r * (tau / n).sin() * n / tau;
    if !(reference > 0.0) {
        return 0.0;
    }
    (1.0 - shoelace(poly).abs() / reference).clamp(0.0, 1.0)
}

pub fn compl_oracle(poly: &[Point2]) -> f64 {
    0.8 * ampl_oracle(poly) * freq_oracle(poly) + 0.2 * conv_oracle(poly)
}
