//! Shared integration-test helpers: seeded polygon builders.

pub mod oracle;

use metamap::geom::Point2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Star-shaped simple polygon: corners at sorted random angles around the
/// origin with radii in [0.5, 2]. Star-shapedness guarantees simplicity for
/// any angle/radius draw, so every seed yields a valid test subject.
pub fn random_star_polygon(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point2> {
    let mut angles: Vec<f64> = (0..n)
        .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
        .collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    while angles.len() < n {
        let a = rng.random_range(0.0..std::f64::consts::TAU);
        if angles.iter().all(|b| (a - b).abs() > 1e-9) {
            angles.push(a);
            angles.sort_by(f64::total_cmp);
        }
    }
    angles
        .iter()
        .map(|&a| {
            let r = rng.random_range(0.5..2.0);
            Point2::new(r * a.cos(), r * a.sin())
        })
        .collect()
}

/// Regular `n`-gon of radius `r` centered at the origin.
pub fn regular_ngon(n: usize, r: f64) -> Vec<Point2> {
    (0..n)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / n as f64;
            Point2::new(r * a.cos(), r * a.sin())
        })
        .collect()
}

/// Seeded RNG shared by all randomized integration tests.
pub fn test_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
