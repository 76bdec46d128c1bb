#![allow(dead_code)]

use polycld::pairframe::{PairGeometry, TrianglePair, TriangleSides};
use rand::Rng;

/// Triangle with a base parallel to the x-axis, lying in y ≥ 0.
pub fn random_triangle<R: Rng>(rng: &mut R) -> TriangleSides {
    loop {
        let y0: f64 = rng.random_range(0.0..1.0);
        let y1: f64 = rng.random_range(0.0..1.5);
        let x0: f64 = rng.random_range(-1.0..1.0);
        let x1: f64 = rng.random_range(-1.0..1.0);
        let xa = rng.random_range(-1.5..1.5);
        if (y1 - y0).abs() < 0.05 || (x1 - x0).abs() < 0.05 {
            continue;
        }
        if let Ok(t) = TriangleSides::from_points([(x0, y0), (x1, y0), (xa, y1)]) {
            return t;
        }
    }
}

pub fn random_nonparallel_pair<R: Rng>(rng: &mut R) -> TrianglePair {
    let beta = rng.random_range(0.15..std::f64::consts::PI - 0.15);
    TrianglePair {
        geometry: PairGeometry::NonParallel { beta },
        sigma: if rng.random_bool(0.5) { 1.0 } else { -1.0 },
        first: random_triangle(rng),
        second: random_triangle(rng),
        near_parallel: false,
    }
}

pub fn random_parallel_pair<R: Rng>(rng: &mut R) -> TrianglePair {
    TrianglePair {
        geometry: PairGeometry::Parallel { h: rng.random_range(0.2..1.5) },
        sigma: -1.0,
        first: random_triangle(rng),
        second: random_triangle(rng),
        near_parallel: false,
    }
}

/// r-values spread over the range where the pair can contribute.
pub fn r_values<R: Rng>(rng: &mut R, tp: &TrianglePair, n: usize) -> Vec<f64> {
    let hi = tp.max_distance();
    (0..n).map(|_| rng.random_range(0.02 * hi..hi)).collect()
}
