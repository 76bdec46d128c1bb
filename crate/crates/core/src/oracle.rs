//! Monte Carlo ground truth: covariogram sampling, chord tossing, and
//! smoothed finite differences.
//!
//! Sampling is split into fixed-size chunks; chunk k draws from a ChaCha
//! stream keyed by (seed, k), so results do not depend on thread scheduling.

use std::f64::consts::TAU;

use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::mesh::{Polyhedron, Vec3};

const CHUNK: u64 = 1 << 16;

/// Sampled estimate on an r-grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub r: Vec<f64>,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub samples: u64,
    /// Histogram bin edges (len = r.len() + 1) for chord estimates; empty otherwise.
    pub edges: Vec<f64>,
    /// Fraction of seeded lines that hit the body (chord estimates only).
    pub hit_rate: Option<f64>,
    pub warnings: Vec<String>,
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn chunks(n: u64) -> Vec<(u64, u64)> {
    (0..n.div_ceil(CHUNK)).map(|k| (k, CHUNK.min(n - k * CHUNK))).collect()
}

fn random_direction<R: Rng>(rng: &mut R) -> Vec3 {
    let z: f64 = rng.random_range(-1.0..1.0);
    let a: f64 = rng.random_range(0.0..TAU);
    let s = (1.0 - z * z).max(0.0).sqrt();
    Vec3::new(s * a.cos(), s * a.sin(), z)
}

/// Ray direction for parity tests, chosen to avoid axis-aligned degeneracies.
fn ray_direction() -> Vec3 {
    Vec3::new(0.3141592653589793, 0.5772156649015329, 0.7536385528273726).normalize()
}

fn point_in_polygon_2d(poly: &[(f64, f64)], p: (f64, f64)) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + n - 1) % n]);
        if (a.1 > p.1) != (b.1 > p.1) {
            let x = a.0 + (p.1 - a.1) * (b.0 - a.0) / (b.1 - a.1);
            if p.0 < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Ray-parity membership test, valid for any watertight polyhedron.
pub fn point_in_polyhedron_parity(p: &Polyhedron, x: &Vec3) -> bool {
    let d = ray_direction();
    let mut inside = false;
    for (f, pl) in p.facet_planes().iter().enumerate() {
        let den = pl.normal.dot(&d);
        if den.abs() < 1e-15 {
            continue;
        }
        let s = (pl.offset - pl.normal.dot(x)) / den;
        if s <= 0.0 {
            continue;
        }
        let q = x + d * s;
        // drop the dominant normal component
        let n = pl.normal.abs();
        let (i, j) = if n.x >= n.y && n.x >= n.z {
            (1, 2)
        } else if n.y >= n.z {
            (0, 2)
        } else {
            (0, 1)
        };
        let poly: Vec<(f64, f64)> = p.facet_points(f).iter().map(|v| (v[i], v[j])).collect();
        if point_in_polygon_2d(&poly, (q[i], q[j])) {
            inside = !inside;
        }
    }
    inside
}

/// Membership test: half-space intersection for convex bodies, ray parity otherwise.
pub fn point_in_polyhedron(p: &Polyhedron, x: &Vec3) -> bool {
    if p.is_convex() {
        return p.facet_planes().iter().all(|pl| pl.normal.dot(x) <= pl.offset);
    }
    point_in_polyhedron_parity(p, x)
}

fn random_interior_point<R: Rng>(p: &Polyhedron, lo: &Vec3, hi: &Vec3, rng: &mut R) -> Vec3 {
    loop {
        let x = Vec3::new(rng.random_range(lo.x..hi.x), rng.random_range(lo.y..hi.y), rng.random_range(lo.z..hi.z));
        if point_in_polyhedron(p, &x) {
            return x;
        }
    }
}

/// γ(r) as the fraction of (uniform interior point, uniform direction) draws
/// whose translate by r stays inside. The same draws serve every r.
pub fn mc_covariogram(p: &Polyhedron, r_grid: &[f64], n: u64, seed: u64) -> McEstimate {
    let (lo, hi) = p.bounding_box();
    let d = p.stats().diameter;
    let counts: Vec<Vec<u64>> = chunks(n)
        .into_par_iter()
        .map(|(k, m)| {
            let mut rng = chunk_rng(seed, k);
            let mut c = vec![0u64; r_grid.len()];
            for _ in 0..m {
                let x = random_interior_point(p, &lo, &hi, &mut rng);
                let w = random_direction(&mut rng);
                for (ci, &r) in c.iter_mut().zip(r_grid) {
                    if r <= 0.0 || (r < d && point_in_polyhedron(p, &(x + w * r))) {
                        *ci += 1;
                    }
                }
            }
            c
        })
        .collect();
    let mut total = vec![0u64; r_grid.len()];
    for c in &counts {
        for (t, v) in total.iter_mut().zip(c) {
            *t += v;
        }
    }
    let nf = n as f64;
    let mean: Vec<f64> = total.iter().map(|&c| c as f64 / nf).collect();
    let stderr = mean.iter().map(|m| (m * (1.0 - m) / nf).sqrt()).collect();
    McEstimate { r: r_grid.to_vec(), mean, stderr, samples: n, edges: Vec::new(), hit_rate: None, warnings: Vec::new() }
}

/// Equal-width bin edges on [0, d].
pub fn uniform_edges(d: f64, bins: usize) -> Vec<f64> {
    (0..=bins).map(|k| d * k as f64 / bins as f64).collect()
}

fn orthonormal_basis(w: &Vec3) -> (Vec3, Vec3) {
    let a = if w.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let u = w.cross(&a).normalize();
    (u, w.cross(&u))
}

/// Length of the chord cut by the line x0 + s·w from a convex body, if any.
pub fn convex_chord(p: &Polyhedron, x0: &Vec3, w: &Vec3) -> Option<f64> {
    let (mut s_lo, mut s_hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for pl in p.facet_planes() {
        let den = pl.normal.dot(w);
        let num = pl.offset - pl.normal.dot(x0);
        if den.abs() < 1e-300 {
            if num < 0.0 {
                return None;
            }
        } else if den > 0.0 {
            s_hi = s_hi.min(num / den);
        } else {
            s_lo = s_lo.max(num / den);
        }
    }
    (s_hi > s_lo).then_some(s_hi - s_lo)
}

/// Chord-length histogram of μ-random lines, scaled by S/4V to estimate γ″.
/// `edges` are ascending bin edges; `n` is the number of chords (hits).
pub fn mc_chords(p: &Polyhedron, n: u64, edges: &[f64], seed: u64) -> Result<McEstimate, Error> {
    if !p.is_convex() {
        return Err(Error::ConvexityRequired);
    }
    if edges.len() < 2 || edges.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("bin edges must be strictly ascending".into()));
    }
    let (center, radius) = p.bounding_sphere();
    let bins = edges.len() - 1;
    let parts: Vec<(Vec<u64>, u64, f64)> = chunks(n)
        .into_par_iter()
        .map(|(k, m)| {
            let mut rng = chunk_rng(seed, k);
            let mut c = vec![0u64; bins];
            let mut tries = 0u64;
            let mut longest: f64 = 0.0;
            let mut hits = 0u64;
            while hits < m {
                tries += 1;
                let w = random_direction(&mut rng);
                let (u, v) = orthonormal_basis(&w);
                let rho = radius * rng.random::<f64>().sqrt();
                let a: f64 = rng.random_range(0.0..TAU);
                let x0 = center + u * (rho * a.cos()) + v * (rho * a.sin());
                let Some(len) = convex_chord(p, &x0, &w) else { continue };
                hits += 1;
                longest = longest.max(len);
                let idx = edges.partition_point(|&e| e <= len);
                if idx >= 1 && idx <= bins {
                    c[idx - 1] += 1;
                }
            }
            (c, tries, longest)
        })
        .collect();
    let mut counts = vec![0u64; bins];
    let mut tries = 0u64;
    let mut longest: f64 = 0.0;
    for (c, t, l) in &parts {
        for (a, b) in counts.iter_mut().zip(c) {
            *a += b;
        }
        tries += t;
        longest = longest.max(*l);
    }
    let stats = p.stats();
    let scale = stats.surface / (4.0 * stats.volume);
    let nf = n as f64;
    let mut mean = Vec::with_capacity(bins);
    let mut stderr = Vec::with_capacity(bins);
    let mut r = Vec::with_capacity(bins);
    for (i, &c) in counts.iter().enumerate() {
        let width = edges[i + 1] - edges[i];
        let frac = c as f64 / nf;
        r.push(0.5 * (edges[i] + edges[i + 1]));
        mean.push(scale * frac / width);
        stderr.push(scale * (frac * (1.0 - frac) / nf).sqrt() / width);
    }
    let mut warnings = Vec::new();
    if longest > stats.diameter * (1.0 + 1e-9) {
        warnings.push(format!("chord of length {longest} exceeds the diameter {}", stats.diameter));
    }
    Ok(McEstimate {
        r,
        mean,
        stderr,
        samples: n,
        edges: edges.to_vec(),
        hit_rate: Some(nf / tries.max(1) as f64),
        warnings,
    })
}

/// Outcome of a per-bin comparison between a chord histogram and reference
/// bin means.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramCheck {
    pub bins: usize,
    /// Bins skipped because they contain a breakpoint.
    pub excluded: usize,
    pub within: usize,
    pub max_z: f64,
}

impl HistogramCheck {
    pub fn fraction(&self) -> f64 {
        let n = self.bins - self.excluded;
        if n == 0 { 1.0 } else { self.within as f64 / n as f64 }
    }
}

/// Count bins whose estimate lies within `k` standard errors of `reference`.
/// The error is the larger of the sample one and the binomial error implied
/// by the reference itself, so empty tail bins are judged against the count
/// the reference predicts rather than against zero spread.
pub fn check_histogram(est: &McEstimate, reference: &[f64], scale: f64, breakpoints: &[f64], k: f64) -> HistogramCheck {
    let bins = est.mean.len();
    let nf = est.samples as f64;
    let mut out = HistogramCheck { bins, excluded: 0, within: 0, max_z: 0.0 };
    for i in 0..bins {
        let (lo, hi) = (est.edges[i], est.edges[i + 1]);
        if breakpoints.iter().any(|b| (lo..=hi).contains(b)) {
            out.excluded += 1;
            continue;
        }
        let width = hi - lo;
        let q = (reference[i] * width / scale).clamp(0.0, 1.0);
        let model_se = scale * (q * (1.0 - q) / nf).sqrt() / width;
        let se = est.stderr[i].max(model_se);
        let diff = (est.mean[i] - reference[i]).abs();
        let z = if se > 0.0 { diff / se } else if diff == 0.0 { 0.0 } else { f64::INFINITY };
        out.max_z = out.max_z.max(z);
        if z <= k {
            out.within += 1;
        }
    }
    out
}

/// Local quadratic least-squares fit over `half_window` neighbours on each
/// side (shifted inward at the ends); returns twice the quadratic
/// coefficient with propagated standard errors.
pub fn fd_second_derivative(est: &McEstimate, half_window: usize) -> McEstimate {
    let n = est.r.len();
    let width = (2 * half_window + 1).min(n);
    let mut mean = vec![0.0; n];
    let mut stderr = vec![0.0; n];
    let mut warnings = est.warnings.clone();
    if width < 3 {
        warnings.push("grid too short for a second difference".into());
        return McEstimate { mean, stderr, warnings, ..est.clone() };
    }
    for i in 0..n {
        let start = i.saturating_sub(half_window).min(n - width);
        let idx = start..start + width;
        let x0 = est.r[i];
        let mut m = Matrix3::zeros();
        for k in idx.clone() {
            let d = est.r[k] - x0;
            let row = Vector3::new(1.0, d, d * d);
            m += row * row.transpose();
        }
        let Some(inv) = m.try_inverse() else {
            warnings.push(format!("singular fit at r = {x0}"));
            continue;
        };
        let (mut v, mut var) = (0.0, 0.0);
        for k in idx {
            let d = est.r[k] - x0;
            let w = 2.0 * (inv.row(2) * Vector3::new(1.0, d, d * d))[0];
            v += w * est.mean[k];
            var += w * w * est.stderr[k] * est.stderr[k];
        }
        mean[i] = v;
        stderr[i] = var.sqrt();
    }
    let mut ratios: Vec<f64> = mean.iter().zip(&stderr).filter(|(m, _)| **m != 0.0).map(|(m, s)| s / m.abs()).collect();
    ratios.sort_by(f64::total_cmp);
    if let Some(med) = ratios.get(ratios.len() / 2) {
        if *med > 1.0 {
            warnings.push(format!("noise amplification exceeds signal (median SE/|value| = {med:.2})"));
        }
    }
    McEstimate { r: est.r.clone(), mean, stderr, samples: est.samples, edges: Vec::new(), hit_rate: None, warnings }
}
