//! Parallel facet pairs.
//!
//! With separation h and in-plane reach ρ = √(r² − h²), the pair contributes
//! −σh²/(4πr³V) ∫ Area(𝒯 ∩ (𝒯′ − ρ(cosφ, sinφ))) dφ. The analytic route
//! slices the overlap in y: between consecutive candidate ordinates (window
//! ends and side crossings, each of the form c + d sinφ + e cosφ) the
//! x-extent is linear in y, so every slice integrates to a trigonometric
//! polynomial in φ.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::pairframe::{PairGeometry, Point2, TrianglePair};
use crate::primitives::parallel::{composed_antiderivative, ParallelCoeffs, TrigPoly};
use crate::quadrature::{integrate_pieces, QuadResult, Tolerance};

use super::sinusoid_roots;

const PHI_LO: f64 = -FRAC_PI_2;
const PHI_HI: f64 = 3.0 * FRAC_PI_2;

fn separation(tp: &TrianglePair) -> Option<f64> {
    match tp.geometry {
        PairGeometry::Parallel { h } => Some(h),
        PairGeometry::NonParallel { .. } => None,
    }
}

fn prefactor(tp: &TrianglePair, h: f64, r: f64, volume: f64) -> f64 {
    -tp.sigma * h * h / (4.0 * PI * r * r * r * volume)
}

fn coeff_sub(a: ParallelCoeffs, b: ParallelCoeffs) -> ParallelCoeffs {
    ParallelCoeffs { a: a.a - b.a, b: a.b - b.b, c: a.c - b.c, d: a.d - b.d }
}

fn eval_side(k: &ParallelCoeffs, sp: f64, cp: f64, y: f64) -> f64 {
    k.a + k.b * cp + k.c * sp + k.d * y
}

/// Pair contribution, evaluated in closed form.
pub fn g_parallel(r: f64, tp: &TrianglePair, volume: f64) -> f64 {
    let Some(h) = separation(tp) else {
        return 0.0;
    };
    if r <= h {
        return 0.0;
    }
    let rho = (r * r - h * h).sqrt();
    let (f, g) = (&tp.first, &tp.second);
    // x-sides as functions of (φ, y): a + b cosφ + c sinφ + d y
    let sides = [
        ParallelCoeffs { a: f.left.intercept, b: 0.0, c: 0.0, d: f.left.slope },
        ParallelCoeffs { a: f.right.intercept, b: 0.0, c: 0.0, d: f.right.slope },
        ParallelCoeffs { a: g.left.intercept, b: -rho, c: g.left.slope * rho, d: g.left.slope },
        ParallelCoeffs { a: g.right.intercept, b: -rho, c: g.right.slope * rho, d: g.right.slope },
    ];
    let mut cands = vec![
        TrigPoly::linear(f.y_min, 0.0, 0.0),
        TrigPoly::linear(f.y_max, 0.0, 0.0),
        TrigPoly::linear(g.y_min, 0.0, -rho),
        TrigPoly::linear(g.y_max, 0.0, -rho),
    ];
    let mut events = vec![PHI_LO, PHI_HI];
    for i in 0..4 {
        for j in i + 1..4 {
            let d = coeff_sub(sides[i], sides[j]);
            if d.d.abs() > 1e-14 * (sides[i].d.abs() + sides[j].d.abs() + 1.0) {
                cands.push(TrigPoly::linear(-d.a / d.d, -d.b / d.d, -d.c / d.d));
            } else {
                sinusoid_roots(d.c, d.b, -d.a, &mut events);
            }
        }
    }
    for i in 0..cands.len() {
        for j in i + 1..cands.len() {
            let (a, b) = (cands[i], cands[j]);
            sinusoid_roots(a.k1s - b.k1s, a.k1c - b.k1c, b.k0 - a.k0, &mut events);
        }
    }
    events.retain(|p| (PHI_LO..=PHI_HI).contains(p));
    events.sort_by(f64::total_cmp);
    events.dedup();

    let scale = tp.max_distance().max(1e-300);
    let mut acc = 0.0;
    let mut order: Vec<usize> = (0..cands.len()).collect();
    for w in events.windows(2) {
        let (p0, p1) = (w[0], w[1]);
        if p1 - p0 <= 1e-15 {
            continue;
        }
        let pm = 0.5 * (p0 + p1);
        let (sp, cp) = pm.sin_cos();
        let vals: Vec<f64> = cands.iter().map(|c| c.eval(pm)).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        for k in order.windows(2) {
            let (lo, hi) = (k[0], k[1]);
            if vals[hi] - vals[lo] <= 1e-13 * scale {
                continue;
            }
            let y = 0.5 * (vals[lo] + vals[hi]);
            if y < f.y_min || y > f.y_max {
                continue;
            }
            let yy = y + rho * sp;
            if yy < g.y_min || yy > g.y_max {
                continue;
            }
            let x: Vec<f64> = sides.iter().map(|s| eval_side(s, sp, cp, y)).collect();
            let left = if x[0] >= x[2] { 0 } else { 2 };
            let right = if x[1] <= x[3] { 1 } else { 3 };
            if x[right] <= x[left] {
                continue;
            }
            let diff = coeff_sub(sides[right], sides[left]);
            let upper = composed_antiderivative(diff, cands[hi]);
            let lower = composed_antiderivative(diff, cands[lo]);
            acc += upper.integral(p1) - upper.integral(p0) - lower.integral(p1) + lower.integral(p0);
        }
    }
    prefactor(tp, h, r, volume) * acc
}

fn signed_area(poly: &[Point2]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a.0 * b.1 - a.1 * b.0
        })
        .sum::<f64>()
        * 0.5
}

fn ccw(mut poly: Vec<Point2>) -> Vec<Point2> {
    if signed_area(&poly) < 0.0 {
        poly.reverse();
    }
    poly
}

/// Area of 𝒯 ∩ (𝒯′ − (dx, dy)) by convex polygon clipping.
pub fn overlap_area(tp: &TrianglePair, dx: f64, dy: f64) -> f64 {
    let clip = ccw(tp.first.corners().to_vec());
    let mut subject = ccw(tp.second.corners().iter().map(|p| (p.0 - dx, p.1 - dy)).collect());
    for i in 0..clip.len() {
        if subject.is_empty() {
            return 0.0;
        }
        let (a, b) = (clip[i], clip[(i + 1) % clip.len()]);
        let side = |p: Point2| (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
        let input = std::mem::take(&mut subject);
        for j in 0..input.len() {
            let (p, q) = (input[j], input[(j + 1) % input.len()]);
            let (sp, sq) = (side(p), side(q));
            if sp >= 0.0 {
                subject.push(p);
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                let u = sp / (sp - sq);
                subject.push((p.0 + u * (q.0 - p.0), p.1 + u * (q.1 - p.1)));
            }
        }
    }
    if subject.len() < 3 {
        0.0
    } else {
        signed_area(&subject).max(0.0)
    }
}

/// Angles at which a vertex of 𝒯 lies on an edge line of 𝒯′ − ρ(cosφ, sinφ)
/// or vice versa; the overlap area has kinks only there.
fn incidence_angles(tp: &TrianglePair, rho: f64, out: &mut Vec<f64>) {
    let (p, q) = (tp.first.corners(), tp.second.corners());
    let cross = |a: Point2, b: Point2| a.0 * b.1 - a.1 * b.0;
    for i in 0..3 {
        let e = (q[(i + 1) % 3].0 - q[i].0, q[(i + 1) % 3].1 - q[i].1);
        for v in &p {
            // cross(e, v − q + ρ(cosφ, sinφ)) = 0
            let c0 = cross(e, (v.0 - q[i].0, v.1 - q[i].1));
            sinusoid_roots(-rho * e.0, rho * e.1, c0, out);
        }
        let e = (p[(i + 1) % 3].0 - p[i].0, p[(i + 1) % 3].1 - p[i].1);
        for v in &q {
            // cross(e, v − ρ(cosφ, sinφ) − p) = 0
            let c0 = cross(e, (v.0 - p[i].0, v.1 - p[i].1));
            sinusoid_roots(-rho * e.0, rho * e.1, -c0, out);
        }
    }
}

/// Pair contribution by adaptive φ-quadrature of the clipped overlap area.
pub fn g_parallel_direct(r: f64, tp: &TrianglePair, volume: f64, tol: Tolerance) -> QuadResult {
    let Some(h) = separation(tp) else {
        return QuadResult::ZERO;
    };
    if r <= h {
        return QuadResult::ZERO;
    }
    let rho = (r * r - h * h).sqrt();
    let pre = prefactor(tp, h, r, volume);
    let n = 16;
    let mut pts: Vec<f64> = (0..=n).map(|k| PHI_LO + (PHI_HI - PHI_LO) * k as f64 / n as f64).collect();
    incidence_angles(tp, rho, &mut pts);
    pts.retain(|p| (PHI_LO..=PHI_HI).contains(p));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let scaled = Tolerance { abs: tol.abs / pre.abs(), ..tol };
    let mut res = integrate_pieces(|phi| overlap_area(tp, rho * phi.cos(), rho * phi.sin()), &pts, scaled);
    res.value *= pre;
    res.error *= pre.abs();
    res
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairframe::TriangleSides;

    fn unit_pair(h: f64) -> TrianglePair {
        let tri = TriangleSides::from_points([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]).unwrap();
        TrianglePair { geometry: PairGeometry::Parallel { h }, sigma: -1.0, first: tri, second: tri, near_parallel: false }
    }

    #[test]
    fn overlap_area_cases() {
        let tp = unit_pair(1.0);
        assert!((overlap_area(&tp, 0.0, 0.0) - 0.5).abs() < 1e-15);
        assert!((overlap_area(&tp, 0.5, 0.0) - 0.125).abs() < 1e-15);
        assert_eq!(overlap_area(&tp, 3.0, 0.0), 0.0);
    }

    #[test]
    fn analytic_matches_area_quadrature() {
        let tp = unit_pair(1.0);
        for r in [1.05, 1.2, 1.4] {
            let a = g_parallel(r, &tp, 1.0);
            let d = g_parallel_direct(r, &tp, 1.0, Tolerance::default()).value;
            assert!((a - d).abs() <= 1e-9 * d.abs(), "r={r}: {a} vs {d}");
            assert!(a > 0.0);
        }
        assert_eq!(g_parallel(0.9, &tp, 1.0), 0.0);
    }
}
