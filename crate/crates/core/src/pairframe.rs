//! Facet-pair frames and the x-parallel triangle decomposition.
//!
//! Non-parallel pairs use a frame whose x-axis is the planes' intersection
//! line, with triangle 𝒯 in the half-plane y ≥ 0 of z = 0 and 𝒯′ on the
//! half-plane reached by rotating it through the dihedral angle β ∈ (0, π).
//! Parallel pairs use x along the first edge of facet i and z pointing from
//! plane i to plane j.

use serde::Serialize;

use crate::error::PairError;
use crate::mesh::{Polyhedron, Vec3};

/// |n̂_i × n̂_j| at or below which two facets are treated as parallel.
pub const PARALLEL_TOLERANCE: f64 = 1e-12;
/// sin β below which a non-parallel pair is flagged as near-parallel.
pub const BETA_TOLERANCE: f64 = 1e-8;

pub type Point2 = (f64, f64);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PairKind {
    NonParallel { beta: f64 },
    Parallel { h: f64 },
    /// Coplanar facets: the pair contributes nothing.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairFrame {
    pub facets: (usize, usize),
    pub kind: PairKind,
    pub origin: Vec3,
    pub x: Vec3,
    /// In-plane direction of facet i, perpendicular to x.
    pub y: Vec3,
    pub z: Vec3,
    /// In-plane direction of facet j, perpendicular to x (equals y when parallel).
    pub y_second: Vec3,
    pub sigma: f64,
    pub near_parallel: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SideLine {
    pub intercept: f64,
    pub slope: f64,
}

impl SideLine {
    pub fn at(&self, y: f64) -> f64 {
        self.intercept + self.slope * y
    }
}

/// A triangle with one side parallel to x, as the band y_min ≤ y ≤ y_max
/// between its left side x = left(y) and right side x = right(y).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangleSides {
    pub left: SideLine,
    pub right: SideLine,
    pub y_min: f64,
    pub y_max: f64,
}

impl TriangleSides {
    pub fn from_points(pts: [Point2; 3]) -> Result<TriangleSides, PairError> {
        let scale = pts
            .iter()
            .map(|p| p.0.abs().max(p.1.abs()))
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let pairs = [(0, 1, 2), (1, 2, 0), (0, 2, 1)];
        let &(i, j, k) = pairs
            .iter()
            .min_by(|a, b| (pts[a.0].1 - pts[a.1].1).abs().total_cmp(&(pts[b.0].1 - pts[b.1].1).abs()))
            .expect("three pairs");
        let base_y = 0.5 * (pts[i].1 + pts[j].1);
        let apex = pts[k];
        let height = apex.1 - base_y;
        if height.abs() <= 1e-12 * scale {
            return Err(PairError::DegenerateTriangle);
        }
        if (pts[i].1 - pts[j].1).abs() > 1e-9 * height.abs().max(1e-3 * scale) {
            return Err(PairError::NoParallelSide);
        }
        let (a, b) = if pts[i].0 <= pts[j].0 { (pts[i], pts[j]) } else { (pts[j], pts[i]) };
        if b.0 - a.0 <= 1e-12 * scale {
            return Err(PairError::DegenerateTriangle);
        }
        let left_slope = (apex.0 - a.0) / height;
        let right_slope = (apex.0 - b.0) / height;
        Ok(TriangleSides {
            left: SideLine { intercept: a.0 - left_slope * base_y, slope: left_slope },
            right: SideLine { intercept: b.0 - right_slope * base_y, slope: right_slope },
            y_min: base_y.min(apex.1),
            y_max: base_y.max(apex.1),
        })
    }

    /// Vertices recovered from the coefficients: base corners then apex.
    pub fn corners(&self) -> [Point2; 3] {
        // the apex is where the two sides meet
        let ya = (self.left.intercept - self.right.intercept) / (self.right.slope - self.left.slope);
        let yb = if (ya - self.y_min).abs() < (ya - self.y_max).abs() { self.y_max } else { self.y_min };
        [(self.left.at(yb), yb), (self.right.at(yb), yb), (self.left.at(ya), ya)]
    }

    pub fn area(&self) -> f64 {
        let h = self.y_max - self.y_min;
        let w_lo = self.right.at(self.y_min) - self.left.at(self.y_min);
        let w_hi = self.right.at(self.y_max) - self.left.at(self.y_max);
        0.5 * h * (w_lo + w_hi)
    }

    pub fn translated_x(&self, c: f64) -> TriangleSides {
        let mut t = *self;
        t.left.intercept += c;
        t.right.intercept += c;
        t
    }
}

/// Side coefficients of a triangle given in frame coordinates.
pub fn side_coefficients(tri: [Point2; 3]) -> Result<TriangleSides, PairError> {
    TriangleSides::from_points(tri)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PairGeometry {
    NonParallel { beta: f64 },
    Parallel { h: f64 },
}

/// One triangle from each facet, in the pair's canonical frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrianglePair {
    pub geometry: PairGeometry,
    pub sigma: f64,
    /// 𝒯, on facet i (z = 0, y ≥ 0).
    pub first: TriangleSides,
    /// 𝒯′, on facet j, in its own (X, Y) coordinates.
    pub second: TriangleSides,
    pub near_parallel: bool,
}

impl TrianglePair {
    pub fn beta(&self) -> Option<f64> {
        match self.geometry {
            PairGeometry::NonParallel { beta } => Some(beta),
            PairGeometry::Parallel { .. } => None,
        }
    }

    pub fn sin_cos_beta(&self) -> (f64, f64) {
        let b = self.beta().expect("non-parallel pair");
        b.sin_cos()
    }

    fn embed_first(&self, p: Point2) -> Vec3 {
        Vec3::new(p.0, p.1, 0.0)
    }

    fn embed_second(&self, p: Point2) -> Vec3 {
        match self.geometry {
            PairGeometry::NonParallel { beta } => Vec3::new(p.0, p.1 * beta.cos(), p.1 * beta.sin()),
            PairGeometry::Parallel { h } => Vec3::new(p.0, p.1, h),
        }
    }

    /// Vertices of 𝒯 and 𝒯′ in the 3D pair frame.
    pub fn vertices(&self) -> ([Vec3; 3], [Vec3; 3]) {
        let a = self.first.corners().map(|p| self.embed_first(p));
        let b = self.second.corners().map(|p| self.embed_second(p));
        (a, b)
    }

    /// Largest distance between a point of 𝒯 and a point of 𝒯′.
    pub fn max_distance(&self) -> f64 {
        let (a, b) = self.vertices();
        let mut d: f64 = 0.0;
        for p in &a {
            for q in &b {
                d = d.max((p - q).norm());
            }
        }
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiagonalRule {
    /// Connect the lexicographically smallest trapezium corner to the opposite one.
    Lexicographic,
    /// The other diagonal; used to check decomposition independence.
    Alternate,
}

fn interp_x(p: Point2, q: Point2, level: f64) -> f64 {
    if level == p.1 {
        return p.0;
    }
    if level == q.1 {
        return q.0;
    }
    let lam = ((level - p.1) / (q.1 - p.1)).clamp(0.0, 1.0);
    p.0 + lam * (q.0 - p.0)
}

/// Cut a simple polygon by horizontal lines through its vertices (plus
/// `extra_levels`) and split each trapezium along one diagonal. Every output
/// triangle has a side parallel to the first coordinate axis.
pub fn decompose_polygon(poly: &[Point2], extra_levels: &[f64], rule: DiagonalRule) -> Vec<[Point2; 3]> {
    let extent = poly
        .iter()
        .map(|p| p.0.abs().max(p.1.abs()))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let tol = 1e-12 * extent;
    let wmin = poly.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let wmax = poly.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let mut levels: Vec<f64> = poly.iter().map(|p| p.1).collect();
    levels.extend(extra_levels.iter().copied().filter(|&l| l > wmin + tol && l < wmax - tol));
    levels.sort_by(f64::total_cmp);
    levels.dedup_by(|b, a| (*b - *a).abs() <= tol);

    let n = poly.len();
    let mut out = Vec::new();
    for slab in levels.windows(2) {
        let (la, lb) = (slab[0], slab[1]);
        let mut cross: Vec<(f64, f64)> = Vec::new();
        for k in 0..n {
            let p = poly[k];
            let q = poly[(k + 1) % n];
            if (q.1 - p.1).abs() <= tol {
                continue;
            }
            if p.1.min(q.1) <= la + tol && p.1.max(q.1) >= lb - tol {
                cross.push((interp_x(p, q, la), interp_x(p, q, lb)));
            }
        }
        cross.sort_by(|a, b| (a.0 + a.1).total_cmp(&(b.0 + b.1)));
        debug_assert!(cross.len() % 2 == 0, "odd crossing count in a simple polygon");
        for pair in cross.chunks_exact(2) {
            let (l, r) = (pair[0], pair[1]);
            let p0 = (l.0, la);
            let p1 = (r.0, la);
            let p2 = (r.1, lb);
            let p3 = (l.1, lb);
            let bottom = p1.0 - p0.0;
            let top = p2.0 - p3.0;
            if bottom <= tol && top <= tol {
                continue;
            }
            if bottom <= tol {
                out.push([p0, p2, p3]);
            } else if top <= tol {
                out.push([p0, p1, p2]);
            } else {
                let lex_p0 = p0.0 < p3.0 || (p0.0 == p3.0 && p0.1 < p3.1);
                let from_p0 = match rule {
                    DiagonalRule::Lexicographic => lex_p0,
                    DiagonalRule::Alternate => !lex_p0,
                };
                if from_p0 {
                    out.push([p0, p1, p2]);
                    out.push([p0, p2, p3]);
                } else {
                    out.push([p0, p1, p3]);
                    out.push([p1, p2, p3]);
                }
            }
        }
    }
    out
}

fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// In-plane unit vector perpendicular to `x`, pointing to the facet side
/// holding its farthest vertex from the line through `origin`.
fn in_plane_perpendicular(normal: &Vec3, x: &Vec3, origin: &Vec3, pts: &[Vec3]) -> Vec3 {
    let e = x.cross(normal).normalize();
    let far = pts
        .iter()
        .map(|p| (p - origin).dot(&e))
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
        .unwrap_or(1.0);
    e * sign(far)
}

/// Build the canonical frame of facets (i, j).
pub fn classify_pair(p: &Polyhedron, i: usize, j: usize) -> Result<PairFrame, PairError> {
    if i == j {
        return Err(PairError::DegeneratePair(i, j));
    }
    let planes = p.facet_planes();
    let (ni, nj) = (planes[i].normal, planes[j].normal);
    let pi = p.facet_points(i);
    let pj = p.facet_points(j);
    let diameter = p.stats().diameter;
    let cross = ni.cross(&nj);
    let c = cross.norm();
    if c <= PARALLEL_TOLERANCE {
        let origin = pi[0];
        let d = pj.iter().map(|q| ni.dot(&(q - origin))).sum::<f64>() / pj.len() as f64;
        if d.abs() <= crate::mesh::PLANAR_TOLERANCE * diameter {
            return Ok(PairFrame {
                facets: (i, j),
                kind: PairKind::Degenerate,
                origin,
                x: Vec3::x(),
                y: Vec3::y(),
                z: Vec3::z(),
                y_second: Vec3::y(),
                sigma: 1.0,
                near_parallel: false,
            });
        }
        let x = (pi[1] - pi[0]).normalize();
        let z = ni * sign(d);
        let y = z.cross(&x);
        let sigma = sign(ni.dot(&z)) * sign(nj.dot(&z));
        return Ok(PairFrame {
            facets: (i, j),
            kind: PairKind::Parallel { h: d.abs() },
            origin,
            x,
            y,
            z,
            y_second: y,
            sigma,
            near_parallel: false,
        });
    }
    let mut x = cross / c;
    // point on the intersection line closest to facet i's centroid
    let q = pi.iter().fold(Vec3::zeros(), |a, v| a + v) / pi.len() as f64;
    let k = ni.dot(&nj);
    let ri = planes[i].offset - ni.dot(&q);
    let rj = planes[j].offset - nj.dot(&q);
    let det = 1.0 - k * k;
    let alpha = (ri - k * rj) / det;
    let gamma = (rj - k * ri) / det;
    let origin = q + ni * alpha + nj * gamma;

    let y = in_plane_perpendicular(&ni, &x, &origin, &pi);
    let y_second = in_plane_perpendicular(&nj, &x, &origin, &pj);
    let mut z = x.cross(&y);
    let mut beta = y_second.dot(&z).atan2(y_second.dot(&y));
    if beta < 0.0 {
        x = -x;
        z = -z;
        beta = -beta;
    }
    let (sb, cb) = beta.sin_cos();
    let nu2 = y * sb - z * cb;
    let sigma = sign(ni.dot(&z)) * sign(nj.dot(&nu2));
    Ok(PairFrame {
        facets: (i, j),
        kind: PairKind::NonParallel { beta },
        origin,
        x,
        y,
        z,
        y_second,
        sigma,
        near_parallel: sb < BETA_TOLERANCE,
    })
}

/// Facet polygon in the (x, in-plane perpendicular) coordinates of a frame.
fn facet_coords(p: &Polyhedron, facet: usize, origin: &Vec3, x: &Vec3, e: &Vec3) -> Vec<Point2> {
    p.facet_points(facet)
        .iter()
        .map(|v| {
            let d = v - origin;
            (d.dot(x), d.dot(e))
        })
        .collect()
}

/// Decompose `facet` for the pair described by `frame`. Triangles are returned
/// in 3D; non-parallel facets are additionally cut along the intersection line.
pub fn triangulate_for_pair(p: &Polyhedron, facet: usize, frame: &PairFrame, rule: DiagonalRule) -> Vec<[Vec3; 3]> {
    let e = if facet == frame.facets.1 { frame.y_second } else { frame.y };
    let lift = |pt: Point2| -> Vec3 {
        let base = if facet == frame.facets.1 {
            match frame.kind {
                PairKind::Parallel { h } => frame.origin + frame.z * h,
                _ => frame.origin,
            }
        } else {
            frame.origin
        };
        base + frame.x * pt.0 + e * pt.1
    };
    planar_triangles(p, facet, frame, rule)
        .into_iter()
        .map(|t| t.map(lift))
        .collect()
}

fn planar_triangles(p: &Polyhedron, facet: usize, frame: &PairFrame, rule: DiagonalRule) -> Vec<[Point2; 3]> {
    let e = if facet == frame.facets.1 { frame.y_second } else { frame.y };
    let poly = facet_coords(p, facet, &frame.origin, &frame.x, &e);
    let extra: &[f64] = match frame.kind {
        PairKind::NonParallel { .. } => &[0.0],
        _ => &[],
    };
    decompose_polygon(&poly, extra, rule)
}

fn tri_sign(t: &[Point2; 3]) -> f64 {
    sign(t[0].1 + t[1].1 + t[2].1)
}

/// All triangle pairs of the facet pair in `frame`, each re-oriented into
/// its own canonical frame (a non-convex facet may straddle the line).
pub fn triangle_pairs(p: &Polyhedron, frame: &PairFrame, rule: DiagonalRule) -> Result<Vec<TrianglePair>, PairError> {
    let (i, j) = frame.facets;
    let ti = planar_triangles(p, i, frame, rule);
    let tj = planar_triangles(p, j, frame, rule);
    let (ni, nj) = (p.facet_planes()[i].normal, p.facet_planes()[j].normal);
    let mut out = Vec::with_capacity(ti.len() * tj.len());
    match frame.kind {
        PairKind::Degenerate => {}
        PairKind::Parallel { h } => {
            for a in &ti {
                let first = TriangleSides::from_points(*a)?;
                for b in &tj {
                    out.push(TrianglePair {
                        geometry: PairGeometry::Parallel { h },
                        sigma: frame.sigma,
                        first,
                        second: TriangleSides::from_points(*b)?,
                        near_parallel: false,
                    });
                }
            }
        }
        PairKind::NonParallel { beta } => {
            for a in &ti {
                let si = tri_sign(a);
                for b in &tj {
                    let sj = tri_sign(b);
                    let same = si * sj > 0.0;
                    let (fx, beta_f) = if same { (1.0, beta) } else { (-1.0, std::f64::consts::PI - beta) };
                    let place = |t: &[Point2; 3], s: f64| t.map(|q| (fx * q.0, (s * q.1).max(0.0)));
                    let x_f = frame.x * fx;
                    let y_dir = frame.y * si;
                    let z_f = x_f.cross(&y_dir);
                    let (sb, cb) = beta_f.sin_cos();
                    let nu2 = y_dir * sb - z_f * cb;
                    out.push(TrianglePair {
                        geometry: PairGeometry::NonParallel { beta: beta_f },
                        sigma: sign(ni.dot(&z_f)) * sign(nj.dot(&nu2)),
                        first: TriangleSides::from_points(place(a, si))?,
                        second: TriangleSides::from_points(place(b, sj))?,
                        near_parallel: sb < BETA_TOLERANCE,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solids;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn cube_frames() {
        let c = solids::cube(1.0);
        let f = classify_pair(&c, 0, 2).unwrap();
        match f.kind {
            PairKind::NonParallel { beta } => assert!((beta - FRAC_PI_2).abs() < 1e-14),
            _ => panic!(),
        }
        let f = classify_pair(&c, 0, 1).unwrap();
        assert_eq!(f.kind, PairKind::Parallel { h: 1.0 });
        assert_eq!(f.sigma, -1.0);
    }

    #[test]
    fn tetra_dihedral() {
        let t = solids::tetrahedron(1.0);
        let f = classify_pair(&t, 0, 1).unwrap();
        match f.kind {
            PairKind::NonParallel { beta } => assert!((beta - (1.0f64 / 3.0).acos()).abs() < 1e-13),
            _ => panic!(),
        }
    }

    #[test]
    fn reference_triangle_coefficients() {
        let s = side_coefficients([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]).unwrap();
        assert_eq!((s.left.intercept, s.left.slope), (0.0, 0.0));
        assert_eq!((s.right.intercept, s.right.slope), (1.0, -1.0));
        assert_eq!((s.y_min, s.y_max), (0.0, 1.0));

        let d = side_coefficients([(0.0, 1.0), (1.0, 1.0), (0.5, 0.0)]).unwrap();
        assert_eq!((d.y_min, d.y_max), (0.0, 1.0));
        assert!((d.left.at(1.0) - 0.0).abs() < 1e-15 && (d.right.at(1.0) - 1.0).abs() < 1e-15);
        assert!((d.left.at(0.0) - 0.5).abs() < 1e-15 && (d.right.at(0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn square_decompositions() {
        let sq = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        assert_eq!(decompose_polygon(&sq, &[], DiagonalRule::Lexicographic).len(), 2);
        let rot = |a: f64| -> Vec<Point2> { sq.iter().map(|&(x, y)| (x * a.cos() - y * a.sin(), x * a.sin() + y * a.cos())).collect() };
        assert_eq!(decompose_polygon(&rot(0.3), &[], DiagonalRule::Lexicographic).len(), 4);
        assert_eq!(decompose_polygon(&rot(PI / 4.0), &[], DiagonalRule::Lexicographic).len(), 2);
        let tri = [(0.0, 0.0), (2.0, 0.0), (0.5, 1.0)];
        let out = decompose_polygon(&tri, &[], DiagonalRule::Lexicographic);
        assert_eq!(out.len(), 1);
    }
}
