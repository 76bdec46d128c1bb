//! Reference solids and convex hulls of point sets.

use nalgebra::Vector3;
use rand::Rng;

use crate::error::MeshError;
use crate::mesh::{Polyhedron, Vec3};

/// Axis-aligned cube `[0, edge]³`.
pub fn cube(edge: f64) -> Polyhedron {
    let v = [
        (0.0, 0.0, 0.0),
        (1.0, 0.0, 0.0),
        (1.0, 1.0, 0.0),
        (0.0, 1.0, 0.0),
        (0.0, 0.0, 1.0),
        (1.0, 0.0, 1.0),
        (1.0, 1.0, 1.0),
        (0.0, 1.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Vector3::new(x, y, z) * edge)
    .collect();
    let f = vec![
        vec![0, 3, 2, 1],
        vec![4, 5, 6, 7],
        vec![0, 1, 5, 4],
        vec![2, 3, 7, 6],
        vec![1, 2, 6, 5],
        vec![0, 4, 7, 3],
    ];
    Polyhedron::new(v, f).expect("cube is valid")
}

/// Regular tetrahedron with the given edge length.
pub fn tetrahedron(edge: f64) -> Polyhedron {
    let s = edge / (2.0 * 2f64.sqrt());
    let pts = [(1.0, 1.0, 1.0), (1.0, -1.0, -1.0), (-1.0, 1.0, -1.0), (-1.0, -1.0, 1.0)]
        .iter()
        .map(|&(x, y, z)| Vector3::new(x, y, z) * s)
        .collect::<Vec<_>>();
    convex_hull(&pts).expect("tetrahedron is valid")
}

/// Regular octahedron with the given edge length.
pub fn octahedron(edge: f64) -> Polyhedron {
    let a = edge / 2f64.sqrt();
    let mut pts = Vec::new();
    for k in 0..3 {
        for s in [1.0, -1.0] {
            let mut v = Vec3::zeros();
            v[k] = s * a;
            pts.push(v);
        }
    }
    convex_hull(&pts).expect("octahedron is valid")
}

/// Regular icosahedron with the given edge length.
pub fn icosahedron(edge: f64) -> Polyhedron {
    let g = (1.0 + 5f64.sqrt()) / 2.0;
    let h = edge / 2.0;
    let mut pts = Vec::new();
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            pts.push(Vector3::new(0.0, s1, s2 * g) * h);
            pts.push(Vector3::new(s1, s2 * g, 0.0) * h);
            pts.push(Vector3::new(s2 * g, 0.0, s1) * h);
        }
    }
    convex_hull(&pts).expect("icosahedron is valid")
}

/// Convex hull by brute force over point triples; coplanar hull points are
/// merged into polygonal facets. Intended for small point sets.
pub fn convex_hull(points: &[Vec3]) -> Result<Polyhedron, MeshError> {
    let n = points.len();
    let scale = points.iter().map(|p| p.norm()).fold(0.0, f64::max).max(1e-300);
    let tol = 1e-10 * scale;
    let mut planes: Vec<(Vec3, f64)> = Vec::new();
    let mut facets: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let nrm = (points[j] - points[i]).cross(&(points[k] - points[i]));
                let len = nrm.norm();
                if len <= tol * scale {
                    continue;
                }
                let mut nrm = nrm / len;
                let mut off = nrm.dot(&points[i]);
                let (mut above, mut below) = (false, false);
                for p in points {
                    let d = nrm.dot(p) - off;
                    above |= d > tol;
                    below |= d < -tol;
                }
                if above && below {
                    continue;
                }
                if above {
                    nrm = -nrm;
                    off = -off;
                }
                if planes.iter().any(|(m, o)| (m - nrm).norm() < 1e-9 && (o - off).abs() < tol) {
                    continue;
                }
                let on: Vec<usize> = (0..n).filter(|&q| (nrm.dot(&points[q]) - off).abs() <= tol).collect();
                let c = on.iter().fold(Vec3::zeros(), |acc, &q| acc + points[q]) / on.len() as f64;
                let u = (points[on[0]] - c).normalize();
                let w = nrm.cross(&u);
                let mut ordered = on.clone();
                ordered.sort_by(|&a, &b| {
                    let pa = points[a] - c;
                    let pb = points[b] - c;
                    pa.dot(&w).atan2(pa.dot(&u)).total_cmp(&pb.dot(&w).atan2(pb.dot(&u)))
                });
                planes.push((nrm, off));
                facets.push(ordered);
            }
        }
    }
    // keep only referenced points
    let mut remap = vec![usize::MAX; n];
    let mut verts = Vec::new();
    for f in facets.iter_mut() {
        for q in f.iter_mut() {
            if remap[*q] == usize::MAX {
                remap[*q] = verts.len();
                verts.push(points[*q]);
            }
            *q = remap[*q];
        }
    }
    Polyhedron::new(verts, facets)
}

/// Hull of `n` points drawn uniformly in the unit ball.
pub fn random_hull<R: Rng>(rng: &mut R, n: usize) -> Polyhedron {
    loop {
        let mut pts = Vec::with_capacity(n);
        while pts.len() < n {
            let p = Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            if p.norm_squared() <= 1.0 {
                pts.push(p);
            }
        }
        if let Ok(h) = convex_hull(&pts) {
            if h.facets().iter().all(|f| f.len() == 3) {
                return h;
            }
        }
    }
}
