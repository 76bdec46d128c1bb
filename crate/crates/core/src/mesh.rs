//! Polyhedron ingestion, validation and measurement.

use std::collections::HashMap;
use std::path::Path;

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::error::MeshError;

pub type Vec3 = Vector3<f64>;

/// Maximum vertex-to-plane distance of a facet, relative to the diameter.
pub const PLANAR_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MeshFormat {
    Off,
    Obj,
}

impl MeshFormat {
    pub fn from_path(path: &Path) -> Option<MeshFormat> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "off" => Some(MeshFormat::Off),
            "obj" => Some(MeshFormat::Obj),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Plane {
    /// Unit outward normal.
    pub normal: Vec3,
    /// `normal · x = offset` on the plane.
    pub offset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeshStats {
    #[serde(rename = "V")]
    pub volume: f64,
    #[serde(rename = "S")]
    pub surface: f64,
    #[serde(rename = "D")]
    pub diameter: f64,
}

/// Watertight polyhedron with planar, outward-oriented polygonal facets.
/// Immutable after construction.
#[derive(Debug, Clone)]
pub struct Polyhedron {
    vertices: Vec<Vec3>,
    facets: Vec<Vec<usize>>,
    planes: Vec<Plane>,
    areas: Vec<f64>,
    stats: MeshStats,
    convex: bool,
}

fn newell_normal(pts: &[Vec3]) -> Vec3 {
    let mut n = Vec3::zeros();
    for k in 0..pts.len() {
        let p = pts[k];
        let q = pts[(k + 1) % pts.len()];
        n += p.cross(&q);
    }
    n * 0.5
}

fn max_distance(vertices: &[Vec3]) -> f64 {
    let mut d2: f64 = 0.0;
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            d2 = d2.max((vertices[i] - vertices[j]).norm_squared());
        }
    }
    d2.sqrt()
}

fn check_topology(n_vertices: usize, facets: &[Vec<usize>]) -> Result<(), MeshError> {
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    for (f, lp) in facets.iter().enumerate() {
        if lp.len() < 3 {
            return Err(MeshError::Topology(format!("facet {f} has fewer than 3 vertices")));
        }
        for k in 0..lp.len() {
            let (u, v) = (lp[k], lp[(k + 1) % lp.len()]);
            if u >= n_vertices || v >= n_vertices {
                return Err(MeshError::Topology(format!("facet {f} references a missing vertex")));
            }
            if u == v {
                return Err(MeshError::Topology(format!("facet {f} repeats vertex {u}")));
            }
            let count = edges.entry((u, v)).or_insert(0);
            *count += 1;
            if *count > 1 {
                return Err(MeshError::Topology(format!(
                    "edge {u}->{v} traversed twice in the same direction (inconsistent orientation or non-manifold edge)"
                )));
            }
        }
    }
    for &(u, v) in edges.keys() {
        if !edges.contains_key(&(v, u)) {
            return Err(MeshError::Topology(format!(
                "edge {u}-{v} has no opposite half-edge (open surface or flipped facet)"
            )));
        }
    }
    Ok(())
}

/// Drop vertices lying on the segment joining their neighbours.
fn merge_collinear(vertices: &[Vec3], lp: &[usize], tol: f64) -> Vec<usize> {
    let mut out: Vec<usize> = lp.to_vec();
    loop {
        let n = out.len();
        if n <= 3 {
            return out;
        }
        let mut removed = false;
        for k in 0..n {
            let a = vertices[out[(k + n - 1) % n]];
            let b = vertices[out[k]];
            let c = vertices[out[(k + 1) % n]];
            let ac = c - a;
            let len = ac.norm();
            if len == 0.0 {
                continue;
            }
            let dist = (b - a).cross(&ac).norm() / len;
            if dist <= tol && (b - a).dot(&ac) > 0.0 && (c - b).dot(&ac) > 0.0 {
                out.remove(k);
                removed = true;
                break;
            }
        }
        if !removed {
            return out;
        }
    }
}

impl Polyhedron {
    /// Validate and build. Facet loops are counter-clockwise seen from outside.
    pub fn new(vertices: Vec<Vec3>, facets: Vec<Vec<usize>>) -> Result<Polyhedron, MeshError> {
        if vertices.iter().any(|v| !v.iter().all(|c| c.is_finite())) {
            return Err(MeshError::Degenerate("non-finite vertex coordinate".into()));
        }
        if facets.len() < 4 {
            return Err(MeshError::Topology(format!("only {} facets; a closed surface needs at least 4", facets.len())));
        }
        check_topology(vertices.len(), &facets)?;
        let diameter = max_distance(&vertices);
        if !(diameter > 0.0) {
            return Err(MeshError::Degenerate("zero diameter".into()));
        }
        let tol = PLANAR_TOLERANCE * diameter;

        let mut planes = Vec::with_capacity(facets.len());
        let mut areas = Vec::with_capacity(facets.len());
        for (f, lp) in facets.iter().enumerate() {
            let pts: Vec<Vec3> = lp.iter().map(|&i| vertices[i]).collect();
            let n = newell_normal(&pts);
            let area = n.norm();
            if area <= tol * diameter {
                return Err(MeshError::Degenerate(format!("facet {f} has zero area")));
            }
            let normal = n / area;
            let offset = pts.iter().map(|p| normal.dot(p)).sum::<f64>() / pts.len() as f64;
            let deviation = pts.iter().map(|p| (normal.dot(p) - offset).abs()).fold(0.0, f64::max);
            if deviation > tol {
                return Err(MeshError::Planarity {
                    facet: f,
                    deviation,
                    tolerance: tol,
                });
            }
            planes.push(Plane { normal, offset });
            areas.push(area);
        }

        let volume: f64 = planes.iter().zip(&areas).map(|(p, a)| p.offset * a).sum::<f64>() / 3.0;
        if !(volume > 0.0) {
            return Err(MeshError::Topology(format!(
                "signed volume {volume:.6e} is not positive: facets are oriented inward"
            )));
        }
        let surface = areas.iter().sum();

        let facets: Vec<Vec<usize>> = facets
            .iter()
            .map(|lp| merge_collinear(&vertices, lp, 1e-12 * diameter))
            .collect();

        let convex = planes.iter().all(|pl| {
            vertices
                .iter()
                .all(|v| pl.normal.dot(v) - pl.offset <= tol)
        });

        Ok(Polyhedron {
            vertices,
            facets,
            planes,
            areas,
            stats: MeshStats {
                volume,
                surface,
                diameter,
            },
            convex,
        })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn facet_planes(&self) -> &[Plane] {
        &self.planes
    }

    pub fn facet_area(&self, f: usize) -> f64 {
        self.areas[f]
    }

    pub fn facet_points(&self, f: usize) -> Vec<Vec3> {
        self.facets[f].iter().map(|&i| self.vertices[i]).collect()
    }

    pub fn stats(&self) -> MeshStats {
        self.stats
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    /// Apply `x -> rotation·x + translation`; the rotation must be proper.
    pub fn transformed(&self, rotation: &Matrix3<f64>, translation: &Vec3) -> Result<Polyhedron, MeshError> {
        let v = self.vertices.iter().map(|p| rotation * p + translation).collect();
        Polyhedron::new(v, self.facets.clone())
    }

    pub fn scaled(&self, s: f64) -> Result<Polyhedron, MeshError> {
        Polyhedron::new(self.vertices.iter().map(|p| p * s).collect(), self.facets.clone())
    }

    /// Bounding sphere: vertex centroid and the farthest-vertex radius.
    pub fn bounding_sphere(&self) -> (Vec3, f64) {
        let c = self.vertices.iter().fold(Vec3::zeros(), |acc, v| acc + v) / self.vertices.len() as f64;
        let r = self.vertices.iter().map(|v| (v - c).norm()).fold(0.0, f64::max);
        (c, r)
    }

    pub fn bounding_box(&self) -> (Vec3, Vec3) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        (lo, hi)
    }

    pub fn to_off(&self) -> String {
        let mut s = format!("OFF\n{} {} 0\n", self.vertices.len(), self.facets.len());
        for v in &self.vertices {
            s.push_str(&format!("{} {} {}\n", v.x, v.y, v.z));
        }
        for f in &self.facets {
            s.push_str(&f.len().to_string());
            for i in f {
                s.push_str(&format!(" {i}"));
            }
            s.push('\n');
        }
        s
    }
}

pub fn measure(p: &Polyhedron) -> MeshStats {
    p.stats()
}

/// Data lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T, MeshError> {
    tok.parse().map_err(|_| MeshError::Parse {
        line,
        msg: format!("invalid number '{tok}'"),
    })
}

/// ASCII OFF: header, counts line, vertex lines, facet lines.
pub fn parse_off(text: &str) -> Result<Polyhedron, MeshError> {
    let mut tokens: Vec<(usize, &str)> = Vec::new();
    for (ln, l) in content_lines(text) {
        tokens.extend(l.split_whitespace().map(|t| (ln, t)));
    }
    let mut it = tokens.into_iter();
    let eof = |what: &str| MeshError::Parse {
        line: 0,
        msg: format!("unexpected end of file while reading {what}"),
    };
    let (ln, head) = it.next().ok_or_else(|| eof("header"))?;
    if head != "OFF" {
        return Err(MeshError::Parse { line: ln, msg: format!("expected 'OFF' header, found '{head}'") });
    }
    let (ln, nv) = it.next().ok_or_else(|| eof("vertex count"))?;
    let nv: usize = parse_num(nv, ln)?;
    let (ln, nf) = it.next().ok_or_else(|| eof("facet count"))?;
    let nf: usize = parse_num(nf, ln)?;
    let (ln, ne) = it.next().ok_or_else(|| eof("edge count"))?;
    let _: usize = parse_num(ne, ln)?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let mut c = [0.0; 3];
        for x in c.iter_mut() {
            let (ln, t) = it.next().ok_or_else(|| eof("vertices"))?;
            *x = parse_num(t, ln)?;
        }
        vertices.push(Vec3::new(c[0], c[1], c[2]));
    }
    let mut facets = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (ln, k) = it.next().ok_or_else(|| eof("facets"))?;
        let k: usize = parse_num(k, ln)?;
        let mut lp = Vec::with_capacity(k);
        for _ in 0..k {
            let (ln, t) = it.next().ok_or_else(|| eof("facet indices"))?;
            let i: usize = parse_num(t, ln)?;
            if i >= nv {
                return Err(MeshError::Parse { line: ln, msg: format!("vertex index {i} out of range 0..{nv}") });
            }
            lp.push(i);
        }
        facets.push(lp);
    }
    if let Some((ln, t)) = it.next() {
        return Err(MeshError::Parse { line: ln, msg: format!("trailing data '{t}'") });
    }
    Polyhedron::new(vertices, facets)
}

/// OBJ subset: `v x y z` and `f i[/vt[/vn]] ...` lines; other records ignored.
pub fn parse_obj(text: &str) -> Result<Polyhedron, MeshError> {
    let mut vertices = Vec::new();
    let mut facets = Vec::new();
    for (ln, l) in content_lines(text) {
        let mut parts = l.split_whitespace();
        match parts.next() {
            Some("v") => {
                let c: Vec<f64> = parts.take(3).map(|t| parse_num(t, ln)).collect::<Result<_, _>>()?;
                if c.len() != 3 {
                    return Err(MeshError::Parse { line: ln, msg: "vertex needs 3 coordinates".into() });
                }
                vertices.push(Vec3::new(c[0], c[1], c[2]));
            }
            Some("f") => {
                let mut lp = Vec::new();
                for t in parts {
                    let idx: i64 = parse_num(t.split('/').next().unwrap_or(""), ln)?;
                    let n = vertices.len() as i64;
                    let i = if idx > 0 { idx - 1 } else { n + idx };
                    if idx == 0 || i < 0 || i >= n {
                        return Err(MeshError::Parse { line: ln, msg: format!("vertex index {idx} out of range") });
                    }
                    lp.push(i as usize);
                }
                facets.push(lp);
            }
            _ => {}
        }
    }
    Polyhedron::new(vertices, facets)
}

pub fn load_mesh(path: &Path, format: Option<MeshFormat>) -> Result<Polyhedron, MeshError> {
    let text = std::fs::read_to_string(path)?;
    let format = format.or_else(|| MeshFormat::from_path(path)).unwrap_or(MeshFormat::Off);
    match format {
        MeshFormat::Off => parse_off(&text),
        MeshFormat::Obj => parse_obj(&text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solids;

    #[test]
    fn cube_stats() {
        let c = solids::cube(1.0);
        let s = measure(&c);
        assert!((s.volume - 1.0).abs() < 1e-14);
        assert!((s.surface - 6.0).abs() < 1e-14);
        assert!((s.diameter - 3f64.sqrt()).abs() < 1e-14);
        assert!(c.is_convex());
    }

    #[test]
    fn collinear_vertices_merged() {
        // unit cube whose bottom facet carries an extra midpoint on one edge
        let mut v: Vec<Vec3> = solids::cube(1.0).vertices().to_vec();
        v.push(Vec3::new(0.5, 0.0, 0.0));
        let m = v.len() - 1;
        let f = vec![
            vec![0, 3, 2, 1, m],
            vec![4, 5, 6, 7],
            vec![0, m, 1, 5, 4],
            vec![2, 3, 7, 6],
            vec![1, 2, 6, 5],
            vec![0, 4, 7, 3],
        ];
        let p = Polyhedron::new(v, f).unwrap();
        assert_eq!(p.facets()[0].len(), 4);
        assert_eq!(p.facets()[2].len(), 4);
        assert!((p.stats().volume - 1.0).abs() < 1e-14);
    }

    #[test]
    fn off_with_comments() {
        let text = "OFF # header\n# comment\n4 4 6\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 2 1\n3 0 1 3\n3 1 2 3\n3 0 3 2\n";
        let p = parse_off(text).unwrap();
        assert!((p.stats().volume - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn obj_negative_indices() {
        let text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nf 1 3 2\nf 1/1 2/2 4/4\nf -3 -2 -1\nf 1//1 4//4 3//3\n";
        let p = parse_obj(text).unwrap();
        assert_eq!(p.facets().len(), 4);
    }
}
