//! γ″(r) curves: pair planning, per-point summation, grids, breakpoints and
//! the double integration back to γ(r).

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::mesh::{MeshStats, Polyhedron, Vec3};
use crate::oracle::mc_chords;
use crate::pairframe::{classify_pair, triangle_pairs, DiagonalRule, PairKind, TrianglePair};
use crate::phidomain::BreakpointMode;
use crate::quadrature::{gauss_legendre, Tolerance};

use super::{g_analytic, g_direct2d, g_parallel, g_parallel_direct, g_reduced1d};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mc,
    Direct2d,
    Reduced1d,
    Analytic,
    Auto,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Mc => "mc",
            Method::Direct2d => "direct2d",
            Method::Reduced1d => "reduced1d",
            Method::Analytic => "analytic",
            Method::Auto => "auto",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "mc" => Method::Mc,
            "direct2d" => Method::Direct2d,
            "reduced1d" => Method::Reduced1d,
            "analytic" => Method::Analytic,
            "auto" => Method::Auto,
            _ => return Err(Error::InvalidArgument(format!("unknown method '{s}'"))),
        })
    }
}

/// Method that actually produced a value, ordered from most to least analytic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodTag {
    Analytic,
    Reduced1d,
    Direct2d,
    Mc,
}

impl MethodTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            MethodTag::Analytic => "analytic",
            MethodTag::Reduced1d => "reduced1d",
            MethodTag::Direct2d => "direct2d",
            MethodTag::Mc => "mc",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EngineOptions {
    pub method: Method,
    pub tolerance: Tolerance,
    pub breakpoints: BreakpointMode,
    pub diagonal_rule: DiagonalRule,
    /// Below this sin β the auto ladder switches to (t, φ) quadrature.
    pub beta_epsilon: f64,
    /// Above this [`conditioning`] the auto ladder prefers t-quadrature to
    /// the closed-form t-primitives.
    pub condition_limit: f64,
    /// Below this sin β the closed forms lose about csc²β·ε and the auto
    /// ladder uses t-quadrature instead.
    pub near_parallel_sin: f64,
    pub mc_chords: u64,
    pub mc_seed: u64,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            method: Method::Auto,
            tolerance: Tolerance { abs: 1e-10, rel: 1e-10, max_subdivisions: 500 },
            breakpoints: BreakpointMode::Analytic,
            diagonal_rule: DiagonalRule::Lexicographic,
            beta_epsilon: 1e-6,
            condition_limit: 1e5,
            near_parallel_sin: 0.05,
            mc_chords: 1_000_000,
            mc_seed: 1,
        }
    }
}

impl EngineOptions {
    pub fn with_method(method: Method) -> EngineOptions {
        EngineOptions { method, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub facets: Option<(usize, usize)>,
    pub r: Option<f64>,
    pub message: String,
}

/// Triangle pairs of one unordered facet pair, with the r-range where each
/// can contribute.
#[derive(Debug, Clone)]
pub struct PairPlan {
    pub facets: (usize, usize),
    pub kind: PairKind,
    pub triangles: Vec<TrianglePair>,
    pub ranges: Vec<(f64, f64)>,
}

fn distance_range(tp: &TrianglePair) -> (f64, f64) {
    let (a, b) = tp.vertices();
    let ca = (a[0] + a[1] + a[2]) / 3.0;
    let cb = (b[0] + b[1] + b[2]) / 3.0;
    let ra = a.iter().map(|v| (v - ca).norm()).fold(0.0, f64::max);
    let rb = b.iter().map(|v| (v - cb).norm()).fold(0.0, f64::max);
    (((ca - cb).norm() - ra - rb).max(0.0), tp.max_distance())
}

/// Frames and triangle pairs of every unordered facet pair, in (i, j) order.
pub fn plan_pairs(p: &Polyhedron, rule: DiagonalRule) -> Result<(Vec<PairPlan>, Vec<Diagnostic>), Error> {
    let n = p.facets().len();
    let mut plans = Vec::new();
    let mut diags = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let frame = classify_pair(p, i, j)?;
            if frame.kind == PairKind::Degenerate {
                diags.push(Diagnostic { facets: Some((i, j)), r: None, message: "coplanar facets contribute nothing".into() });
                plans.push(PairPlan { facets: (i, j), kind: frame.kind, triangles: Vec::new(), ranges: Vec::new() });
                continue;
            }
            if frame.near_parallel {
                diags.push(Diagnostic { facets: Some((i, j)), r: None, message: "dihedral angle near 0 or π".into() });
            }
            let triangles = triangle_pairs(p, &frame, rule)?;
            let ranges = triangles.iter().map(distance_range).collect();
            plans.push(PairPlan { facets: (i, j), kind: frame.kind, triangles, ranges });
        }
    }
    Ok((plans, diags))
}

/// Cancellation estimate for the closed-form t-primitives: the largest side
/// abscissa or ordinate over the smaller triangle height, times csc β.
/// Slivers far from the intersection line of nearly parallel facets score
/// high; ordinary pairs score below about 10³.
pub fn conditioning(tp: &TrianglePair) -> f64 {
    let Some(beta) = tp.beta() else { return 1.0 };
    let mut reach: f64 = 0.0;
    for tri in [&tp.first, &tp.second] {
        for side in [tri.left, tri.right] {
            reach = reach.max(side.intercept.abs() + side.slope.abs() * tri.y_max.abs());
        }
        reach = reach.max(tri.y_max.abs());
    }
    let height = (tp.first.y_max - tp.first.y_min).min(tp.second.y_max - tp.second.y_min);
    reach / (height * beta.sin())
}

struct PairValue {
    value: f64,
    error: f64,
    tag: MethodTag,
    note: Option<String>,
}

fn pair_value(tp: &TrianglePair, r: f64, volume: f64, opts: &EngineOptions) -> Result<PairValue, Error> {
    let tol = opts.tolerance;
    if tp.beta().is_none() {
        return Ok(match opts.method {
            Method::Direct2d => {
                let q = g_parallel_direct(r, tp, volume, tol);
                PairValue { value: q.value, error: q.error, tag: MethodTag::Direct2d, note: None }
            }
            _ => {
                let v = g_parallel(r, tp, volume);
                PairValue { value: v, error: 1e-14 * v.abs(), tag: MethodTag::Analytic, note: None }
            }
        });
    }
    let direct = || -> Result<PairValue, Error> {
        let q = g_direct2d(r, tp, volume, tol)?;
        Ok(PairValue { value: q.value, error: q.error, tag: MethodTag::Direct2d, note: None })
    };
    let reduced = |note: Option<String>| -> Result<PairValue, Error> {
        let q = g_reduced1d(r, tp, volume, tol, opts.breakpoints)?;
        Ok(PairValue { value: q.value, error: q.error, tag: MethodTag::Reduced1d, note })
    };
    match opts.method {
        Method::Direct2d => direct(),
        Method::Reduced1d => reduced(None),
        Method::Analytic | Method::Auto => {
            let (sb, _) = tp.sin_cos_beta();
            if opts.method == Method::Auto && sb < opts.beta_epsilon {
                return direct();
            }
            if opts.method == Method::Auto && (sb < opts.near_parallel_sin || conditioning(tp) > opts.condition_limit) {
                return reduced(None);
            }
            match g_analytic(r, tp, volume, opts.breakpoints) {
                Ok(v) => Ok(PairValue { value: v, error: 1e-14 * v.abs(), tag: MethodTag::Analytic, note: None }),
                Err(e) => reduced(Some(format!("analytic primitive failed ({e}); used t-quadrature"))),
            }
        }
        Method::Mc => Err(Error::InvalidArgument("Monte Carlo has no per-pair evaluation".into())),
    }
}

/// Contribution of one unordered facet pair (both orders) at r.
fn plan_value(plan: &PairPlan, r: f64, volume: f64, opts: &EngineOptions, diags: &mut Vec<Diagnostic>) -> Result<(f64, f64, MethodTag), Error> {
    let (mut v, mut e, mut tag) = (0.0, 0.0, MethodTag::Analytic);
    if opts.method == Method::Direct2d {
        tag = MethodTag::Direct2d;
    } else if opts.method == Method::Reduced1d {
        tag = MethodTag::Reduced1d;
    }
    for (tp, &(lo, hi)) in plan.triangles.iter().zip(&plan.ranges) {
        if r <= lo || r >= hi {
            continue;
        }
        let pv = pair_value(tp, r, volume, opts)?;
        v += pv.value;
        e += pv.error;
        tag = tag.max(pv.tag);
        if let Some(m) = pv.note {
            diags.push(Diagnostic { facets: Some(plan.facets), r: Some(r), message: m });
        }
    }
    Ok((2.0 * v, 2.0 * e, tag))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCurve {
    pub facets: (usize, usize),
    pub values: Vec<f64>,
}

/// γ″ sampled on an r-grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CldCurve {
    pub r: Vec<f64>,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub methods: Vec<MethodTag>,
    pub method: Method,
    pub pairs: Vec<PairCurve>,
    pub diagnostics: Vec<Diagnostic>,
}

fn check_grid(r_grid: &[f64]) -> Result<(), Error> {
    if r_grid.is_empty() {
        return Err(Error::InvalidArgument("empty r-grid".into()));
    }
    if r_grid.iter().any(|r| !r.is_finite()) {
        return Err(Error::InvalidArgument("r-grid contains non-finite values".into()));
    }
    if r_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("r-grid must be strictly ascending".into()));
    }
    Ok(())
}

/// Histogram edges whose bin centres are the grid points.
fn edges_around(r_grid: &[f64]) -> Vec<f64> {
    let n = r_grid.len();
    let mut e = Vec::with_capacity(n + 1);
    let first_gap = if n > 1 { r_grid[1] - r_grid[0] } else { r_grid[0].max(1e-12) };
    e.push((r_grid[0] - 0.5 * first_gap).max(0.0));
    for w in r_grid.windows(2) {
        e.push(0.5 * (w[0] + w[1]));
    }
    let last_gap = if n > 1 { r_grid[n - 1] - r_grid[n - 2] } else { first_gap };
    e.push(r_grid[n - 1] + 0.5 * last_gap);
    e
}

/// γ″(r) = Σ over ordered facet pairs of g_ij(r).
pub fn cld(p: &Polyhedron, r_grid: &[f64], opts: &EngineOptions) -> Result<CldCurve, Error> {
    check_grid(r_grid)?;
    let stats = p.stats();
    if opts.method == Method::Mc {
        let edges = edges_around(r_grid);
        let est = mc_chords(p, opts.mc_chords, &edges, opts.mc_seed)?;
        let diagnostics = est.warnings.iter().map(|w| Diagnostic { facets: None, r: None, message: w.clone() }).collect();
        return Ok(CldCurve {
            r: r_grid.to_vec(),
            values: est.mean,
            errors: est.stderr,
            methods: vec![MethodTag::Mc; r_grid.len()],
            method: Method::Mc,
            pairs: Vec::new(),
            diagnostics,
        });
    }
    let (plans, mut diagnostics) = plan_pairs(p, opts.diagonal_rule)?;
    let volume = stats.volume;
    let d = stats.diameter;
    type Point = (Vec<f64>, f64, MethodTag, Vec<Diagnostic>);
    let points: Vec<Result<Point, Error>> = r_grid
        .par_iter()
        .map(|&r| {
            let mut per = vec![0.0; plans.len()];
            let mut err = 0.0;
            let mut tag = match opts.method {
                Method::Direct2d => MethodTag::Direct2d,
                Method::Reduced1d => MethodTag::Reduced1d,
                _ => MethodTag::Analytic,
            };
            let mut diags = Vec::new();
            if r > 0.0 && r < d {
                for (k, plan) in plans.iter().enumerate() {
                    let (v, e, t) = plan_value(plan, r, volume, opts, &mut diags)?;
                    per[k] = v;
                    err += e;
                    tag = tag.max(t);
                }
            }
            Ok((per, err, tag, diags))
        })
        .collect();
    let n = r_grid.len();
    let mut values = Vec::with_capacity(n);
    let mut errors = Vec::with_capacity(n);
    let mut methods = Vec::with_capacity(n);
    let mut pairs: Vec<PairCurve> = plans.iter().map(|pl| PairCurve { facets: pl.facets, values: Vec::with_capacity(n) }).collect();
    for pt in points {
        let (per, err, tag, diags) = pt?;
        // pairs are summed in a fixed order so results are reproducible
        values.push(per.iter().sum());
        errors.push(err);
        methods.push(tag);
        for (pc, v) in pairs.iter_mut().zip(&per) {
            pc.values.push(*v);
        }
        diagnostics.extend(diags);
    }
    Ok(CldCurve { r: r_grid.to_vec(), values, errors, methods, method: opts.method, pairs, diagnostics })
}

fn undirected_edges(p: &Polyhedron) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = p
        .facets()
        .iter()
        .flat_map(|f| (0..f.len()).map(move |k| (f[k].min(f[(k + 1) % f.len()]), f[k].max(f[(k + 1) % f.len()]))))
        .collect();
    e.sort();
    e.dedup();
    e
}

fn inside_facet(p: &Polyhedron, f: usize, q: &Vec3) -> bool {
    let n = p.facet_planes()[f].normal;
    let pts = p.facet_points(f);
    // all cross products of consecutive edges with the point agree in sign
    // for convex facets; general facets use a winding sum
    let mut winding = 0.0;
    for k in 0..pts.len() {
        let a = pts[k] - q;
        let b = pts[(k + 1) % pts.len()] - q;
        winding += a.cross(&b).dot(&n).atan2(a.dot(&b));
    }
    winding.abs() > std::f64::consts::PI
}

/// Distances at which the functional form of γ″ can change: vertex–vertex,
/// vertex–edge, vertex–facet and edge–edge separations (interior feet only).
pub fn geometric_breakpoints(p: &Polyhedron) -> Vec<f64> {
    let d = p.stats().diameter;
    let v = p.vertices();
    let edges = undirected_edges(p);
    let mut out = Vec::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            out.push((v[i] - v[j]).norm());
        }
    }
    for (i, x) in v.iter().enumerate() {
        for &(a, b) in &edges {
            if a == i || b == i {
                continue;
            }
            let ab = v[b] - v[a];
            let u = (x - v[a]).dot(&ab) / ab.norm_squared();
            if u > 1e-9 && u < 1.0 - 1e-9 {
                out.push((x - (v[a] + ab * u)).norm());
            }
        }
        for (f, pl) in p.facet_planes().iter().enumerate() {
            let h = pl.normal.dot(x) - pl.offset;
            if h.abs() <= 1e-9 * d {
                continue;
            }
            let foot = x - pl.normal * h;
            if inside_facet(p, f, &foot) {
                out.push(h.abs());
            }
        }
    }
    for (k, &(a, b)) in edges.iter().enumerate() {
        for &(c, e) in &edges[k + 1..] {
            if a == c || a == e || b == c || b == e {
                continue;
            }
            let (d1, d2, w0) = (v[b] - v[a], v[e] - v[c], v[a] - v[c]);
            let (aa, bb, cc, dd, ee) = (d1.dot(&d1), d1.dot(&d2), d2.dot(&d2), d1.dot(&w0), d2.dot(&w0));
            let den = aa * cc - bb * bb;
            if den <= 1e-12 * aa * cc {
                // parallel edges: perpendicular distance when the projections overlap
                let s0 = -dd / aa;
                let s1 = s0 + bb / aa;
                if s0.max(s1) > 1e-9 && s0.min(s1) < 1.0 - 1e-9 {
                    out.push((w0 - d1 * (w0.dot(&d1) / aa)).norm());
                }
                continue;
            }
            let s = (bb * ee - cc * dd) / den;
            let t = (aa * ee - bb * dd) / den;
            if s > 1e-9 && s < 1.0 - 1e-9 && t > 1e-9 && t < 1.0 - 1e-9 {
                out.push((w0 + d1 * s - d2 * t).norm());
            }
        }
    }
    out.retain(|&x| x > 1e-9 * d && x <= d * (1.0 + 1e-12));
    out.sort_by(f64::total_cmp);
    out.dedup_by(|b, a| *b - *a <= 1e-9 * d);
    out
}

/// Candidates where one-sided slopes of γ″ disagree.
pub fn detect_breakpoints(p: &Polyhedron, opts: &EngineOptions) -> Result<Vec<f64>, Error> {
    let d = p.stats().diameter;
    let h = 1e-4 * d;
    let mut found = Vec::new();
    let cands = geometric_breakpoints(p);
    for &delta in &cands {
        if delta >= d * (1.0 - 1e-9) {
            found.push(delta);
            continue;
        }
        let xs: Vec<f64> = [-2.0, -1.0, 1.0, 2.0].iter().map(|k| delta + k * h).filter(|x| *x > 0.0).collect();
        if xs.len() < 4 {
            continue;
        }
        let c = cld(p, &xs, opts)?;
        let g = &c.values;
        let scale = g.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
        let left = (g[1] - g[0]) / h;
        let right = (g[3] - g[2]) / h;
        let jump = (2.0 * g[1] - g[0]) - (2.0 * g[2] - g[3]);
        if (left - right).abs() > 1e-2 * scale / d || jump.abs() > 1e-4 * scale {
            found.push(delta);
        }
    }
    Ok(found)
}

/// Default grid: `n` points clustered towards 0 and D, plus each breakpoint ± 1e-6·D.
pub fn default_grid(d: f64, n: usize, breakpoints: &[f64]) -> Vec<f64> {
    let mut g: Vec<f64> = (1..=n)
        .map(|k| 0.5 * d * (1.0 - (std::f64::consts::PI * k as f64 / (n + 1) as f64).cos()))
        .collect();
    for &b in breakpoints {
        for x in [b - 1e-6 * d, b + 1e-6 * d] {
            if x > 0.0 && x < d {
                g.push(x);
            }
        }
    }
    g.sort_by(f64::total_cmp);
    g.dedup_by(|b, a| *b - *a <= 1e-12 * d);
    g
}

/// Least-squares slope of log|f′| against log|r − δ| on one side of δ
/// (`side` = ±1), over offsets from 1e-3·D down to 1e-6·D. Offsets whose
/// central difference falls below the summation noise of a γ″ curve
/// (about 1e-11/D²) are dropped.
pub fn local_exponent<F: Fn(f64) -> f64>(f: F, delta: f64, side: f64, d: f64) -> f64 {
    let floor = 1e-11 / (d * d);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in 0..=12 {
        let eps = d * 10f64.powf(-3.0 - 0.25 * k as f64);
        let r = delta + side * eps;
        let h = 0.05 * eps;
        let diff = f(r + h) - f(r - h);
        let der = diff / (2.0 * h);
        if diff.abs() > floor && der.is_finite() {
            xs.push(eps.ln());
            ys.push(der.abs().ln());
        }
    }
    let n = xs.len() as f64;
    if n < 2.0 {
        return f64::NAN;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Mean of γ″ over each bin [e_k, e_{k+1}], by a 6-point Gauss rule per bin.
pub fn bin_averages(p: &Polyhedron, edges: &[f64], opts: &EngineOptions) -> Result<Vec<f64>, Error> {
    let (nodes, weights) = gauss_legendre(6);
    let mut grid = Vec::with_capacity(6 * edges.len());
    for w in edges.windows(2) {
        let (c, h) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
        grid.extend(nodes.iter().map(|x| c + h * x));
    }
    let curve = cld(p, &grid, &opts_without_mc(opts))?;
    Ok(curve.values.chunks(6).map(|v| 0.5 * v.iter().zip(&weights).map(|(a, b)| a * b).sum::<f64>()).collect())
}

fn opts_without_mc(opts: &EngineOptions) -> EngineOptions {
    let mut o = opts.clone();
    if o.method == Method::Mc {
        o.method = Method::Auto;
    }
    o
}

pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2).zip(y.windows(2)).map(|(a, b)| 0.5 * (a[1] - a[0]) * (b[0] + b[1])).sum()
}

/// γ(r) and γ′(r) rebuilt from γ″ by integrating backwards from D.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaCurve {
    pub r: Vec<f64>,
    pub gamma: Vec<f64>,
    pub dgamma: Vec<f64>,
    pub gamma_at_zero: f64,
    /// Should match −S/4V.
    pub slope_at_zero: f64,
    pub warnings: Vec<String>,
}

/// Backward cumulative trapezoid twice, with γ(D) = γ′(D) = 0. A point at
/// r = 0 is added using the first sampled γ″ value.
pub fn gamma_reconstruct(curve: &CldCurve, stats: &MeshStats) -> GammaCurve {
    let d = stats.diameter;
    let mut r = vec![0.0];
    let mut g2 = vec![curve.values.first().copied().unwrap_or(0.0)];
    for (&x, &v) in curve.r.iter().zip(&curve.values) {
        if x > 0.0 && x < d {
            r.push(x);
            g2.push(v);
        }
    }
    r.push(d);
    g2.push(0.0);
    let n = r.len();
    let mut dg = vec![0.0; n];
    let mut g = vec![0.0; n];
    for i in (0..n - 1).rev() {
        let h = r[i + 1] - r[i];
        dg[i] = dg[i + 1] - 0.5 * h * (g2[i] + g2[i + 1]);
        g[i] = g[i + 1] - 0.5 * h * (dg[i] + dg[i + 1]);
    }
    let mut warnings = Vec::new();
    if (g[0] - 1.0).abs() > 0.01 {
        warnings.push(format!("γ(0) = {:.5} deviates from 1 by more than 0.01", g[0]));
    }
    GammaCurve { gamma_at_zero: g[0], slope_at_zero: dg[0], r, gamma: g, dgamma: dg, warnings }
}
