//! Reduction of the integration domain of a non-parallel triangle pair.
//!
//! For fixed r and t = cosθ, each comparison between the landing ordinate
//! ȳ, the side values ℓ̄, ℒ̄ (of 𝒯) and ℓ̄′, ℒ̄′ (of 𝒯′) holds on a union of
//! φ-intervals inside Φ₀ = [−π/2, 3π/2). Their endpoints are arc bounds
//! phase + arcsin((A + B t)/√(1 − t²)) or the ends of Φ₀. Four regions,
//! distinguished by which sides bound the chord's x-range, partition the
//! admissible set:
//!
//! | region | bounds            | set                       |
//! |--------|-------------------|---------------------------|
//! | A      | ℒ̄ − ℓ̄′  (J₂ − J₃) | 13 ∩ 23ᶜ ∩ 24 ∩ II        |
//! | B      | ℒ̄′ − ℓ̄′ (J₄ − J₃) | 13 ∩ 24ᶜ ∩ II, gated by 34 |
//! | C      | ℒ̄ − ℓ̄   (J₂ − J₁) | 13ᶜ ∩ 12 ∩ 24 ∩ II        |
//! | D      | ℒ̄′ − ℓ̄  (J₄ − J₁) | 13ᶜ ∩ 14 ∩ 24ᶜ ∩ II       |
//!
//! Case sets: II = {y_min ≤ ȳ ≤ y_max}, 13 = {ℓ̄ < ℓ̄′}, 24 = {ℒ̄ < ℒ̄′},
//! 23 = {ℒ̄ < ℓ̄′}, 14 = {ℓ̄ < ℒ̄′}, 12 = {ℓ̄ < ℒ̄}, 34 = {ℓ̄′ < ℒ̄′}.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::Serialize;

use crate::error::PairError;
use crate::pairframe::{SideLine, TrianglePair};
use crate::primitives::radical::{tangency_roots, ArcParams};

pub const PHI_START: f64 = -FRAC_PI_2;
pub const PHI_END: f64 = 3.0 * FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CaseId {
    II,
    C12,
    C13,
    C14,
    C23,
    C24,
    C34,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CaseKind {
    /// w_L ≤ sin φ ≤ w_R with w_{L,R} = (a_{left,right} + b t)/√(1 − t²).
    Band { a_left: f64, a_right: f64, b: f64 },
    /// sin(φ − phase) > (a + b t)/√(1 − t²).
    Arc { phase: f64, a: f64, b: f64 },
    /// sin φ > w (above) or sin φ < w (below), w = (a + b t)/√(1 − t²).
    Sine { a: f64, b: f64, above: bool },
    /// φ-free: slope·t > rhs.
    Gate { slope: f64, rhs: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CaseCoefficients {
    pub case: CaseId,
    pub kind: CaseKind,
}

/// Identity of an interval endpoint: which expression produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BoundTag {
    Start,
    End,
    Case { case: CaseId, expr: u8, wrap: i8 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BoundExpr {
    Const(f64),
    Arc(ArcParams),
}

impl BoundExpr {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            BoundExpr::Const(v) => *v,
            BoundExpr::Arc(a) => a.value(t),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Endpoint {
    pub value: f64,
    pub expr: BoundExpr,
    pub tag: BoundTag,
}

impl Endpoint {
    fn start() -> Endpoint {
        Endpoint { value: PHI_START, expr: BoundExpr::Const(PHI_START), tag: BoundTag::Start }
    }
    fn end() -> Endpoint {
        Endpoint { value: PHI_END, expr: BoundExpr::Const(PHI_END), tag: BoundTag::End }
    }
    fn arc(case: CaseId, expr: u8, arc: ArcParams, t: f64) -> Endpoint {
        Endpoint { value: arc.value(t), expr: BoundExpr::Arc(arc), tag: BoundTag::Case { case, expr, wrap: 0 } }
    }
    fn shifted(mut self, k: i8) -> Endpoint {
        self.value += k as f64 * TAU;
        if let BoundExpr::Arc(a) = self.expr {
            self.expr = BoundExpr::Arc(a.shifted(k as f64 * TAU));
        }
        if let BoundTag::Case { case, expr, wrap } = self.tag {
            self.tag = BoundTag::Case { case, expr, wrap: wrap + k };
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiInterval {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

impl PhiInterval {
    pub fn len(&self) -> f64 {
        self.hi.value - self.lo.value
    }
}

/// Sorted, disjoint, non-empty intervals inside Φ₀.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct PhiSet {
    pub intervals: Vec<PhiInterval>,
}

impl PhiSet {
    pub fn empty() -> PhiSet {
        PhiSet { intervals: Vec::new() }
    }

    pub fn full() -> PhiSet {
        PhiSet { intervals: vec![PhiInterval { lo: Endpoint::start(), hi: Endpoint::end() }] }
    }

    fn from_intervals(mut v: Vec<PhiInterval>) -> PhiSet {
        v.retain(|iv| iv.hi.value > iv.lo.value);
        v.sort_by(|a, b| a.lo.value.total_cmp(&b.lo.value));
        PhiSet { intervals: v }
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|iv| iv.len()).sum()
    }

    pub fn contains(&self, phi: f64) -> bool {
        self.intervals.iter().any(|iv| iv.lo.value <= phi && phi <= iv.hi.value)
    }

    /// Intersection; on equal endpoint values `self`'s endpoint is kept.
    pub fn intersect(&self, other: &PhiSet) -> PhiSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let a = self.intervals[i];
            let b = other.intervals[j];
            let lo = if b.lo.value > a.lo.value { b.lo } else { a.lo };
            let hi = if b.hi.value < a.hi.value { b.hi } else { a.hi };
            if hi.value > lo.value {
                out.push(PhiInterval { lo, hi });
            }
            if a.hi.value <= b.hi.value {
                i += 1;
            } else {
                j += 1;
            }
        }
        PhiSet { intervals: out }
    }

    /// Complement within Φ₀.
    pub fn complement(&self) -> PhiSet {
        let mut out = Vec::new();
        let mut cur = Endpoint::start();
        for iv in &self.intervals {
            if iv.lo.value > cur.value {
                out.push(PhiInterval { lo: cur, hi: iv.lo });
            }
            cur = iv.hi;
        }
        if PHI_END > cur.value {
            out.push(PhiInterval { lo: cur, hi: Endpoint::end() });
        }
        PhiSet { intervals: out }
    }

    pub fn union(&self, other: &PhiSet) -> PhiSet {
        self.complement().intersect(&other.complement()).complement()
    }

    /// Discrete shape: endpoint tags of every interval.
    pub fn signature(&self) -> Vec<(BoundTag, BoundTag)> {
        self.intervals.iter().map(|iv| (iv.lo.tag, iv.hi.tag)).collect()
    }
}

// ------------------------------------------------------------------ cases

fn arc_case(first: SideLine, second: SideLine, r: f64, sb: f64, cb: f64) -> CaseKind {
    let (p, q) = (first.intercept, first.slope);
    let norm = (1.0 + q * q).sqrt();
    CaseKind::Arc {
        phase: 1.0f64.atan2(q),
        a: (p - second.intercept) / (r * norm),
        b: (q * cb - second.slope) / (sb * norm),
    }
}

/// Coefficients of one case inequality at distance r.
pub fn case_coefficients(tp: &TrianglePair, r: f64, case: CaseId) -> Result<CaseCoefficients, PairError> {
    let (sb, cb) = tp.sin_cos_beta();
    let (f, s) = (&tp.first, &tp.second);
    let kind = match case {
        CaseId::II => CaseKind::Band { a_left: -f.y_max / r, a_right: -f.y_min / r, b: cb / sb },
        CaseId::C13 => arc_case(f.left, s.left, r, sb, cb),
        CaseId::C24 => arc_case(f.right, s.right, r, sb, cb),
        CaseId::C23 => arc_case(f.right, s.left, r, sb, cb),
        CaseId::C14 => arc_case(f.left, s.right, r, sb, cb),
        CaseId::C12 => {
            let db = f.left.slope - f.right.slope;
            if db == 0.0 {
                return Err(PairError::Degenerate12);
            }
            CaseKind::Sine { a: (f.left.intercept - f.right.intercept) / (r * db), b: cb / sb, above: db > 0.0 }
        }
        CaseId::C34 => CaseKind::Gate {
            slope: r * (s.right.slope - s.left.slope),
            rhs: (s.left.intercept - s.right.intercept) * sb,
        },
    };
    Ok(CaseCoefficients { case, kind })
}

/// Wrap [lo, hi] (lo ∈ Φ₀ after shifting, hi − lo ≤ 2π) into Φ₀.
fn wrapped(lo: Endpoint, hi: Endpoint) -> Vec<PhiInterval> {
    let mut k: i8 = 0;
    while lo.value + k as f64 * TAU < PHI_START {
        k += 1;
    }
    while lo.value + k as f64 * TAU >= PHI_END {
        k -= 1;
    }
    let lo = lo.shifted(k);
    let hi = hi.shifted(k);
    if hi.value <= PHI_END {
        vec![PhiInterval { lo, hi }]
    } else {
        vec![
            PhiInterval { lo: Endpoint::start(), hi: hi.shifted(-1) },
            PhiInterval { lo, hi: Endpoint::end() },
        ]
    }
}

/// Where the case inequality holds at t (0 ≤ t ≤ 1).
pub fn phi_set(coeffs: &CaseCoefficients, t: f64) -> PhiSet {
    let s = (1.0 - t * t).max(0.0).sqrt();
    let case = coeffs.case;
    match coeffs.kind {
        CaseKind::Gate { slope, rhs } => {
            if slope * t > rhs {
                PhiSet::full()
            } else {
                PhiSet::empty()
            }
        }
        CaseKind::Arc { phase, a, b } => {
            let num = a + b * t;
            if num >= s {
                PhiSet::empty()
            } else if num < -s {
                PhiSet::full()
            } else {
                let lo = Endpoint::arc(case, 0, ArcParams::new(phase, a, b), t);
                let hi = Endpoint::arc(case, 1, ArcParams::new(phase + PI, -a, -b), t);
                PhiSet::from_intervals(wrapped(lo, hi))
            }
        }
        CaseKind::Sine { a, b, above } => {
            let num = a + b * t;
            let set = if num >= s {
                PhiSet::empty()
            } else if num < -s {
                PhiSet::full()
            } else {
                let lo = Endpoint::arc(case, 0, ArcParams::new(0.0, a, b), t);
                let hi = Endpoint::arc(case, 1, ArcParams::new(PI, -a, -b), t);
                PhiSet::from_intervals(vec![PhiInterval { lo, hi }])
            };
            if above {
                set
            } else {
                set.complement()
            }
        }
        CaseKind::Band { a_left, a_right, b } => {
            let nl = a_left + b * t;
            let nr = a_right + b * t;
            if nl > s || nr < -s {
                return PhiSet::empty();
            }
            let low_open = nl <= -s;
            let high_open = nr >= s;
            let asin_l = || Endpoint::arc(case, 0, ArcParams::new(0.0, a_left, b), t);
            let pi_l = || Endpoint::arc(case, 1, ArcParams::new(PI, -a_left, -b), t);
            let asin_r = || Endpoint::arc(case, 2, ArcParams::new(0.0, a_right, b), t);
            let pi_r = || Endpoint::arc(case, 3, ArcParams::new(PI, -a_right, -b), t);
            let v = match (low_open, high_open) {
                (true, true) => return PhiSet::full(),
                (false, true) => vec![PhiInterval { lo: asin_l(), hi: pi_l() }],
                (true, false) => vec![
                    PhiInterval { lo: Endpoint::start(), hi: asin_r() },
                    PhiInterval { lo: pi_r(), hi: Endpoint::end() },
                ],
                (false, false) => vec![PhiInterval { lo: asin_l(), hi: asin_r() }, PhiInterval { lo: pi_r(), hi: pi_l() }],
            };
            PhiSet::from_intervals(v)
        }
    }
}

// ---------------------------------------------------------------- regions

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Region {
    A,
    B,
    C,
    D,
}

impl Region {
    pub const ALL: [Region; 4] = [Region::A, Region::B, Region::C, Region::D];

    /// (upper index a, lower index b): the chord's x-extent is side a minus side b.
    pub fn indices(&self) -> (u8, u8) {
        match self {
            Region::A => (2, 3),
            Region::B => (4, 3),
            Region::C => (2, 1),
            Region::D => (4, 1),
        }
    }
}

/// Case coefficients of a pair at fixed r, reused across t.
#[derive(Debug, Clone)]
pub struct PairCases {
    pub ii: CaseCoefficients,
    pub c13: CaseCoefficients,
    pub c24: CaseCoefficients,
    pub c23: CaseCoefficients,
    pub c14: CaseCoefficients,
    /// None when both sides of 𝒯 are parallel; then 12 is decided by `c12_const`.
    pub c12: Option<CaseCoefficients>,
    pub c12_const: bool,
    pub c34: CaseCoefficients,
}

impl PairCases {
    pub fn new(tp: &TrianglePair, r: f64) -> PairCases {
        let get = |c| case_coefficients(tp, r, c).expect("non-degenerate case");
        let c12 = case_coefficients(tp, r, CaseId::C12).ok();
        PairCases {
            ii: get(CaseId::II),
            c13: get(CaseId::C13),
            c24: get(CaseId::C24),
            c23: get(CaseId::C23),
            c14: get(CaseId::C14),
            c12,
            c12_const: tp.first.left.intercept < tp.first.right.intercept,
            c34: get(CaseId::C34),
        }
    }

    fn set12(&self, t: f64) -> PhiSet {
        match &self.c12 {
            Some(c) => phi_set(c, t),
            None if self.c12_const => PhiSet::full(),
            None => PhiSet::empty(),
        }
    }

    /// All four region sets at t.
    pub fn regions(&self, t: f64) -> [PhiSet; 4] {
        let ii = phi_set(&self.ii, t);
        if ii.is_empty() {
            return [PhiSet::empty(), PhiSet::empty(), PhiSet::empty(), PhiSet::empty()];
        }
        let s13 = phi_set(&self.c13, t);
        let s24 = phi_set(&self.c24, t);
        let n13 = s13.complement();
        let n24 = s24.complement();
        let a = ii.intersect(&s13).intersect(&phi_set(&self.c23, t).complement()).intersect(&s24);
        let b = if phi_set(&self.c34, t).is_empty() { PhiSet::empty() } else { ii.intersect(&s13).intersect(&n24) };
        let c = ii.intersect(&n13).intersect(&self.set12(t)).intersect(&s24);
        let d = ii.intersect(&n13).intersect(&phi_set(&self.c14, t)).intersect(&n24);
        [a, b, c, d]
    }

    pub fn region(&self, region: Region, t: f64) -> PhiSet {
        let [a, b, c, d] = self.regions(t);
        match region {
            Region::A => a,
            Region::B => b,
            Region::C => c,
            Region::D => d,
        }
    }

    /// Arc cases as lines α·S + γ·C = δ₀ + δ₁·t in S = s sinφ, C = s cosφ.
    fn lines(&self) -> Vec<(f64, f64, f64, f64)> {
        let mut out = Vec::new();
        let mut push = |c: &CaseCoefficients| match c.kind {
            CaseKind::Band { a_left, a_right, b } => {
                out.push((1.0, 0.0, a_left, b));
                out.push((1.0, 0.0, a_right, b));
            }
            CaseKind::Arc { phase, a, b } => {
                let (sf, cf) = phase.sin_cos();
                out.push((cf, -sf, a, b));
            }
            CaseKind::Sine { a, b, .. } => out.push((1.0, 0.0, a, b)),
            CaseKind::Gate { .. } => {}
        };
        push(&self.ii);
        push(&self.c13);
        push(&self.c24);
        push(&self.c23);
        push(&self.c14);
        if let Some(c) = &self.c12 {
            push(c);
        }
        out
    }
}

/// Full admissible φ-set at t (union of the four regions).
pub fn region_phi_set(region: Region, tp: &TrianglePair, r: f64, t: f64) -> PhiSet {
    PairCases::new(tp, r).region(region, t)
}

/// t-range where Ȳ = r t / sinβ lies in [Y_min, Y_max], or None.
pub fn theta_window(r: f64, tp: &TrianglePair) -> Option<(f64, f64)> {
    let (sb, _) = tp.sin_cos_beta();
    if !(r > 0.0) || r <= tp.second.y_min * sb {
        return None;
    }
    let lo = (tp.second.y_min * sb / r).max(0.0);
    let hi = (tp.second.y_max * sb / r).min(1.0);
    (hi > lo).then_some((lo, hi))
}

fn push_quadratic_roots(a: f64, b: f64, c: f64, out: &mut Vec<f64>) {
    if a.abs() <= 1e-300 {
        if b != 0.0 {
            out.push(-c / b);
        }
        return;
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        if disc > -1e-14 * b * b {
            out.push(-b / (2.0 * a));
        }
        return;
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + if b >= 0.0 { sq } else { -sq });
    if q != 0.0 {
        out.push(q / a);
        out.push(c / q);
    } else {
        out.push(0.0);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BreakpointMode {
    /// Closed-form event candidates, verified by signatures inside each piece.
    Analytic,
    /// Candidates merged with a dense sampling scan and bisection.
    Scan,
}

/// Ordered t-breakpoints (window ends included) for the pair at r.
pub fn theta_breakpoints(tp: &TrianglePair, r: f64, mode: BreakpointMode) -> Vec<f64> {
    let Some((lo, hi)) = theta_window(r, tp) else {
        return Vec::new();
    };
    let cases = PairCases::new(tp, r);
    breakpoints_with(&cases, lo, hi, mode)
}

fn region_signature(cases: &PairCases, t: f64) -> Vec<Vec<(BoundTag, BoundTag)>> {
    cases.regions(t).iter().map(|s| s.signature()).collect()
}

fn bisect_change(cases: &PairCases, mut a: f64, mut b: f64, sig_a: &[Vec<(BoundTag, BoundTag)>]) -> f64 {
    while b - a > 1e-12 {
        let m = 0.5 * (a + b);
        if region_signature(cases, m) == sig_a {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn analytic_candidates(cases: &PairCases, lo: f64, hi: f64) -> Vec<f64> {
    let lines = cases.lines();
    let mut c = vec![lo, hi];
    for &(al, ga, d0, d1) in &lines {
        // tangency with the circle of radius s = √(1 − t²)
        if let Some((r1, r2)) = tangency_roots(d0 / (al * al + ga * ga).sqrt(), d1 / (al * al + ga * ga).sqrt()) {
            c.push(r1);
            c.push(r2);
        }
        // through the seam point φ = −π/2: −α s = δ
        push_quadratic_roots(d1 * d1 + al * al, 2.0 * d0 * d1, d0 * d0 - al * al, &mut c);
    }
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (a1, g1, p0, p1) = lines[i];
            let (a2, g2, q0, q1) = lines[j];
            let det = a1 * g2 - a2 * g1;
            if det.abs() < 1e-14 {
                continue;
            }
            // intersection point, affine in t
            let s0 = (p0 * g2 - q0 * g1) / det;
            let s1 = (p1 * g2 - q1 * g1) / det;
            let c0 = (a1 * q0 - a2 * p0) / det;
            let c1 = (a1 * q1 - a2 * p1) / det;
            push_quadratic_roots(s1 * s1 + c1 * c1 + 1.0, 2.0 * (s0 * s1 + c0 * c1), s0 * s0 + c0 * c0 - 1.0, &mut c);
        }
    }
    if let CaseKind::Gate { slope, rhs } = cases.c34.kind {
        if slope != 0.0 {
            c.push(rhs / slope);
        }
    }
    c.retain(|t| t.is_finite() && *t >= lo && *t <= hi);
    c
}

fn normalize_points(mut c: Vec<f64>, lo: f64, hi: f64) -> Vec<f64> {
    c.push(lo);
    c.push(hi);
    c.retain(|t| *t >= lo && *t <= hi);
    c.sort_by(f64::total_cmp);
    c.dedup_by(|b, a| *b - *a <= 1e-12);
    if let Some(last) = c.last_mut() {
        *last = hi;
    }
    c
}

pub fn breakpoints_with(cases: &PairCases, lo: f64, hi: f64, mode: BreakpointMode) -> Vec<f64> {
    let mut c = analytic_candidates(cases, lo, hi);
    if mode == BreakpointMode::Scan {
        let n = 256;
        let mut prev_t = lo;
        let mut prev = region_signature(cases, lo + 1e-13 * (hi - lo));
        for k in 1..=n {
            let t = lo + (hi - lo) * k as f64 / n as f64;
            let tt = if k == n { hi - 1e-13 * (hi - lo) } else { t };
            let sig = region_signature(cases, tt);
            if sig != prev {
                c.push(bisect_change(cases, prev_t, tt, &prev));
            }
            prev = sig;
            prev_t = tt;
        }
    }
    let pts = normalize_points(c, lo, hi);
    // confirm the shape is constant inside each piece; split where it is not
    let mut out = Vec::with_capacity(pts.len());
    out.push(pts[0]);
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let probes = [a + 0.25 * (b - a), a + 0.5 * (b - a), a + 0.75 * (b - a)];
        let sigs: Vec<_> = probes.iter().map(|&t| region_signature(cases, t)).collect();
        if sigs[0] != sigs[1] {
            out.push(bisect_change(cases, probes[0], probes[1], &sigs[0]));
        }
        if sigs[1] != sigs[2] {
            out.push(bisect_change(cases, probes[1], probes[2], &sigs[1]));
        }
        out.push(b);
    }
    normalize_points(out, lo, hi)
}

/// One piece of the reduced integral: on t ∈ [t_lo, t_hi], region `region`
/// contributes ∫ [J_a − J_b] over φ ∈ [lower(t), upper(t)].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaSubdomain {
    pub t_lo: f64,
    pub t_hi: f64,
    pub region: Region,
    pub a_index: u8,
    pub b_index: u8,
    pub lower: BoundExpr,
    pub upper: BoundExpr,
}

/// Minimum width of a retained t-piece.
pub const MIN_PIECE_WIDTH: f64 = 1e-12;

pub fn subdomains_from_points(cases: &PairCases, pts: &[f64]) -> Vec<ThetaSubdomain> {
    let mut out = Vec::new();
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a < MIN_PIECE_WIDTH {
            continue;
        }
        let mid = 0.5 * (a + b);
        for (region, set) in Region::ALL.iter().zip(cases.regions(mid)) {
            let (ai, bi) = region.indices();
            for iv in set.intervals {
                out.push(ThetaSubdomain {
                    t_lo: a,
                    t_hi: b,
                    region: *region,
                    a_index: ai,
                    b_index: bi,
                    lower: iv.lo.expr,
                    upper: iv.hi.expr,
                });
            }
        }
    }
    out
}

/// Subdomain table for the pair at r.
pub fn subdomains(tp: &TrianglePair, r: f64, mode: BreakpointMode) -> Vec<ThetaSubdomain> {
    let Some((lo, hi)) = theta_window(r, tp) else {
        return Vec::new();
    };
    let cases = PairCases::new(tp, r);
    let pts = breakpoints_with(&cases, lo, hi, mode);
    subdomains_from_points(&cases, &pts)
}

/// Direct truth of the chain inequalities at (t, φ): which region holds, if any.
pub fn brute_force_region(tp: &TrianglePair, r: f64, t: f64, phi: f64) -> Option<Region> {
    let (sb, cb) = tp.sin_cos_beta();
    let s = (1.0 - t * t).max(0.0).sqrt();
    let ybar = r * cb / sb * t - r * s * phi.sin();
    let ybig = r * t / sb;
    if ybar < tp.first.y_min || ybar > tp.first.y_max || ybig < tp.second.y_min || ybig > tp.second.y_max {
        return None;
    }
    let l = tp.first.left.at(ybar);
    let big_l = tp.first.right.at(ybar);
    let shift = r * s * phi.cos();
    let lp = tp.second.left.at(ybig) - shift;
    let big_lp = tp.second.right.at(ybig) - shift;
    if l < lp && lp < big_l && big_l < big_lp {
        Some(Region::A)
    } else if l < lp && lp < big_lp && big_lp < big_l {
        Some(Region::B)
    } else if lp < l && l < big_l && big_l < big_lp {
        Some(Region::C)
    } else if lp < l && l < big_lp && big_lp < big_l {
        Some(Region::D)
    } else {
        None
    }
}

/// JSON-ready dump of the subdomain table.
#[derive(Debug, Clone, Serialize)]
pub struct SubdomainDump {
    pub r: f64,
    pub window: Option<(f64, f64)>,
    pub breakpoints: Vec<f64>,
    pub subdomains: Vec<ThetaSubdomain>,
}

pub fn dump(tp: &TrianglePair, r: f64) -> SubdomainDump {
    let window = theta_window(r, tp);
    let breakpoints = theta_breakpoints(tp, r, BreakpointMode::Scan);
    let subdomains = subdomains(tp, r, BreakpointMode::Scan);
    SubdomainDump { r, window, breakpoints, subdomains }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairframe::{PairGeometry, TriangleSides};

    fn pair(first: [(f64, f64); 3], second: [(f64, f64); 3], beta: f64) -> TrianglePair {
        TrianglePair {
            geometry: PairGeometry::NonParallel { beta },
            sigma: 1.0,
            first: TriangleSides::from_points(first).unwrap(),
            second: TriangleSides::from_points(second).unwrap(),
            near_parallel: false,
        }
    }

    #[test]
    fn window_examples() {
        let tp = pair([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], FRAC_PI_2);
        let (lo, hi) = theta_window(2.0, &tp).unwrap();
        assert!(lo == 0.0 && (hi - 0.5).abs() < 1e-15);
        assert_eq!(theta_window(0.5, &tp), Some((0.0, 1.0)));
        let tp2 = pair([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], [(0.0, 0.5), (1.0, 0.5), (0.0, 1.5)], FRAC_PI_2);
        assert_eq!(theta_window(0.4, &tp2), None);
    }

    #[test]
    fn case13_examples() {
        let tp = pair([(0.3, 0.0), (1.0, 0.0), (0.3, 1.0)], [(0.1, 0.0), (1.0, 0.0), (0.5, 1.0)], 1.1);
        let c = case_coefficients(&tp, 0.7, CaseId::C13).unwrap();
        let CaseKind::Arc { phase, a, b } = c.kind else { panic!() };
        assert!((phase - FRAC_PI_2).abs() < 1e-15);
        assert!((a - (0.3 - 0.1) / 0.7).abs() < 1e-15);
        assert!((b + tp.second.left.slope / 1.1f64.sin()).abs() < 1e-15);

        let zero = CaseCoefficients { case: CaseId::C13, kind: CaseKind::Arc { phase: FRAC_PI_2, a: 0.0, b: 0.0 } };
        let s = phi_set(&zero, 0.4);
        assert_eq!(s.intervals.len(), 1);
        assert!((s.intervals[0].lo.value - FRAC_PI_2).abs() < 1e-15);
        assert!((s.intervals[0].hi.value - 3.0 * FRAC_PI_2).abs() < 1e-15);

        let big = CaseCoefficients { case: CaseId::C13, kind: CaseKind::Arc { phase: 0.3, a: 2.0, b: 0.0 } };
        assert!(phi_set(&big, 0.4).is_empty());
    }

    #[test]
    fn band_full_when_both_open() {
        let c = CaseCoefficients { case: CaseId::II, kind: CaseKind::Band { a_left: -5.0, a_right: 5.0, b: 0.0 } };
        let s = phi_set(&c, 0.3);
        assert_eq!(s.intervals.len(), 1);
        assert!((s.measure() - TAU).abs() < 1e-15);
    }

    #[test]
    fn complement_involution() {
        let c = CaseCoefficients { case: CaseId::C14, kind: CaseKind::Arc { phase: 2.5, a: 0.1, b: 0.3 } };
        let s = phi_set(&c, 0.2);
        assert_eq!(s.complement().complement(), s);
        assert!((s.measure() + s.complement().measure() - TAU).abs() < 1e-12);
    }

    #[test]
    fn arc_argument_crossing() {
        let c = CaseCoefficients { case: CaseId::C13, kind: CaseKind::Arc { phase: 1.0, a: 0.0, b: 1.0 } };
        let cases = PairCases {
            ii: CaseCoefficients { case: CaseId::II, kind: CaseKind::Band { a_left: -9.0, a_right: 9.0, b: 0.0 } },
            c13: c,
            c24: c,
            c23: c,
            c14: c,
            c12: None,
            c12_const: true,
            c34: CaseCoefficients { case: CaseId::C34, kind: CaseKind::Gate { slope: 1.0, rhs: -1.0 } },
        };
        let pts = breakpoints_with(&cases, 0.0, 1.0, BreakpointMode::Scan);
        assert!(pts.iter().any(|t| (t - 0.5f64.sqrt()).abs() < 1e-11), "{pts:?}");
    }
}
