//! Assembly of γ″(r) from triangle-pair contributions.
//!
//! Each ordered facet pair (i, j), i ≠ j, contributes g_ij(r); the sum over
//! unordered pairs is doubled. Non-parallel triangle pairs are evaluated by
//! one of three methods of decreasing independence from the closed forms:
//! two-dimensional quadrature over (t, φ), one-dimensional quadrature in t of
//! the φ-antiderivatives, and the fully analytic t-primitives. Parallel pairs
//! reduce to an overlap area integrated over the in-plane direction.

mod analytic;
mod curve;
mod direct;
mod parallel;
mod reduced;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

pub use analytic::{g_analytic, g_analytic_subdomains};
pub use curve::{
    bin_averages, cld, conditioning, default_grid, detect_breakpoints, gamma_reconstruct, geometric_breakpoints, local_exponent, plan_pairs, trapezoid,
    CldCurve, Diagnostic, EngineOptions, GammaCurve, Method, MethodTag, PairCurve, PairPlan,
};
pub use direct::g_direct2d;
pub use parallel::{g_parallel, g_parallel_direct, overlap_area};
pub use reduced::g_reduced1d;

use crate::pairframe::TrianglePair;

/// −σ/(4πV sinβ) for non-parallel pairs.
pub(crate) fn nonparallel_prefactor(tp: &TrianglePair, volume: f64) -> f64 {
    let (sb, _) = tp.sin_cos_beta();
    -tp.sigma / (4.0 * PI * volume * sb)
}

/// Solutions of a sinφ + b cosφ = c in [−π/2, 3π/2).
pub(crate) fn sinusoid_roots(a: f64, b: f64, c: f64, out: &mut Vec<f64>) {
    let amp = a.hypot(b);
    if amp == 0.0 || c.abs() > amp {
        return;
    }
    // a sinφ + b cosφ = amp·sin(φ + ψ)
    let psi = b.atan2(a);
    let base = (c / amp).clamp(-1.0, 1.0).asin();
    for phi in [base - psi, PI - base - psi] {
        out.push((phi + FRAC_PI_2).rem_euclid(TAU) - FRAC_PI_2);
    }
}
