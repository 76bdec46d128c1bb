//! One-dimensional t-quadrature of the φ-antiderivatives across the
//! region sets.

use crate::error::Error;
use crate::integrand::j_side;
use crate::pairframe::TrianglePair;
use crate::phidomain::{breakpoints_with, theta_window, BreakpointMode, PairCases, Region};
use crate::primitives::side_for;
use crate::quadrature::{integrate_pieces, QuadResult, Tolerance};

use super::nonparallel_prefactor;

/// Σ over regions and intervals of [J_a − J_b] between the interval ends, at t.
pub(crate) fn reduced_integrand(cases: &PairCases, tp: &TrianglePair, r: f64, t: f64) -> f64 {
    let (sb, cb) = tp.sin_cos_beta();
    let s = (1.0 - t * t).max(0.0).sqrt();
    let j = |k: u8, phi: f64| {
        let (family, side) = side_for(k, tp);
        j_side(family, side, r, sb, cb, t, s, phi)
    };
    let mut acc = 0.0;
    for (region, set) in Region::ALL.iter().zip(cases.regions(t)) {
        let (a, b) = region.indices();
        for iv in &set.intervals {
            let (lo, hi) = (iv.lo.value, iv.hi.value);
            acc += j(a, hi) - j(b, hi) - j(a, lo) + j(b, lo);
        }
    }
    acc
}

/// Pair contribution by t-quadrature of the reduced integrand.
pub fn g_reduced1d(r: f64, tp: &TrianglePair, volume: f64, tol: Tolerance, mode: BreakpointMode) -> Result<QuadResult, Error> {
    if tp.beta().is_none() {
        return Err(Error::InvalidArgument("reduced t-quadrature needs a non-parallel pair".into()));
    }
    let Some((lo, hi)) = theta_window(r, tp) else {
        return Ok(QuadResult::ZERO);
    };
    let cases = PairCases::new(tp, r);
    let pts = breakpoints_with(&cases, lo, hi, mode);
    let pre = nonparallel_prefactor(tp, volume);
    let scaled = Tolerance { abs: tol.abs / pre.abs(), ..tol };
    let mut res = integrate_pieces(|t| reduced_integrand(&cases, tp, r, t), &pts, scaled);
    res.value *= pre;
    res.error *= pre.abs();
    Ok(res)
}
