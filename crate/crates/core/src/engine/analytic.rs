//! Closed-form evaluation: differences of t-primitives at subdomain ends.

use crate::error::PrimitiveError;
use crate::pairframe::TrianglePair;
use crate::phidomain::{subdomains, BoundExpr, BreakpointMode, ThetaSubdomain};
use crate::primitives::{const_phi_primitive, side_for, NonParallelPrimitive};

use super::nonparallel_prefactor;

/// ∫ J_k(t, bound(t)) dt from t_lo to t_hi.
fn bound_integral(k: u8, bound: &BoundExpr, r: f64, beta: f64, tp: &TrianglePair, t_lo: f64, t_hi: f64) -> Result<f64, PrimitiveError> {
    let (family, side) = side_for(k, tp);
    let (sb, cb) = beta.sin_cos();
    match bound {
        BoundExpr::Const(phi) => {
            Ok(const_phi_primitive(family, side, r, sb, cb, *phi, t_hi) - const_phi_primitive(family, side, r, sb, cb, *phi, t_lo))
        }
        BoundExpr::Arc(arc) => {
            let prim = NonParallelPrimitive::new(r, beta, *arc)?;
            Ok(prim.total(family, side, t_hi)? - prim.total(family, side, t_lo)?)
        }
    }
}

/// Unscaled sum over a subdomain table.
pub fn g_analytic_subdomains(table: &[ThetaSubdomain], r: f64, tp: &TrianglePair) -> Result<f64, PrimitiveError> {
    let beta = tp.beta().ok_or_else(|| PrimitiveError::Edge("parallel pair".into()))?;
    let mut acc = 0.0;
    for sd in table {
        for (k, sign) in [(sd.a_index, 1.0), (sd.b_index, -1.0)] {
            let upper = bound_integral(k, &sd.upper, r, beta, tp, sd.t_lo, sd.t_hi)?;
            let lower = bound_integral(k, &sd.lower, r, beta, tp, sd.t_lo, sd.t_hi)?;
            acc += sign * (upper - lower);
        }
    }
    Ok(acc)
}

/// Pair contribution from the closed-form primitives.
pub fn g_analytic(r: f64, tp: &TrianglePair, volume: f64, mode: BreakpointMode) -> Result<f64, PrimitiveError> {
    if tp.near_parallel {
        return Err(PrimitiveError::Edge("dihedral angle too close to 0 or π".into()));
    }
    let table = subdomains(tp, r, mode);
    Ok(nonparallel_prefactor(tp, volume) * g_analytic_subdomains(&table, r, tp)?)
}
