//! t-primitives for constant φ-limits (the ends of Φ₀).
//!
//! With u = sin φ, v = cos φ fixed, the integrand is a polynomial in t plus
//! t·Δ and t²·Δ terms, Δ = √(1 − t²):
//!   ∫ t Δ dt  = −Δ³/3
//!   ∫ t² Δ dt = (arcsin t − t Δ (1 − 2t²))/8

use crate::pairframe::{SideLine, TrianglePair};
use crate::primitives::{side_for, Family};

fn int_t_delta(t: f64) -> f64 {
    let d = (1.0 - t * t).max(0.0).sqrt();
    -d * d * d / 3.0
}

fn int_t2_delta(t: f64) -> f64 {
    let d = (1.0 - t * t).max(0.0).sqrt();
    (t.clamp(-1.0, 1.0).asin() - t * d * (1.0 - 2.0 * t * t)) / 8.0
}

/// Antiderivative in t of the integrand for side `side` with φ ≡ `phi`.
pub fn const_phi_primitive(family: Family, side: SideLine, r: f64, sin_beta: f64, cos_beta: f64, phi: f64, t: f64) -> f64 {
    let (p, q) = (side.intercept, side.slope);
    let (sb, cb) = (sin_beta, cos_beta);
    let (u, v) = phi.sin_cos();
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t2 * t2;
    // ∫ (t − t³) dt
    let cubic = t2 / 2.0 - t4 / 4.0;
    match family {
        Family::First => {
            let a_part = -p * cb * t3 / 3.0 - q * r * cb * cb / sb * t4 / 4.0 - q * r * sb / 2.0 * cubic;
            let b_part = q * r / 2.0 * sb * u * v * cubic
                - v * (p * sb * int_t_delta(t) + 2.0 * q * r * cb * int_t2_delta(t));
            phi * a_part + b_part
        }
        Family::Second => {
            let a_part = -p * cb * t3 / 3.0 - q * r * cb / sb * t4 / 4.0;
            let b_part = r * cb * u * int_t2_delta(t)
                - r * sb / 2.0 * u * u * cubic
                - v * (p * sb * int_t_delta(t) + q * r * int_t2_delta(t));
            phi * a_part + b_part
        }
    }
}

/// Primitive for integrand index `k` at constant φ.
pub fn primitive_const_phi(k: u8, t: f64, r: f64, tp: &TrianglePair, phi: f64) -> f64 {
    let (sb, cb) = tp.sin_cos_beta();
    let (family, side) = side_for(k, tp);
    const_phi_primitive(family, side, r, sb, cb, phi, t)
}
