//! Angular integrands of a non-parallel triangle pair and their φ-primitives.
//!
//! With ω = (sinθ cosφ, sinθ sinφ, cosθ) and t = cosθ, s = sinθ:
//!   Ψ   = t (sinβ s sinφ − cosβ t)
//!   ȳ   = r cotβ t − r s sinφ                (landing ordinate on 𝒯)
//!   ℓ̄   = p + q ȳ                            (k = 1, 2)
//!   ℓ̄′  = p′ + r (q′ t / sinβ − s cosφ)      (k = 3, 4)
//! F_k = Ψ times the k-th side value, J_k its φ-antiderivative.

use crate::error::PrimitiveError;
use crate::pairframe::{SideLine, TrianglePair};
use crate::primitives::radical::{ArcParams, RadicalFrame};
use crate::primitives::{side_for, Family};

pub fn psi(theta: f64, phi: f64, beta: f64) -> f64 {
    let (s, t) = theta.sin_cos();
    t * (beta.sin() * s * phi.sin() - beta.cos() * t)
}

pub fn ybar(r: f64, theta: f64, phi: f64, beta: f64) -> f64 {
    let (s, t) = theta.sin_cos();
    r * t * beta.cos() / beta.sin() - r * s * phi.sin()
}

/// Side value at the chord's landing point: ℓ̄, ℒ̄, ℓ̄′ or ℒ̄′.
pub fn side_value(family: Family, side: SideLine, r: f64, sb: f64, cb: f64, t: f64, s: f64, phi: f64) -> f64 {
    match family {
        Family::First => side.at(r * cb / sb * t - r * s * phi.sin()),
        Family::Second => side.intercept + r * (side.slope * t / sb - s * phi.cos()),
    }
}

pub fn f_k(k: u8, r: f64, theta: f64, phi: f64, tp: &TrianglePair) -> f64 {
    let beta = tp.beta().expect("non-parallel pair");
    let (sb, cb) = beta.sin_cos();
    let (s, t) = theta.sin_cos();
    let (family, side) = side_for(k, tp);
    psi(theta, phi, beta) * side_value(family, side, r, sb, cb, t, s, phi)
}

/// φ-antiderivative of Ψ·(side value) in terms of (t, s).
pub fn j_side(family: Family, side: SideLine, r: f64, sb: f64, cb: f64, t: f64, s: f64, phi: f64) -> f64 {
    let (p, q) = (side.intercept, side.slope);
    let (sp, cp) = phi.sin_cos();
    match family {
        Family::First => {
            phi * (-cb * t * t * (p + q * r * t * cb / sb) - q * r * sb * t * s * s / 2.0)
                - cp * s * t * (p * sb + 2.0 * q * r * t * cb)
                + q * r * sb / 2.0 * t * s * s * sp * cp
        }
        Family::Second => {
            -phi * cb * t * t * (p + r * q * t / sb) + r * cb * t * t * s * sp
                - t * s * cp * (p * sb + r * q * t)
                - r * sb * t * s * s * sp * sp / 2.0
        }
    }
}

pub fn j_k(k: u8, r: f64, theta: f64, phi: f64, tp: &TrianglePair) -> f64 {
    let (sb, cb) = tp.sin_cos_beta();
    let (s, t) = theta.sin_cos();
    let (family, side) = side_for(k, tp);
    j_side(family, side, r, sb, cb, t, s, phi)
}

/// Split of J_k in the variables (t, u = sin φ, v = cos φ):
/// J_k = φ·(A-part) + (B-part).
pub fn frak_parts(family: Family, side: SideLine, r: f64, sb: f64, cb: f64, t: f64, u: f64, v: f64) -> (f64, f64) {
    let (p, q) = (side.intercept, side.slope);
    let delta = (1.0 - t * t).max(0.0).sqrt();
    match family {
        Family::First => {
            let a = -(p + q * r * t * cb / sb) * t * t * cb - q * r * t / 2.0 * (1.0 - t * t) * sb;
            let b = q * r / 2.0 * t * (1.0 - t * t) * u * v * sb - t * delta * v * (p * sb + 2.0 * q * r * t * cb);
            (a, b)
        }
        Family::Second => {
            let a = -t * t * (p * cb + q * r * t * cb / sb);
            let b = r * t * t * u * delta * cb - r * t / 2.0 * (1.0 - t * t) * u * u * sb
                - t * delta * v * (p * sb + q * r * t);
            (a, b)
        }
    }
}

/// (A-part coefficient, B-part value) at (t, u) with cos φ = `cos_sign`·√(1 − u²).
pub fn f_frak(k: u8, r: f64, t: f64, u: f64, cos_sign: f64, tp: &TrianglePair) -> (f64, f64) {
    let (sb, cb) = tp.sin_cos_beta();
    let (family, side) = side_for(k, tp);
    let v = cos_sign.signum() * (1.0 - u * u).max(0.0).sqrt();
    frak_parts(family, side, r, sb, cb, t, u, v)
}

/// Same along an arc bound, with the true sign of cos φ(t).
pub fn f_frak_arc(k: u8, r: f64, t: f64, tp: &TrianglePair, arc: &ArcParams) -> (f64, f64) {
    let (sb, cb) = tp.sin_cos_beta();
    let (family, side) = side_for(k, tp);
    let (u, v) = arc.sin_cos(t);
    frak_parts(family, side, r, sb, cb, t, u, v)
}

/// B-part along an arc bound as 𝔠₁(t) + 𝔠₂(t)·Δ₁(t); returns (𝔠₁, 𝔠₂).
pub fn b_part_coefficients(k: u8, r: f64, t: f64, tp: &TrianglePair, arc: &ArcParams) -> Result<(f64, f64), PrimitiveError> {
    let (sb, cb) = tp.sin_cos_beta();
    let (family, side) = side_for(k, tp);
    let (aa, bb, f) = (arc.a, arc.b, arc.phase);
    let w = aa + bb * t;
    let d1sq = 1.0 - t * t - w * w;
    if d1sq < -1e-12 {
        let (mu1, mu2) = RadicalFrame::new(aa, bb).map(|rf| (rf.mu1, rf.mu2)).unwrap_or((f64::NAN, f64::NAN));
        return Err(PrimitiveError::Domain { t, mu1, mu2 });
    }
    let (sf, cf) = f.sin_cos();
    let (p, q) = (side.intercept, side.slope);
    Ok(match family {
        Family::First => {
            let (a, b) = (p, q);
            let c1 = t / 2.0
                * sf
                * (4.0 * b * r * t * w * cb
                    + (2.0 * a * w - b * r * (2.0 * aa * aa - 1.0 + 4.0 * aa * bb * t + (1.0 + 2.0 * bb * bb) * t * t) * cf) * sb);
            let c2 = t / 2.0
                * (b * r * w * cf * cf * sb - b * r * w * sf * sf * sb - 2.0 * cf * (2.0 * b * r * t * cb + a * sb));
            (c1, c2)
        }
        Family::Second => {
            let (ap, bp) = (p, q);
            let c1 = t / 2.0
                * (2.0 * r * t * w * cf * cb - r * w * w * cf * cf * sb
                    + sf * (2.0 * bp * r * t * w
                        + (2.0 * ap * w + r * (aa * aa - 1.0 + 2.0 * aa * bb * t + (1.0 + bb * bb) * t * t) * sf) * sb));
            let c2 = -t * (-r * t * cb * sf + cf * (bp * r * t + sb * (ap + r * w * sf)));
            (c1, c2)
        }
    })
}

/// Coefficient substitutions relating k = 1 ↔ 2 and k = 3 ↔ 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubstitutionRule {
    /// Exchange the left and right sides of 𝒯.
    First,
    /// Exchange the left and right sides of 𝒯′.
    Second,
    Both,
}

impl SubstitutionRule {
    /// Swapping is an involution, so applying a rule twice is the identity.
    pub fn apply(&self, tp: &TrianglePair) -> TrianglePair {
        let mut out = *tp;
        if matches!(self, SubstitutionRule::First | SubstitutionRule::Both) {
            std::mem::swap(&mut out.first.left, &mut out.first.right);
        }
        if matches!(self, SubstitutionRule::Second | SubstitutionRule::Both) {
            std::mem::swap(&mut out.second.left, &mut out.second.right);
        }
        out
    }
}
