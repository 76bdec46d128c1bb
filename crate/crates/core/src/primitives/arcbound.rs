//! Closed-form t-primitives for arc-bounded φ-limits.
//!
//! For an arc bound φ(t) = f + arcsin((A + B t)/Δ) and a side line
//! x = p + q y, the integrand of the t-quadrature is
//! φ(t)·𝔉_A(t) + 𝔉_B(t, sin φ(t), cos φ(t)). Part A integrates the first
//! term, part B the second. Each is a sum of blocks: a polynomial, an
//! arcsine-weighted polynomial, Δ₁ times a polynomial, and arctangents of
//! c·ξ with ξ = √((μ₂ − t)/(t − μ₁)).
//!
//! Inside this module `a`/`b` are the side intercept/slope and `aa`/`bb`
//! the arc coefficients A/B.

use crate::error::PrimitiveError;
use crate::pairframe::{SideLine, TrianglePair};
use crate::primitives::radical::{ArcParams, RadicalFrame};
use crate::primitives::{side_for, Family};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    A,
    B,
}

/// Precomputed data for evaluating primitives along one arc bound.
#[derive(Debug, Clone, Copy)]
pub struct NonParallelPrimitive {
    pub r: f64,
    pub sin_beta: f64,
    pub cos_beta: f64,
    pub arc: ArcParams,
    pub radical: RadicalFrame,
}

fn poly(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

impl NonParallelPrimitive {
    pub fn new(r: f64, beta: f64, arc: ArcParams) -> Result<NonParallelPrimitive, PrimitiveError> {
        let (sin_beta, cos_beta) = beta.sin_cos();
        if sin_beta < crate::pairframe::BETA_TOLERANCE {
            return Err(PrimitiveError::Edge(format!("sin β = {sin_beta:e} below tolerance")));
        }
        let radical = RadicalFrame::from_arc(&arc)
            .filter(|rf| rf.lambda2 > 1e-12)
            .ok_or_else(|| PrimitiveError::Edge(format!("empty radical domain for A = {}, B = {}", arc.a, arc.b)))?;
        Ok(NonParallelPrimitive { r, sin_beta, cos_beta, arc, radical })
    }

    fn common(&self) -> (f64, f64, f64, f64, f64) {
        (self.arc.a, self.arc.b, self.radical.lambda1, self.radical.lambda2, self.arc.phase)
    }

    /// arctan(Λ₁Δ₁/(AB + Λ₂ + Λ₁² t)) = arctan ξ.
    fn atan_omega1(&self, t: f64) -> f64 {
        self.radical.atan_xi(1.0, 1.0, t)
    }

    // ---------------------------------------------------------------- k = 1

    /// Polynomial coefficients of 𝔉_{1,A}'s antiderivative (t², t³, t⁴).
    fn first_a_coeffs(&self, side: SideLine) -> [f64; 3] {
        let (a, b, r) = (side.intercept, side.slope, self.r);
        let (sb, cb) = (self.sin_beta, self.cos_beta);
        let cos2b = cb * cb - sb * sb;
        [-b * r * sb / 4.0, -a * cb / 3.0, -b * r * (1.0 + 3.0 * cos2b) / (16.0 * sb)]
    }

    /// phase · ∫𝔉_{1,A} dt.
    pub fn first_a_phase_poly(&self, side: SideLine, t: f64) -> f64 {
        let c = self.first_a_coeffs(side);
        self.arc.phase * t * t * poly(&c, t)
    }

    /// arcsin(w) · ∫𝔉_{1,A} dt.
    pub fn first_a_arcsin(&self, side: SideLine, t: f64) -> f64 {
        let c = self.first_a_coeffs(side);
        self.arc.arcsin_term(t) * t * t * poly(&c, t)
    }

    pub fn first_a_radical(&self, side: SideLine, t: f64) -> f64 {
        let (a, b, r) = (side.intercept, side.slope, self.r);
        let (aa, bb, l1, l2, _) = self.common();
        let (sb, cb) = (self.sin_beta, self.cos_beta);
        let csc = 1.0 / sb;
        let (l1s, l2s) = (l1 * l1, l2 * l2);
        let l1q = l1s * l1s;
        let c11 = 8.0 * a * bb * l1s * (2.0 + 2.0 * bb * bb - 3.0 * l1s + 3.0 * l2s) * cb;
        let c12 = aa
            * b
            * (2.0 * (8.0 * l1q + 15.0 * l2s - l1s * (2.0 + 11.0 * l2s)) * csc
                + 3.0 * (l1s * (2.0 + 11.0 * l2s) - 4.0 * l1q - 15.0 * l2s) * sb);
        let c21 = 8.0 * a * aa * l1q * cb;
        let c22 = b * bb * l1s * (5.0 * l2s - 2.0 * l1s) * (2.0 * csc - 3.0 * sb);
        let c31 = 0.0;
        let c32 = aa * b * l1q * (1.0 + 3.0 * (cb * cb - sb * sb)) * csc;
        let p = poly(&[c11 + c12 * r, c21 + c22 * r, c31 + c32 * r], t);
        self.radical.delta1(t) / (48.0 * l1s * l1q) * p
    }

    pub fn first_a_atan1(&self, side: SideLine, t: f64) -> f64 {
        let (a, b, r) = (side.intercept, side.slope, self.r);
        let (aa, bb, l1, _, _) = self.common();
        let (sb, cb) = (self.sin_beta, self.cos_beta);
        let (aa2, bb2) = (aa * aa, bb * bb);
        let l1s = l1 * l1;
        let cos2b = cb * cb - sb * sb;
        let c1 = 16.0 * a * aa * (3.0 - aa2 + (3.0 + 2.0 * aa2) * bb2) * l1s * cb;
        let c2 = 3.0
            * b
            * bb
            * (l1s - aa2)
            * (7.0 - 3.0 * aa2 + (13.0 + 2.0 * aa2) * bb2 + 6.0 * bb2 * bb2
                + (5.0 - 9.0 * aa2 + (7.0 + 6.0 * aa2) * bb2 + 2.0 * bb2 * bb2) * cos2b)
            / sb;
        self.atan_omega1(t) / (48.0 * l1.powi(7)) * (c1 + c2 * r)
    }

    pub fn first_a_atan2(&self, side: SideLine, t: f64) -> f64 {
        let (a, b, r) = (side.intercept, side.slope, self.r);
        let (aa, bb, l1, _, _) = self.common();
        let (sb, cb) = (self.sin_beta, self.cos_beta);
        let kp = aa + bb;
        let om = self.radical.atan_xi(-(1.0 - self.radical.mu1) * l1, kp, t);
        let sin2b = 2.0 * sb * cb;
        let cos2b = cb * cb - sb * sb;
        om / (48.0 * sb) * (8.0 * a * sin2b + 3.0 * b * r * (3.0 + cos2b))
    }

    pub fn first_a_atan3(&self, side: SideLine, t: f64) -> f64 {
        let (a, b, r) = (side.intercept, side.slope, self.r);
        let (aa, bb, l1, _, _) = self.common();
        let (sb, cb) = (self.sin_beta, self.cos_beta);
        let km = aa - bb;
        let om = self.radical.atan_xi((1.0 + self.radical.mu1) * l1, km, t);
        let sin2b = 2.0 * sb * cb;
        let cos2b = cb * cb - sb * sb;
        -om / (48.0 * sb) * (8.0 * a * sin2b - 3.0 * b * r * (3.0 + cos2b))
    }

    pub fn first_b_poly(&self, side: SideLine, t: f64) -> f64 {
        let (a, b, r) = (side.intercept, side.slope, self.r);
        let (aa, bb, _, _, _) = self.common();
        let (sb, cb) = (self.sin_beta, self.cos_beta);
        let (sf, cf) = self.arc.phase.sin_cos();
        let c1 = sf * sb / 4.0 * (2.0 * a * aa + (1.0 - 2.0 * aa * aa) * b * r * cf);
        let c2 = sf / 3.0 * (2.0 * aa * b * r * cb + bb * (a - 2.0 * aa * b * r * cf) * sb);
        let c3 = -b * r * sf / 8.0 * ((1.0 + 2.0 * bb * bb) * cf * sb - 4.0 * bb * cb);
        t * t * poly(&[c1, c2, c3], t)
    }

    pub fn first_b_radical(&self, side: SideLine, t: f64) -> f64 {
        let (a, b, r) = (side.intercept, side.slope, self.r);
        let (aa, bb, l1, _, _) = self.common();
        let (sb, cb) = (self.sin_beta, self.cos_beta);
        let (sf, cf) = self.arc.phase.sin_cos();
        let cos2f = cf * cf - sf * sf;
        let (aa2, bb2) = (aa * aa, bb * bb);
        let l1s = l1 * l1;
        let l1q = l1s * l1s;
        let l16 = l1q * l1s;
        let c11 = 8.0 * a * (2.0 - 2.0 * aa2 + (2.0 + aa2) * bb2) * l1s * cf * sb;
        let c12 = -aa
            * b
            * (4.0 * bb * (aa2 * (2.0 * bb2 - 13.0) + 13.0 * l1s) * cf * cb
                + (8.0 + 3.0 * bb2 - 5.0 * bb2 * bb2 + aa2 * (9.0 * bb2 + 2.0 * bb2 * bb2 - 8.0)) * sb * cos2f);
        let c21 = -8.0 * a * aa * bb * l1q * cf * sb;
        let c22 = b
            * l1s
            * (4.0 * (aa2 * (2.0 * bb2 - 3.0) + 3.0 * l1s) * cf * cb
                + bb * (aa2 * (7.0 + 2.0 * bb2) - 3.0 * l1s) * cos2f * sb);
        let c31 = -16.0 * a * l16 * cf * sb;
        let c32 = 2.0 * aa * b * l1q * ((4.0 + 5.0 * bb2) * cos2f * sb - 4.0 * bb * cf * cb);
        let c41 = 0.0;
        let c42 = 6.0 * b * l16 * (bb * cos2f * sb - 4.0 * cf * cb);
        let p = poly(&[c11 + c12 * r, c21 + c22 * r, c31 + c32 * r, c41 + c42 * r], t);
        self.radical.delta1(t) / (48.0 * l16) * p
    }

    pub fn first_b_atan(&self, side: SideLine, t: f64) -> f64 {
        let (a, b, r) = (side.intercept, side.slope, self.r);
        let (aa, bb, l1, l2, _) = self.common();
        let (sb, cb) = (self.sin_beta, self.cos_beta);
        let (sf, cf) = self.arc.phase.sin_cos();
        let cos2f = cf * cf - sf * sf;
        let (l1s, l2s) = (l1 * l1, l2 * l2);
        let c1 = -8.0 * a * aa * bb * l1s * cf * sb;
        let c2 = 4.0 * b * (4.0 * l1s * l1s + 5.0 * l2s - 4.0 * l1s * (1.0 + l2s)) * cf * cb
            + b * bb * (4.0 * l1s - 5.0 * l2s) * cos2f * sb;
        l2s / (8.0 * l1.powi(7)) * self.atan_omega1(t) * (c1 + c2 * r)
    }

    // ---------------------------------------------------------------- k = 3

    pub fn second_a_phase_poly(&self, side: SideLine, t: f64) -> f64 {
        let (a, b, r) = (side.intercept, side.slope, self.r);
        -self.arc.phase * t.powi(3) * self.cos_beta / 12.0 * (4.0 * a + 3.0 * b * r * t / self.sin_beta)
    }

    pub fn second_a_arcsin(&self, side: SideLine, t: f64) -> f64 {
        let (a, b, r) = (side.intercept, side.slope, self.r);
        -t.powi(3) * self.cos_beta / 12.0 * self.arc.arcsin_term(t) * (4.0 * a + 3.0 * b * r * t / self.sin_beta)
    }

    pub fn second_a_radical(&self, side: SideLine, t: f64) -> f64 {
        let (a, b, r) = (side.intercept, side.slope, self.r);
        let (aa, bb, l1, l2, _) = self.common();
        let (sb, cb) = (self.sin_beta, self.cos_beta);
        let (l1s, l2s) = (l1 * l1, l2 * l2);
        let l1q = l1s * l1s;
        let c = [
            aa * (8.0 * l1q - 2.0 * l1s + 15.0 * l2s - 11.0 * l1s * l2s),
            -bb * l1s * (2.0 * l1s - 5.0 * l2s),
            2.0 * aa * l1q,
        ];
        self.radical.delta1(t) * cb / (24.0 * l1q * l1s)
            * (r * b * poly(&c, t) / sb + 4.0 * a * l1s * (bb * (2.0 * l1s - 3.0 * aa * aa) + aa * l1s * t))
    }

    pub fn second_a_atan1(&self, side: SideLine, t: f64) -> f64 {
        let (a, b, r) = (side.intercept, side.slope, self.r);
        let (aa, bb, l1, l2, _) = self.common();
        let (sb, cb) = (self.sin_beta, self.cos_beta);
        let (l1s, l2s) = (l1 * l1, l2 * l2);
        let c1 = 4.0 * aa * a * l1s * (2.0 * l1s * l1s + 3.0 * l2s - 2.0 * l1s * l2s);
        let c2 = 3.0 * bb * b * r * l2s * (4.0 * l1s * l1s + 5.0 * l2s - 2.0 * l1s * (2.0 + l2s));
        self.atan_omega1(t) * cb / (12.0 * l1.powi(7)) * (c1 + c2 / sb)
    }

    pub fn second_a_atan2(&self, side: SideLine, t: f64) -> f64 {
        let (a, b, r) = (side.intercept, side.slope, self.r);
        let (aa, bb, l1, _, _) = self.common();
        let om = self.radical.atan_xi((1.0 - self.radical.mu1) * l1, aa + bb, t);
        -om * self.cos_beta / 12.0 * (4.0 * a + 3.0 * b * r / self.sin_beta)
    }

    pub fn second_a_atan3(&self, side: SideLine, t: f64) -> f64 {
        let (a, b, r) = (side.intercept, side.slope, self.r);
        let (aa, bb, l1, _, _) = self.common();
        let om = self.radical.atan_xi((1.0 + self.radical.mu1) * l1, aa - bb, t);
        -om * self.cos_beta / 12.0 * (4.0 * a - 3.0 * b * r / self.sin_beta)
    }

    pub fn second_b_poly(&self, side: SideLine, t: f64) -> f64 {
        let (a, b, r) = (side.intercept, side.slope, self.r);
        let (aa, bb, _, _, _) = self.common();
        let (sb, cb) = (self.sin_beta, self.cos_beta);
        let (sf, cf) = self.arc.phase.sin_cos();
        let cos2f = cf * cf - sf * sf;
        let c1 = sb / 8.0 * (4.0 * aa * a * sf - r * (1.0 - cos2f + 2.0 * aa * aa * cos2f));
        let c2 = (r * aa * (cf * cb + b * sf - bb * cos2f * sb) + a * bb * sf * sb) / 3.0;
        let c3 = r / 16.0 * (4.0 * bb * cf * cb + 4.0 * bb * b * sf + sb * (1.0 - (1.0 + 2.0 * bb * bb) * cos2f));
        t * t * poly(&[c1, c2, c3], t)
    }

    pub fn second_b_radical(&self, side: SideLine, t: f64) -> f64 {
        let (a, b, r) = (side.intercept, side.slope, self.r);
        let (aa, bb, l1, _, _) = self.common();
        let (sb, cb) = (self.sin_beta, self.cos_beta);
        let (sf, cf) = self.arc.phase.sin_cos();
        let (aa2, bb2) = (aa * aa, bb * bb);
        let l1s = l1 * l1;
        let l1q = l1s * l1s;
        let l16 = l1q * l1s;
        let c11 = 4.0 * a * l1s * (aa2 * (bb2 - 2.0) + 2.0 * l1s) * cf * sb;
        let c12 = aa * bb * (aa2 * (2.0 * bb2 - 13.0) + 13.0 * l1s) * (cb * sf - b * cf)
            + aa * (8.0 + 3.0 * bb2 - 5.0 * bb2 * bb2 + aa2 * (9.0 * bb2 + 2.0 * bb2 * bb2 - 8.0)) * cf * sf * sb;
        let c21 = -4.0 * aa * a * bb * l1q * cf * sb;
        let c22 = l1s
            * ((aa2 * (2.0 * bb2 - 3.0) + 3.0 * l1s) * (b * cf - cb * sf)
                + bb * (3.0 * l1s - aa2 * (7.0 + 2.0 * bb2)) * cf * sf * sb);
        let c31 = -8.0 * a * l16 * cf * sb;
        let c32 = -2.0 * aa * l1q * (cf * (bb * b + (4.0 + 5.0 * bb2) * sf * sb) - bb * cb * sf);
        let c41 = 0.0;
        let c42 = -6.0 * l16 * ((b + bb * sf * sb) * cf - cb * sf);
        let p = poly(&[c11 + c12 * r, c21 + c22 * r, c31 + c32 * r, c41 + c42 * r], t);
        self.radical.delta1(t) / (24.0 * l16) * p
    }

    pub fn second_b_atan(&self, side: SideLine, t: f64) -> f64 {
        let (a, b, r) = (side.intercept, side.slope, self.r);
        let (aa, bb, l1, l2, _) = self.common();
        let (sb, cb) = (self.sin_beta, self.cos_beta);
        let (sf, cf) = self.arc.phase.sin_cos();
        let (l1s, l2s) = (l1 * l1, l2 * l2);
        let c1 = -4.0 * aa * a * bb * l1s * cf * sb;
        let c2 = bb * (5.0 * l2s - 4.0 * l1s) * cf * sf * sb
            + (4.0 * l1s * l1s + 5.0 * l2s - 4.0 * l1s * (1.0 + l2s)) * (b * cf - cb * sf);
        l2s * self.atan_omega1(t) / (4.0 * l1.powi(7)) * (c1 + c2 * r)
    }

    // ------------------------------------------------------------ assembly

    fn part_unchecked(&self, family: Family, side: SideLine, part: Part, t: f64) -> f64 {
        match (family, part) {
            (Family::First, Part::A) => {
                self.first_a_phase_poly(side, t)
                    + self.first_a_arcsin(side, t)
                    + self.first_a_radical(side, t)
                    + self.first_a_atan1(side, t)
                    + self.first_a_atan2(side, t)
                    + self.first_a_atan3(side, t)
            }
            (Family::First, Part::B) => {
                self.first_b_poly(side, t) + self.first_b_radical(side, t) + self.first_b_atan(side, t)
            }
            (Family::Second, Part::A) => {
                self.second_a_phase_poly(side, t)
                    + self.second_a_arcsin(side, t)
                    + self.second_a_radical(side, t)
                    + self.second_a_atan1(side, t)
                    + self.second_a_atan2(side, t)
                    + self.second_a_atan3(side, t)
            }
            (Family::Second, Part::B) => {
                self.second_b_poly(side, t) + self.second_b_radical(side, t) + self.second_b_atan(side, t)
            }
        }
    }

    /// Value of one part of the primitive at `t` ∈ [μ₁, μ₂].
    pub fn part(&self, family: Family, side: SideLine, part: Part, t: f64) -> Result<f64, PrimitiveError> {
        let t = self.radical.clamp(t)?;
        let v = self.part_unchecked(family, side, part, t);
        if !v.is_finite() {
            return Err(PrimitiveError::Edge(format!("non-finite primitive at t = {t}")));
        }
        Ok(v)
    }

    /// Part A + part B.
    pub fn total(&self, family: Family, side: SideLine, t: f64) -> Result<f64, PrimitiveError> {
        let t = self.radical.clamp(t)?;
        let v = self.part_unchecked(family, side, Part::A, t) + self.part_unchecked(family, side, Part::B, t);
        if !v.is_finite() {
            return Err(PrimitiveError::Edge(format!("non-finite primitive at t = {t}")));
        }
        Ok(v)
    }
}

/// Primitive of integrand index `k` (1..=4), part A or B, at `t` for arc bound `arc`.
pub fn primitive_nonparallel(k: u8, part: Part, t: f64, r: f64, tp: &TrianglePair, arc: ArcParams) -> Result<f64, PrimitiveError> {
    let beta = tp.beta().ok_or_else(|| PrimitiveError::Edge("parallel pair".into()))?;
    let (family, side) = side_for(k, tp);
    NonParallelPrimitive::new(r, beta, arc)?.part(family, side, part, t)
}
