//! Arc bounds φ(t) = phase + arcsin((a + b t)/√(1 − t²)) and the radicals
//! Δ = √(1 − t²), Δ₁ = √(1 − t² − (a + b t)²).

use serde::Serialize;

use crate::error::PrimitiveError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcParams {
    pub phase: f64,
    pub a: f64,
    pub b: f64,
}

impl ArcParams {
    pub fn new(phase: f64, a: f64, b: f64) -> ArcParams {
        ArcParams { phase, a, b }
    }

    /// Δ₁ from the factored quadratic, so it vanishes exactly at the computed
    /// roots; zero outside them.
    pub fn delta1(&self, t: f64) -> f64 {
        match tangency_roots(self.a, self.b) {
            Some((m1, m2)) => ((1.0 + self.b * self.b) * (t - m1).max(0.0) * (m2 - t).max(0.0)).sqrt(),
            None => 0.0,
        }
    }

    /// arcsin((a + b t)/Δ) with the argument clamped to [-1, 1].
    pub fn arcsin_term(&self, t: f64) -> f64 {
        // sin = w/Δ, cos = Δ₁/Δ ≥ 0
        (self.a + self.b * t).atan2(self.delta1(t))
    }

    pub fn value(&self, t: f64) -> f64 {
        self.phase + self.arcsin_term(t)
    }

    /// (sin φ(t), cos φ(t)) with the true sign of the cosine.
    pub fn sin_cos(&self, t: f64) -> (f64, f64) {
        let delta = (1.0 - t * t).max(0.0).sqrt();
        let w = self.a + self.b * t;
        let d1 = self.delta1(t);
        if delta < 1e-8 {
            return self.value(t).sin_cos();
        }
        let (sf, cf) = self.phase.sin_cos();
        ((d1 * sf + w * cf) / delta, (d1 * cf - w * sf) / delta)
    }

    pub fn shifted(&self, dphase: f64) -> ArcParams {
        ArcParams { phase: self.phase + dphase, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ArcForm {
    /// phase + arcsin(w)
    Plus,
    /// π + phase − arcsin(w)
    Minus,
}

/// An arc bound in either printed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcBound {
    pub form: ArcForm,
    pub phase: f64,
    pub a: f64,
    pub b: f64,
}

impl ArcBound {
    /// Equivalent `Plus` parameters: π + f − arcsin(w) = (f + π) + arcsin(−w).
    pub fn to_params(&self) -> ArcParams {
        match self.form {
            ArcForm::Plus => ArcParams::new(self.phase, self.a, self.b),
            ArcForm::Minus => ArcParams::new(self.phase + std::f64::consts::PI, -self.a, -self.b),
        }
    }

    /// Value with |w| > 1 clamped to ±1.
    pub fn value(&self, t: f64) -> f64 {
        self.to_params().value(t)
    }
}

/// Roots and scales of the quadratic Δ₁² = (1 − a²) − 2ab t − (1 + b²) t².
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadicalFrame {
    pub a: f64,
    pub b: f64,
    /// Λ₁ = √(1 + b²)
    pub lambda1: f64,
    /// Λ₂ = √(1 − a² + b²)
    pub lambda2: f64,
    pub mu1: f64,
    pub mu2: f64,
}

/// Roots of (1 + b²) t² + 2ab t − (1 − a²) = 0, ascending, or None when the
/// discriminant 1 − a² + b² is not positive.
pub fn tangency_roots(a: f64, b: f64) -> Option<(f64, f64)> {
    let l2sq = 1.0 - a * a + b * b;
    if !(l2sq > 0.0) {
        return None;
    }
    let l2 = l2sq.sqrt();
    let l1sq = 1.0 + b * b;
    let ab = a * b;
    // stable quadratic formula
    let q = -(ab + if ab >= 0.0 { l2 } else { -l2 });
    let (r1, r2) = if q != 0.0 { (q / l1sq, -(1.0 - a * a) / q) } else { (-l2 / l1sq, l2 / l1sq) };
    Some(if r1 <= r2 { (r1, r2) } else { (r2, r1) })
}

impl RadicalFrame {
    pub fn new(a: f64, b: f64) -> Option<RadicalFrame> {
        let (mu1, mu2) = tangency_roots(a, b)?;
        Some(RadicalFrame {
            a,
            b,
            lambda1: (1.0 + b * b).sqrt(),
            lambda2: (1.0 - a * a + b * b).sqrt(),
            mu1,
            mu2,
        })
    }

    pub fn from_arc(arc: &ArcParams) -> Option<RadicalFrame> {
        RadicalFrame::new(arc.a, arc.b)
    }

    pub fn delta(t: f64) -> f64 {
        (1.0 - t * t).max(0.0).sqrt()
    }

    /// Δ₁ in factored form Λ₁ √((t − μ₁)(μ₂ − t)), accurate near the roots.
    pub fn delta1(&self, t: f64) -> f64 {
        self.lambda1 * ((t - self.mu1).max(0.0) * (self.mu2 - t).max(0.0)).sqrt()
    }

    /// Snap `t` into [μ₁, μ₂] when it lies within rounding distance.
    pub fn clamp(&self, t: f64) -> Result<f64, PrimitiveError> {
        let slack = 1e-9 * (self.mu2 - self.mu1) + 1e-14;
        if t < self.mu1 - slack || t > self.mu2 + slack {
            return Err(PrimitiveError::Domain { t, mu1: self.mu1, mu2: self.mu2 });
        }
        Ok(t.clamp(self.mu1, self.mu2))
    }

    /// arctan(c·ξ) with ξ = √((μ₂ − t)/(t − μ₁)) and c = num/den, evaluated
    /// as a two-argument arctangent so it stays finite at both roots.
    pub fn atan_xi(&self, num: f64, den: f64, t: f64) -> f64 {
        let s = if (num < 0.0) != (den < 0.0) { -1.0 } else { 1.0 };
        let y = num.abs() * (self.mu2 - t).max(0.0).sqrt();
        let x = den.abs() * (t - self.mu1).max(0.0).sqrt();
        if y == 0.0 && x == 0.0 {
            return 0.0;
        }
        s * y.atan2(x)
    }
}
