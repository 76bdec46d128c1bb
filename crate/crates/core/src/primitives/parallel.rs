//! φ-primitives for parallel facets.
//!
//! The integrand 𝒜 + ℬ cos φ + 𝒞 sin φ + 𝒟 y is integrated in y, then the
//! y-antiderivative is evaluated at a bound y(φ) and integrated in φ.

use serde::Serialize;

/// Coefficients of 𝒜 + ℬ cos φ + 𝒞 sin φ + 𝒟 y.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ParallelCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// Bound form: y = 𝔠 + 𝔡 sin φ.
pub fn primitive_parallel(phi: f64, k: ParallelCoeffs, bound_c: f64, bound_d: f64) -> f64 {
    let (a, b, c, d) = (k.a, k.b, k.c, k.d);
    let (cc, dd) = (bound_c, bound_d);
    (4.0 * a * cc + 2.0 * d * cc * cc + 2.0 * c * dd + d * dd * dd) / 4.0 * phi + b * cc * phi.sin()
        - dd * (2.0 * c + d * dd) / 8.0 * (2.0 * phi).sin()
        - (c * cc + (a + d * cc) * dd) * phi.cos()
        - b * dd / 4.0 * (2.0 * phi).cos()
}

/// Trigonometric polynomial of degree ≤ 2:
/// k0 + k1c·cos φ + k1s·sin φ + k2c·cos 2φ + k2s·sin 2φ.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct TrigPoly {
    pub k0: f64,
    pub k1c: f64,
    pub k1s: f64,
    pub k2c: f64,
    pub k2s: f64,
}

impl TrigPoly {
    /// First-degree polynomial k0 + kc cos φ + ks sin φ.
    pub fn linear(k0: f64, kc: f64, ks: f64) -> TrigPoly {
        TrigPoly { k0, k1c: kc, k1s: ks, ..Default::default() }
    }

    pub fn add(&self, o: &TrigPoly) -> TrigPoly {
        TrigPoly {
            k0: self.k0 + o.k0,
            k1c: self.k1c + o.k1c,
            k1s: self.k1s + o.k1s,
            k2c: self.k2c + o.k2c,
            k2s: self.k2s + o.k2s,
        }
    }

    pub fn scale(&self, s: f64) -> TrigPoly {
        TrigPoly {
            k0: self.k0 * s,
            k1c: self.k1c * s,
            k1s: self.k1s * s,
            k2c: self.k2c * s,
            k2s: self.k2s * s,
        }
    }

    /// Product of two first-degree polynomials.
    pub fn mul_linear(&self, o: &TrigPoly) -> TrigPoly {
        debug_assert!(self.k2c == 0.0 && self.k2s == 0.0 && o.k2c == 0.0 && o.k2s == 0.0);
        // cos² = (1 + cos2)/2, sin² = (1 − cos2)/2, sin·cos = sin2/2
        let cc = self.k1c * o.k1c;
        let ss = self.k1s * o.k1s;
        let sc = self.k1s * o.k1c + self.k1c * o.k1s;
        TrigPoly {
            k0: self.k0 * o.k0 + 0.5 * (cc + ss),
            k1c: self.k0 * o.k1c + self.k1c * o.k0,
            k1s: self.k0 * o.k1s + self.k1s * o.k0,
            k2c: 0.5 * (cc - ss),
            k2s: 0.5 * sc,
        }
    }

    pub fn eval(&self, phi: f64) -> f64 {
        let (s1, c1) = phi.sin_cos();
        let (s2, c2) = (2.0 * phi).sin_cos();
        self.k0 + self.k1c * c1 + self.k1s * s1 + self.k2c * c2 + self.k2s * s2
    }

    /// Antiderivative with zero integration constant.
    pub fn integral(&self, phi: f64) -> f64 {
        let (s1, c1) = phi.sin_cos();
        let (s2, c2) = (2.0 * phi).sin_cos();
        self.k0 * phi + self.k1c * s1 - self.k1s * c1 + 0.5 * (self.k2c * s2 - self.k2s * c2)
    }
}

/// y-antiderivative L(φ)·y + 𝒟y²/2 composed with y = 𝔠 + 𝔡 sin φ + 𝔢 cos φ.
pub fn composed_antiderivative(k: ParallelCoeffs, bound: TrigPoly) -> TrigPoly {
    let l = TrigPoly::linear(k.a, k.b, k.c);
    l.mul_linear(&bound).add(&bound.mul_linear(&bound).scale(0.5 * k.d))
}

/// Generalised form: bound y = 𝔠 + 𝔡 sin φ + 𝔢 cos φ.
pub fn primitive_parallel_general(phi: f64, k: ParallelCoeffs, bound_c: f64, bound_d: f64, bound_e: f64) -> f64 {
    composed_antiderivative(k, TrigPoly::linear(bound_c, bound_e, bound_d)).integral(phi)
}
