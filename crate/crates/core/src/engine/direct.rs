//! Two-dimensional quadrature of the raw integrand over (t, φ).
//!
//! The indicator is built directly from the landing conditions and the
//! x-overlap of the two triangles; the φ-reduction is not used. For fixed t
//! the integrand is a trigonometric polynomial between the zeros of the
//! pairwise side differences, which are located in closed form so the inner
//! Gauss–Kronrod rule is exact on every piece.

use std::f64::consts::FRAC_PI_2;

use crate::error::Error;
use crate::pairframe::TrianglePair;
use crate::phidomain::theta_window;
use crate::quadrature::{gk21, integrate_pieces, QuadResult, Tolerance};

use super::{nonparallel_prefactor, sinusoid_roots};

struct Slice {
    r: f64,
    sb: f64,
    cb: f64,
    t: f64,
    s: f64,
}

impl Slice {
    fn integrand(&self, tp: &TrianglePair, phi: f64) -> f64 {
        let (sp, cp) = phi.sin_cos();
        let ybar = self.r * self.cb / self.sb * self.t - self.r * self.s * sp;
        if ybar < tp.first.y_min || ybar > tp.first.y_max {
            return 0.0;
        }
        let ybig = self.r * self.t / self.sb;
        let shift = self.r * self.s * cp;
        let lo = tp.first.left.at(ybar).max(tp.second.left.at(ybig) - shift);
        let hi = tp.first.right.at(ybar).min(tp.second.right.at(ybig) - shift);
        if hi <= lo {
            return 0.0;
        }
        let psi = self.t * (self.sb * self.s * sp - self.cb * self.t);
        psi * (hi - lo)
    }

    fn kinks(&self, tp: &TrianglePair) -> Vec<f64> {
        let (r, s, t) = (self.r, self.s, self.t);
        let cot = self.cb / self.sb;
        let mut out = vec![-FRAC_PI_2, 3.0 * FRAC_PI_2];
        for y in [tp.first.y_min, tp.first.y_max] {
            sinusoid_roots(r * s, 0.0, r * cot * t - y, &mut out);
        }
        let ybig = r * t / self.sb;
        let firsts = [tp.first.left, tp.first.right];
        let seconds = [tp.second.left, tp.second.right];
        // first-family side: p + q r cot t − q r s sinφ
        // second-family side: X(Ȳ) − r s cosφ
        for f in &firsts {
            for g in &seconds {
                let rhs = g.at(ybig) - f.intercept - f.slope * r * cot * t;
                sinusoid_roots(-f.slope * r * s, r * s, rhs, &mut out);
            }
        }
        let dq = firsts[0].slope - firsts[1].slope;
        if dq != 0.0 {
            let rhs = firsts[1].intercept - firsts[0].intercept - dq * r * cot * t;
            sinusoid_roots(-dq * r * s, 0.0, rhs, &mut out);
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    fn inner(&self, tp: &TrianglePair) -> f64 {
        let pts = self.kinks(tp);
        let mut f = |phi: f64| self.integrand(tp, phi);
        pts.windows(2).filter(|w| w[1] > w[0]).map(|w| gk21(&mut f, w[0], w[1]).0).sum()
    }
}

/// Pair contribution by (t, φ) quadrature of the raw integrand.
pub fn g_direct2d(r: f64, tp: &TrianglePair, volume: f64, tol: Tolerance) -> Result<QuadResult, Error> {
    let beta = tp
        .beta()
        .ok_or_else(|| Error::InvalidArgument("direct (t, φ) quadrature needs a non-parallel pair".into()))?;
    let Some((lo, hi)) = theta_window(r, tp) else {
        return Ok(QuadResult::ZERO);
    };
    let (sb, cb) = beta.sin_cos();
    let pre = nonparallel_prefactor(tp, volume);
    let inner = |t: f64| {
        let s = (1.0 - t * t).max(0.0).sqrt();
        Slice { r, sb, cb, t, s }.inner(tp)
    };
    let n = 8;
    let pts: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
    let scaled = Tolerance { abs: tol.abs / pre.abs(), ..tol };
    let mut res = integrate_pieces(inner, &pts, scaled);
    res.value *= pre;
    res.error *= pre.abs();
    Ok(res)
}
