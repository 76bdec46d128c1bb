mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI, TAU};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polycld::integrand::{b_part_coefficients, f_frak, f_frak_arc, f_k, j_k, psi, ybar, SubstitutionRule};
use polycld::pairframe::{PairGeometry, SideLine, TrianglePair};
use polycld::primitives::{ArcParams, RadicalFrame};
use polycld::quadrature::{gauss_legendre, gauss_legendre_integral};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

#[test]
fn psi_examples() {
    assert!((psi(FRAC_PI_4, FRAC_PI_2, FRAC_PI_2) - 0.5).abs() < 1e-15);
    for &(beta, phi) in &[(0.3, 1.0), (1.7, -0.4), (FRAC_PI_2, 2.5)] {
        assert!(psi(FRAC_PI_2, phi, beta).abs() < 1e-15);
    }
    for &theta in &[0.2, 1.1, 2.9] {
        assert!(psi(theta, 0.0, FRAC_PI_2).abs() < 1e-15);
    }
}

#[test]
fn first_integrand_hand_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut tp = common::random_nonparallel_pair(&mut rng);
    tp.geometry = PairGeometry::NonParallel { beta: FRAC_PI_2 };
    tp.first.left = SideLine { intercept: 1.0, slope: 0.0 };
    let expected = 3f64.sqrt() / 8.0;
    assert!((psi(FRAC_PI_3, FRAC_PI_6, FRAC_PI_2) - expected).abs() < 1e-15);
    assert!((f_k(1, 1.0, FRAC_PI_3, FRAC_PI_6, &tp) - expected).abs() < 1e-15);
}

#[test]
fn landing_ordinate_lies_on_the_chord() {
    // the chord from (x, ȳ, 0) along ω reaches the second plane at distance r
    let (r, theta, phi, beta): (f64, f64, f64, f64) = (1.3, 0.9, 0.4, 1.2);
    let (s, t) = theta.sin_cos();
    let dir = [s * phi.cos(), s * phi.sin(), t];
    let y = ybar(r, theta, phi, beta);
    let end = [0.0, y + r * dir[1], r * dir[2]];
    // second plane contains the x-axis and makes angle β with the first
    let normal = [0.0, -beta.sin(), beta.cos()];
    let height = end[1] * normal[1] + end[2] * normal[2];
    assert!(height.abs() < 1e-14);
}

#[test]
fn j_with_zero_side_is_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut tp = common::random_nonparallel_pair(&mut rng);
    tp.first.left = SideLine { intercept: 0.0, slope: 0.0 };
    let base = j_k(1, 0.8, 0.7, -1.0, &tp);
    for &phi in &[-0.5, 0.3, 2.0, 4.0] {
        assert_eq!(j_k(1, 0.8, 0.7, phi, &tp), base);
        assert_eq!(f_k(1, 0.8, 0.7, phi, &tp), 0.0);
    }
}

#[test]
fn j_derivative_matches_integrand() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let tp = common::random_nonparallel_pair(&mut rng);
        let k = rng.random_range(1..=4u8);
        let r = rng.random_range(0.1..2.0);
        let theta = rng.random_range(0.05..FRAC_PI_2 - 0.05);
        let phi = rng.random_range(-FRAC_PI_2..3.0 * FRAC_PI_2);
        let fd = (j_k(k, r, theta, phi + h, &tp) - j_k(k, r, theta, phi - h, &tp)) / (2.0 * h);
        let f = f_k(k, r, theta, phi, &tp);
        // relative to the integrand's size over the period; pointwise zeros of F leave only roundoff
        let scale = (0..64).map(|i| f_k(k, r, theta, TAU * i as f64 / 64.0, &tp).abs()).fold(0.0, f64::max);
        worst = worst.max((fd - f).abs() / scale);
    }
    assert!(worst < 1e-9, "worst {worst:e}");
}

#[test]
fn j_over_a_period_equals_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let rule = gauss_legendre(40);
    for _ in 0..40 {
        let tp = common::random_nonparallel_pair(&mut rng);
        let k = rng.random_range(1..=4u8);
        let r = rng.random_range(0.1..2.0);
        let theta = rng.random_range(0.05..3.0);
        let phi = rng.random_range(-2.0..2.0);
        let lhs = j_k(k, r, theta, phi + TAU, &tp) - j_k(k, r, theta, phi, &tp);
        let rhs = gauss_legendre_integral(|x| f_k(k, r, theta, x, &tp), 0.0, TAU, &rule);
        assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()), "{lhs} vs {rhs}");
    }
}

#[test]
fn substitution_maps_first_to_second_side() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let tp = common::random_nonparallel_pair(&mut rng);
        let (r, theta, phi) = (rng.random_range(0.1..2.0), rng.random_range(0.0..PI), rng.random_range(-2.0..5.0));
        let s1 = SubstitutionRule::First.apply(&tp);
        let s2 = SubstitutionRule::Second.apply(&tp);
        assert_eq!(f_k(2, r, theta, phi, &tp), f_k(1, r, theta, phi, &s1));
        assert_eq!(f_k(4, r, theta, phi, &tp), f_k(3, r, theta, phi, &s2));
        assert_eq!(j_k(2, r, theta, phi, &tp), j_k(1, r, theta, phi, &s1));
        let back = SubstitutionRule::Both.apply(&SubstitutionRule::Both.apply(&tp));
        assert_eq!(back, tp);
    }
}

/// J in (t, u) form: φ·A + B must reproduce J_k for φ in the right half plane.
#[test]
fn frak_split_reproduces_j() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let tp = common::random_nonparallel_pair(&mut rng);
        let k = rng.random_range(1..=4u8);
        let r = rng.random_range(0.1..2.0);
        let theta = rng.random_range(0.02..FRAC_PI_2);
        let phi: f64 = rng.random_range(-1.5..1.5);
        let (a, b) = f_frak(k, r, theta.cos(), phi.sin(), 1.0, &tp);
        let j = j_k(k, r, theta, phi, &tp);
        assert!((phi * a + b - j).abs() < 1e-12 * (1.0 + j.abs()));
        // left half plane: cos φ negative
        let phi2 = PI - phi;
        let (a2, b2) = f_frak(k, r, theta.cos(), phi2.sin(), -1.0, &tp);
        let j2 = j_k(k, r, theta, phi2, &tp);
        assert!((phi2 * a2 + b2 - j2).abs() < 1e-12 * (1.0 + j2.abs()));
    }
}

fn random_arc<R: Rng>(rng: &mut R) -> (ArcParams, RadicalFrame) {
    loop {
        let arc = ArcParams::new(rng.random_range(-PI..PI), rng.random_range(-1.2..1.2), rng.random_range(-2.0..2.0));
        if let Some(rf) = RadicalFrame::new(arc.a, arc.b) {
            if rf.mu2.min(1.0) - rf.mu1.max(0.0) > 1e-3 {
                return (arc, rf);
            }
        }
    }
}

#[test]
fn b_part_decomposition_matches_direct_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let tp = common::random_nonparallel_pair(&mut rng);
        let (arc, rf) = random_arc(&mut rng);
        let (lo, hi) = (rf.mu1.max(0.0), rf.mu2.min(1.0));
        let t = rng.random_range(lo..hi);
        let k = rng.random_range(1..=4u8);
        let r = rng.random_range(0.1..2.0);
        let (c1, c2) = b_part_coefficients(k, r, t, &tp, &arc).unwrap();
        let (_, direct) = f_frak_arc(k, r, t, &tp, &arc);
        let scale = c1.abs() + (c2 * arc.delta1(t)).abs();
        worst = worst.max((c1 + c2 * arc.delta1(t) - direct).abs() / scale.max(1e-300));
    }
    assert!(worst < 1e-10, "worst {worst:e}");
}

#[test]
fn b_part_outside_the_radical_domain_is_an_error() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let tp = common::random_nonparallel_pair(&mut rng);
    let arc = ArcParams::new(0.3, 0.9, 0.0);
    // 1 − t² − 0.81 < 0 for t > √0.19
    assert!(b_part_coefficients(1, 1.0, 0.9, &tp, &arc).is_err());
    assert!(b_part_coefficients(1, 1.0, 0.1, &tp, &arc).is_ok());
}

fn negated(side: SideLine) -> SideLine {
    SideLine { intercept: -side.intercept, slope: -side.slope }
}

fn flipped(tp: &TrianglePair, k: u8) -> TrianglePair {
    let mut out = *tp;
    match k {
        1 => out.first.left = negated(out.first.left),
        2 => out.first.right = negated(out.first.right),
        3 => out.second.left = negated(out.second.left),
        _ => out.second.right = negated(out.second.right),
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// On 𝒯 the B-part is odd in cos φ and linear in the side coefficients,
    /// so the branch sign can be traded for a sign change of the side.
    #[test]
    fn cos_sign_flip_on_first_triangle(seed in 0u64..100_000, k in 1u8..=2, t in 0.0f64..1.0, u in -1.0f64..1.0, r in 0.1f64..2.0) {
        let tp = common::random_nonparallel_pair(&mut ChaCha8Rng::seed_from_u64(seed));
        let (_, neg) = f_frak(k, r, t, u, -1.0, &tp);
        let (_, pos_flipped) = f_frak(k, r, t, u, 1.0, &flipped(&tp, k));
        prop_assert!((neg - pos_flipped).abs() <= 1e-13 * (1.0 + neg.abs()));
    }

    /// On 𝒯′ only the cos φ-odd share of the B-part changes sign.
    #[test]
    fn cos_sign_flip_on_second_triangle(seed in 0u64..100_000, k in 3u8..=4, t in 0.0f64..1.0, u in -1.0f64..1.0, r in 0.1f64..2.0) {
        let tp = common::random_nonparallel_pair(&mut ChaCha8Rng::seed_from_u64(seed));
        let odd = |tp: &TrianglePair| f_frak(k, r, t, u, 1.0, tp).1 - f_frak(k, r, t, u, -1.0, tp).1;
        let (a, b) = (odd(&tp), odd(&flipped(&tp, k)));
        prop_assert!((a + b).abs() <= 1e-13 * (1.0 + a.abs()));
    }

    #[test]
    fn frak_matches_integrand_under_change_of_variables(seed in 0u64..100_000, k in 1u8..=4, theta in 0.05f64..1.5, phi in -1.5f64..1.5, r in 0.1f64..2.0) {
        let tp = common::random_nonparallel_pair(&mut ChaCha8Rng::seed_from_u64(seed));
        let (a, b) = f_frak(k, r, theta.cos(), phi.sin(), 1.0, &tp);
        let j = j_k(k, r, theta, phi, &tp);
        prop_assert!(rel(phi * a + b, j) < 1e-11 || (phi * a + b - j).abs() < 1e-13);
    }
}
