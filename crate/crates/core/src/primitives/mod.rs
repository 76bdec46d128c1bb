//! Closed-form t- and φ-primitives.
//!
//! Non-parallel pairs: antiderivatives in t = cosθ of φ(t)·𝔉_A(t) + 𝔉_B(t)
//! where φ(t) is an arc bound ([`arcbound`]) or a constant ([`constphi`]).
//! Parallel pairs: φ-antiderivatives of a linear-in-y integrand integrated
//! between trigonometric y-bounds ([`parallel`]).

pub mod arcbound;
pub mod constphi;
pub mod parallel;
pub mod radical;

pub use arcbound::{primitive_nonparallel, NonParallelPrimitive, Part};
pub use constphi::{const_phi_primitive, primitive_const_phi};
pub use parallel::{composed_antiderivative, primitive_parallel, primitive_parallel_general, ParallelCoeffs, TrigPoly};
pub use radical::{ArcBound, ArcForm, ArcParams, RadicalFrame};

use crate::pairframe::{SideLine, TrianglePair};

/// Which side line an integrand index k ∈ {1, 2, 3, 4} refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// k = 1, 2: sides of 𝒯 evaluated at ȳ.
    First,
    /// k = 3, 4: sides of 𝒯′ evaluated at Ȳ.
    Second,
}

/// Family and side line for integrand index k; k = 2, 4 are the capital
/// (right-side) substitutions of k = 1, 3.
pub fn side_for(k: u8, tp: &TrianglePair) -> (Family, SideLine) {
    match k {
        1 => (Family::First, tp.first.left),
        2 => (Family::First, tp.first.right),
        3 => (Family::Second, tp.second.left),
        4 => (Family::Second, tp.second.right),
        _ => panic!("integrand index must be 1..=4, got {k}"),
    }
}
