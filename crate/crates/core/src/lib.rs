//! Semi-analytic chord-length distribution γ″(r) of bounded polyhedra.
//!
//! The pipeline: a [`mesh::Polyhedron`] is split into facet pairs, each pair
//! into triangle pairs with one side parallel to the pair's intersection line
//! ([`pairframe`]); the angular integration domain of every triangle pair is
//! reduced to unions of arc-bounded φ-intervals ([`phidomain`]); the resulting
//! integrals are evaluated in closed form ([`primitives`]) or by quadrature
//! ([`engine`]) and checked against Monte Carlo estimators ([`oracle`]).

pub mod engine;
pub mod error;
pub mod export;
pub mod integrand;
pub mod mesh;
pub mod oracle;
pub mod pairframe;
pub mod phidomain;
pub mod primitives;
pub mod quadrature;
pub mod solids;

pub use error::{Error, MeshError, PairError, PrimitiveError};
pub use mesh::{MeshStats, Polyhedron};
