//! Exact Čech-cocycle computations for truncated Atiyah classes and first
//! truncated Chern classes of bounded complexes of vector bundles on affine
//! schemes over the rationals.
//!
//! The crate is layered bottom-up:
//!
//! - [`ring`]: polynomials with rational coefficients.
//! - [`groebner`]: Buchberger for ideals and submodules, elimination,
//!   saturation.
//! - [`geometry`]: subschemes of affine space with a distinguished-open cover,
//!   and decidable element types for localized rings, conormal modules and
//!   differential forms.
//! - [`complexes`]: bundle complexes given by transition and differential
//!   lifts, with dual, sum, tensor, Hom and determinant constructions.
//! - [`atiyah`]: Čech cochains, the Atiyah and Chern cocycle builders and
//!   their verifiers.
//! - [`corpus`]: bundled example schemes and seeded random valid complexes.

pub mod atiyah;
pub mod complexes;
pub mod corpus;
pub mod geometry;
pub mod groebner;
pub mod ring;
