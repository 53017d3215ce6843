//! Čech cocycles for the truncated and classical Atiyah classes and the
//! first Chern classes of a bundle complex, with verifiers for the
//! chain-map property and the Chern class identities.
//!
//! A cochain entry on `Λ` is a matrix in the trivializations of chart
//! `min(Λ)`. Conormal entries are compared modulo `J²`, forms modulo `J`
//! (truncated) or modulo the Jacobian submodule (classical). Entries on
//! chart sets with `X_Λ = ∅` are absent.

mod chern;
mod classical;
mod cochain;
mod theorems;
mod truncated;

pub use chern::{
    build_class_chern1, build_trunc_chern1, rep_combine, rep_eq, ClassChernRep, Combine, Representative, TruncChernRep,
};
pub use classical::{
    build_classical_atiyah, verify_classical_atiyah, verify_classical_atiyah_mod, ClassicalAtiyahRep, ClassicalDegree,
};
pub use cochain::{
    increasing_sequences, retrivialize, Cochain, CochainValue, ConormalCochain, EntryDefect, FormCochain, ValueKind,
};
pub use theorems::{
    check_cofactor_identity, check_det_tensor, check_det_trace, check_thm44, check_thm45, check_thm45_with,
    check_thm46, Thm46Report,
};
pub use truncated::{
    build_truncated_atiyah, verify_truncated_atiyah, ChainMapFailure, ChainMapReport, TruncatedAtiyahRep,
    TruncatedDegree,
};

use crate::complexes::{validate_complex, BundleComplex, ComplexError};
use crate::geometry::GeometryError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AtiyahError {
    #[error("invalid complex: {0}")]
    Invalid(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("complex does not have constant rank")]
    NonConstantRank,
    #[error("matrix size {0} out of range")]
    SizeOutOfRange(usize),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn require_valid(e: &BundleComplex) -> Result<(), AtiyahError> {
    let report = validate_complex(e);
    match report.failures.first() {
        None => Ok(()),
        Some(f) => Err(AtiyahError::Invalid(format!(
            "condition ({}) fails on charts {:?} in degree {} at ({}, {})",
            f.condition, f.charts, f.s, f.row, f.col
        ))),
    }
}

#[cfg(test)]
mod tests;
