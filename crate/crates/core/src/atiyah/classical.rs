use std::collections::BTreeMap;

use super::cochain::FormCochain;
use super::truncated::{truncated_degree, ChainMapReport};
use super::{require_valid, AtiyahError};
use crate::complexes::{sign, BundleComplex};
use crate::geometry::EqualityKind;

/// The two families of the classical Atiyah cocycle on `E^s`.
#[derive(Clone, Debug)]
pub struct ClassicalDegree {
    /// `M_ij·dM̃_ji`, `r = 1`, target `E^s`.
    pub p1: FormCochain,
    /// `(−1)^{s+1} dD̃^s_i`, `r = 0`, target `E^{s+1}`.
    pub p2: FormCochain,
}

/// Forms here stand for elements of `Ω_X`; compare them modulo the
/// Jacobian submodule.
#[derive(Clone, Debug)]
pub struct ClassicalAtiyahRep {
    pub degrees: BTreeMap<i64, ClassicalDegree>,
}

impl ClassicalAtiyahRep {
    pub fn degree(&self, s: i64) -> Option<&ClassicalDegree> {
        self.degrees.get(&s)
    }
}

fn classical_degree(e: &BundleComplex, s: i64) -> Result<ClassicalDegree, AtiyahError> {
    let t = truncated_degree(e, s)?;
    Ok(ClassicalDegree { p1: t.t2, p2: t.t4 })
}

pub fn build_classical_atiyah(e: &BundleComplex) -> Result<ClassicalAtiyahRep, AtiyahError> {
    require_valid(e)?;
    let (smin, smax) = e.degrees();
    let mut degrees = BTreeMap::new();
    for s in smin..=smax + 1 {
        degrees.insert(s, classical_degree(e, s)?);
    }
    Ok(ClassicalAtiyahRep { degrees })
}

pub fn verify_classical_atiyah(e: &BundleComplex, rep: &ClassicalAtiyahRep) -> Result<ChainMapReport, AtiyahError> {
    verify_classical_atiyah_mod(e, rep, EqualityKind::Jacobian)
}

/// Chain-map identities into `E ⊗ C(Ω[1])` with all comparisons made
/// modulo `kind`:
///
/// ```text
/// 1  E^s     ⊗ C^2(Ω)   ξ ď P1          = 0
/// 2  E^{s+1} ⊗ C^1(Ω)   d_E P1 − ξ ď P2 = P1'
/// 3  E^{s+2} ⊗ C^0(Ω)   d_E P2          = P2'
/// ```
///
/// Only `Jacobian` gives the intrinsic statement; `J` compares in
/// `Ω_U|_X` instead.
pub fn verify_classical_atiyah_mod(
    e: &BundleComplex,
    rep: &ClassicalAtiyahRep,
    kind: EqualityKind,
) -> Result<ChainMapReport, AtiyahError> {
    let scheme = e.scheme();
    let (smin, smax) = e.degrees();
    let mut report = ChainMapReport::default();
    let fallback_top = classical_degree(e, smax + 1)?;
    let missing = |s: i64| AtiyahError::Dimension(format!("representative has no families in degree {s}"));
    for s in smin..=smax {
        let xi = sign(s);
        let a = rep.degree(s).ok_or_else(|| missing(s))?;
        let b = match rep.degree(s + 1) {
            Some(b) => b,
            None if s == smax => &fallback_top,
            None => return Err(missing(s + 1)),
        };
        let lhs = a.p1.cech_differential(e)?.scale_int(xi);
        report.record(s, 1, lhs.defects(&FormCochain::zero(e, 2, s, s), scheme, kind)?);

        let lhs = a.p1.then_differential(e).try_add(&a.p2.cech_differential(e)?.scale_int(-xi))?;
        report.record(s, 2, lhs.defects(&b.p1.after_differential(e), scheme, kind)?);

        let lhs = a.p2.then_differential(e);
        report.record(s, 3, lhs.defects(&b.p2.after_differential(e), scheme, kind)?);
    }
    Ok(report)
}
