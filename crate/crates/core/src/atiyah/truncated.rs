use std::collections::BTreeMap;

use super::cochain::{ConormalCochain, EntryDefect, FormCochain};
use super::{require_valid, AtiyahError};
use crate::complexes::{sign, BundleComplex, FractionMatrix};
use crate::geometry::EqualityKind;

/// The five families of the truncated Atiyah cocycle on `E^s`.
#[derive(Clone, Debug)]
pub struct TruncatedDegree {
    /// `r = 2`, conormal, target `E^s`.
    pub t1: ConormalCochain,
    /// `r = 1`, forms, target `E^s`.
    pub t2: FormCochain,
    /// `r = 1`, conormal, target `E^{s+1}`.
    pub t3: ConormalCochain,
    /// `r = 0`, forms, target `E^{s+1}`.
    pub t4: FormCochain,
    /// `r = 0`, conormal, target `E^{s+2}`.
    pub t5: ConormalCochain,
}

#[derive(Clone, Debug)]
pub struct TruncatedAtiyahRep {
    pub degrees: BTreeMap<i64, TruncatedDegree>,
}

impl TruncatedAtiyahRep {
    pub fn degree(&self, s: i64) -> Option<&TruncatedDegree> {
        self.degrees.get(&s)
    }
}

fn t_ij(e: &BundleComplex, i: usize, j: usize, s: i64) -> FractionMatrix {
    e.transition(i, j, s).restrict(&e.chart(&[i, j])).expect("superset")
}

/// Builds the five families for each `s` in the degree range of `E`, plus
/// the zero-width degree right above it.
pub(crate) fn truncated_families(e: &BundleComplex) -> Result<TruncatedAtiyahRep, AtiyahError> {
    let (smin, smax) = e.degrees();
    let mut degrees = BTreeMap::new();
    for s in smin..=smax + 1 {
        degrees.insert(s, truncated_degree(e, s)?);
    }
    Ok(TruncatedAtiyahRep { degrees })
}

pub(crate) fn truncated_degree(e: &BundleComplex, s: i64) -> Result<TruncatedDegree, AtiyahError> {
    let xi = sign(s);
    // M_ik(M̃_kj·M̃_ji − M̃_ki) on (i, j, k).
    let t1 = ConormalCochain::build(e, 2, s, s, |lam, chart| {
        let (i, j, k) = (lam[0], lam[1], lam[2]);
        let at = |a, b| e.transition(a, b, s).restrict(chart).map_err(AtiyahError::from);
        let inner = at(k, j)?.mul(&at(j, i)?).sub(&at(k, i)?);
        Ok(at(i, k)?.mul(&inner))
    })?;
    // M_ij·dM̃_ji on (i, j).
    let t2 = FormCochain::build(e, 1, s, s, |lam, _| {
        let (i, j) = (lam[0], lam[1]);
        Ok(t_ij(e, i, j, s).lmul(&t_ij(e, j, i, s).derivative()))
    })?;
    // (−1)^{s+1} M^{s+1}_ij(M̃^{s+1}_ji·D̃^s_i − D̃^s_j·M̃^s_ji) on (i, j).
    let t3 = ConormalCochain::build(e, 1, s, s + 1, |lam, chart| {
        let (i, j) = (lam[0], lam[1]);
        let d_i = e.differential(i, s).restrict(chart)?;
        let d_j = e.differential(j, s).restrict(chart)?;
        let inner = t_ij(e, j, i, s + 1).mul(&d_i).sub(&d_j.mul(&t_ij(e, j, i, s)));
        Ok(t_ij(e, i, j, s + 1).mul(&inner).scale_int(-xi))
    })?;
    // (−1)^{s+1} dD̃^s_i.
    let t4 = FormCochain::build(e, 0, s, s + 1, |lam, _| Ok(e.differential(lam[0], s).derivative().scale_int(-xi)))?;
    // −D̃^{s+1}_i·D̃^s_i.
    let t5 = ConormalCochain::build(e, 0, s, s + 2, |lam, _| {
        let i = lam[0];
        Ok(e.differential(i, s + 1).mul(&e.differential(i, s)).neg())
    })?;
    Ok(TruncatedDegree { t1, t2, t3, t4, t5 })
}

/// The truncated Atiyah cocycle of a valid complex.
pub fn build_truncated_atiyah(e: &BundleComplex) -> Result<TruncatedAtiyahRep, AtiyahError> {
    require_valid(e)?;
    truncated_families(e)
}

/// A summand identity that fails at one entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMapFailure {
    pub s: i64,
    /// 1-based index of the target summand.
    pub summand: usize,
    pub charts: Vec<usize>,
    pub row: usize,
    pub col: usize,
    pub defect: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChainMapReport {
    /// Number of `(s, summand)` identities evaluated.
    pub checked: usize,
    pub failures: Vec<ChainMapFailure>,
}

impl ChainMapReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub(crate) fn record(&mut self, s: i64, summand: usize, defects: Vec<EntryDefect>) {
        self.checked += 1;
        self.failures.extend(defects.into_iter().map(|d| ChainMapFailure {
            s,
            summand,
            charts: d.charts,
            row: d.row,
            col: d.col,
            defect: d.defect,
        }));
    }
}

fn missing(s: i64) -> AtiyahError {
    AtiyahError::Dimension(format!("representative has no families in degree {s}"))
}

/// Compares `rep(s+1) ∘ d_E` with the differential of `E ⊗ C(L_X[1])`
/// applied to `rep(s)`, summand by summand, for each `s` of `E`. Conormal
/// summands are compared modulo `J²`, form summands modulo `J`.
///
/// With `ξ = (−1)^s` the seven target summands are
///
/// ```text
/// 1  E^s     ⊗ C^3(J/J²)   ξ ď T1
/// 2  E^s     ⊗ C^2(Ω)     −ξ d T1 + ξ ď T2
/// 3  E^{s+1} ⊗ C^2(J/J²)   d_E T1 − ξ ď T3
/// 4  E^{s+1} ⊗ C^1(Ω)      d_E T2 − ξ d T3 − ξ ď T4
/// 5  E^{s+2} ⊗ C^1(J/J²)   d_E T3 + ξ ď T5
/// 6  E^{s+2} ⊗ C^0(Ω)      d_E T4 − ξ d T5
/// 7  E^{s+3} ⊗ C^0(J/J²)   d_E T5
/// ```
///
/// against `0, 0, T1', T2', T3', T4', T5'` where `T' = rep(s+1) ∘ d_E`.
pub fn verify_truncated_atiyah(e: &BundleComplex, rep: &TruncatedAtiyahRep) -> Result<ChainMapReport, AtiyahError> {
    let scheme = e.scheme();
    let (smin, smax) = e.degrees();
    let mut report = ChainMapReport::default();
    let fallback_top = truncated_degree(e, smax + 1)?;
    for s in smin..=smax {
        let xi = sign(s);
        let a = rep.degree(s).ok_or_else(|| missing(s))?;
        let b = match rep.degree(s + 1) {
            Some(b) => b,
            None if s == smax => &fallback_top,
            None => return Err(missing(s + 1)),
        };
        let jj = EqualityKind::JSquared;
        let j = EqualityKind::J;

        let lhs = a.t1.cech_differential(e)?.scale_int(xi);
        let rhs = ConormalCochain::zero(e, 3, s, s);
        report.record(s, 1, lhs.defects(&rhs, scheme, jj)?);

        let lhs = a.t1.derivative().scale_int(-xi).try_add(&a.t2.cech_differential(e)?.scale_int(xi))?;
        let rhs = FormCochain::zero(e, 2, s, s);
        report.record(s, 2, lhs.defects(&rhs, scheme, j)?);

        let lhs = a.t1.then_differential(e).try_add(&a.t3.cech_differential(e)?.scale_int(-xi))?;
        let rhs = b.t1.after_differential(e);
        report.record(s, 3, lhs.defects(&rhs, scheme, jj)?);

        let lhs = a
            .t2
            .then_differential(e)
            .try_add(&a.t3.derivative().scale_int(-xi))?
            .try_add(&a.t4.cech_differential(e)?.scale_int(-xi))?;
        let rhs = b.t2.after_differential(e);
        report.record(s, 4, lhs.defects(&rhs, scheme, j)?);

        let lhs = a.t3.then_differential(e).try_add(&a.t5.cech_differential(e)?.scale_int(xi))?;
        let rhs = b.t3.after_differential(e);
        report.record(s, 5, lhs.defects(&rhs, scheme, jj)?);

        let lhs = a.t4.then_differential(e).try_add(&a.t5.derivative().scale_int(-xi))?;
        let rhs = b.t4.after_differential(e);
        report.record(s, 6, lhs.defects(&rhs, scheme, j)?);

        let lhs = a.t5.then_differential(e);
        let rhs = b.t5.after_differential(e);
        report.record(s, 7, lhs.defects(&rhs, scheme, jj)?);
    }
    Ok(report)
}
