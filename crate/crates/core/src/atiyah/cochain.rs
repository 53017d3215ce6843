use std::collections::BTreeMap;
use std::fmt;

use super::AtiyahError;
use crate::complexes::{BundleComplex, Entry, FractionMatrix, Matrix};
use crate::geometry::{AmbientForm, ChartSet, CoveredScheme, EqualityKind, GeometryError, LocalFraction};

/// What the entries of a cochain represent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueKind {
    /// Elements of `J/J²`, represented by fractions in `J`.
    Conormal,
    /// Elements of `Ω_U|_X` (or `Ω_X`), represented by ambient forms.
    AmbientForm,
}

/// Entry types a cochain can carry.
pub trait CochainValue: Entry + fmt::Display {
    const KIND: ValueKind;
    fn is_zero_mod(&self, scheme: &CoveredScheme, kind: EqualityKind) -> Result<bool, GeometryError>;
    fn normalized_string(&self) -> String;
}

impl CochainValue for LocalFraction {
    const KIND: ValueKind = ValueKind::Conormal;
    fn is_zero_mod(&self, scheme: &CoveredScheme, kind: EqualityKind) -> Result<bool, GeometryError> {
        scheme.is_zero_mod(kind, self)
    }
    fn normalized_string(&self) -> String {
        self.normalized().to_string()
    }
}

impl CochainValue for AmbientForm {
    const KIND: ValueKind = ValueKind::AmbientForm;
    fn is_zero_mod(&self, scheme: &CoveredScheme, kind: EqualityKind) -> Result<bool, GeometryError> {
        scheme.form_is_zero_mod(kind, self)
    }
    fn normalized_string(&self) -> String {
        self.normalized().to_string()
    }
}

/// Strictly increasing index sequences of length `len` drawn from `0..n`.
pub fn increasing_sequences(n: usize, len: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if len > 0 {
        go(0, n, len, &mut Vec::with_capacity(len), &mut out);
    }
    out
}

/// A Čech cochain of degree `r` with values in maps `E^s → E^t ⊗ F`: one
/// `m^t × m^s` matrix per strictly increasing `Λ` of length `r + 1` with
/// `X_Λ ≠ ∅`, written in the trivializations of chart `min(Λ)`.
#[derive(Clone, Debug)]
pub struct Cochain<T> {
    r: usize,
    s: i64,
    t: i64,
    entries: BTreeMap<Vec<usize>, Matrix<T>>,
}

pub type ConormalCochain = Cochain<LocalFraction>;
pub type FormCochain = Cochain<AmbientForm>;

/// One entry where two cochains differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryDefect {
    pub charts: Vec<usize>,
    pub row: usize,
    pub col: usize,
    pub defect: String,
}

impl<T: CochainValue> Cochain<T> {
    /// Calls `f` for every nonempty `Λ` of the right length and checks the
    /// shape of what it returns.
    pub fn build(
        e: &BundleComplex,
        r: usize,
        s: i64,
        t: i64,
        mut f: impl FnMut(&[usize], &ChartSet) -> Result<Matrix<T>, AtiyahError>,
    ) -> Result<Self, AtiyahError> {
        let scheme = e.scheme();
        let mut entries = BTreeMap::new();
        for lam in increasing_sequences(e.ncharts(), r + 1) {
            let chart = e.chart(&lam);
            if scheme.chart_empty(&chart) {
                continue;
            }
            let m = f(&lam, &chart)?;
            let want = (e.rank(lam[0], t), e.rank(lam[0], s));
            if m.shape() != want || m.chart() != &chart {
                return Err(AtiyahError::Dimension(format!(
                    "entry on {lam:?} has shape {:?}, expected {want:?}",
                    m.shape()
                )));
            }
            entries.insert(lam, m);
        }
        Ok(Cochain { r, s, t, entries })
    }

    /// The zero cochain of the given type.
    pub fn zero(e: &BundleComplex, r: usize, s: i64, t: i64) -> Self {
        Self::build(e, r, s, t, |lam, chart| Ok(Matrix::zero(e.rank(lam[0], t), e.rank(lam[0], s), chart)))
            .expect("zero entries have the right shape")
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    pub fn t(&self) -> i64 {
        self.t
    }

    pub fn kind(&self) -> ValueKind {
        T::KIND
    }

    pub fn entries(&self) -> &BTreeMap<Vec<usize>, Matrix<T>> {
        &self.entries
    }

    pub fn get(&self, lam: &[usize]) -> Option<&Matrix<T>> {
        self.entries.get(lam)
    }

    fn check_compatible(&self, other: &Self) -> Result<(), AtiyahError> {
        if (self.r, self.s, self.t) != (other.r, other.s, other.t) {
            return Err(AtiyahError::Dimension(format!(
                "cochain types (r, s, t) = {:?} and {:?} differ",
                (self.r, self.s, self.t),
                (other.r, other.s, other.t)
            )));
        }
        for (lam, m) in &self.entries {
            if let Some(n) = other.entries.get(lam) {
                if m.shape() != n.shape() {
                    return Err(AtiyahError::Dimension(format!("entry shapes differ on {lam:?}")));
                }
            }
        }
        Ok(())
    }

    /// Entrywise sum; an entry missing on one side counts as zero.
    pub fn try_add(&self, other: &Self) -> Result<Self, AtiyahError> {
        self.check_compatible(other)?;
        let mut entries = self.entries.clone();
        for (lam, n) in &other.entries {
            let sum = match entries.get(lam) {
                Some(m) => m.add(n),
                None => n.clone(),
            };
            entries.insert(lam.clone(), sum);
        }
        Ok(Cochain { entries, ..*self })
    }

    pub fn neg(&self) -> Self {
        self.scale_int(-1)
    }

    pub fn scale_int(&self, c: i64) -> Self {
        let entries = self.entries.iter().map(|(k, m)| (k.clone(), m.scale_int(c))).collect();
        Cochain { entries, ..*self }
    }

    /// `d_E ∘ c`: every entry multiplied on the left by `D̃^t_{min Λ}`.
    pub fn then_differential(&self, e: &BundleComplex) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(lam, m)| {
                let d = e.differential(lam[0], self.t).restrict(m.chart()).expect("superset");
                (lam.clone(), d.lmul(m))
            })
            .collect();
        Cochain { t: self.t + 1, entries, ..*self }
    }

    /// `c ∘ d_E`: every entry multiplied on the right by `D̃^{s−1}_{min Λ}`.
    pub fn after_differential(&self, e: &BundleComplex) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(lam, m)| {
                let d = e.differential(lam[0], self.s - 1).restrict(m.chart()).expect("superset");
                (lam.clone(), d.rmul(m))
            })
            .collect();
        Cochain { s: self.s - 1, entries, ..*self }
    }

    /// `(δc)_{Λ'} = Σ_ν (−1)^ν c_{Λ' ∖ λ_ν}`, each face re-trivialized to
    /// `min(Λ')`.
    pub fn cech_differential(&self, e: &BundleComplex) -> Result<Self, AtiyahError> {
        let (s, t) = (self.s, self.t);
        Self::build(e, self.r + 1, s, t, |lam, chart| {
            let mut acc = Matrix::zero(e.rank(lam[0], t), e.rank(lam[0], s), chart);
            for nu in 0..lam.len() {
                let mut face = lam.to_vec();
                face.remove(nu);
                let Some(c) = self.entries.get(&face) else { continue };
                let term = retrivialize(c, &face, lam, e, s, t)?;
                acc = if nu % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            Ok(acc)
        })
    }

    /// Entries where `self − other` is nonzero modulo `kind`.
    pub fn defects(&self, other: &Self, scheme: &CoveredScheme, kind: EqualityKind) -> Result<Vec<EntryDefect>, AtiyahError> {
        self.check_compatible(other)?;
        let mut out = Vec::new();
        let mut keys: Vec<&Vec<usize>> = self.entries.keys().chain(other.entries.keys()).collect();
        keys.sort();
        keys.dedup();
        for lam in keys {
            let diff = match (self.entries.get(lam), other.entries.get(lam)) {
                (Some(a), Some(b)) => a.sub(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.neg(),
                (None, None) => unreachable!(),
            };
            for row in 0..diff.rows() {
                for col in 0..diff.cols() {
                    let v = diff.get(row, col);
                    if !v.is_zero_mod(scheme, kind)? {
                        out.push(EntryDefect { charts: lam.clone(), row, col, defect: v.normalized_string() });
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn equals(&self, other: &Self, scheme: &CoveredScheme, kind: EqualityKind) -> Result<bool, AtiyahError> {
        Ok(self.defects(other, scheme, kind)?.is_empty())
    }
}

impl ConormalCochain {
    /// Entrywise `d : J/J² → Ω_U|_X`.
    pub fn derivative(&self) -> FormCochain {
        let entries = self.entries.iter().map(|(k, m)| (k.clone(), m.derivative())).collect();
        Cochain { r: self.r, s: self.s, t: self.t, entries }
    }

    /// Entrywise trace, a `1 × 1` cochain.
    pub(crate) fn trace(&self) -> ConormalCochain {
        trace_with(self, |m| FractionMatrix::from_vec(1, 1, m.chart(), vec![m.trace()]).expect("one entry"))
    }
}

impl FormCochain {
    pub(crate) fn trace(&self) -> FormCochain {
        trace_with(self, |m| {
            let chart = m.chart();
            let mut acc = AmbientForm::zero(chart);
            for k in 0..m.rows() {
                acc = &acc + m.get(k, k);
            }
            Matrix::from_vec(1, 1, chart, vec![acc]).expect("one entry")
        })
    }
}

fn trace_with<T: CochainValue>(c: &Cochain<T>, f: impl Fn(&Matrix<T>) -> Matrix<T>) -> Cochain<T> {
    let entries = c.entries.iter().map(|(k, m)| (k.clone(), f(m))).collect();
    Cochain { r: c.r, s: 0, t: 0, entries }
}

/// Moves an entry given on `lam` in the trivializations of `min(lam)` to
/// `target ⊇ lam` in those of `min(target)`: `M^t_{im}·c·M^s_{mi}` with
/// `m = min(lam)`, `i = min(target)`.
pub fn retrivialize<T: CochainValue>(
    c: &Matrix<T>,
    lam: &[usize],
    target: &[usize],
    e: &BundleComplex,
    s: i64,
    t: i64,
) -> Result<Matrix<T>, AtiyahError> {
    if !lam.iter().all(|i| target.contains(i)) {
        return Err(GeometryError::NotSuperset.into());
    }
    let chart = e.chart(target);
    let c = c.restrict(&chart)?;
    let (m, i) = (lam[0], target[0]);
    if m == i {
        return Ok(c);
    }
    let left = e.transition(i, m, t).restrict(&chart)?;
    let right = e.transition(m, i, s).restrict(&chart)?;
    Ok(right.rmul(&left.lmul(&c)))
}
