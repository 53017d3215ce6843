//! Bounded complexes of vector bundles presented by chart data: ranks
//! `m_i^s`, lifted transition matrices `M̃_ij^s` on `X_ij` and lifted
//! differentials `D̃_i^s` on `X_i`, all in fixed local trivializations.
//!
//! `M̃_ij^s` is `m_i^s × m_j^s` and converts `j`-coordinates into
//! `i`-coordinates, so the cocycle condition reads `M_kj·M_ji = M_ki`.
//! Lifts for both orientations of every pair are part of the input; inverses
//! are never computed by division.

mod constructions;
mod matrix;

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::geometry::{ChartSet, CoveredScheme, EqualityKind, GeometryError, LocalFraction};

pub use constructions::{
    component_bundle, det_complex, det_complex_with, direct_sum, dual_complex, dual_complex_with, hom_complex,
    line_power, refined_inverse, tensor_complex, LiftPolicy,
};
pub use matrix::{Entry, FormMatrix, FractionMatrix, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("missing transition lift {i}->{j} in degree {s}")]
    MissingTransition { i: usize, j: usize, s: i64 },
    #[error("complexes live on different covered schemes")]
    CoverMismatch,
    #[error("input complex is invalid: {0}")]
    Invalid(String),
    #[error("complex does not have constant rank")]
    NonConstantRank,
    #[error("not a line bundle: {0}")]
    NotALineBundle(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone)]
pub struct BundleComplex {
    scheme: Arc<CoveredScheme>,
    smin: i64,
    smax: i64,
    /// `ranks[i][s - smin]`.
    ranks: Vec<Vec<usize>>,
    transitions: HashMap<(usize, usize, i64), FractionMatrix>,
    differentials: HashMap<(usize, i64), FractionMatrix>,
}

impl fmt::Debug for BundleComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BundleComplex").field("degrees", &(self.smin, self.smax)).field("ranks", &self.ranks).finish()
    }
}

impl BundleComplex {
    /// Checks shapes and chart sets. Every ordered pair `i ≠ j` needs a
    /// transition in every degree; a missing differential is zero.
    pub fn new(
        scheme: Arc<CoveredScheme>,
        degrees: (i64, i64),
        ranks: Vec<Vec<usize>>,
        transitions: HashMap<(usize, usize, i64), FractionMatrix>,
        mut differentials: HashMap<(usize, i64), FractionMatrix>,
    ) -> Result<Self, ComplexError> {
        let (smin, smax) = degrees;
        if smin > smax {
            return Err(ComplexError::Dimension(format!("empty degree range [{smin}, {smax}]")));
        }
        let r = scheme.ncharts();
        let width = (smax - smin + 1) as usize;
        if ranks.len() != r || ranks.iter().any(|row| row.len() != width) {
            return Err(ComplexError::Dimension("rank table must be charts × degrees".into()));
        }
        let rank = |i: usize, s: i64| if (smin..=smax).contains(&s) { ranks[i][(s - smin) as usize] } else { 0 };
        for &(i, j, s) in transitions.keys() {
            if i >= r || j >= r || i == j || !(smin..=smax).contains(&s) {
                return Err(ComplexError::Dimension(format!("unexpected transition {i}->{j}@{s}")));
            }
        }
        for i in 0..r {
            for j in 0..r {
                if i == j {
                    continue;
                }
                let chart = scheme.chart_set(&[i, j])?;
                for s in smin..=smax {
                    let m = transitions.get(&(i, j, s)).ok_or(ComplexError::MissingTransition { i, j, s })?;
                    if m.shape() != (rank(i, s), rank(j, s)) {
                        return Err(ComplexError::Dimension(format!(
                            "transition {i}->{j}@{s} is {}x{}, expected {}x{}",
                            m.rows(),
                            m.cols(),
                            rank(i, s),
                            rank(j, s)
                        )));
                    }
                    if *m.chart() != chart {
                        return Err(ComplexError::Geometry(GeometryError::ChartMismatch));
                    }
                    if rank(i, s) != rank(j, s) && !scheme.chart_empty(&chart) {
                        return Err(ComplexError::Dimension(format!(
                            "ranks of charts {i} and {j} differ in degree {s} on a nonempty overlap"
                        )));
                    }
                }
            }
        }
        for &(i, s) in differentials.keys() {
            if i >= r || !(smin..=smax).contains(&s) {
                return Err(ComplexError::Dimension(format!("unexpected differential {i}@{s}")));
            }
        }
        for i in 0..r {
            let chart = scheme.chart_set(&[i])?;
            for s in smin..=smax {
                let shape = (rank(i, s + 1), rank(i, s));
                match differentials.get(&(i, s)) {
                    Some(d) => {
                        if d.shape() != shape {
                            return Err(ComplexError::Dimension(format!(
                                "differential {i}@{s} is {}x{}, expected {}x{}",
                                d.rows(),
                                d.cols(),
                                shape.0,
                                shape.1
                            )));
                        }
                        if *d.chart() != chart {
                            return Err(ComplexError::Geometry(GeometryError::ChartMismatch));
                        }
                    }
                    None => {
                        differentials.insert((i, s), FractionMatrix::zero(shape.0, shape.1, &chart));
                    }
                }
            }
        }
        Ok(BundleComplex { scheme, smin, smax, ranks, transitions, differentials })
    }

    pub fn scheme(&self) -> &Arc<CoveredScheme> {
        &self.scheme
    }

    pub fn degrees(&self) -> (i64, i64) {
        (self.smin, self.smax)
    }

    pub fn ncharts(&self) -> usize {
        self.scheme.ncharts()
    }

    pub fn rank(&self, i: usize, s: i64) -> usize {
        if (self.smin..=self.smax).contains(&s) {
            self.ranks[i][(s - self.smin) as usize]
        } else {
            0
        }
    }

    pub fn chart(&self, indices: &[usize]) -> ChartSet {
        self.scheme.chart_set(indices).expect("indices in range")
    }

    /// `M̃_ij^s`; the identity for `i = j`, empty outside the degree range.
    pub fn transition(&self, i: usize, j: usize, s: i64) -> Cow<'_, FractionMatrix> {
        if i == j {
            return Cow::Owned(FractionMatrix::identity(self.rank(i, s), &self.chart(&[i])));
        }
        match self.transitions.get(&(i, j, s)) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(FractionMatrix::zero(0, 0, &self.chart(&[i, j]))),
        }
    }

    /// `D̃_i^s : rank(i, s) → rank(i, s+1)`; zero outside the degree range.
    pub fn differential(&self, i: usize, s: i64) -> Cow<'_, FractionMatrix> {
        match self.differentials.get(&(i, s)) {
            Some(d) => Cow::Borrowed(d),
            None => Cow::Owned(FractionMatrix::zero(self.rank(i, s + 1), self.rank(i, s), &self.chart(&[i]))),
        }
    }

    /// Whether all differentials are zero as representatives.
    pub fn has_zero_differentials(&self) -> bool {
        self.differentials.values().all(FractionMatrix::is_zero_repr)
    }

    /// Replace one transition lift, keeping shapes.
    pub fn with_transition(&self, i: usize, j: usize, s: i64, m: FractionMatrix) -> Result<Self, ComplexError> {
        let mut t = self.transitions.clone();
        t.insert((i, j, s), m);
        Self::new(self.scheme.clone(), self.degrees(), self.ranks.clone(), t, self.differentials.clone())
    }

    /// Replace one differential lift, keeping shapes.
    pub fn with_differential(&self, i: usize, s: i64, d: FractionMatrix) -> Result<Self, ComplexError> {
        let mut ds = self.differentials.clone();
        ds.insert((i, s), d);
        Self::new(self.scheme.clone(), self.degrees(), self.ranks.clone(), self.transitions.clone(), ds)
    }

    pub fn ranks_table(&self) -> &[Vec<usize>] {
        &self.ranks
    }
}

/// A complex concentrated in degree 0 with every rank 1 and zero
/// differential.
#[derive(Clone, Debug)]
pub struct LineBundle(BundleComplex);

impl LineBundle {
    pub fn new(e: BundleComplex) -> Result<Self, ComplexError> {
        if e.degrees() != (0, 0) {
            return Err(ComplexError::NotALineBundle("not concentrated in degree 0".into()));
        }
        if e.ranks.iter().any(|r| r[0] != 1) {
            return Err(ComplexError::NotALineBundle("rank is not 1 on every chart".into()));
        }
        Ok(LineBundle(e))
    }

    /// Line bundle from scalar lifts `M̃_ij` for all ordered pairs `i ≠ j`.
    pub fn from_lifts(scheme: &Arc<CoveredScheme>, lifts: HashMap<(usize, usize), LocalFraction>) -> Result<Self, ComplexError> {
        let r = scheme.ncharts();
        let transitions = lifts
            .into_iter()
            .map(|((i, j), a)| {
                let chart = a.chart().clone();
                Ok(((i, j, 0), FractionMatrix::from_vec(1, 1, &chart, vec![a])?))
            })
            .collect::<Result<HashMap<_, _>, GeometryError>>()?;
        Self::new(BundleComplex::new(scheme.clone(), (0, 0), vec![vec![1]; r], transitions, HashMap::new())?)
    }

    pub fn complex(&self) -> &BundleComplex {
        &self.0
    }

    pub fn into_complex(self) -> BundleComplex {
        self.0
    }

    pub fn lift(&self, i: usize, j: usize) -> LocalFraction {
        self.0.transition(i, j, 0).get(0, 0).clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    /// `M̃_ij·M̃_ji ≡ 1` on `X_ij`.
    A,
    /// `M̃_kj·M̃_ji ≡ M̃_ki` on `X_ijk`.
    B,
    /// `D̃_i^{s+1}·D̃_i^s ≡ 0` on `X_i`.
    C,
    /// `M̃_ji^{s+1}·D̃_i^s ≡ D̃_j^s·M̃_ji^s` on `X_ij`.
    D,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::A => "a",
            Condition::B => "b",
            Condition::C => "c",
            Condition::D => "d",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationFailure {
    pub condition: Condition,
    /// Chart indices in the order the condition names them (`i, j[, k]`).
    pub charts: Vec<usize>,
    pub s: i64,
    pub row: usize,
    pub col: usize,
    /// Canonical string of the defect `lhs − rhs`.
    pub defect: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

fn compare(
    scheme: &CoveredScheme,
    lhs: &FractionMatrix,
    rhs: &FractionMatrix,
    mut fail: impl FnMut(usize, usize, String),
) {
    for r in 0..lhs.rows() {
        for c in 0..lhs.cols() {
            let diff = lhs.get(r, c) - rhs.get(r, c);
            if !scheme.is_zero_mod(EqualityKind::J, &diff).expect("same chart") {
                fail(r, c, diff.normalized().to_string());
            }
        }
    }
}

/// Checks the cocycle, inverse, `D² = 0` and compatibility relations of the
/// residues modulo `J`. Chart sets with `X_Λ = ∅` are skipped.
pub fn validate_complex(e: &BundleComplex) -> ValidationReport {
    let scheme = e.scheme();
    let r = e.ncharts();
    let (smin, smax) = e.degrees();
    let mut failures = Vec::new();
    for s in smin..=smax {
        for i in 0..r {
            for j in 0..r {
                if i == j {
                    continue;
                }
                let ij = e.chart(&[i, j]);
                if scheme.chart_empty(&ij) {
                    continue;
                }
                let prod = e.transition(i, j, s).mul(&e.transition(j, i, s));
                compare(scheme, &prod, &FractionMatrix::identity(e.rank(i, s), &ij), |row, col, defect| {
                    failures.push(ValidationFailure { condition: Condition::A, charts: vec![i, j], s, row, col, defect })
                });
                for k in 0..r {
                    if k == i || k == j {
                        continue;
                    }
                    let ijk = e.chart(&[i, j, k]);
                    if scheme.chart_empty(&ijk) {
                        continue;
                    }
                    let lhs = e.transition(k, j, s).restrict(&ijk).unwrap().mul(&e.transition(j, i, s).restrict(&ijk).unwrap());
                    let rhs = e.transition(k, i, s).restrict(&ijk).unwrap();
                    compare(scheme, &lhs, &rhs, |row, col, defect| {
                        failures.push(ValidationFailure { condition: Condition::B, charts: vec![i, j, k], s, row, col, defect })
                    });
                }
            }
        }
        for i in 0..r {
            let ci = e.chart(&[i]);
            if scheme.chart_empty(&ci) {
                continue;
            }
            let dd = e.differential(i, s + 1).mul(&e.differential(i, s));
            compare(scheme, &dd, &FractionMatrix::zero(dd.rows(), dd.cols(), &ci), |row, col, defect| {
                failures.push(ValidationFailure { condition: Condition::C, charts: vec![i], s, row, col, defect })
            });
            for j in 0..r {
                if j == i {
                    continue;
                }
                let ij = e.chart(&[i, j]);
                if scheme.chart_empty(&ij) {
                    continue;
                }
                let lhs = e.transition(j, i, s + 1).mul(&e.differential(i, s).restrict(&ij).unwrap());
                let rhs = e.differential(j, s).restrict(&ij).unwrap().mul(&e.transition(j, i, s));
                compare(scheme, &lhs, &rhs, |row, col, defect| {
                    failures.push(ValidationFailure { condition: Condition::D, charts: vec![i, j], s, row, col, defect })
                });
            }
        }
    }
    ValidationReport { failures }
}

/// Euler characteristic of the ranks per chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankSummary {
    /// `Σ_s (−1)^s m_i^s` for charts with `X_i ≠ ∅`.
    pub per_chart: Vec<Option<i64>>,
    /// The common value when all nonempty charts agree.
    pub constant: Option<i64>,
}

pub fn rank_of(e: &BundleComplex) -> RankSummary {
    let (smin, smax) = e.degrees();
    let per_chart: Vec<Option<i64>> = (0..e.ncharts())
        .map(|i| {
            if e.scheme().chart_empty(&e.chart(&[i])) {
                return None;
            }
            Some((smin..=smax).map(|s| if s.rem_euclid(2) == 0 { 1 } else { -1 } * e.rank(i, s) as i64).sum())
        })
        .collect();
    let mut values = per_chart.iter().flatten();
    let constant = match values.next() {
        Some(&v) if values.all(|&w| w == v) => Some(v),
        _ => None,
    };
    RankSummary { per_chart, constant }
}

/// `(−1)^s`.
pub fn sign(s: i64) -> i64 {
    if s.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests;
