use std::collections::HashMap;

use super::{rank_of, sign, BundleComplex, ComplexError, FractionMatrix};
use crate::geometry::{CoveredScheme, LocalFraction};

/// How lifts of inverse transitions are formed when a construction needs
/// `M_ij^{-1} = M_ji` with a fresh lift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LiftPolicy {
    /// `M̃_ji·(2 − M̃_ij·M̃_ji)`, an inverse of `M̃_ij` modulo `J²`.
    #[default]
    RefinedInverse,
    /// The supplied opposite lift `M̃_ji`, an inverse modulo `J` only.
    Opposite,
    /// Determinants only: `det M̃_ij` in odd degrees too, which lifts the
    /// wrong residue. Exists as a negative control.
    IgnoreParity,
}

/// `m_ji·(2 − m_ij·m_ji)`: the Newton step towards an inverse of `m_ij`,
/// exact modulo `J²` when `m_ij·m_ji ≡ 1` modulo `J`.
pub fn refined_inverse(m_ij: &FractionMatrix, m_ji: &FractionMatrix) -> FractionMatrix {
    let chart = m_ij.chart();
    let p = m_ij.mul(m_ji);
    let two = FractionMatrix::identity(p.rows(), chart).scale_int(2);
    m_ji.mul(&two.sub(&p))
}

/// Entrywise numerator normal form modulo the localized `J²`. Lifts only
/// matter modulo `J²`, and constructions otherwise grow degrees quickly.
fn reduce_lift(scheme: &CoveredScheme, m: &FractionMatrix) -> FractionMatrix {
    FractionMatrix::from_fn(m.rows(), m.cols(), m.chart(), |r, c| scheme.reduce_mod_square(m.get(r, c)))
}

fn refined_scalar(a_ij: &LocalFraction, a_ji: &LocalFraction) -> LocalFraction {
    let two = LocalFraction::from_int(2, a_ij.chart());
    a_ji * &(&two - &(a_ij * a_ji))
}

fn same_scheme(e: &BundleComplex, f: &BundleComplex) -> Result<(), ComplexError> {
    if std::sync::Arc::ptr_eq(e.scheme(), f.scheme()) {
        Ok(())
    } else {
        Err(ComplexError::CoverMismatch)
    }
}

fn pairs(r: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..r).flat_map(move |i| (0..r).filter(move |&j| j != i).map(move |j| (i, j)))
}

pub fn dual_complex(e: &BundleComplex) -> Result<BundleComplex, ComplexError> {
    dual_complex_with(e, LiftPolicy::default())
}

/// `(E^∨)^u = (E^{−u})^∨`. Transition lifts are transposes of an inverse
/// lift of `M̃^{−u}_ij`; differentials are `transpose(D̃^{−u−1}_i)`, with no
/// sign since only precomposition occurs.
pub fn dual_complex_with(e: &BundleComplex, policy: LiftPolicy) -> Result<BundleComplex, ComplexError> {
    let (smin, smax) = e.degrees();
    let r = e.ncharts();
    let degrees = (-smax, -smin);
    let ranks = (0..r).map(|i| (degrees.0..=degrees.1).map(|u| e.rank(i, -u)).collect()).collect();
    let mut transitions = HashMap::new();
    for (i, j) in pairs(r) {
        for u in degrees.0..=degrees.1 {
            let inv = match policy {
                LiftPolicy::RefinedInverse => refined_inverse(&e.transition(i, j, -u), &e.transition(j, i, -u)),
                _ => e.transition(j, i, -u).into_owned(),
            };
            transitions.insert((i, j, u), reduce_lift(e.scheme(), &inv.transpose()));
        }
    }
    let mut differentials = HashMap::new();
    for i in 0..r {
        for u in degrees.0..=degrees.1 {
            differentials.insert((i, u), e.differential(i, -u - 1).transpose());
        }
    }
    BundleComplex::new(e.scheme().clone(), degrees, ranks, transitions, differentials)
}

/// Block-diagonal sum, `E` first.
pub fn direct_sum(e: &BundleComplex, f: &BundleComplex) -> Result<BundleComplex, ComplexError> {
    same_scheme(e, f)?;
    let r = e.ncharts();
    let degrees = (e.degrees().0.min(f.degrees().0), e.degrees().1.max(f.degrees().1));
    let ranks = (0..r).map(|i| (degrees.0..=degrees.1).map(|s| e.rank(i, s) + f.rank(i, s)).collect()).collect();
    let mut transitions = HashMap::new();
    for (i, j) in pairs(r) {
        let chart = e.chart(&[i, j]);
        for s in degrees.0..=degrees.1 {
            let blocks = [e.transition(i, j, s).into_owned(), f.transition(i, j, s).into_owned()];
            transitions.insert((i, j, s), FractionMatrix::block_diag(&blocks, &chart));
        }
    }
    let mut differentials = HashMap::new();
    for i in 0..r {
        let chart = e.chart(&[i]);
        for s in degrees.0..=degrees.1 {
            let blocks = [e.differential(i, s).into_owned(), f.differential(i, s).into_owned()];
            differentials.insert((i, s), FractionMatrix::block_diag(&blocks, &chart));
        }
    }
    BundleComplex::new(e.scheme().clone(), degrees, ranks, transitions, differentials)
}

/// Summands `(s, u − s)` of `(E ⊗ F)^u` in increasing `s`, with their row
/// offsets on chart `i`.
fn tensor_summands(e: &BundleComplex, f: &BundleComplex, i: usize, u: i64) -> Vec<(i64, usize)> {
    let (es, ee) = e.degrees();
    let (fs, fe) = f.degrees();
    let mut out = Vec::new();
    let mut off = 0;
    for s in es.max(u - fe)..=ee.min(u - fs) {
        out.push((s, off));
        off += e.rank(i, s) * f.rank(i, u - s);
    }
    out
}

/// `(E ⊗ F)^u = ⊕_{s+t=u} E^s ⊗ F^t` with row-major Kronecker blocks and
/// differential `D_E ⊗ 1 + (−1)^s·1 ⊗ D_F`.
pub fn tensor_complex(e: &BundleComplex, f: &BundleComplex) -> Result<BundleComplex, ComplexError> {
    same_scheme(e, f)?;
    let r = e.ncharts();
    let degrees = (e.degrees().0 + f.degrees().0, e.degrees().1 + f.degrees().1);
    let ranks: Vec<Vec<usize>> = (0..r)
        .map(|i| {
            (degrees.0..=degrees.1)
                .map(|u| tensor_summands(e, f, i, u).iter().map(|&(s, _)| e.rank(i, s) * f.rank(i, u - s)).sum())
                .collect()
        })
        .collect();
    let rank = |i: usize, u: i64| if (degrees.0..=degrees.1).contains(&u) { ranks[i][(u - degrees.0) as usize] } else { 0 };
    let mut transitions = HashMap::new();
    for (i, j) in pairs(r) {
        let chart = e.chart(&[i, j]);
        for u in degrees.0..=degrees.1 {
            let blocks: Vec<_> = tensor_summands(e, f, i, u)
                .iter()
                .map(|&(s, _)| e.transition(i, j, s).kronecker(&f.transition(i, j, u - s)))
                .collect();
            transitions.insert((i, j, u), reduce_lift(e.scheme(), &FractionMatrix::block_diag(&blocks, &chart)));
        }
    }
    let mut differentials = HashMap::new();
    for i in 0..r {
        let chart = e.chart(&[i]);
        for u in degrees.0..=degrees.1 {
            let mut d = FractionMatrix::zero(rank(i, u + 1), rank(i, u), &chart);
            let src = tensor_summands(e, f, i, u);
            let dst: HashMap<i64, usize> = tensor_summands(e, f, i, u + 1).into_iter().collect();
            for &(s, col) in &src {
                let t = u - s;
                if let Some(&row) = dst.get(&(s + 1)) {
                    let id = FractionMatrix::identity(f.rank(i, t), &chart);
                    d.set_block(row, col, &e.differential(i, s).kronecker(&id));
                }
                if let Some(&row) = dst.get(&s) {
                    let id = FractionMatrix::identity(e.rank(i, s), &chart);
                    d.set_block(row, col, &id.kronecker(&f.differential(i, t)).scale_int(sign(s)));
                }
            }
            differentials.insert((i, u), d);
        }
    }
    BundleComplex::new(e.scheme().clone(), degrees, ranks, transitions, differentials)
}

/// `Hom(E, F) ≅ E^∨ ⊗ F`.
pub fn hom_complex(e: &BundleComplex, f: &BundleComplex) -> Result<BundleComplex, ComplexError> {
    tensor_complex(&dual_complex(e)?, f)
}

pub fn det_complex(e: &BundleComplex) -> Result<BundleComplex, ComplexError> {
    det_complex_with(e, LiftPolicy::default())
}

/// `det(E) = ⊗_s det(E^s)^{(−1)^s}` in the trivializations induced by the
/// given ones. Even degrees contribute `det M̃^s_ij`; odd degrees a lift of
/// its inverse chosen by `policy`.
pub fn det_complex_with(e: &BundleComplex, policy: LiftPolicy) -> Result<BundleComplex, ComplexError> {
    let (smin, smax) = e.degrees();
    let r = e.ncharts();
    let mut transitions = HashMap::new();
    for (i, j) in pairs(r) {
        let chart = e.chart(&[i, j]);
        let mut acc = LocalFraction::one(&chart);
        for s in smin..=smax {
            let d_ij = e.scheme().reduce_mod_square(&e.transition(i, j, s).det());
            let factor = if sign(s) == 1 {
                d_ij
            } else {
                match policy {
                    LiftPolicy::RefinedInverse => {
                        refined_scalar(&d_ij, &e.scheme().reduce_mod_square(&e.transition(j, i, s).det()))
                    }
                    LiftPolicy::Opposite => e.transition(j, i, s).det(),
                    LiftPolicy::IgnoreParity => d_ij,
                }
            };
            acc = e.scheme().reduce_mod_square(&(&acc * &factor));
        }
        transitions.insert((i, j, 0), FractionMatrix::from_vec(1, 1, &chart, vec![acc])?);
    }
    BundleComplex::new(e.scheme().clone(), (0, 0), vec![vec![1]; r], transitions, HashMap::new())
}

/// `L^{⊗k}` for a line bundle; negative powers use the refined inverse lift.
pub fn line_power(l: &BundleComplex, k: i64) -> Result<BundleComplex, ComplexError> {
    let rank = rank_of(l);
    if l.degrees() != (0, 0) || rank.constant != Some(1) {
        return Err(ComplexError::NotALineBundle("power of a non-line-bundle".into()));
    }
    let r = l.ncharts();
    let mut transitions = HashMap::new();
    for (i, j) in pairs(r) {
        let chart = l.chart(&[i, j]);
        let a_ij = l.transition(i, j, 0).get(0, 0).clone();
        let a_ji = l.transition(j, i, 0).get(0, 0).clone();
        let base = if k >= 0 { a_ij } else { refined_scalar(&a_ij, &a_ji) };
        let mut acc = LocalFraction::one(&chart);
        for _ in 0..k.unsigned_abs() {
            acc = l.scheme().reduce_mod_square(&(&acc * &base));
        }
        transitions.insert((i, j, 0), FractionMatrix::from_vec(1, 1, &chart, vec![acc])?);
    }
    BundleComplex::new(l.scheme().clone(), (0, 0), vec![vec![1]; r], transitions, HashMap::new())
}

/// `E^s` alone, as a vector bundle in degree 0.
pub fn component_bundle(e: &BundleComplex, s: i64) -> Result<BundleComplex, ComplexError> {
    let r = e.ncharts();
    let ranks = (0..r).map(|i| vec![e.rank(i, s)]).collect();
    let mut transitions = HashMap::new();
    for (i, j) in pairs(r) {
        transitions.insert((i, j, 0), e.transition(i, j, s).into_owned());
    }
    BundleComplex::new(e.scheme().clone(), (0, 0), ranks, transitions, HashMap::new())
}
