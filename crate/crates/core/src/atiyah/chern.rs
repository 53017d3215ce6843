use super::cochain::{ConormalCochain, FormCochain};
use super::truncated::truncated_families;
use super::{require_valid, AtiyahError, ClassicalAtiyahRep, TruncatedAtiyahRep};
use crate::complexes::{sign, BundleComplex};
use crate::geometry::{CoveredScheme, EqualityKind};

/// First truncated Chern class: a conormal cocycle on triples and a form
/// cocycle on pairs, both scalar.
#[derive(Clone, Debug)]
pub struct TruncChernRep {
    pub c2: ConormalCochain,
    pub c1w: FormCochain,
}

/// First classical Chern class, compared modulo the Jacobian submodule.
#[derive(Clone, Debug)]
pub struct ClassChernRep {
    pub c1: FormCochain,
}

pub(crate) fn trunc_chern_unchecked(e: &BundleComplex) -> Result<TruncChernRep, AtiyahError> {
    let (smin, smax) = e.degrees();
    let rep = truncated_families(e)?;
    let mut c2 = ConormalCochain::zero(e, 2, 0, 0).trace();
    let mut c1w = FormCochain::zero(e, 1, 0, 0).trace();
    for s in smin..=smax {
        let d = &rep.degrees[&s];
        c2 = c2.try_add(&d.t1.trace().scale_int(sign(s)))?;
        c1w = c1w.try_add(&d.t2.trace().scale_int(sign(s)))?;
    }
    Ok(TruncChernRep { c2, c1w })
}

/// `(Σ_s (−1)^s tr T1^s, Σ_s (−1)^s tr T2^s)`.
pub fn build_trunc_chern1(e: &BundleComplex) -> Result<TruncChernRep, AtiyahError> {
    require_valid(e)?;
    trunc_chern_unchecked(e)
}

pub fn build_class_chern1(e: &BundleComplex) -> Result<ClassChernRep, AtiyahError> {
    Ok(ClassChernRep { c1: build_trunc_chern1(e)?.c1w })
}

/// Cocycle-level equality and arithmetic on representatives.
pub trait Representative: Sized {
    fn rep_eq(&self, other: &Self, scheme: &CoveredScheme) -> Result<bool, AtiyahError>;
    fn rep_add(&self, other: &Self) -> Result<Self, AtiyahError>;
    fn rep_scale(&self, c: i64) -> Self;
}

impl Representative for TruncChernRep {
    fn rep_eq(&self, other: &Self, scheme: &CoveredScheme) -> Result<bool, AtiyahError> {
        Ok(self.c2.equals(&other.c2, scheme, EqualityKind::JSquared)?
            && self.c1w.equals(&other.c1w, scheme, EqualityKind::J)?)
    }
    fn rep_add(&self, other: &Self) -> Result<Self, AtiyahError> {
        Ok(TruncChernRep { c2: self.c2.try_add(&other.c2)?, c1w: self.c1w.try_add(&other.c1w)? })
    }
    fn rep_scale(&self, c: i64) -> Self {
        TruncChernRep { c2: self.c2.scale_int(c), c1w: self.c1w.scale_int(c) }
    }
}

impl Representative for ClassChernRep {
    fn rep_eq(&self, other: &Self, scheme: &CoveredScheme) -> Result<bool, AtiyahError> {
        self.c1.equals(&other.c1, scheme, EqualityKind::Jacobian)
    }
    fn rep_add(&self, other: &Self) -> Result<Self, AtiyahError> {
        Ok(ClassChernRep { c1: self.c1.try_add(&other.c1)? })
    }
    fn rep_scale(&self, c: i64) -> Self {
        ClassChernRep { c1: self.c1.scale_int(c) }
    }
}

fn same_degrees<A, B>(a: &std::collections::BTreeMap<i64, A>, b: &std::collections::BTreeMap<i64, B>) -> Result<(), AtiyahError> {
    if a.keys().eq(b.keys()) {
        Ok(())
    } else {
        Err(AtiyahError::Dimension("representatives cover different degrees".into()))
    }
}

impl Representative for TruncatedAtiyahRep {
    fn rep_eq(&self, other: &Self, scheme: &CoveredScheme) -> Result<bool, AtiyahError> {
        same_degrees(&self.degrees, &other.degrees)?;
        let (jj, j) = (EqualityKind::JSquared, EqualityKind::J);
        for (s, a) in &self.degrees {
            let b = &other.degrees[s];
            if !(a.t1.equals(&b.t1, scheme, jj)?
                && a.t2.equals(&b.t2, scheme, j)?
                && a.t3.equals(&b.t3, scheme, jj)?
                && a.t4.equals(&b.t4, scheme, j)?
                && a.t5.equals(&b.t5, scheme, jj)?)
            {
                return Ok(false);
            }
        }
        Ok(true)
    }
    fn rep_add(&self, other: &Self) -> Result<Self, AtiyahError> {
        same_degrees(&self.degrees, &other.degrees)?;
        let mut degrees = self.degrees.clone();
        for (s, d) in degrees.iter_mut() {
            let b = &other.degrees[s];
            d.t1 = d.t1.try_add(&b.t1)?;
            d.t2 = d.t2.try_add(&b.t2)?;
            d.t3 = d.t3.try_add(&b.t3)?;
            d.t4 = d.t4.try_add(&b.t4)?;
            d.t5 = d.t5.try_add(&b.t5)?;
        }
        Ok(TruncatedAtiyahRep { degrees })
    }
    fn rep_scale(&self, c: i64) -> Self {
        let mut degrees = self.degrees.clone();
        for d in degrees.values_mut() {
            d.t1 = d.t1.scale_int(c);
            d.t2 = d.t2.scale_int(c);
            d.t3 = d.t3.scale_int(c);
            d.t4 = d.t4.scale_int(c);
            d.t5 = d.t5.scale_int(c);
        }
        TruncatedAtiyahRep { degrees }
    }
}

impl Representative for ClassicalAtiyahRep {
    fn rep_eq(&self, other: &Self, scheme: &CoveredScheme) -> Result<bool, AtiyahError> {
        same_degrees(&self.degrees, &other.degrees)?;
        for (s, a) in &self.degrees {
            let b = &other.degrees[s];
            if !(a.p1.equals(&b.p1, scheme, EqualityKind::Jacobian)? && a.p2.equals(&b.p2, scheme, EqualityKind::Jacobian)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }
    fn rep_add(&self, other: &Self) -> Result<Self, AtiyahError> {
        same_degrees(&self.degrees, &other.degrees)?;
        let mut degrees = self.degrees.clone();
        for (s, d) in degrees.iter_mut() {
            let b = &other.degrees[s];
            d.p1 = d.p1.try_add(&b.p1)?;
            d.p2 = d.p2.try_add(&b.p2)?;
        }
        Ok(ClassicalAtiyahRep { degrees })
    }
    fn rep_scale(&self, c: i64) -> Self {
        let mut degrees = self.degrees.clone();
        for d in degrees.values_mut() {
            d.p1 = d.p1.scale_int(c);
            d.p2 = d.p2.scale_int(c);
        }
        ClassicalAtiyahRep { degrees }
    }
}

pub enum Combine<'a, R> {
    Add(&'a R, &'a R),
    Negate(&'a R),
    Scale(i64, &'a R),
}

pub fn rep_eq<R: Representative>(scheme: &CoveredScheme, a: &R, b: &R) -> Result<bool, AtiyahError> {
    a.rep_eq(b, scheme)
}

pub fn rep_combine<R: Representative>(op: Combine<'_, R>) -> Result<R, AtiyahError> {
    match op {
        Combine::Add(a, b) => a.rep_add(b),
        Combine::Negate(a) => Ok(a.rep_scale(-1)),
        Combine::Scale(c, a) => Ok(a.rep_scale(c)),
    }
}
