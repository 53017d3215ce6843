use std::sync::Arc;

use super::engine::Engine;
use super::{drop_fresh_variable, rabinowitsch, with_fresh_variable, GroebnerError, MonomialOrder};
use crate::ring::{same_ring, PolyRing, Polynomial};

/// Element of the free module `A^rank`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleVector {
    components: Vec<Polynomial>,
}

impl ModuleVector {
    pub fn new(components: Vec<Polynomial>) -> Self {
        ModuleVector { components }
    }

    pub fn zero(ring: &Arc<PolyRing>, rank: usize) -> Self {
        ModuleVector { components: vec![Polynomial::zero(ring); rank] }
    }

    /// `p·e_pos`.
    pub fn basis(ring: &Arc<PolyRing>, rank: usize, pos: usize, p: Polynomial) -> Self {
        let mut v = Self::zero(ring, rank);
        v.components[pos] = p;
        v
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn scale(&self, p: &Polynomial) -> Self {
        ModuleVector { components: self.components.iter().map(|c| c * p).collect() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModuleGroebnerBasis {
    ring: Arc<PolyRing>,
    rank: usize,
    order: MonomialOrder,
    vectors: Vec<ModuleVector>,
}

impl ModuleGroebnerBasis {
    pub fn vectors(&self) -> &[ModuleVector] {
        &self.vectors
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    /// Remainder of `v`; zero iff `v` lies in the submodule.
    pub fn reduce(&self, v: &ModuleVector) -> Result<ModuleVector, GroebnerError> {
        if v.rank() != self.rank {
            return Err(GroebnerError::RankMismatch { expected: self.rank, found: v.rank() });
        }
        if v.components.iter().any(|c| !same_ring(c.ring(), &self.ring)) {
            return Err(GroebnerError::RingMismatch);
        }
        let e = Engine { ring: &self.ring, order: &self.order, rank: self.rank };
        let basis: Vec<_> = self.vectors.iter().map(|b| e.vect(&b.components)).collect();
        let r = e.reduce(&e.vect(&v.components), &basis, None);
        Ok(ModuleVector { components: e.components(&r) })
    }
}

/// Reduced position-over-term basis of the submodule spanned by `vectors`.
pub fn module_buchberger(
    ring: &Arc<PolyRing>,
    rank: usize,
    vectors: &[ModuleVector],
    order: &MonomialOrder,
) -> Result<ModuleGroebnerBasis, GroebnerError> {
    if let Some(v) = vectors.iter().find(|v| v.rank() != rank) {
        return Err(GroebnerError::RankMismatch { expected: rank, found: v.rank() });
    }
    if vectors.iter().flat_map(|v| &v.components).any(|c| !same_ring(c.ring(), ring)) {
        return Err(GroebnerError::RingMismatch);
    }
    let e = Engine { ring, order, rank };
    let vects: Vec<_> = vectors.iter().map(|v| e.vect(&v.components)).collect();
    let (basis, _) = e.groebner(&vects, false);
    Ok(ModuleGroebnerBasis {
        ring: ring.clone(),
        rank,
        order: order.clone(),
        vectors: basis.iter().map(|b| ModuleVector { components: e.components(b) }).collect(),
    })
}

pub fn module_member(v: &ModuleVector, mgb: &ModuleGroebnerBasis) -> Result<bool, GroebnerError> {
    Ok(mgb.reduce(v)?.is_zero())
}

/// Generators (a reduced degrevlex basis) of `M : f^∞` inside `A^rank`.
pub fn saturate_module(
    ring: &Arc<PolyRing>,
    rank: usize,
    vectors: &[ModuleVector],
    f: &Polynomial,
) -> Result<Vec<ModuleVector>, GroebnerError> {
    assert!(!f.is_zero(), "saturation by zero");
    if let Some(v) = vectors.iter().find(|v| v.rank() != rank) {
        return Err(GroebnerError::RankMismatch { expected: rank, found: v.rank() });
    }
    let (big, map) = with_fresh_variable(ring);
    let mut gens: Vec<ModuleVector> = vectors
        .iter()
        .map(|v| ModuleVector { components: v.components.iter().map(|c| c.embed(&big, &map)).collect() })
        .collect();
    let r = rabinowitsch(&big, f, &map);
    for pos in 0..rank {
        gens.push(ModuleVector::basis(&big, rank, pos, r.clone()));
    }
    let gb = module_buchberger(&big, rank, &gens, &MonomialOrder::block_elimination(1))?;
    Ok(gb
        .vectors
        .iter()
        .filter(|v| v.components.iter().all(|c| c.terms().iter().all(|(m, _)| m.exponents()[0] == 0)))
        .map(|v| ModuleVector { components: v.components.iter().map(|c| drop_fresh_variable(c, ring)).collect() })
        .collect())
}
