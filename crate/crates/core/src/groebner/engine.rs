//! Buchberger over free modules `A^rank`; ideals are the rank-one case.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::order::{MonomialOrder, TermKey};
use crate::ring::{Monomial, PolyRing, Polynomial, Rational};

#[derive(Clone, Debug)]
pub(crate) struct VTerm {
    key: TermKey,
    pub(crate) pos: usize,
    pub(crate) mono: Monomial,
    pub(crate) coef: Rational,
}

/// Module element with terms sorted by descending term order.
#[derive(Clone, Debug)]
pub(crate) struct Vect {
    terms: Vec<VTerm>,
}

/// Cofactors of a basis element with respect to the input generators.
pub(crate) type Cofactors = Vec<Polynomial>;

pub(crate) struct Engine<'a> {
    pub(crate) ring: &'a Arc<PolyRing>,
    pub(crate) order: &'a MonomialOrder,
    pub(crate) rank: usize,
}

impl Vect {
    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn lead(&self) -> Option<&VTerm> {
        self.terms.first()
    }
}

impl Engine<'_> {
    pub(crate) fn vect(&self, components: &[Polynomial]) -> Vect {
        debug_assert_eq!(components.len(), self.rank);
        let mut terms = Vec::new();
        for (pos, p) in components.iter().enumerate() {
            for (m, c) in p.terms() {
                terms.push(VTerm { key: self.order.key(pos, m), pos, mono: m.clone(), coef: c.clone() });
            }
        }
        terms.sort_by(|a, b| b.key.cmp(&a.key));
        Vect { terms }
    }

    pub(crate) fn components(&self, v: &Vect) -> Vec<Polynomial> {
        let mut parts: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); self.rank];
        for t in &v.terms {
            parts[t.pos].push((t.mono.clone(), t.coef.clone()));
        }
        parts.into_iter().map(|ts| Polynomial::from_terms(self.ring, ts)).collect()
    }

    fn monic(&self, v: &mut Vect, cof: Option<&mut Cofactors>) {
        let Some(lc) = v.lead().map(|t| t.coef.clone()) else { return };
        if lc.is_one() {
            return;
        }
        let inv = lc.recip();
        for t in &mut v.terms {
            t.coef *= &inv;
        }
        if let Some(cof) = cof {
            for c in cof.iter_mut() {
                *c = c.scale(&inv);
            }
        }
    }

    /// `a·m1·c1 − b·m2·c2` on sorted term lists.
    fn combine(&self, a: &Vect, m1: &Monomial, c1: &Rational, b: &Vect, m2: &Monomial, c2: &Rational) -> Vect {
        let mut map: BTreeMap<TermKey, VTerm> = BTreeMap::new();
        self.accumulate(&mut map, a, m1, c1);
        self.accumulate(&mut map, b, m2, &-c2.clone());
        Vect { terms: map.into_values().rev().collect() }
    }

    fn accumulate(&self, map: &mut BTreeMap<TermKey, VTerm>, v: &Vect, m: &Monomial, c: &Rational) {
        for t in &v.terms {
            let mono = t.mono.mul(m);
            let key = self.order.key(t.pos, &mono);
            let coef = &t.coef * c;
            match map.entry(key) {
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    e.get_mut().coef += coef;
                    if e.get().coef.is_zero() {
                        e.remove();
                    }
                }
                std::collections::btree_map::Entry::Vacant(e) => {
                    let key = e.key().clone();
                    e.insert(VTerm { key, pos: t.pos, mono, coef });
                }
            }
        }
    }

    /// Full reduction of `p` by `basis` (first divisor in stored order wins).
    /// When `quotients` is supplied, records `p = Σ q_k·basis_k + remainder`.
    pub(crate) fn reduce(&self, p: &Vect, basis: &[Vect], mut quotients: Option<&mut Vec<Vec<(Monomial, Rational)>>>) -> Vect {
        if let Some(q) = quotients.as_deref_mut() {
            q.clear();
            q.resize(basis.len(), Vec::new());
        }
        let mut map: BTreeMap<TermKey, VTerm> = p.terms.iter().map(|t| (t.key.clone(), t.clone())).collect();
        let mut rem = Vec::new();
        while let Some((_, t)) = map.pop_last() {
            let divisor = basis.iter().enumerate().find(|(_, b)| {
                b.lead().is_some_and(|l| l.pos == t.pos && l.mono.divides(&t.mono))
            });
            match divisor {
                Some((k, b)) => {
                    let lead = b.lead().expect("nonzero basis element");
                    let q = t.mono.div(&lead.mono).expect("divisible");
                    let qc = &t.coef / &lead.coef;
                    for bt in &b.terms[1..] {
                        let mono = bt.mono.mul(&q);
                        let key = self.order.key(bt.pos, &mono);
                        let delta = &bt.coef * &qc;
                        match map.entry(key) {
                            std::collections::btree_map::Entry::Occupied(mut e) => {
                                e.get_mut().coef -= delta;
                                if e.get().coef.is_zero() {
                                    e.remove();
                                }
                            }
                            std::collections::btree_map::Entry::Vacant(e) => {
                                let key = e.key().clone();
                                e.insert(VTerm { key, pos: bt.pos, mono, coef: -delta });
                            }
                        }
                    }
                    if let Some(qs) = quotients.as_deref_mut() {
                        qs[k].push((q, qc));
                    }
                }
                None => rem.push(t),
            }
        }
        Vect { terms: rem }
    }

    fn apply_quotients(&self, cof: &mut Cofactors, quotients: &[Vec<(Monomial, Rational)>], basis_cof: &[Cofactors]) {
        for (k, qs) in quotients.iter().enumerate() {
            if qs.is_empty() {
                continue;
            }
            let q = Polynomial::from_terms(self.ring, qs.iter().cloned());
            for (c, bc) in cof.iter_mut().zip(&basis_cof[k]) {
                *c = &*c - &(&q * bc);
            }
        }
    }

    /// Reduced Gröbner basis of the submodule spanned by `gens`, sorted by
    /// increasing leading term. With
    /// `track`, also returns each basis element's cofactors over `gens`.
    pub(crate) fn groebner(&self, gens: &[Vect], track: bool) -> (Vec<Vect>, Option<Vec<Cofactors>>) {
        let ngens = gens.len();
        let mut basis: Vec<Vect> = Vec::new();
        let mut cofs: Vec<Cofactors> = Vec::new();
        for (l, g) in gens.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let mut g = g.clone();
            let mut cof = if track { unit_cofactors(self.ring, ngens, l) } else { Vec::new() };
            self.monic(&mut g, track.then_some(&mut cof));
            basis.push(g);
            cofs.push(cof);
        }

        let mut queue: BTreeSet<(TermKey, usize, usize)> = BTreeSet::new();
        let mut pending: HashSet<(usize, usize)> = HashSet::new();
        for j in 0..basis.len() {
            for i in 0..j {
                self.push_pair(&basis, i, j, &mut queue, &mut pending);
            }
        }

        let mut quotients = Vec::new();
        while let Some((lcm_key, i, j)) = queue.pop_first() {
            pending.remove(&(i, j));
            let (li, lj) = (basis[i].lead().unwrap().clone(), basis[j].lead().unwrap().clone());
            if self.rank == 1 && li.mono.is_coprime(&lj.mono) {
                continue;
            }
            let lcm = li.mono.lcm(&lj.mono);
            let chain = (0..basis.len()).any(|k| {
                k != i
                    && k != j
                    && basis[k].lead().is_some_and(|l| l.pos == li.pos && l.mono.divides(&lcm))
                    && !pending.contains(&ordered(i, k))
                    && !pending.contains(&ordered(j, k))
            });
            if chain {
                continue;
            }
            let _ = lcm_key;
            let qi = lcm.div(&li.mono).unwrap();
            let qj = lcm.div(&lj.mono).unwrap();
            // Basis elements are monic, so the S-vector needs no scaling.
            let one = Rational::one();
            let s = self.combine(&basis[i], &qi, &one, &basis[j], &qj, &one);
            let mut h = self.reduce(&s, &basis, track.then_some(&mut quotients));
            if h.is_zero() {
                continue;
            }
            let mut cof = Vec::new();
            if track {
                let pi = Polynomial::monomial(self.ring, qi.clone(), one.clone());
                let pj = Polynomial::monomial(self.ring, qj.clone(), one.clone());
                cof = cofs[i].iter().zip(&cofs[j]).map(|(a, b)| &(&pi * a) - &(&pj * b)).collect();
                self.apply_quotients(&mut cof, &quotients, &cofs);
            }
            self.monic(&mut h, track.then_some(&mut cof));
            basis.push(h);
            cofs.push(cof);
            let new = basis.len() - 1;
            for i in 0..new {
                self.push_pair(&basis, i, new, &mut queue, &mut pending);
            }
        }

        self.interreduce(basis, cofs, track)
    }

    fn push_pair(
        &self,
        basis: &[Vect],
        i: usize,
        j: usize,
        queue: &mut BTreeSet<(TermKey, usize, usize)>,
        pending: &mut HashSet<(usize, usize)>,
    ) {
        let (li, lj) = (basis[i].lead().unwrap(), basis[j].lead().unwrap());
        if li.pos != lj.pos {
            return;
        }
        let key = self.order.key(li.pos, &li.mono.lcm(&lj.mono));
        queue.insert((key, i, j));
        pending.insert((i, j));
    }

    fn interreduce(&self, basis: Vec<Vect>, cofs: Vec<Cofactors>, track: bool) -> (Vec<Vect>, Option<Vec<Cofactors>>) {
        // Minimal basis: drop elements whose leading term is divisible by an
        // earlier kept one or by a strictly different one.
        let n = basis.len();
        let mut keep = vec![true; n];
        for i in 0..n {
            let li = basis[i].lead().unwrap();
            for j in 0..n {
                if i == j || !keep[j] {
                    continue;
                }
                let lj = basis[j].lead().unwrap();
                if lj.pos == li.pos && lj.mono.divides(&li.mono) && (lj.mono != li.mono || j < i) {
                    keep[i] = false;
                    break;
                }
            }
        }
        let mut min_basis: Vec<Vect> = Vec::new();
        let mut min_cofs: Vec<Cofactors> = Vec::new();
        for (k, (b, c)) in basis.into_iter().zip(cofs).enumerate() {
            if keep[k] {
                min_basis.push(b);
                min_cofs.push(c);
            }
        }
        // Tail-reduce each element against the others; leading terms stay.
        let mut quotients = Vec::new();
        for i in 0..min_basis.len() {
            let others: Vec<Vect> = min_basis
                .iter()
                .enumerate()
                .map(|(k, v)| if k == i { Vect { terms: Vec::new() } } else { v.clone() })
                .collect();
            let reduced = self.reduce(&min_basis[i], &others, track.then_some(&mut quotients));
            if track {
                let mut cof = min_cofs[i].clone();
                self.apply_quotients(&mut cof, &quotients, &min_cofs);
                min_cofs[i] = cof;
            }
            min_basis[i] = reduced;
            self.monic(&mut min_basis[i], track.then_some(&mut min_cofs[i]));
        }
        let mut idx: Vec<usize> = (0..min_basis.len()).collect();
        idx.sort_by(|&a, &b| min_basis[a].lead().unwrap().key.cmp(&min_basis[b].lead().unwrap().key));
        let sorted: Vec<Vect> = idx.iter().map(|&k| min_basis[k].clone()).collect();
        let sorted_cofs = track.then(|| idx.iter().map(|&k| min_cofs[k].clone()).collect());
        (sorted, sorted_cofs)
    }
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn unit_cofactors(ring: &Arc<PolyRing>, n: usize, l: usize) -> Cofactors {
    (0..n).map(|k| if k == l { Polynomial::one(ring) } else { Polynomial::zero(ring) }).collect()
}
