use std::cmp::Ordering;

use smallvec::SmallVec;

use crate::ring::Monomial;

/// Comparison key whose lexicographic order realizes a (module) term order.
pub(crate) type TermKey = SmallVec<[i64; 8]>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    DegRevLex,
    Lex,
    /// The first `k` variables (after permutation) form a block that is
    /// compared by degrevlex before the remaining variables.
    BlockElimination(usize),
}

/// A monomial order on the ring's variables, optionally after permuting them:
/// `perm[k]` is the ring index of the k-th most significant variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    perm: Option<Vec<usize>>,
}

impl MonomialOrder {
    pub fn degrevlex() -> Self {
        MonomialOrder { kind: OrderKind::DegRevLex, perm: None }
    }

    pub fn lex() -> Self {
        MonomialOrder { kind: OrderKind::Lex, perm: None }
    }

    pub fn block_elimination(split: usize) -> Self {
        MonomialOrder { kind: OrderKind::BlockElimination(split), perm: None }
    }

    /// `perm` must be a permutation of `0..nvars`.
    pub fn with_permutation(mut self, perm: Vec<usize>) -> Self {
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        assert!(sorted.iter().enumerate().all(|(k, &v)| k == v), "not a permutation");
        self.perm = Some(perm);
        self
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    /// Ring indices of the eliminated block, if this is an elimination order.
    pub fn eliminated_block(&self, nvars: usize) -> Option<Vec<usize>> {
        match self.kind {
            OrderKind::BlockElimination(k) => Some((0..k.min(nvars)).map(|i| self.var_at(i)).collect()),
            _ => None,
        }
    }

    fn var_at(&self, k: usize) -> usize {
        match &self.perm {
            Some(p) => p[k],
            None => k,
        }
    }

    fn permuted(&self, e: &[u32]) -> SmallVec<[u32; 8]> {
        match &self.perm {
            Some(p) => p.iter().map(|&i| e[i]).collect(),
            None => SmallVec::from_slice(e),
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.key(0, a).cmp(&self.key(0, b))
    }

    /// Key of the module term `mono·e_pos`. Position-over-term: a smaller
    /// index is a larger position. For block orders the eliminated block
    /// dominates the position, so a leading term free of the block forces the
    /// whole vector to be free of it.
    pub(crate) fn key(&self, pos: usize, mono: &Monomial) -> TermKey {
        let e = self.permuted(mono.exponents());
        let mut key = TermKey::new();
        let pos_key = -(pos as i64);
        match self.kind {
            OrderKind::DegRevLex => {
                key.push(pos_key);
                push_degrevlex(&mut key, &e);
            }
            OrderKind::Lex => {
                key.push(pos_key);
                key.extend(e.iter().map(|&x| x as i64));
            }
            OrderKind::BlockElimination(k) => {
                let k = k.min(e.len());
                push_degrevlex(&mut key, &e[..k]);
                key.push(pos_key);
                push_degrevlex(&mut key, &e[k..]);
            }
        }
        key
    }
}

impl Default for MonomialOrder {
    fn default() -> Self {
        Self::degrevlex()
    }
}

fn push_degrevlex(key: &mut TermKey, e: &[u32]) {
    key.push(e.iter().map(|&x| x as i64).sum());
    key.extend(e.iter().rev().map(|&x| -(x as i64)));
}
