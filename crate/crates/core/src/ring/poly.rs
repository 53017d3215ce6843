use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::monomial::{degrevlex_cmp, Monomial};
use super::{Rational, RingError};

/// Polynomial ring over the rationals on an ordered list of variable names.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    vars: Vec<String>,
}

impl PolyRing {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Result<Arc<PolyRing>, RingError> {
        if vars.is_empty() {
            return Err(RingError::InvalidRing("a ring needs at least one variable".into()));
        }
        let mut names: Vec<String> = Vec::with_capacity(vars.len());
        for v in vars {
            let v = v.as_ref();
            let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(RingError::InvalidRing(format!("invalid variable name {v:?}")));
            }
            if names.iter().any(|n| n == v) {
                return Err(RingError::InvalidRing(format!("duplicate variable {v:?}")));
            }
            names.push(v.to_string());
        }
        Ok(Arc::new(PolyRing { vars: names }))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize, RingError> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| RingError::UnknownVariable(name.to_string()))
    }
}

/// Exact polynomial over the rationals. Terms are kept sorted by descending
/// degrevlex order with no zero coefficients, so equal polynomials compare
/// equal structurally.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: Vec<(Monomial, Rational)>,
}

pub(crate) fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero(ring);
        }
        Polynomial { ring: ring.clone(), terms: vec![(Monomial::one(ring.nvars()), c)] }
    }

    pub fn from_int(ring: &Arc<PolyRing>, c: i64) -> Self {
        Self::constant(ring, Rational::from_integer(c.into()))
    }

    pub fn var(ring: &Arc<PolyRing>, index: usize) -> Self {
        Polynomial { ring: ring.clone(), terms: vec![(Monomial::var(ring.nvars(), index), Rational::one())] }
    }

    pub fn var_named(ring: &Arc<PolyRing>, name: &str) -> Result<Self, RingError> {
        Ok(Self::var(ring, ring.var_index(name)?))
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.nvars(), ring.nvars());
        if c.is_zero() {
            return Self::zero(ring);
        }
        Polynomial { ring: ring.clone(), terms: vec![(m, c)] }
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms(ring: &Arc<PolyRing>, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial length does not match ring");
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Arc<PolyRing>, acc: HashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| degrevlex_cmp(b.0.exponents(), a.0.exponents()));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn constant_term(&self) -> Rational {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Rational::zero(),
        }
    }

    /// Value at a rational point given in ring variable order.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.ring.nvars());
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    fn check(&self, other: &Polynomial) -> Result<(), RingError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(RingError::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn merge(&self, other: &Polynomial, negate_other: bool) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match degrevlex_cmp(a[i].0.exponents(), b[j].0.exponents()) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate_other { -b[j].1.clone() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_other { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for (m, c) in &b[j..] {
            out.push((m.clone(), if negate_other { -c.clone() } else { c.clone() }));
        }
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += c,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        Self::from_map(&self.ring, acc)
    }

    /// Multiplication by a single term; monomial orders are multiplicative,
    /// so the term order is preserved.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc * c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, cc)| (m.clone(), cc * c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn scale_int(&self, c: i64) -> Polynomial {
        self.scale(&Rational::from_integer(c.into()))
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.exponents()[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            *m2.exponent_mut(var) -= 1;
            terms.push((m2, c * Rational::from_integer(e.into())));
        }
        // Dividing every surviving term by the same variable keeps the order.
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn partial_derivative(&self, var: &str) -> Result<Polynomial, RingError> {
        Ok(self.derivative(self.ring.var_index(var)?))
    }

    /// Rewrites the polynomial into `target`, sending variable `k` to
    /// variable `map[k]` of the target ring.
    pub fn embed(&self, target: &Arc<PolyRing>, map: &[usize]) -> Polynomial {
        assert_eq!(map.len(), self.ring.nvars());
        let n = target.nvars();
        Polynomial::from_terms(
            target,
            self.terms.iter().map(|(m, c)| {
                let mut e = vec![0u32; n];
                for (k, &t) in map.iter().enumerate() {
                    e[t] += m.exponents()[k];
                }
                (Monomial::from_exponents(&e), c.clone())
            }),
        )
    }

    /// Exact division by `divisor` when it divides `self`.
    pub fn exact_div(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert!(!divisor.is_zero());
        let (lm, lc) = divisor.terms[0].clone();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            let q = m.div(&lm)?;
            let qc = &c / &lc;
            rem = rem.merge(&divisor.mul_term(&q, &qc), true);
            quot.push((q, qc));
        }
        Some(Polynomial::from_terms(&self.ring, quot))
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

// The operator impls panic on ring mismatch; use the `try_*` methods where the
// operands come from untrusted input.
impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_add(rhs).expect("ring mismatch in polynomial addition")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("ring mismatch in polynomial subtraction")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("ring mismatch in polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
