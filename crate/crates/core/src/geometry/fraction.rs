use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use super::GeometryError;
use crate::ring::{PolyRing, Polynomial, Rational};

/// A nonempty strictly increasing set of chart indices together with the
/// product `f_Λ` of its localizing elements.
#[derive(Clone)]
pub struct ChartSet {
    inner: Arc<ChartSetInner>,
}

struct ChartSetInner {
    indices: Vec<usize>,
    f: Polynomial,
    powers: Mutex<Vec<Polynomial>>,
}

impl ChartSet {
    /// `indices` must be strictly increasing; `f` is the product of the
    /// member charts' elements.
    pub(crate) fn from_parts(indices: Vec<usize>, f: Polynomial) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        let powers = Mutex::new(vec![Polynomial::one(f.ring()), f.clone()]);
        ChartSet { inner: Arc::new(ChartSetInner { indices, f, powers }) }
    }

    pub fn indices(&self) -> &[usize] {
        &self.inner.indices
    }

    pub fn f(&self) -> &Polynomial {
        &self.inner.f
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.inner.f.ring()
    }

    pub fn min(&self) -> usize {
        self.inner.indices[0]
    }

    pub fn len(&self) -> usize {
        self.inner.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.inner.indices.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &ChartSet) -> bool {
        self.indices().iter().all(|&i| other.contains(i))
    }

    /// `f_Λ^k`, memoized per chart set.
    pub fn f_pow(&self, k: u32) -> Polynomial {
        let mut powers = self.inner.powers.lock().expect("poisoned");
        while powers.len() <= k as usize {
            let next = powers.last().expect("nonempty") * &self.inner.f;
            powers.push(next);
        }
        powers[k as usize].clone()
    }
}

impl PartialEq for ChartSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || (self.inner.indices == other.inner.indices && self.inner.f == other.inner.f)
    }
}

impl Eq for ChartSet {}

impl fmt::Debug for ChartSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChartSet{:?}", self.indices())
    }
}

/// `num / f_Λ^pow`, an element of the localized ring on a chart set.
#[derive(Clone, Debug)]
pub struct LocalFraction {
    num: Polynomial,
    pow: u32,
    chart: ChartSet,
}

impl LocalFraction {
    pub fn new(num: Polynomial, pow: u32, chart: &ChartSet) -> Self {
        LocalFraction { num, pow, chart: chart.clone() }
    }

    pub fn from_poly(num: Polynomial, chart: &ChartSet) -> Self {
        Self::new(num, 0, chart)
    }

    pub fn zero(chart: &ChartSet) -> Self {
        Self::from_poly(Polynomial::zero(chart.ring()), chart)
    }

    pub fn one(chart: &ChartSet) -> Self {
        Self::from_poly(Polynomial::one(chart.ring()), chart)
    }

    pub fn from_int(c: i64, chart: &ChartSet) -> Self {
        Self::from_poly(Polynomial::from_int(chart.ring(), c), chart)
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn pow(&self) -> u32 {
        self.pow
    }

    pub fn chart(&self) -> &ChartSet {
        &self.chart
    }

    /// Representation-level zero test; semantic equality lives in
    /// `CoveredScheme::equal_mod`.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn check(&self, other: &LocalFraction) -> Result<(), GeometryError> {
        if self.chart == other.chart {
            Ok(())
        } else {
            Err(GeometryError::ChartMismatch)
        }
    }

    fn lifted_num(&self, pow: u32) -> Polynomial {
        debug_assert!(pow >= self.pow);
        if pow == self.pow || self.num.is_zero() {
            self.num.clone()
        } else {
            &self.num * &self.chart.f_pow(pow - self.pow)
        }
    }

    /// Numerators of both operands over the common denominator `f^max`.
    fn common(&self, other: &LocalFraction) -> (Polynomial, Polynomial, u32) {
        let p = self.pow.max(other.pow);
        (self.lifted_num(p), other.lifted_num(p), p)
    }

    pub fn try_add(&self, other: &LocalFraction) -> Result<LocalFraction, GeometryError> {
        self.check(other)?;
        if other.num.is_zero() {
            return Ok(self.clone());
        }
        if self.num.is_zero() {
            return Ok(other.clone());
        }
        let (a, b, p) = self.common(other);
        Ok(LocalFraction::new(&a + &b, p, &self.chart))
    }

    pub fn try_sub(&self, other: &LocalFraction) -> Result<LocalFraction, GeometryError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &LocalFraction) -> Result<LocalFraction, GeometryError> {
        self.check(other)?;
        if self.num.is_zero() || other.num.is_zero() {
            return Ok(LocalFraction::zero(&self.chart));
        }
        Ok(LocalFraction::new(&self.num * &other.num, self.pow + other.pow, &self.chart))
    }

    pub fn scale(&self, c: &Rational) -> LocalFraction {
        if c.is_zero() {
            return LocalFraction::zero(&self.chart);
        }
        LocalFraction::new(self.num.scale(c), self.pow, &self.chart)
    }

    pub fn scale_int(&self, c: i64) -> LocalFraction {
        self.scale(&Rational::from_integer(c.into()))
    }

    pub fn mul_poly(&self, p: &Polynomial) -> LocalFraction {
        LocalFraction::new(&self.num * p, self.pow, &self.chart)
    }

    /// Image under the localization map to a larger chart set:
    /// `num·f_{target∖Λ}^pow / f_target^pow`.
    pub fn restrict(&self, target: &ChartSet) -> Result<LocalFraction, GeometryError> {
        if !self.chart.is_subset_of(target) {
            return Err(GeometryError::NotSuperset);
        }
        if self.chart == *target {
            return Ok(self.clone());
        }
        if self.pow == 0 || self.num.is_zero() {
            return Ok(LocalFraction::new(self.num.clone(), self.pow, target));
        }
        let rest = target.f().exact_div(self.chart.f()).expect("chart product divides");
        Ok(LocalFraction::new(&self.num * &rest.pow(self.pow), self.pow, target))
    }

    /// Cancels factors of `f_Λ` from the numerator while possible; the value
    /// is unchanged.
    pub fn normalized(&self) -> LocalFraction {
        let mut out = self.clone();
        if out.num.is_zero() {
            out.pow = 0;
            return out;
        }
        while out.pow > 0 {
            match out.num.exact_div(out.chart.f()) {
                Some(q) => {
                    out.num = q;
                    out.pow -= 1;
                }
                None => break,
            }
        }
        out
    }

    /// Exact equality in the localized ring (the ambient ring is a domain).
    pub fn ring_eq(&self, other: &LocalFraction) -> Result<bool, GeometryError> {
        self.check(other)?;
        let (a, b, _) = self.common(other);
        Ok(a == b)
    }

    /// The quotient rule applied to each variable.
    pub fn derivative(&self) -> AmbientForm {
        let n = self.chart.ring().nvars();
        if self.num.is_zero() {
            return AmbientForm::zero(&self.chart);
        }
        let coeffs = (0..n)
            .map(|v| {
                if self.pow == 0 {
                    return LocalFraction::new(self.num.derivative(v), 0, &self.chart);
                }
                let f = self.chart.f();
                let top = &(f * &self.num.derivative(v)) - &(&self.num * &f.derivative(v)).scale_int(self.pow as i64);
                LocalFraction::new(top, self.pow + 1, &self.chart)
            })
            .collect();
        AmbientForm { chart: self.chart.clone(), coeffs }
    }
}

impl fmt::Display for LocalFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pow == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / f_{:?}^{}", self.num, self.chart.indices(), self.pow)
        }
    }
}

macro_rules! frac_op {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&LocalFraction> for &LocalFraction {
            type Output = LocalFraction;
            fn $m(self, rhs: &LocalFraction) -> LocalFraction {
                self.$try(rhs).expect("chart mismatch")
            }
        }
    };
}

frac_op!(Add, add, try_add);
frac_op!(Sub, sub, try_sub);
frac_op!(Mul, mul, try_mul);

impl Neg for &LocalFraction {
    type Output = LocalFraction;
    fn neg(self) -> LocalFraction {
        LocalFraction::new(-&self.num, self.pow, &self.chart)
    }
}

/// `Σ_v coeffs[v]·dx_v` with coefficients in the localized ring, viewed
/// modulo `J` (an element of `Ω_U|_X`) or modulo the Jacobian submodule (an
/// element of `Ω_X`) depending on the comparison.
#[derive(Clone, Debug)]
pub struct AmbientForm {
    chart: ChartSet,
    coeffs: Vec<LocalFraction>,
}

impl AmbientForm {
    pub fn new(chart: &ChartSet, coeffs: Vec<LocalFraction>) -> Result<Self, GeometryError> {
        if coeffs.len() != chart.ring().nvars() {
            return Err(GeometryError::Dimension(format!("form needs {} coefficients", chart.ring().nvars())));
        }
        if coeffs.iter().any(|c| c.chart != *chart) {
            return Err(GeometryError::ChartMismatch);
        }
        Ok(AmbientForm { chart: chart.clone(), coeffs })
    }

    pub fn zero(chart: &ChartSet) -> Self {
        let n = chart.ring().nvars();
        AmbientForm { chart: chart.clone(), coeffs: vec![LocalFraction::zero(chart); n] }
    }

    pub fn chart(&self) -> &ChartSet {
        &self.chart
    }

    pub fn coeffs(&self) -> &[LocalFraction] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LocalFraction::is_zero)
    }

    pub fn try_add(&self, other: &AmbientForm) -> Result<AmbientForm, GeometryError> {
        if self.chart != other.chart {
            return Err(GeometryError::ChartMismatch);
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.try_add(b)).collect::<Result<_, _>>()?;
        Ok(AmbientForm { chart: self.chart.clone(), coeffs })
    }

    pub fn try_sub(&self, other: &AmbientForm) -> Result<AmbientForm, GeometryError> {
        self.try_add(&-other)
    }

    /// Multiplication by a function.
    pub fn try_mul_fraction(&self, a: &LocalFraction) -> Result<AmbientForm, GeometryError> {
        let coeffs = self.coeffs.iter().map(|c| a.try_mul(c)).collect::<Result<_, _>>()?;
        Ok(AmbientForm { chart: self.chart.clone(), coeffs })
    }

    pub fn scale_int(&self, c: i64) -> AmbientForm {
        AmbientForm { chart: self.chart.clone(), coeffs: self.coeffs.iter().map(|x| x.scale_int(c)).collect() }
    }

    pub fn restrict(&self, target: &ChartSet) -> Result<AmbientForm, GeometryError> {
        let coeffs = self.coeffs.iter().map(|c| c.restrict(target)).collect::<Result<_, _>>()?;
        Ok(AmbientForm { chart: target.clone(), coeffs })
    }

    pub fn normalized(&self) -> AmbientForm {
        AmbientForm { chart: self.chart.clone(), coeffs: self.coeffs.iter().map(LocalFraction::normalized).collect() }
    }

    /// Coefficient numerators over one common denominator `f_Λ^pow`.
    pub fn common_numerators(&self) -> (Vec<Polynomial>, u32) {
        let p = self.coeffs.iter().map(|c| c.pow).max().unwrap_or(0);
        (self.coeffs.iter().map(|c| c.lifted_num(p)).collect(), p)
    }
}

impl Add<&AmbientForm> for &AmbientForm {
    type Output = AmbientForm;
    fn add(self, rhs: &AmbientForm) -> AmbientForm {
        self.try_add(rhs).expect("chart mismatch")
    }
}

impl Sub<&AmbientForm> for &AmbientForm {
    type Output = AmbientForm;
    fn sub(self, rhs: &AmbientForm) -> AmbientForm {
        self.try_sub(rhs).expect("chart mismatch")
    }
}

impl Neg for &AmbientForm {
    type Output = AmbientForm;
    fn neg(self) -> AmbientForm {
        AmbientForm { chart: self.chart.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for AmbientForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = self.chart.ring().vars();
        let mut first = true;
        for (c, v) in self.coeffs.iter().zip(vars) {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "[{}]*d{}", c.normalized(), v)?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
