//! Closed subschemes `X = V(J)` of affine space with an ordered cover by
//! distinguished opens `D(f_i)`, and decidable equality for the element types
//! living on a chart set `Λ`:
//!
//! | element of            | representation   | compared with                 |
//! |-----------------------|------------------|-------------------------------|
//! | `A_Λ`                 | [`LocalFraction`]| [`EqualityKind::Ring`]        |
//! | `A_Λ/J_Λ`             | [`Residue`]      | [`EqualityKind::J`]           |
//! | `J_Λ/J_Λ²`            | [`Conormal`]     | [`EqualityKind::JSquared`]    |
//! | `Ω_U|_X` on `X_Λ`     | [`AmbientForm`]  | [`EqualityKind::J`]           |
//! | `Ω_X` on `X_Λ`        | [`IntrinsicForm`]| [`EqualityKind::Jacobian`]    |
//!
//! Membership in a localized ideal `J·A_Λ` is decided by the saturation
//! `J : f_Λ^∞`, which is computed once per chart set and memoized.
//!
//! The base is fixed to `Spec ℚ`, so flatness of `X` over the base holds
//! automatically and is not checked.

mod fraction;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::groebner::{
    ideal_basis, module_buchberger, module_member, saturate, saturate_module, GroebnerBasis, ModuleGroebnerBasis,
    ModuleVector, MonomialOrder,
};
use crate::ring::{parse_poly, PolyRing, Polynomial, RingError};

pub use fraction::{AmbientForm, ChartSet, LocalFraction};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("operands live on different chart sets")]
    ChartMismatch,
    #[error("restriction target is not a superset of the source chart set")]
    NotSuperset,
    #[error("equality kind does not apply to this element type")]
    KindMismatch,
    #[error("conormal invariant violated: {0}")]
    InvariantViolation(String),
    #[error("the charts do not cover X: (J, f_1, ..., f_r) is not the unit ideal")]
    NotACover,
    #[error("chart `{0}` has zero localizing element")]
    ZeroChart(String),
    #[error("invalid chart set: {0}")]
    BadChartSet(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EqualityKind {
    /// Equality in `A_Λ`.
    Ring,
    /// Equality modulo `J_Λ`.
    J,
    /// Equality modulo `J_Λ²`.
    JSquared,
    /// Equality of forms in `Ω_X`.
    Jacobian,
}

/// Affine space over ℚ with coordinates named by `ring`.
#[derive(Debug, Clone)]
pub struct Ambient {
    ring: Arc<PolyRing>,
}

impl Ambient {
    pub fn new(ring: Arc<PolyRing>) -> Self {
        Ambient { ring }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.ring.nvars()
    }
}

#[derive(Debug, Clone)]
pub struct Subscheme {
    ambient: Ambient,
    ideal_gens: Vec<Polynomial>,
}

impl Subscheme {
    /// Zero generators are dropped.
    pub fn new(ambient: Ambient, ideal_gens: Vec<Polynomial>) -> Self {
        let ideal_gens = ideal_gens.into_iter().filter(|g| !g.is_zero()).collect();
        Subscheme { ambient, ideal_gens }
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn ideal_gens(&self) -> &[Polynomial] {
        &self.ideal_gens
    }

    /// Pairwise products `g_a·g_b`, `a ≤ b`.
    pub fn ideal_square_gens(&self) -> Vec<Polynomial> {
        let g = &self.ideal_gens;
        let mut out = Vec::new();
        for a in 0..g.len() {
            for b in a..g.len() {
                out.push(&g[a] * &g[b]);
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Chart {
    name: String,
    f: Polynomial,
}

impl Chart {
    pub fn new(name: impl Into<String>, f: Polynomial) -> Result<Self, GeometryError> {
        let name = name.into();
        if f.is_zero() {
            return Err(GeometryError::ZeroChart(name));
        }
        Ok(Chart { name, f })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }
}

/// Strictly ordered list of charts; index order is the cover order.
#[derive(Debug, Clone)]
pub struct Cover {
    charts: Vec<Chart>,
}

impl Cover {
    pub fn new(charts: Vec<Chart>) -> Result<Self, GeometryError> {
        if charts.is_empty() {
            return Err(GeometryError::BadChartSet("cover has no charts".into()));
        }
        for (k, c) in charts.iter().enumerate() {
            if charts[..k].iter().any(|d| d.name == c.name) {
                return Err(GeometryError::BadChartSet(format!("duplicate chart name `{}`", c.name)));
            }
        }
        Ok(Cover { charts })
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn len(&self) -> usize {
        self.charts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charts.is_empty()
    }
}

/// Compute-once memo table keyed by chart-set indices.
struct Memo<T> {
    cells: Mutex<HashMap<Vec<usize>, Arc<OnceLock<Arc<T>>>>>,
}

impl<T> Memo<T> {
    fn new() -> Self {
        Memo { cells: Mutex::new(HashMap::new()) }
    }

    fn get_or_init(&self, key: &[usize], init: impl FnOnce() -> T) -> Arc<T> {
        let cell = {
            let mut cells = self.cells.lock().expect("poisoned");
            cells.entry(key.to_vec()).or_insert_with(|| Arc::new(OnceLock::new())).clone()
        };
        // The map lock is released, so other keys proceed while this one is
        // computed; concurrent callers for the same key wait on the cell.
        cell.get_or_init(|| Arc::new(init())).clone()
    }
}

/// Per-chart-set reduced bases of `J : f_Λ^∞`, `J² : f_Λ^∞` and of the
/// saturated Jacobian submodule.
pub struct SaturationCache {
    j: Memo<GroebnerBasis>,
    j2: Memo<GroebnerBasis>,
    jacobian: Memo<ModuleGroebnerBasis>,
    chart_sets: Mutex<HashMap<Vec<usize>, ChartSet>>,
}

impl SaturationCache {
    fn new() -> Self {
        SaturationCache { j: Memo::new(), j2: Memo::new(), jacobian: Memo::new(), chart_sets: Mutex::new(HashMap::new()) }
    }
}

/// A subscheme with a validated cover and its saturation cache.
pub struct CoveredScheme {
    scheme: Subscheme,
    cover: Cover,
    cache: SaturationCache,
}

impl std::fmt::Debug for CoveredScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoveredScheme").field("scheme", &self.scheme).field("cover", &self.cover).finish()
    }
}

impl CoveredScheme {
    /// Fails unless `(J, f_1, …, f_r)` is the unit ideal.
    pub fn new(scheme: Subscheme, cover: Cover) -> Result<Arc<Self>, GeometryError> {
        let ring = scheme.ambient.ring.clone();
        let mut gens = scheme.ideal_gens.clone();
        gens.extend(cover.charts.iter().map(|c| c.f.clone()));
        if !ideal_basis(&ring, &gens).is_unit() {
            return Err(GeometryError::NotACover);
        }
        Ok(Arc::new(CoveredScheme { scheme, cover, cache: SaturationCache::new() }))
    }

    /// Convenience constructor from strings.
    pub fn parse(vars: &[&str], ideal: &[&str], charts: &[(&str, &str)]) -> Result<Arc<Self>, GeometryError> {
        let ring = PolyRing::new(vars)?;
        let gens = ideal.iter().map(|t| parse_poly(t, &ring)).collect::<Result<Vec<_>, _>>()?;
        let charts = charts
            .iter()
            .map(|(n, f)| Chart::new(*n, parse_poly(f, &ring)?))
            .collect::<Result<Vec<_>, GeometryError>>()?;
        Self::new(Subscheme::new(Ambient::new(ring), gens), Cover::new(charts)?)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.scheme.ambient.ring
    }

    pub fn subscheme(&self) -> &Subscheme {
        &self.scheme
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn nvars(&self) -> usize {
        self.ring().nvars()
    }

    pub fn ncharts(&self) -> usize {
        self.cover.len()
    }

    /// The chart set on `indices` (sorted and deduplicated first).
    pub fn chart_set(&self, indices: &[usize]) -> Result<ChartSet, GeometryError> {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if idx.is_empty() {
            return Err(GeometryError::BadChartSet("empty index set".into()));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.cover.len()) {
            return Err(GeometryError::BadChartSet(format!("chart index {bad} out of range")));
        }
        let mut sets = self.cache.chart_sets.lock().expect("poisoned");
        if let Some(cs) = sets.get(&idx) {
            return Ok(cs.clone());
        }
        let mut f = Polynomial::one(self.ring());
        for &i in &idx {
            f = &f * &self.cover.charts[i].f;
        }
        let cs = ChartSet::from_parts(idx.clone(), f);
        sets.insert(idx, cs.clone());
        Ok(cs)
    }

    /// Reduced basis of `J : f_Λ^∞`.
    pub fn saturated_ideal(&self, chart: &ChartSet) -> Arc<GroebnerBasis> {
        self.cache.j.get_or_init(chart.indices(), || {
            ideal_basis(self.ring(), &saturate(&self.scheme.ideal_gens, chart.f()))
        })
    }

    /// Reduced basis of `J² : f_Λ^∞`.
    pub fn saturated_square(&self, chart: &ChartSet) -> Arc<GroebnerBasis> {
        self.cache.j2.get_or_init(chart.indices(), || {
            ideal_basis(self.ring(), &saturate(&self.scheme.ideal_square_gens(), chart.f()))
        })
    }

    /// Generators of the Jacobian submodule of `A^n`: `dg` for each listed
    /// generator `g`, and `g·e_v` for each `g` and coordinate `v`.
    pub fn jacobian_generators(&self) -> Vec<ModuleVector> {
        let ring = self.ring();
        let n = ring.nvars();
        let mut out = Vec::new();
        for g in &self.scheme.ideal_gens {
            out.push(ModuleVector::new((0..n).map(|v| g.derivative(v)).collect()));
            for v in 0..n {
                out.push(ModuleVector::basis(ring, n, v, g.clone()));
            }
        }
        out
    }

    /// Basis of the Jacobian submodule saturated by `f_Λ`.
    pub fn saturated_jacobian(&self, chart: &ChartSet) -> Arc<ModuleGroebnerBasis> {
        self.cache.jacobian.get_or_init(chart.indices(), || {
            let ring = self.ring();
            let n = ring.nvars();
            let sat = saturate_module(ring, n, &self.jacobian_generators(), chart.f()).expect("uniform rank");
            module_buchberger(ring, n, &sat, &MonomialOrder::degrevlex()).expect("uniform rank")
        })
    }

    /// Whether `X_Λ = ∅`, i.e. `1 ∈ J : f_Λ^∞`.
    pub fn chart_empty(&self, chart: &ChartSet) -> bool {
        self.saturated_ideal(chart).is_unit()
    }

    fn check_chart(&self, chart: &ChartSet) -> Result<(), GeometryError> {
        match self.chart_set(chart.indices()) {
            Ok(cs) if cs == *chart => Ok(()),
            _ => Err(GeometryError::ChartMismatch),
        }
    }

    /// Whether `num/f_Λ^pow` lies in the localized `J` (or `J²`).
    pub fn in_ideal(&self, a: &LocalFraction, squared: bool) -> bool {
        if a.is_zero() {
            return true;
        }
        let gb = if squared { self.saturated_square(a.chart()) } else { self.saturated_ideal(a.chart()) };
        gb.contains(a.num())
    }

    /// Same class modulo the localized `J²`, with the numerator in normal form.
    pub fn reduce_mod_square(&self, a: &LocalFraction) -> LocalFraction {
        if a.is_zero() {
            return a.clone();
        }
        let num = self.saturated_square(a.chart()).reduce(a.num());
        LocalFraction::new(num, a.pow(), a.chart()).normalized()
    }

    pub fn equal_mod(&self, kind: EqualityKind, a: &LocalFraction, b: &LocalFraction) -> Result<bool, GeometryError> {
        self.check_chart(a.chart())?;
        let diff = a.try_sub(b)?;
        match kind {
            EqualityKind::Ring => Ok(diff.is_zero()),
            EqualityKind::J => Ok(self.in_ideal(&diff, false)),
            EqualityKind::JSquared => Ok(self.in_ideal(&diff, true)),
            EqualityKind::Jacobian => Err(GeometryError::KindMismatch),
        }
    }

    /// Coefficientwise for `Ring`, `J` and `JSquared`; in `Ω_X` for
    /// `Jacobian`.
    pub fn forms_equal_mod(&self, kind: EqualityKind, a: &AmbientForm, b: &AmbientForm) -> Result<bool, GeometryError> {
        self.check_chart(a.chart())?;
        let diff = a.try_sub(b)?;
        match kind {
            EqualityKind::Jacobian => {
                if diff.is_zero() {
                    return Ok(true);
                }
                let (nums, _) = diff.common_numerators();
                Ok(module_member(&ModuleVector::new(nums), &self.saturated_jacobian(a.chart())).expect("rank n"))
            }
            _ => {
                for c in diff.coeffs() {
                    if !self.equal_mod(kind, c, &LocalFraction::zero(a.chart()))? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    pub fn is_zero_mod(&self, kind: EqualityKind, a: &LocalFraction) -> Result<bool, GeometryError> {
        self.equal_mod(kind, a, &LocalFraction::zero(a.chart()))
    }

    pub fn form_is_zero_mod(&self, kind: EqualityKind, a: &AmbientForm) -> Result<bool, GeometryError> {
        self.forms_equal_mod(kind, a, &AmbientForm::zero(a.chart()))
    }

    /// `d` of a localized function.
    pub fn derive_fraction(&self, a: &LocalFraction) -> AmbientForm {
        a.derivative()
    }

    /// The differential `J/J² → Ω_U|_X`.
    pub fn conormal_to_form(&self, c: &Conormal) -> Result<AmbientForm, GeometryError> {
        if !self.in_ideal(&c.0, false) {
            return Err(GeometryError::InvariantViolation(format!("{} is not in J on {:?}", c.0, c.0.chart())));
        }
        Ok(c.0.derivative())
    }
}

/// An element of `A_Λ/J_Λ`.
#[derive(Clone, Debug)]
pub struct Residue(pub LocalFraction);

/// An element of `J_Λ/J_Λ²`.
#[derive(Clone, Debug)]
pub struct Conormal(LocalFraction);

impl Conormal {
    /// Checks that the representative lies in `J_Λ`.
    pub fn new(scheme: &CoveredScheme, value: LocalFraction) -> Result<Self, GeometryError> {
        if !scheme.in_ideal(&value, false) {
            return Err(GeometryError::InvariantViolation(format!("{} is not in J", value)));
        }
        Ok(Conormal(value))
    }

    pub fn value(&self) -> &LocalFraction {
        &self.0
    }
}

/// An element of `Ω_X`, represented by an ambient form.
#[derive(Clone, Debug)]
pub struct IntrinsicForm(pub AmbientForm);

impl Residue {
    pub fn equal(&self, scheme: &CoveredScheme, other: &Residue) -> Result<bool, GeometryError> {
        scheme.equal_mod(EqualityKind::J, &self.0, &other.0)
    }
}

impl Conormal {
    pub fn equal(&self, scheme: &CoveredScheme, other: &Conormal) -> Result<bool, GeometryError> {
        scheme.equal_mod(EqualityKind::JSquared, &self.0, &other.0)
    }
}

impl IntrinsicForm {
    pub fn equal(&self, scheme: &CoveredScheme, other: &IntrinsicForm) -> Result<bool, GeometryError> {
        scheme.forms_equal_mod(EqualityKind::Jacobian, &self.0, &other.0)
    }
}
