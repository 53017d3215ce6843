use rand::Rng;

use super::chern::{rep_combine, trunc_chern_unchecked, Combine, Representative, TruncChernRep};
use super::{require_valid, AtiyahError};
use crate::complexes::{
    det_complex, det_complex_with, direct_sum, dual_complex, hom_complex, line_power, rank_of, tensor_complex,
    BundleComplex, FractionMatrix, LiftPolicy, LineBundle,
};
use crate::corpus::random_ideal_element;
use crate::geometry::{AmbientForm, ChartSet, CoveredScheme, EqualityKind, LocalFraction};

fn chern(e: &BundleComplex) -> Result<TruncChernRep, AtiyahError> {
    trunc_chern_unchecked(e)
}

/// `c1(L ⊗ M) = c1(L) + c1(M)` with the product lifts.
pub fn check_thm44(l: &LineBundle, m: &LineBundle) -> Result<bool, AtiyahError> {
    require_valid(l.complex())?;
    require_valid(m.complex())?;
    let lm = tensor_complex(l.complex(), m.complex())?;
    let sum = rep_combine(Combine::Add(&chern(l.complex())?, &chern(m.complex())?))?;
    chern(&lm)?.rep_eq(&sum, l.complex().scheme())
}

/// `c1(E) = c1(det E)` with the determinant lifts of [`det_complex`].
pub fn check_thm45(e: &BundleComplex) -> Result<bool, AtiyahError> {
    check_thm45_with(e, LiftPolicy::default())
}

pub fn check_thm45_with(e: &BundleComplex, policy: LiftPolicy) -> Result<bool, AtiyahError> {
    require_valid(e)?;
    let det = det_complex_with(e, policy)?;
    chern(e)?.rep_eq(&chern(&det)?, e.scheme())
}

/// Outcome of each identity for a pair `(E, F)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Thm46Report {
    /// `c1(E^∨) = −c1(E)` and `c1(F^∨) = −c1(F)`.
    pub dual: bool,
    /// `c1(E ⊕ F) = c1(E) + c1(F)`.
    pub sum: bool,
    /// `c1(E ⊗ F) = rk(F)·c1(E) + rk(E)·c1(F)`.
    pub tensor: bool,
    /// `c1(Hom(E, F)) = −rk(F)·c1(E) + rk(E)·c1(F)`.
    pub hom: bool,
    /// `det(E ⊗ F) = det(E)^{rk F} ⊗ det(F)^{rk E}` on transition residues.
    pub det_tensor: bool,
}

impl Thm46Report {
    pub fn all(&self) -> bool {
        self.dual && self.sum && self.tensor && self.hom && self.det_tensor
    }
}

fn constant_rank(e: &BundleComplex) -> Result<i64, AtiyahError> {
    rank_of(e).constant.ok_or(AtiyahError::NonConstantRank)
}

pub fn check_thm46(e: &BundleComplex, f: &BundleComplex) -> Result<Thm46Report, AtiyahError> {
    require_valid(e)?;
    require_valid(f)?;
    let scheme = e.scheme();
    let (rk_e, rk_f) = (constant_rank(e)?, constant_rank(f)?);
    let (ce, cf) = (chern(e)?, chern(f)?);
    let dual = chern(&dual_complex(e)?)?.rep_eq(&ce.rep_scale(-1), scheme)?
        && chern(&dual_complex(f)?)?.rep_eq(&cf.rep_scale(-1), scheme)?;
    let sum = chern(&direct_sum(e, f)?)?.rep_eq(&ce.rep_add(&cf)?, scheme)?;
    let tensor = chern(&tensor_complex(e, f)?)?.rep_eq(&ce.rep_scale(rk_f).rep_add(&cf.rep_scale(rk_e))?, scheme)?;
    let hom = chern(&hom_complex(e, f)?)?.rep_eq(&ce.rep_scale(-rk_f).rep_add(&cf.rep_scale(rk_e))?, scheme)?;
    let det_tensor = check_det_tensor(e, f)?;
    Ok(Thm46Report { dual, sum, tensor, hom, det_tensor })
}

/// `det(E ⊗ F)_ij ≡ det(E)_ij^{rk F}·det(F)_ij^{rk E}` modulo `J` on every
/// nonempty pair.
pub fn check_det_tensor(e: &BundleComplex, f: &BundleComplex) -> Result<bool, AtiyahError> {
    let (rk_e, rk_f) = (constant_rank(e)?, constant_rank(f)?);
    let lhs = det_complex(&tensor_complex(e, f)?)?;
    let rhs = tensor_complex(&line_power(&det_complex(e)?, rk_f)?, &line_power(&det_complex(f)?, rk_e)?)?;
    let scheme = e.scheme();
    for i in 0..e.ncharts() {
        for j in 0..e.ncharts() {
            if i == j || scheme.chart_empty(&e.chart(&[i, j])) {
                continue;
            }
            let a = lhs.transition(i, j, 0);
            let b = rhs.transition(i, j, 0);
            if !scheme.equal_mod(EqualityKind::J, a.get(0, 0), b.get(0, 0))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// For `samples` random `M = 1 + N` with entries of `N` in `J`, checks
/// `det M ≡ tr M − (m − 1)` modulo `J²` on `chart`.
pub fn check_det_trace<R: Rng>(
    m: usize,
    scheme: &CoveredScheme,
    chart: &ChartSet,
    samples: usize,
    rng: &mut R,
) -> Result<bool, AtiyahError> {
    if m == 0 {
        return Err(AtiyahError::SizeOutOfRange(m));
    }
    for _ in 0..samples {
        let n = FractionMatrix::from_fn(m, m, chart, |_, _| {
            let pow = rng.gen_range(0..=1);
            LocalFraction::new(random_ideal_element(rng, scheme), pow, chart)
        });
        let mat = FractionMatrix::identity(m, chart).add(&n);
        let rhs = &mat.trace() - &LocalFraction::from_int(m as i64 - 1, chart);
        if !scheme.equal_mod(EqualityKind::JSquared, &mat.det(), &rhs)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Σ_{u,v} det(M^{uv})·dM_uv = d(det M)` for the generic `m × m` matrix,
/// where `M^{uv}` has entry `(u, v)` replaced by `1` and the rest of row `u`
/// and column `v` by `0`. Exact in the polynomial ring of the entries.
pub fn check_cofactor_identity(m: usize) -> Result<bool, AtiyahError> {
    if !(1..=4).contains(&m) {
        return Err(AtiyahError::SizeOutOfRange(m));
    }
    let names: Vec<String> = (0..m * m).map(|k| format!("m{}{}", k / m + 1, k % m + 1)).collect();
    let vars: Vec<&str> = names.iter().map(String::as_str).collect();
    let scheme = CoveredScheme::parse(&vars, &[], &[("U", "1")])?;
    let chart = scheme.chart_set(&[0])?;
    let ring = scheme.ring();
    let entry = |u: usize, v: usize| LocalFraction::from_poly(crate::ring::Polynomial::var(ring, u * m + v), &chart);
    let generic = FractionMatrix::from_fn(m, m, &chart, entry);
    let rhs = generic.det().derivative();
    let mut lhs = AmbientForm::zero(&chart);
    for u in 0..m {
        for v in 0..m {
            let replaced = FractionMatrix::from_fn(m, m, &chart, |a, b| match (a == u, b == v) {
                (true, true) => LocalFraction::one(&chart),
                (true, false) | (false, true) => LocalFraction::zero(&chart),
                (false, false) => entry(a, b),
            });
            lhs = &lhs + &entry(u, v).derivative().try_mul_fraction(&replaced.det())?;
        }
    }
    Ok(scheme.forms_equal_mod(EqualityKind::Ring, &lhs, &rhs)?)
}
