//! Bundled example schemes and complexes, and a seeded generator of random
//! valid complexes.
//!
//! Random complexes are conjugates of a constant model: per chart and degree
//! an invertible matrix `G_i^s` (a product of unit diagonals and elementary
//! matrices), a global differential `D` with `D² = 0`, and lifts
//! `M̃_ij = G_i·G_j^{-1}`, `D̃_i = G_i^{s+1}·D^s·(G_i^s)^{-1}`, each plus a
//! random matrix with entries in `J`.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;

use crate::complexes::{BundleComplex, FractionMatrix, LineBundle};
use crate::geometry::{ChartSet, CoveredScheme, LocalFraction};
use crate::groebner::ideal_basis;
use crate::ring::{parse_poly, rat, Monomial, Polynomial};

/// `𝔸¹` covered by `D(x), D(x−1)`, optionally also `D(x+1), D(x−2)`.
pub fn smooth_line(four_charts: bool) -> Arc<CoveredScheme> {
    let mut charts = vec![("U1", "x"), ("U2", "x - 1")];
    if four_charts {
        charts.extend([("U3", "x + 1"), ("U4", "x - 2")]);
    }
    CoveredScheme::parse(&["x"], &[], &charts).expect("bundled scheme")
}

/// The nodal cubic `y² = x³ + x²` covered by `D(x), D(x+1), D(y−1)`,
/// optionally also `D(y+1)`.
pub fn nodal_cubic(four_charts: bool) -> Arc<CoveredScheme> {
    let mut charts = vec![("A", "x"), ("B", "x + 1"), ("C", "y - 1")];
    if four_charts {
        charts.push(("D", "y + 1"));
    }
    CoveredScheme::parse(&["x", "y"], &["y^2 - x^3 - x^2"], &charts).expect("bundled scheme")
}

/// The double line `V(x²) ⊂ 𝔸²` covered by `D(y), D(y−1), D(y+1)`,
/// optionally also `D(y+2)`.
pub fn double_line(four_charts: bool) -> Arc<CoveredScheme> {
    let mut charts = vec![("V1", "y"), ("V2", "y - 1"), ("V3", "y + 1")];
    if four_charts {
        charts.push(("V4", "y + 2"));
    }
    CoveredScheme::parse(&["x", "y"], &["x^2"], &charts).expect("bundled scheme")
}

/// All bundled schemes by name.
pub fn bundled_schemes() -> Vec<(&'static str, Arc<CoveredScheme>)> {
    vec![
        ("smooth", smooth_line(false)),
        ("smooth4", smooth_line(true)),
        ("nodal", nodal_cubic(false)),
        ("nodal4", nodal_cubic(true)),
        ("double", double_line(false)),
        ("double4", double_line(true)),
    ]
}

/// `num / f_Λ^pow` on the chart set `idx`; panics on malformed input.
pub fn fraction(scheme: &CoveredScheme, idx: &[usize], num: &str, pow: u32) -> LocalFraction {
    let chart = scheme.chart_set(idx).expect("chart indices");
    LocalFraction::new(parse_poly(num, scheme.ring()).expect("polynomial"), pow, &chart)
}

fn ordered_pairs(r: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..r).flat_map(move |i| (0..r).filter(move |&j| j != i).map(move |j| (i, j)))
}

/// `f_i^k` as a fraction on any chart set containing `i`.
fn chart_unit(scheme: &CoveredScheme, chart: &ChartSet, i: usize, k: i32) -> LocalFraction {
    let f_i = scheme.cover().charts()[i].f();
    if k >= 0 {
        return LocalFraction::from_poly(f_i.pow(k as u32), chart);
    }
    let mut rest = Polynomial::one(scheme.ring());
    for &j in chart.indices() {
        if j != i {
            rest = &rest * scheme.cover().charts()[j].f();
        }
    }
    LocalFraction::new(rest.pow((-k) as u32), (-k) as u32, chart)
}

pub fn trivial_line_bundle(scheme: &Arc<CoveredScheme>) -> LineBundle {
    let lifts = ordered_pairs(scheme.ncharts()).map(|(i, j)| ((i, j), fraction(scheme, &[i, j], "1", 0))).collect();
    LineBundle::from_lifts(scheme, lifts).expect("valid")
}

/// Lifts `M̃_ij = f_i^{k_i}·f_j^{−k_j}`.
pub fn monomial_line_bundle(scheme: &Arc<CoveredScheme>, exponents: &[i32]) -> LineBundle {
    let lifts = ordered_pairs(scheme.ncharts())
        .map(|(i, j)| {
            let chart = scheme.chart_set(&[i, j]).expect("chart");
            let a = chart_unit(scheme, &chart, i, exponents[i]);
            let b = chart_unit(scheme, &chart, j, -exponents[j]);
            ((i, j), (&a * &b).normalized())
        })
        .collect();
    LineBundle::from_lifts(scheme, lifts).expect("valid")
}

/// The standard nontrivial example on each bundled scheme: `f_1` on the
/// first chart and `1` elsewhere, so `M̃_12 = f_1`. On `𝔸¹` with two charts
/// this is `M̃_12 = x`, `M̃_21 = (x−1)/(x(x−1))`.
pub fn standard_line_bundle(scheme: &Arc<CoveredScheme>) -> LineBundle {
    let mut exps = vec![0; scheme.ncharts()];
    exps[0] = 1;
    monomial_line_bundle(scheme, &exps)
}

/// On the nodal cubic: every lift `1` except `M̃_21 = 1 + g + extra`, with
/// `g` the defining equation.
pub fn nodal_defect_bundle(scheme: &Arc<CoveredScheme>, extra: &str) -> LineBundle {
    let g = "y^2 - x^3 - x^2";
    let lifts = ordered_pairs(scheme.ncharts())
        .map(|(i, j)| {
            let num = if (i, j) == (1, 0) { format!("1 + ({g}) + ({extra})") } else { "1".to_string() };
            ((i, j), fraction(scheme, &[i, j], &num, 0))
        })
        .collect();
    LineBundle::from_lifts(scheme, lifts).expect("valid")
}

/// A random polynomial with at most `terms` terms of degree `≤ max_deg` and
/// coefficients in `{−2, …, 2}`.
pub fn random_poly<R: Rng>(rng: &mut R, scheme: &CoveredScheme, max_deg: u32, terms: usize) -> Polynomial {
    let ring = scheme.ring();
    let n = ring.nvars();
    let mut out = Vec::new();
    for _ in 0..terms {
        let mut exps = vec![0u32; n];
        let mut budget = rng.gen_range(0..=max_deg);
        while budget > 0 {
            exps[rng.gen_range(0..n)] += 1;
            budget -= 1;
        }
        let c = rng.gen_range(-2i64..=2);
        if c != 0 {
            out.push((Monomial::from_exponents(&exps), rat(c, 1)));
        }
    }
    Polynomial::from_terms(ring, out)
}

/// A random element of `J` (zero when `J = 0`): `Σ_g g·q_g` with small `q_g`.
pub fn random_ideal_element<R: Rng>(rng: &mut R, scheme: &CoveredScheme) -> Polynomial {
    let mut acc = Polynomial::zero(scheme.ring());
    for g in scheme.subscheme().ideal_gens() {
        acc = &acc + &(g * &random_poly(rng, scheme, 1, 2));
    }
    acc
}

/// Variables `v` with `v ∉ J`, `v² ∈ J`; `1 + c·v` is then a unit with
/// inverse lift `1 − c·v`.
fn nilpotent_variables(scheme: &CoveredScheme) -> Vec<Polynomial> {
    let ring = scheme.ring();
    let gb = ideal_basis(ring, scheme.subscheme().ideal_gens());
    (0..ring.nvars())
        .map(|v| Polynomial::var(ring, v))
        .filter(|v| !gb.contains(v) && gb.contains(&v.pow(2)))
        .collect()
}

fn random_j_matrix<R: Rng>(rng: &mut R, scheme: &CoveredScheme, rows: usize, cols: usize, chart: &ChartSet) -> FractionMatrix {
    FractionMatrix::from_fn(rows, cols, chart, |_, _| {
        if rng.gen_bool(0.5) {
            LocalFraction::from_poly(random_ideal_element(rng, scheme), chart)
        } else {
            LocalFraction::zero(chart)
        }
    })
}

/// An invertible matrix on chart `i` and a lift of its inverse.
fn random_unit_matrix<R: Rng>(rng: &mut R, scheme: &CoveredScheme, i: usize, n: usize, nilpotents: &[Polynomial]) -> (FractionMatrix, FractionMatrix) {
    let chart = scheme.chart_set(&[i]).expect("chart");
    let consts = [(1, 1), (-1, 1), (2, 1), (-1, 2)];
    let mut diag = Vec::new();
    let mut diag_inv = Vec::new();
    for _ in 0..n {
        let (p, q) = consts[rng.gen_range(0..consts.len())];
        let k = rng.gen_range(-1i32..=1);
        let mut u = chart_unit(scheme, &chart, i, k).scale(&rat(p, q));
        let mut v = chart_unit(scheme, &chart, i, -k).scale(&rat(q, p));
        if !nilpotents.is_empty() && rng.gen_bool(0.5) {
            let nv = &nilpotents[rng.gen_range(0..nilpotents.len())];
            let c = rng.gen_range(1i64..=2);
            let one = Polynomial::one(scheme.ring());
            u = u.mul_poly(&(&one + &nv.scale_int(c)));
            v = v.mul_poly(&(&one - &nv.scale_int(c)));
        }
        diag.push(u);
        diag_inv.push(v);
    }
    let mut g = FractionMatrix::from_fn(n, n, &chart, |r, c| if r == c { diag[r].clone() } else { LocalFraction::zero(&chart) });
    let mut g_inv = FractionMatrix::from_fn(n, n, &chart, |r, c| if r == c { diag_inv[r].clone() } else { LocalFraction::zero(&chart) });
    if n > 1 {
        for _ in 0..rng.gen_range(0..=2) {
            let a = rng.gen_range(0..n);
            let b = (a + rng.gen_range(1..n)) % n;
            let lambda = LocalFraction::from_poly(random_poly(rng, scheme, 1, 2), &chart);
            let el = FractionMatrix::from_fn(n, n, &chart, |r, c| {
                if r == c {
                    LocalFraction::one(&chart)
                } else if (r, c) == (a, b) {
                    lambda.clone()
                } else {
                    LocalFraction::zero(&chart)
                }
            });
            let el_inv = el.sub(&FractionMatrix::identity(n, &chart)).neg().add(&FractionMatrix::identity(n, &chart));
            g = g.mul(&el);
            g_inv = el_inv.mul(&g_inv);
        }
    }
    (g, g_inv)
}

/// Shape limits for [`random_complex`].
#[derive(Debug, Clone, Copy)]
pub struct RandomShape {
    pub max_rank: usize,
    pub max_degrees: usize,
    /// Fixes the degree range when set.
    pub degrees: Option<(i64, i64)>,
    /// Fixes every rank when set.
    pub rank: Option<usize>,
}

impl Default for RandomShape {
    fn default() -> Self {
        RandomShape { max_rank: 3, max_degrees: 3, degrees: None, rank: None }
    }
}

/// A random valid complex on `scheme` with constant ranks per degree.
pub fn random_complex<R: Rng>(rng: &mut R, scheme: &Arc<CoveredScheme>, shape: RandomShape) -> BundleComplex {
    let r = scheme.ncharts();
    let (smin, smax) = shape.degrees.unwrap_or_else(|| {
        let lo = rng.gen_range(-1i64..=0);
        (lo, lo + rng.gen_range(1..=shape.max_degrees as i64) - 1)
    });
    let nd = (smax - smin + 1) as usize;
    let ranks: Vec<usize> = (0..nd).map(|_| shape.rank.unwrap_or_else(|| rng.gen_range(1..=shape.max_rank))).collect();
    // First `image[k]` basis vectors of degree k receive D, the rest map.
    let image: Vec<usize> = (0..nd).map(|k| if k == 0 { 0 } else { rng.gen_range(0..=ranks[k]) }).collect();
    let nilpotents = nilpotent_variables(scheme);

    let mut g = HashMap::new();
    for i in 0..r {
        for k in 0..nd {
            g.insert((i, k), random_unit_matrix(rng, scheme, i, ranks[k], &nilpotents));
        }
    }
    let mut model = Vec::new();
    for k in 0..nd.saturating_sub(1) {
        let (rows, cols) = (ranks[k + 1], ranks[k]);
        let entries: Vec<Polynomial> = (0..rows * cols)
            .map(|idx| {
                let (row, col) = (idx / cols, idx % cols);
                if row < image[k + 1] && col >= image[k] && rng.gen_bool(0.7) {
                    random_poly(rng, scheme, 1, 2)
                } else {
                    Polynomial::zero(scheme.ring())
                }
            })
            .collect();
        model.push((rows, cols, entries));
    }

    let mut transitions = HashMap::new();
    for (i, j) in ordered_pairs(r) {
        let chart = scheme.chart_set(&[i, j]).expect("chart");
        for k in 0..nd {
            let gi = g[&(i, k)].0.restrict(&chart).expect("superset");
            let gj_inv = g[&(j, k)].1.restrict(&chart).expect("superset");
            let m = gi.mul(&gj_inv).add(&random_j_matrix(rng, scheme, ranks[k], ranks[k], &chart));
            transitions.insert((i, j, smin + k as i64), m.map(LocalFraction::normalized));
        }
    }
    let mut differentials = HashMap::new();
    for i in 0..r {
        let chart = scheme.chart_set(&[i]).expect("chart");
        for (k, (rows, cols, entries)) in model.iter().enumerate() {
            let d = FractionMatrix::from_fn(*rows, *cols, &chart, |a, b| LocalFraction::from_poly(entries[a * cols + b].clone(), &chart));
            let lifted = g[&(i, k + 1)].0.mul(&d).mul(&g[&(i, k)].1).add(&random_j_matrix(rng, scheme, *rows, *cols, &chart));
            differentials.insert((i, smin + k as i64), lifted.map(LocalFraction::normalized));
        }
    }
    let ranks_table = vec![ranks; r];
    BundleComplex::new(scheme.clone(), (smin, smax), ranks_table, transitions, differentials).expect("shapes are consistent")
}

pub fn random_line_bundle<R: Rng>(rng: &mut R, scheme: &Arc<CoveredScheme>) -> LineBundle {
    let shape = RandomShape { degrees: Some((0, 0)), rank: Some(1), ..RandomShape::default() };
    LineBundle::new(random_complex(rng, scheme, shape)).expect("rank 1 in degree 0")
}

/// A named corpus entry.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub complex: BundleComplex,
}

/// The hand-written complexes on every bundled scheme, plus one fixed
/// two-term rank-2 complex per scheme.
pub fn bundled_complexes() -> Vec<CorpusEntry> {
    use rand::SeedableRng;
    let mut out = Vec::new();
    for (k, (name, s)) in bundled_schemes().into_iter().enumerate() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1000 + k as u64);
        let shape = RandomShape { degrees: Some((0, 1)), rank: Some(2), ..RandomShape::default() };
        out.push(CorpusEntry { name: format!("{name}/rank2"), complex: random_complex(&mut rng, &s, shape) });
        out.push(CorpusEntry { name: format!("{name}/trivial"), complex: trivial_line_bundle(&s).into_complex() });
        out.push(CorpusEntry { name: format!("{name}/standard"), complex: standard_line_bundle(&s).into_complex() });
        if name.starts_with("nodal") {
            out.push(CorpusEntry { name: format!("{name}/defect"), complex: nodal_defect_bundle(&s, "0").into_complex() });
        }
    }
    out
}

/// Random complexes spread over the bundled schemes, reproducible from
/// `seed`.
pub fn random_corpus(seed: u64, count: usize) -> Vec<CorpusEntry> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let schemes = bundled_schemes();
    (0..count)
        .map(|k| {
            let (name, s) = &schemes[k % schemes.len()];
            CorpusEntry { name: format!("{name}/random{k}"), complex: random_complex(&mut rng, s, RandomShape::default()) }
        })
        .collect()
}
