//! The acceptance criteria as runnable checks, shared by `demo` and the
//! acceptance test. Every criterion is deterministic for a fixed seed.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use atiyah_core::atiyah::{
    build_class_chern1, build_classical_atiyah, build_trunc_chern1, build_truncated_atiyah, check_cofactor_identity,
    check_det_trace, check_thm44, check_thm45, check_thm46, rep_combine, rep_eq, verify_classical_atiyah,
    verify_truncated_atiyah, Cochain, Combine, ConormalCochain, FormCochain,
};
use atiyah_core::complexes::{
    dual_complex, tensor_complex, validate_complex, BundleComplex, Condition, FractionMatrix, Matrix,
};
use atiyah_core::corpus::{
    bundled_complexes, bundled_schemes, double_line, nodal_cubic, nodal_defect_bundle, random_complex,
    random_corpus, random_ideal_element, random_line_bundle, random_poly, smooth_line, trivial_line_bundle,
    CorpusEntry, RandomShape,
};
use atiyah_core::geometry::{AmbientForm, CoveredScheme, EqualityKind, LocalFraction};
use atiyah_core::groebner::{buchberger_with_transcript, division, ideal_basis, saturate, MonomialOrder};
use atiyah_core::ring::{rat, Monomial, PolyRing, Polynomial};

/// Per-complex budget for the chain-map check.
pub const CHAIN_MAP_BUDGET: Duration = Duration::from_secs(60);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Criterion {
    fn new(id: u8, name: &'static str, passed: bool, detail: String) -> Self {
        Criterion { id, name, passed, detail }
    }

    pub fn line(&self) -> String {
        format!("criterion {} {}: {} ({})", self.id, self.name, if self.passed { "PASS" } else { "FAIL" }, self.detail)
    }
}

/// The bundled complexes followed by twenty seeded random ones.
pub fn corpus(seed: u64) -> Vec<CorpusEntry> {
    bundled_complexes().into_iter().chain(random_corpus(seed, 20)).collect()
}

fn ok<T, E>(r: Result<T, E>) -> Option<T> {
    r.ok()
}

pub fn chain_map(seed: u64) -> Criterion {
    let entries = corpus(seed);
    let mut failed = Vec::new();
    let mut slow = 0;
    for entry in &entries {
        let start = Instant::now();
        let passed = ok(build_truncated_atiyah(&entry.complex))
            .and_then(|rep| ok(verify_truncated_atiyah(&entry.complex, &rep)))
            .is_some_and(|r| r.passed());
        if start.elapsed() > CHAIN_MAP_BUDGET {
            slow += 1;
        }
        if !passed {
            failed.push(entry.name.clone());
        }
    }
    let passed = failed.is_empty() && slow == 0;
    let detail = if passed {
        format!("{} complexes, each within {} s", entries.len(), CHAIN_MAP_BUDGET.as_secs())
    } else {
        format!("failing: [{}], over budget: {slow}", failed.join(", "))
    };
    Criterion::new(1, "chain map", passed, detail)
}

/// One single-entry perturbation and the locator it must produce.
#[derive(Debug, Clone)]
pub struct Perturbation {
    pub base: String,
    pub complex: BundleComplex,
    pub condition: Condition,
    pub charts: Vec<usize>,
    pub s: i64,
    /// Row for transitions, column for differentials.
    pub index: usize,
}

fn outside_j<R: Rng>(rng: &mut R, scheme: &CoveredScheme, chart: &atiyah_core::geometry::ChartSet) -> Polynomial {
    loop {
        let p = random_poly(rng, scheme, 2, 3);
        if !p.is_zero() && !scheme.in_ideal(&LocalFraction::from_poly(p.clone(), chart), false) {
            return p;
        }
    }
}

fn bump(m: &FractionMatrix, r: usize, c: usize, p: &LocalFraction) -> FractionMatrix {
    FractionMatrix::from_fn(m.rows(), m.cols(), m.chart(), |a, b| if (a, b) == (r, c) { m.get(a, b) + p } else { m.get(a, b).clone() })
}

/// Adds `p ∉ J` to one lift entry. A transition entry `(r, c)` of `M̃_ij`
/// changes row `r` of `M̃_ij·M̃_ji`; a differential entry `(r, c)` of `D̃_i`
/// changes column `c` of `M̃_ji·D̃_i`, so `p` is chosen outside `J_ij`.
pub fn perturbations(seed: u64, count: usize) -> Vec<Perturbation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases: Vec<CorpusEntry> = bundled_complexes().into_iter().filter(|e| e.name.ends_with("/rank2")).collect();
    let mut out = Vec::new();
    let mut k = 0;
    while out.len() < count {
        let base = &bases[k % bases.len()];
        let transition = k % 2 == 0;
        k += 1;
        let e = &base.complex;
        let scheme = e.scheme();
        let (smin, smax) = e.degrees();
        let r = e.ncharts();
        let i = rng.gen_range(0..r);
        let j = (i + rng.gen_range(1..r)) % r;
        let s = rng.gen_range(smin..=smax);
        let ij = e.chart(&[i, j]);
        if scheme.chart_empty(&ij) {
            continue;
        }
        if transition {
            let m = e.transition(i, j, s);
            if m.rows() == 0 || m.cols() == 0 {
                continue;
            }
            let (row, col) = (rng.gen_range(0..m.rows()), rng.gen_range(0..m.cols()));
            let p = LocalFraction::from_poly(outside_j(&mut rng, scheme, &ij), &ij);
            let complex = e.with_transition(i, j, s, bump(&m, row, col, &p)).expect("same shape");
            out.push(Perturbation { base: base.name.clone(), complex, condition: Condition::A, charts: vec![i, j], s, index: row });
        } else {
            let d = e.differential(i, s);
            if d.rows() == 0 || d.cols() == 0 {
                continue;
            }
            let (row, col) = (rng.gen_range(0..d.rows()), rng.gen_range(0..d.cols()));
            let ci = e.chart(&[i]);
            let p = LocalFraction::from_poly(outside_j(&mut rng, scheme, &ij), &ci);
            let complex = e.with_differential(i, s, bump(&d, row, col, &p)).expect("same shape");
            out.push(Perturbation { base: base.name.clone(), complex, condition: Condition::D, charts: vec![i, j], s, index: col });
        }
    }
    out
}

/// Whether validation reports the expected locator.
pub fn perturbation_detected(p: &Perturbation) -> bool {
    validate_complex(&p.complex).failures.iter().any(|f| {
        f.condition == p.condition
            && f.charts == p.charts
            && f.s == p.s
            && match p.condition {
                Condition::A => f.row == p.index,
                _ => f.col == p.index,
            }
    })
}

pub fn negative_control(seed: u64) -> Criterion {
    let list = perturbations(seed, 12);
    let missed: Vec<String> = list
        .iter()
        .enumerate()
        .filter(|(_, p)| !perturbation_detected(p))
        .map(|(k, p)| format!("#{k} on {}", p.base))
        .collect();
    let detail = if missed.is_empty() {
        format!("{} perturbations located", list.len())
    } else {
        format!("not located: {}", missed.join(", "))
    };
    Criterion::new(2, "negative control", missed.is_empty(), detail)
}

pub fn determinant_reduction(seed: u64) -> Criterion {
    let entries = corpus(seed);
    let failed: Vec<String> =
        entries.iter().filter(|e| !check_thm45(&e.complex).unwrap_or(false)).map(|e| e.name.clone()).collect();
    let detail = if failed.is_empty() {
        format!("{} complexes", entries.len())
    } else {
        format!("failing: [{}]", failed.join(", "))
    };
    Criterion::new(3, "c1(E) = c1(det E)", failed.is_empty(), detail)
}

pub fn picard_additivity(seed: u64) -> Criterion {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = 0;
    let mut failed = Vec::new();
    for (name, s) in bundled_schemes() {
        for k in 0..10 {
            let l = random_line_bundle(&mut rng, &s);
            let m = random_line_bundle(&mut rng, &s);
            pairs += 1;
            if !check_thm44(&l, &m).unwrap_or(false) {
                failed.push(format!("{name} pair {k}"));
            }
        }
        let l = random_line_bundle(&mut rng, &s);
        let zero = ok(dual_complex(l.complex()))
            .and_then(|d| ok(tensor_complex(l.complex(), &d)))
            .and_then(|ll| ok(build_trunc_chern1(&ll)))
            .and_then(|c| ok(rep_combine(Combine::Scale(0, &c))).and_then(|z| ok(rep_eq(&s, &c, &z))))
            .unwrap_or(false);
        if !zero {
            failed.push(format!("{name} L x L^v"));
        }
    }
    let detail = if failed.is_empty() {
        format!("{pairs} pairs, L x L^v zero on {} schemes", bundled_schemes().len())
    } else {
        format!("failing: {}", failed.join(", "))
    };
    Criterion::new(4, "c1(L x M) = c1(L) + c1(M)", failed.is_empty(), detail)
}

pub fn dual_sum_tensor(seed: u64) -> Criterion {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = RandomShape { max_rank: 2, max_degrees: 2, ..RandomShape::default() };
    let mut pairs = 0;
    let mut failed = Vec::new();
    for (name, s) in bundled_schemes() {
        for k in 0..3 {
            let e = random_complex(&mut rng, &s, shape);
            let f = random_complex(&mut rng, &s, shape);
            pairs += 1;
            match check_thm46(&e, &f) {
                Ok(r) if r.all() => {}
                Ok(r) => failed.push(format!("{name} pair {k}: {r:?}")),
                Err(err) => failed.push(format!("{name} pair {k}: {err}")),
            }
        }
    }
    let detail = if failed.is_empty() {
        format!("{pairs} pairs: dual, sum, tensor, Hom, det of tensor")
    } else {
        format!("failing: {}", failed.join("; "))
    };
    Criterion::new(5, "dual, sum and tensor formulas", failed.is_empty(), detail)
}

pub fn determinant_lemma(seed: u64) -> Criterion {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failed = Vec::new();
    for (name, s) in [("nodal", nodal_cubic(false)), ("double", double_line(false))] {
        let chart = s.chart_set(&[0, 1]).expect("pair");
        for m in 1..=4 {
            if !check_det_trace(m, &s, &chart, 20, &mut rng).unwrap_or(false) {
                failed.push(format!("{name} m = {m}"));
            }
        }
    }
    let detail = if failed.is_empty() { "m = 1..4, 20 samples each, nodal and double".to_string() } else { format!("failing: {}", failed.join(", ")) };
    Criterion::new(6, "det M = tr M - (m - 1) mod J^2", failed.is_empty(), detail)
}

pub fn cofactor() -> Criterion {
    let failed: Vec<String> = (1..=4).filter(|&m| !check_cofactor_identity(m).unwrap_or(false)).map(|m| m.to_string()).collect();
    let detail = if failed.is_empty() { "m = 1..4".to_string() } else { format!("failing m: {}", failed.join(", ")) };
    Criterion::new(7, "cofactor identity", failed.is_empty(), detail)
}

/// `e` with a random `J`-matrix added to every transition lift.
fn shifted_lifts(e: &BundleComplex, rng: &mut ChaCha8Rng) -> BundleComplex {
    let scheme = e.scheme();
    let mut out = e.clone();
    let (smin, smax) = e.degrees();
    for s in smin..=smax {
        for i in 0..e.ncharts() {
            for j in 0..e.ncharts() {
                if i == j {
                    continue;
                }
                let m = out.transition(i, j, s).into_owned();
                let shift = Matrix::from_fn(m.rows(), m.cols(), m.chart(), |_, _| {
                    LocalFraction::from_poly(random_ideal_element(rng, scheme), m.chart())
                });
                out = out.with_transition(i, j, s, m.add(&shift)).expect("same shape");
            }
        }
    }
    out
}

pub fn classical(seed: u64) -> Criterion {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failed = Vec::new();
    for entry in bundled_complexes() {
        let e = &entry.complex;
        let s = e.scheme();
        let same = ok(build_classical_atiyah(e)).zip(ok(build_truncated_atiyah(e))).is_some_and(|(cl, tr)| {
            cl.degrees.iter().all(|(deg, d)| {
                tr.degree(*deg).is_some_and(|t| {
                    d.p1.equals(&t.t2, s, EqualityKind::Ring).unwrap_or(false)
                        && d.p2.equals(&t.t4, s, EqualityKind::Ring).unwrap_or(false)
                })
            })
        });
        if !same {
            failed.push(format!("{}: families differ", entry.name));
        }
        if entry.name.starts_with("nodal/") {
            let passed = ok(build_classical_atiyah(e)).and_then(|cl| ok(verify_classical_atiyah(e, &cl))).is_some_and(|r| r.passed());
            if !passed {
                failed.push(format!("{}: chain map", entry.name));
            }
        }
    }
    let s = nodal_cubic(false);
    let defect = nodal_defect_bundle(&s, "x*(y^2 - x^3 - x^2)").into_complex();
    let trivial = trivial_line_bundle(&s).into_complex();
    let rank2 = bundled_complexes().into_iter().find(|e| e.name == "nodal/rank2").expect("bundled").complex;
    let moved = shifted_lifts(&rank2, &mut rng);
    for (label, a, b) in [("defect vs trivial", &defect, &trivial), ("rank2 vs shifted lifts", &rank2, &moved)] {
        let equal = ok(build_classical_atiyah(a))
            .zip(ok(build_classical_atiyah(b)))
            .and_then(|(x, y)| ok(rep_eq(&s, &x, &y)))
            .unwrap_or(false)
            && ok(build_class_chern1(a)).zip(ok(build_class_chern1(b))).and_then(|(x, y)| ok(rep_eq(&s, &x, &y))).unwrap_or(false);
        if !equal {
            failed.push(format!("lift choices {label}"));
        }
    }
    let detail = if failed.is_empty() {
        "families agree, nodal chain maps pass, two lift changes agree mod Jacobian".to_string()
    } else {
        failed.join("; ")
    };
    Criterion::new(8, "classical compatibility", failed.is_empty(), detail)
}

fn random_ideal_gens(rng: &mut ChaCha8Rng, ring: &std::sync::Arc<PolyRing>) -> Vec<Polynomial> {
    let n = ring.nvars();
    (0..rng.gen_range(1..=3))
        .map(|_| {
            let terms: Vec<(Monomial, _)> = (0..rng.gen_range(1..=3))
                .map(|_| {
                    let exps: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
                    (Monomial::from_exponents(&exps), rat(rng.gen_range(-3i64..=3), rng.gen_range(1i64..=2)))
                })
                .collect();
            Polynomial::from_terms(ring, terms)
        })
        .filter(|g| !g.is_zero())
        .collect()
}

/// Cofactors reproduce every basis element, and for sample polynomials the
/// division remainder vanishes exactly when membership holds and the
/// quotients, pushed through the cofactors, rebuild `p − remainder`.
pub fn groebner_transcripts(seed: u64, ideals: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ring = PolyRing::new(&["x", "y", "z"]).expect("ring");
    let order = MonomialOrder::degrevlex();
    let mut done = 0;
    while done < ideals {
        let gens = random_ideal_gens(&mut rng, &ring);
        if gens.is_empty() {
            continue;
        }
        done += 1;
        let (gb, cofs) = buchberger_with_transcript(&ring, &gens, &order);
        for (b, cof) in gb.generators().iter().zip(&cofs) {
            let mut acc = Polynomial::zero(&ring);
            for (c, g) in cof.iter().zip(&gens) {
                acc = &acc + &(c * g);
            }
            if acc != *b {
                return Err(format!("ideal {done}: cofactors do not rebuild {b}"));
            }
        }
        let mut samples: Vec<Polynomial> = Vec::new();
        let mut inside = Polynomial::zero(&ring);
        for g in &gens {
            let q = Polynomial::from_terms(&ring, [(Monomial::from_exponents(&[rng.gen_range(0..2), 0, rng.gen_range(0..2)]), rat(rng.gen_range(1..=3), 1))]);
            inside = &inside + &(&q * g);
        }
        samples.push(inside.clone());
        for _ in 0..2 {
            let gens2 = random_ideal_gens(&mut rng, &ring);
            samples.push(gens2.into_iter().fold(Polynomial::zero(&ring), |a, b| &a + &b));
        }
        for (k, p) in samples.iter().enumerate() {
            let (qs, rem) = division(p, &gb).map_err(|e| e.to_string())?;
            if gb.contains(p) != rem.is_zero() || (k == 0 && !rem.is_zero()) {
                return Err(format!("ideal {done}: membership disagrees for {p}"));
            }
            let mut rebuilt = rem.clone();
            for (q, cof) in qs.iter().zip(&cofs) {
                for (c, g) in cof.iter().zip(&gens) {
                    rebuilt = &rebuilt + &(&(q * c) * g);
                }
            }
            if rebuilt != *p {
                return Err(format!("ideal {done}: transcript does not rebuild {p}"));
            }
        }
    }
    Ok(())
}

pub fn saturation_examples() -> Result<(), String> {
    let ring = PolyRing::new(&["x", "y"]).expect("ring");
    let x = Polynomial::var(&ring, 0);
    let y = Polynomial::var(&ring, 1);
    let unit = ideal_basis(&ring, &saturate(&[x.pow(2)], &x));
    if !unit.is_unit() {
        return Err("(x^2) : x^inf is not (1)".into());
    }
    let sat = ideal_basis(&ring, &saturate(&[&x.pow(2) * &y], &x));
    if sat.generators() != [y.clone()] {
        return Err(format!("(x^2 y) : x^inf = {:?}", sat.generators().iter().map(ToString::to_string).collect::<Vec<_>>()));
    }
    Ok(())
}

/// `δ² = 0` on random cochains over the 4-chart covers: conormal values
/// modulo `J²`, form values modulo `J`, matching how each is compared.
pub fn cech_square(seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    let text = |err: atiyah_core::atiyah::AtiyahError| err.to_string();
    for s in [smooth_line(true), nodal_cubic(true), double_line(true)] {
        let shape = RandomShape { degrees: Some((0, 0)), rank: Some(2), ..RandomShape::default() };
        let e = random_complex(&mut rng, &s, shape);
        for r in 0..2 {
            let c: ConormalCochain = Cochain::build(&e, r, 0, 0, |lam, chart| {
                let n = e.rank(lam[0], 0);
                Ok(Matrix::from_fn(n, n, chart, |_, _| LocalFraction::from_poly(random_ideal_element(&mut rng, &s), chart)))
            })
            .map_err(text)?;
            let dd = c.cech_differential(&e).and_then(|d| d.cech_differential(&e)).map_err(text)?;
            if !dd.equals(&ConormalCochain::zero(&e, r + 2, 0, 0), &s, EqualityKind::JSquared).map_err(text)? {
                return Err(format!("conormal delta^2 != 0 for r = {r}"));
            }
            let w: FormCochain = Cochain::build(&e, r, 0, 0, |lam, chart| {
                let n = e.rank(lam[0], 0);
                Ok(Matrix::from_fn(n, n, chart, |_, _| {
                    let coeffs = (0..s.nvars()).map(|_| LocalFraction::from_poly(random_poly(&mut rng, &s, 2, 3), chart)).collect();
                    AmbientForm::new(chart, coeffs).expect("one coefficient per variable")
                }))
            })
            .map_err(text)?;
            let dd = w.cech_differential(&e).and_then(|d| d.cech_differential(&e)).map_err(text)?;
            if !dd.equals(&FormCochain::zero(&e, r + 2, 0, 0), &s, EqualityKind::J).map_err(text)? {
                return Err(format!("form delta^2 != 0 for r = {r}"));
            }
            checked += 2;
        }
    }
    Ok(checked)
}

pub fn infrastructure(seed: u64) -> Criterion {
    let result = groebner_transcripts(seed, 50)
        .and_then(|_| saturation_examples())
        .and_then(|_| cech_square(seed));
    match result {
        Ok(n) => Criterion::new(9, "infrastructure oracles", true, format!("50 ideals, saturation examples, delta^2 = 0 on {n} cochains")),
        Err(e) => Criterion::new(9, "infrastructure oracles", false, e),
    }
}

/// Criteria 1 to 9 in order.
pub fn run_all(seed: u64) -> Vec<Criterion> {
    vec![
        chain_map(seed),
        negative_control(seed),
        determinant_reduction(seed),
        picard_additivity(seed),
        dual_sum_tensor(seed),
        determinant_lemma(seed),
        cofactor(),
        classical(seed),
        infrastructure(seed),
    ]
}
