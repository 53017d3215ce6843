use std::collections::HashMap;
use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::complexes::{
    component_bundle, dual_complex, tensor_complex, BundleComplex, FractionMatrix, LiftPolicy, LineBundle, Matrix,
};
use crate::corpus::*;
use crate::geometry::{AmbientForm, CoveredScheme, EqualityKind, LocalFraction};
use crate::ring::parse_poly;

const G: &str = "y^2 - x^3 - x^2";

fn form(s: &CoveredScheme, idx: &[usize], coeffs: &[(&str, u32)]) -> AmbientForm {
    let chart = s.chart_set(idx).unwrap();
    AmbientForm::new(&chart, coeffs.iter().map(|&(n, p)| fraction(s, idx, n, p)).collect()).unwrap()
}

fn scalar_form<'a>(c: &'a FormCochain, lam: &[usize]) -> &'a AmbientForm {
    c.get(lam).unwrap().get(0, 0)
}

fn scalar<'a>(c: &'a ConormalCochain, lam: &[usize]) -> &'a LocalFraction {
    c.get(lam).unwrap().get(0, 0)
}

/// A line bundle placed in degree `s`.
fn shifted(l: &LineBundle, s: i64) -> BundleComplex {
    let e = l.complex();
    let r = e.ncharts();
    let mut t = HashMap::new();
    for i in 0..r {
        for j in 0..r {
            if i != j {
                t.insert((i, j, s), e.transition(i, j, 0).into_owned());
            }
        }
    }
    BundleComplex::new(e.scheme().clone(), (s, s), vec![vec![1]; r], t, HashMap::new()).unwrap()
}

/// `O --(d)--> L` in degrees 0, 1 on `𝔸¹` with two charts, `L` standard.
fn smooth_two_term() -> BundleComplex {
    two_term_on(&smooth_line(false))
}

fn two_term_on(s: &Arc<CoveredScheme>) -> BundleComplex {
    let s = s.clone();
    let l = standard_line_bundle(&s);
    let mut t = HashMap::new();
    for (i, j) in [(0, 1), (1, 0)] {
        t.insert((i, j, 0), FractionMatrix::identity(1, &s.chart_set(&[i, j]).unwrap()));
        t.insert((i, j, 1), l.complex().transition(i, j, 0).into_owned());
    }
    // D_1 = x·D_2 on the overlap: D_1 = x, D_2 = 1.
    let mut d = HashMap::new();
    d.insert((0, 0), FractionMatrix::from_vec(1, 1, &s.chart_set(&[0]).unwrap(), vec![fraction(&s, &[0], "x", 0)]).unwrap());
    d.insert((1, 0), FractionMatrix::from_vec(1, 1, &s.chart_set(&[1]).unwrap(), vec![fraction(&s, &[1], "1", 0)]).unwrap());
    BundleComplex::new(s, (0, 1), vec![vec![1, 1]; 2], t, d).unwrap()
}

#[test]
fn trivial_bundle_has_zero_families() {
    for (_, s) in bundled_schemes() {
        let e = trivial_line_bundle(&s).into_complex();
        let rep = build_truncated_atiyah(&e).unwrap();
        for d in rep.degrees.values() {
            assert!(d.t1.entries().values().all(Matrix::is_zero_repr));
            assert!(d.t2.entries().values().all(Matrix::is_zero_repr));
            assert!(d.t3.entries().values().all(Matrix::is_zero_repr));
            assert!(d.t4.entries().values().all(Matrix::is_zero_repr));
            assert!(d.t5.entries().values().all(Matrix::is_zero_repr));
        }
        let c = build_trunc_chern1(&e).unwrap();
        assert!(c.c2.entries().values().all(Matrix::is_zero_repr));
        assert!(c.c1w.entries().values().all(Matrix::is_zero_repr));
        assert!(build_classical_atiyah(&e).unwrap().degrees.values().all(|d| d.p1.entries().values().all(Matrix::is_zero_repr)));
    }
}

#[test]
fn smooth_line_bundle_chern_class() {
    let s = smooth_line(false);
    let l = standard_line_bundle(&s).into_complex();
    let c = build_trunc_chern1(&l).unwrap();
    assert!(c.c2.entries().is_empty());
    // −(1/x)dx = −(x−1)/(x(x−1)) dx.
    let want = form(&s, &[0, 1], &[("-(x - 1)", 1)]);
    assert!(s.forms_equal_mod(EqualityKind::Ring, scalar_form(&c.c1w, &[0, 1]), &want).unwrap());
    // J = 0: only T2 survives, and it is the Chern entry itself.
    let rep = build_truncated_atiyah(&l).unwrap();
    let d0 = rep.degree(0).unwrap();
    assert!(s.forms_equal_mod(EqualityKind::Ring, scalar_form(&d0.t2, &[0, 1]), &want).unwrap());
    // The dual has the opposite class.
    let dual = build_trunc_chern1(&dual_complex(&l).unwrap()).unwrap();
    let plus = form(&s, &[0, 1], &[("x - 1", 1)]);
    assert!(s.forms_equal_mod(EqualityKind::Ring, scalar_form(&dual.c1w, &[0, 1]), &plus).unwrap());
}

#[test]
fn nodal_defect_families() {
    let s = nodal_cubic(false);
    let e = nodal_defect_bundle(&s, "0").into_complex();
    let rep = build_truncated_atiyah(&e).unwrap();
    let d0 = rep.degree(0).unwrap();
    let g = fraction(&s, &[0, 1, 2], G, 0);
    let t1 = scalar(&d0.t1, &[0, 1, 2]);
    assert!(s.equal_mod(EqualityKind::JSquared, t1, &g).unwrap());
    assert!(!s.is_zero_mod(EqualityKind::JSquared, t1).unwrap());
    assert!(s.in_ideal(t1, false));
    let dg = fraction(&s, &[0, 1], G, 0).derivative();
    assert!(s.forms_equal_mod(EqualityKind::J, scalar_form(&d0.t2, &[0, 1]), &dg).unwrap());
    for lam in [[0, 2], [1, 2]] {
        assert!(scalar_form(&d0.t2, &lam).is_zero());
    }
    let c = build_trunc_chern1(&e).unwrap();
    assert!(s.equal_mod(EqualityKind::JSquared, scalar(&c.c2, &[0, 1, 2]), &g).unwrap());
    assert!(s.forms_equal_mod(EqualityKind::J, scalar_form(&c.c1w, &[0, 1]), &dg).unwrap());
}

#[test]
fn chain_map_holds_on_bundled_complexes() {
    for entry in bundled_complexes() {
        let rep = build_truncated_atiyah(&entry.complex).unwrap();
        let report = verify_truncated_atiyah(&entry.complex, &rep).unwrap();
        assert!(report.passed(), "{}: {:?}", entry.name, report.failures);
        assert!(report.checked > 0);
    }
    let e = smooth_two_term();
    assert!(verify_truncated_atiyah(&e, &build_truncated_atiyah(&e).unwrap()).unwrap().passed());
}

#[test]
fn zeroing_one_degree_breaks_the_chain_map() {
    let e = smooth_two_term();
    let mut rep = build_truncated_atiyah(&e).unwrap();
    let d0 = rep.degrees.get_mut(&0).unwrap();
    d0.t2 = d0.t2.scale_int(0);
    d0.t4 = d0.t4.scale_int(0);
    let report = verify_truncated_atiyah(&e, &rep).unwrap();
    assert!(!report.passed());
    assert!(report.failures.iter().any(|f| f.s == 0 && (f.summand == 3 || f.summand == 4)));
    // The all-zero map is a chain map.
    let zero = rep_combine(Combine::Scale(0, &rep)).unwrap();
    assert!(verify_truncated_atiyah(&e, &zero).unwrap().passed());
}

#[test]
fn flipping_t2_breaks_the_chain_map() {
    let s = nodal_cubic(false);
    let e = nodal_defect_bundle(&s, "0").into_complex();
    let mut rep = build_truncated_atiyah(&e).unwrap();
    for d in rep.degrees.values_mut() {
        d.t2 = d.t2.neg();
    }
    let report = verify_truncated_atiyah(&e, &rep).unwrap();
    assert!(report.failures.iter().any(|f| f.summand == 2 && f.charts == vec![0, 1, 2]), "{:?}", report.failures);

    let e = smooth_two_term();
    let mut rep = build_truncated_atiyah(&e).unwrap();
    for d in rep.degrees.values_mut() {
        d.t2 = d.t2.neg();
    }
    let report = verify_truncated_atiyah(&e, &rep).unwrap();
    assert!(report.failures.iter().any(|f| f.summand == 4 && f.charts == vec![0, 1]), "{:?}", report.failures);
}

#[test]
fn retrivialize_examples() {
    let s = nodal_cubic(false);
    let e = nodal_defect_bundle(&s, "0").into_complex();
    let chart01 = s.chart_set(&[0, 1]).unwrap();
    // Minimum unchanged: plain restriction.
    let c = Matrix::from_vec(1, 1, &s.chart_set(&[0]).unwrap(), vec![fraction(&s, &[0], "y", 1)]).unwrap();
    let moved = retrivialize(&c, &[0], &[0, 1], &e, 0, 0).unwrap();
    assert!(s.equal_mod(EqualityKind::Ring, moved.get(0, 0), &fraction(&s, &[0], "y", 1).restrict(&chart01).unwrap()).unwrap());
    // From chart 2 to the pair (1, 2): M_12·c·M_21 with M_21 = 1 + g.
    let on1 = |num: &str| Matrix::from_vec(1, 1, &s.chart_set(&[1]).unwrap(), vec![fraction(&s, &[1], num, 0)]).unwrap();
    let in_j = retrivialize(&on1(G), &[1], &[0, 1], &e, 0, 0).unwrap();
    let g01 = fraction(&s, &[0, 1], G, 0);
    assert!(s.equal_mod(EqualityKind::JSquared, in_j.get(0, 0), &g01).unwrap());
    assert!(!s.equal_mod(EqualityKind::Ring, in_j.get(0, 0), &g01).unwrap());
    let unit = retrivialize(&on1("1"), &[1], &[0, 1], &e, 0, 0).unwrap();
    assert!(!s.equal_mod(EqualityKind::JSquared, unit.get(0, 0), &fraction(&s, &[0, 1], "1", 0)).unwrap());
    assert!(s.equal_mod(EqualityKind::J, unit.get(0, 0), &fraction(&s, &[0, 1], "1", 0)).unwrap());
    assert!(retrivialize(&on1("1"), &[1], &[0, 2], &e, 0, 0).is_err());
}

#[test]
fn cech_differential_examples() {
    let s = double_line(false);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let e = random_complex(&mut rng, &s, RandomShape { degrees: Some((0, 0)), rank: Some(2), ..RandomShape::default() });
    let id = ConormalCochain::build(&e, 0, 0, 0, |lam, chart| Ok(FractionMatrix::identity(e.rank(lam[0], 0), chart))).unwrap();
    let d = id.cech_differential(&e).unwrap();
    assert_eq!(d.r(), 1);
    assert_eq!(d.entries().len(), 3);
    assert!(d.equals(&ConormalCochain::zero(&e, 1, 0, 0), &s, EqualityKind::J).unwrap());
    // A single chart has no pairs.
    let one = CoveredScheme::parse(&["x"], &[], &[("U", "1")]).unwrap();
    let t = trivial_line_bundle(&one).into_complex();
    let c = FormCochain::zero(&t, 0, 0, 0);
    assert!(c.cech_differential(&t).unwrap().entries().is_empty());
}

/// `(δδc)_{012}` for a 0-cochain, written out:
/// `M_01·M_12·c_2·M_21·M_10 − M_02·c_2·M_20`.
fn hand_double_differential(e: &BundleComplex, c: &FormCochain) -> Matrix<AmbientForm> {
    let chart = e.chart(&[0, 1, 2]);
    let m = |i, j| e.transition(i, j, 0).restrict(&chart).unwrap();
    let c2 = c.get(&[2]).unwrap().restrict(&chart).unwrap();
    let inner = m(2, 1).rmul(&m(1, 2).lmul(&c2));
    let a = m(1, 0).rmul(&m(0, 1).lmul(&inner));
    let b = m(2, 0).rmul(&m(0, 2).lmul(&c2));
    a.sub(&b)
}

fn random_cochain<R: rand::Rng, T: CochainValue>(
    rng: &mut R,
    e: &BundleComplex,
    r: usize,
    mut value: impl FnMut(&mut R, &crate::geometry::ChartSet) -> T,
) -> Cochain<T> {
    Cochain::build(e, r, 0, 0, |lam, chart| {
        let n = e.rank(lam[0], 0);
        Ok(Matrix::from_fn(n, n, chart, |_, _| value(rng, chart)))
    })
    .unwrap()
}

#[test]
fn double_differential_vanishes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for s in [smooth_line(true), nodal_cubic(true), double_line(true)] {
        let e = random_complex(&mut rng, &s, RandomShape { degrees: Some((0, 0)), rank: Some(2), ..RandomShape::default() });
        for r in 0..2 {
            let c = random_cochain(&mut rng, &e, r, |rng, chart| LocalFraction::from_poly(random_ideal_element(rng, &s), chart));
            let dd = c.cech_differential(&e).unwrap().cech_differential(&e).unwrap();
            assert_eq!(dd.r(), r + 2);
            assert!(!dd.entries().is_empty());
            assert!(dd.equals(&ConormalCochain::zero(&e, r + 2, 0, 0), &s, EqualityKind::JSquared).unwrap());

            let c = random_cochain(&mut rng, &e, r, |rng, chart| {
                let n = s.nvars();
                AmbientForm::new(chart, (0..n).map(|_| LocalFraction::from_poly(random_poly(rng, &s, 2, 3), chart)).collect()).unwrap()
            });
            let dd = c.cech_differential(&e).unwrap().cech_differential(&e).unwrap();
            assert!(dd.equals(&FormCochain::zero(&e, r + 2, 0, 0), &s, EqualityKind::J).unwrap());
            if r == 0 {
                let hand = hand_double_differential(&e, &c);
                let got = dd.get(&[0, 1, 2]).unwrap();
                for (a, b) in got.entries().iter().zip(hand.entries()) {
                    assert!(s.forms_equal_mod(EqualityKind::Ring, a, b).unwrap());
                }
            }
        }
    }
}

#[test]
fn lifts_changed_by_j_squared_give_equal_reps() {
    let s = nodal_cubic(false);
    let base = nodal_defect_bundle(&s, "0").into_complex();
    let bumped = nodal_defect_bundle(&s, &format!("({G})^2")).into_complex();
    assert!(rep_eq(&s, &build_truncated_atiyah(&base).unwrap(), &build_truncated_atiyah(&bumped).unwrap()).unwrap());
    let (a, b) = (build_trunc_chern1(&base).unwrap(), build_trunc_chern1(&bumped).unwrap());
    assert!(rep_eq(&s, &a, &b).unwrap());
    // A change by g itself is visible.
    let moved = nodal_defect_bundle(&s, G).into_complex();
    assert!(!rep_eq(&s, &a, &build_trunc_chern1(&moved).unwrap()).unwrap());

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let s = double_line(false);
    let e = random_complex(&mut rng, &s, RandomShape { degrees: Some((0, 1)), rank: Some(2), ..RandomShape::default() });
    let chart = s.chart_set(&[0, 2]).unwrap();
    let bump = FractionMatrix::from_fn(2, 2, &chart, |r, c| {
        if (r, c) == (1, 0) {
            LocalFraction::from_poly(parse_poly("x^4*y - 3*x^4", s.ring()).unwrap(), &chart)
        } else {
            LocalFraction::zero(&chart)
        }
    });
    let f = e.with_transition(2, 0, 1, e.transition(2, 0, 1).add(&bump)).unwrap();
    assert!(rep_eq(&s, &build_truncated_atiyah(&e).unwrap(), &build_truncated_atiyah(&f).unwrap()).unwrap());
}

#[test]
fn rep_combine_examples() {
    let s = nodal_cubic(false);
    let e = nodal_defect_bundle(&s, "0").into_complex();
    let c = build_trunc_chern1(&e).unwrap();
    assert!(rep_eq(&s, &c, &c).unwrap());
    let zero = rep_combine(Combine::Scale(0, &c)).unwrap();
    assert!(rep_eq(&s, &c, &rep_combine(Combine::Add(&c, &zero)).unwrap()).unwrap());
    let neg = rep_combine(Combine::Negate(&c)).unwrap();
    assert!(rep_eq(&s, &zero, &rep_combine(Combine::Add(&c, &neg)).unwrap()).unwrap());
    assert!(!rep_eq(&s, &zero, &c).unwrap());
    let two = rep_combine(Combine::Scale(2, &c)).unwrap();
    assert!(rep_eq(&s, &two, &rep_combine(Combine::Add(&c, &c)).unwrap()).unwrap());
}

#[test]
fn classical_examples() {
    let s = nodal_cubic(false);
    let e = nodal_defect_bundle(&s, "0").into_complex();
    let cl = build_classical_atiyah(&e).unwrap();
    let tr = build_truncated_atiyah(&e).unwrap();
    for (deg, d) in &cl.degrees {
        let t = tr.degree(*deg).unwrap();
        assert!(d.p1.equals(&t.t2, &s, EqualityKind::Ring).unwrap());
        assert!(d.p2.equals(&t.t4, &s, EqualityKind::Ring).unwrap());
    }
    assert!(verify_classical_atiyah(&e, &cl).unwrap().passed());
    // In Ω_U|_X the Čech differential of P1 is dg, not zero.
    let naive = verify_classical_atiyah_mod(&e, &cl, EqualityKind::J).unwrap();
    assert!(naive.failures.iter().any(|f| f.summand == 1 && f.charts == vec![0, 1, 2]));
    // Another lift choice: all lifts 1.
    let other = build_classical_atiyah(&trivial_line_bundle(&s).into_complex()).unwrap();
    assert!(rep_eq(&s, &cl, &other).unwrap());
    assert!(!rep_eq(&s, &build_truncated_atiyah(&e).unwrap(), &build_truncated_atiyah(&trivial_line_bundle(&s).into_complex()).unwrap()).unwrap());
    let c1 = build_class_chern1(&e).unwrap();
    assert!(c1.c1.equals(&build_trunc_chern1(&e).unwrap().c1w, &s, EqualityKind::Ring).unwrap());
    assert!(rep_eq(&s, &c1, &build_class_chern1(&trivial_line_bundle(&s).into_complex()).unwrap()).unwrap());
    // Smooth case: Jacobian equality is plain equality.
    let sm = smooth_two_term();
    assert!(verify_classical_atiyah(&sm, &build_classical_atiyah(&sm).unwrap()).unwrap().passed());
    assert!(verify_classical_atiyah_mod(&sm, &build_classical_atiyah(&sm).unwrap(), EqualityKind::Ring).unwrap().passed());
}

#[test]
fn thm44_examples() {
    for (_, s) in bundled_schemes() {
        let l = standard_line_bundle(&s);
        let t = trivial_line_bundle(&s);
        assert!(check_thm44(&l, &t).unwrap());
        let lt = tensor_complex(l.complex(), t.complex()).unwrap();
        assert!(rep_eq(&s, &build_trunc_chern1(&lt).unwrap(), &build_trunc_chern1(l.complex()).unwrap()).unwrap());
        let ll = tensor_complex(l.complex(), &dual_complex(l.complex()).unwrap()).unwrap();
        let c = build_trunc_chern1(&ll).unwrap();
        assert!(rep_eq(&s, &c, &rep_combine(Combine::Scale(0, &c)).unwrap()).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let s = double_line(false);
    for _ in 0..3 {
        let (l, m) = (random_line_bundle(&mut rng, &s), random_line_bundle(&mut rng, &s));
        assert!(check_thm44(&l, &m).unwrap());
    }
}

fn nilpotent_line_bundle(s: &Arc<CoveredScheme>) -> LineBundle {
    // G_1 = 1 + x with inverse lift 1 − x, so M̃_1j·M̃_j1 = 1 − x².
    let r = s.ncharts();
    let mut lifts = HashMap::new();
    for i in 0..r {
        for j in 0..r {
            if i == j {
                continue;
            }
            let num = match (i, j) {
                (0, _) => "1 + x",
                (_, 0) => "1 - x",
                _ => "1",
            };
            lifts.insert((i, j), fraction(s, &[i, j], num, 0));
        }
    }
    LineBundle::from_lifts(s, lifts).unwrap()
}

#[test]
fn thm45_examples() {
    for (_, s) in bundled_schemes() {
        assert!(check_thm45(standard_line_bundle(&s).complex()).unwrap());
    }
    // Rank 2 with diagonal transitions.
    let s = smooth_line(false);
    let l = standard_line_bundle(&s).into_complex();
    let diag = crate::complexes::direct_sum(&l, &l).unwrap();
    assert!(check_thm45(&diag).unwrap());
    assert!(check_thm45(&smooth_two_term()).unwrap());

    // Odd-degree transitions with nonunit determinant: ignoring the parity
    // doubles the class instead of cancelling it.
    let odd = shifted(&standard_line_bundle(&s), 1);
    assert!(check_thm45(&odd).unwrap());
    assert!(!check_thm45_with(&odd, LiftPolicy::IgnoreParity).unwrap());

    // Pair defects: the plain opposite lift is off by d(M̃_ij·M̃_ji − 1).
    let s = double_line(false);
    let odd = shifted(&nilpotent_line_bundle(&s), 1);
    assert!(check_thm45(&odd).unwrap());
    assert!(!check_thm45_with(&odd, LiftPolicy::Opposite).unwrap());
}

#[test]
fn thm46_examples() {
    let s = smooth_line(false);
    let t = trivial_line_bundle(&s).into_complex();
    assert!(check_thm46(&t, &t).unwrap().all());
    let l = standard_line_bundle(&s).into_complex();
    assert!(check_thm46(&l, &t).unwrap().all());
    assert!(check_thm46(&l, &two_term_on(&s)).unwrap().all());
    let s = double_line(false);
    let n = nilpotent_line_bundle(&s).into_complex();
    let report = check_thm46(&n, &standard_line_bundle(&s).into_complex()).unwrap();
    assert!(report.all(), "{report:?}");
}

#[test]
fn thm46_needs_constant_rank() {
    // Two points: the charts do not meet, so ranks may differ.
    let s = CoveredScheme::parse(&["x"], &["x^2 - x"], &[("P", "x - 1"), ("Q", "x")]).unwrap();
    assert!(s.chart_empty(&s.chart_set(&[0, 1]).unwrap()));
    let c = s.chart_set(&[0, 1]).unwrap();
    let mut t = HashMap::new();
    t.insert((0, 1, 0), FractionMatrix::zero(1, 2, &c));
    t.insert((1, 0, 0), FractionMatrix::zero(2, 1, &c));
    let e = BundleComplex::new(s.clone(), (0, 0), vec![vec![1], vec![2]], t, HashMap::new()).unwrap();
    assert!(crate::complexes::validate_complex(&e).is_valid());
    let l = trivial_line_bundle(&s).into_complex();
    assert_eq!(check_thm46(&e, &l), Err(AtiyahError::NonConstantRank));
    assert!(verify_truncated_atiyah(&e, &build_truncated_atiyah(&e).unwrap()).unwrap().passed());
}

#[test]
fn det_trace_examples() {
    let s = nodal_cubic(false);
    let chart = s.chart_set(&[0]).unwrap();
    let g = fraction(&s, &[0], G, 0);
    let one = LocalFraction::one(&chart);
    let m = FractionMatrix::from_vec(2, 2, &chart, vec![&one + &g, LocalFraction::zero(&chart), LocalFraction::zero(&chart), one.clone()]).unwrap();
    assert!(s.equal_mod(EqualityKind::Ring, &m.det(), &(&m.trace() - &one)).unwrap());
    let m = FractionMatrix::from_vec(2, 2, &chart, vec![&one + &g, g.clone(), g.clone(), &one + &g]).unwrap();
    let two_g = &one + &g.scale_int(2);
    assert!(s.equal_mod(EqualityKind::JSquared, &m.det(), &two_g).unwrap());
    assert!(s.equal_mod(EqualityKind::Ring, &(&m.trace() - &one), &two_g).unwrap());

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for scheme in [nodal_cubic(false), double_line(false)] {
        let chart = scheme.chart_set(&[1]).unwrap();
        for size in 1..=3 {
            assert!(check_det_trace(size, &scheme, &chart, 5, &mut rng).unwrap());
        }
    }
    assert!(check_det_trace(0, &s, &chart, 1, &mut rng).is_err());
}

#[test]
fn cofactor_examples() {
    for m in 1..=3 {
        assert!(check_cofactor_identity(m).unwrap(), "m = {m}");
    }
    assert!(check_cofactor_identity(0).is_err());
    assert!(check_cofactor_identity(5).is_err());
}

#[test]
fn alternating_sum_of_components() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let s = nodal_cubic(false);
    let e = random_complex(&mut rng, &s, RandomShape { degrees: Some((-1, 1)), max_rank: 2, ..RandomShape::default() });
    let whole = build_trunc_chern1(&e).unwrap();
    let mut acc = rep_combine(Combine::Scale(0, &whole)).unwrap();
    for deg in -1..=1 {
        let part = build_trunc_chern1(&component_bundle(&e, deg).unwrap()).unwrap();
        acc = rep_combine(Combine::Add(&acc, &rep_combine(Combine::Scale(crate::complexes::sign(deg), &part)).unwrap())).unwrap();
    }
    assert!(rep_eq(&s, &whole, &acc).unwrap());
}

fn random_matrix(rng: &mut ChaCha8Rng, s: &CoveredScheme, n: usize) -> FractionMatrix {
    let chart = s.chart_set(&[0]).unwrap();
    FractionMatrix::from_fn(n, n, &chart, |_, _| LocalFraction::from_poly(random_poly(rng, s, 2, 3), &chart))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trace_is_linear_and_cyclic(seed in any::<u64>(), n in 2usize..=3, c in -3i64..=3) {
        let s = nodal_cubic(false);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, &s, n);
        let b = random_matrix(&mut rng, &s, n);
        let ring = EqualityKind::Ring;
        prop_assert!(s.equal_mod(ring, &a.mul(&b).trace(), &b.mul(&a).trace()).unwrap());
        prop_assert!(s.equal_mod(ring, &a.add(&b.scale_int(c)).trace(), &(&a.trace() + &b.trace().scale_int(c))).unwrap());
    }
}
