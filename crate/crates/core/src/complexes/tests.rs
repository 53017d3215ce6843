use std::collections::HashMap;
use std::sync::Arc;

use super::*;
use crate::geometry::{CoveredScheme, EqualityKind, LocalFraction};
use crate::ring::parse_poly;

fn line() -> (Arc<CoveredScheme>, BundleComplex) {
    let s = CoveredScheme::parse(&["x"], &[], &[("U1", "x"), ("U2", "x - 1")]).unwrap();
    let l = line_bundle(&s, &[((0, 1), "x", 0), ((1, 0), "x - 1", 1)]);
    (s, l)
}

fn frac(s: &CoveredScheme, idx: &[usize], num: &str, pow: u32) -> LocalFraction {
    LocalFraction::new(parse_poly(num, s.ring()).unwrap(), pow, &s.chart_set(idx).unwrap())
}

fn line_bundle(s: &Arc<CoveredScheme>, lifts: &[((usize, usize), &str, u32)]) -> BundleComplex {
    let map = lifts.iter().map(|&((i, j), n, p)| ((i, j), frac(s, &[i, j], n, p))).collect();
    LineBundle::from_lifts(s, map).unwrap().into_complex()
}

fn trivial(s: &Arc<CoveredScheme>) -> BundleComplex {
    let r = s.ncharts();
    let mut lifts = Vec::new();
    for i in 0..r {
        for j in 0..r {
            if i != j {
                lifts.push(((i, j), "1", 0));
            }
        }
    }
    line_bundle(s, &lifts)
}

fn scalar(m: &FractionMatrix) -> LocalFraction {
    assert_eq!(m.shape(), (1, 1));
    m.get(0, 0).clone()
}

fn ring_eq(s: &CoveredScheme, a: &LocalFraction, b: &LocalFraction) -> bool {
    s.equal_mod(EqualityKind::Ring, a, b).unwrap()
}

/// Two-term complex `O --(D)--> O` in degrees 0, 1 with scalar lifts.
fn two_term(s: &Arc<CoveredScheme>, a: [&str; 2], b: [&str; 2], pow_b: u32, d: [&str; 2]) -> BundleComplex {
    let mut t = HashMap::new();
    let c = s.chart_set(&[0, 1]).unwrap();
    t.insert((0, 1, 0), FractionMatrix::from_vec(1, 1, &c, vec![frac(s, &[0, 1], a[0], 0)]).unwrap());
    t.insert((1, 0, 0), FractionMatrix::from_vec(1, 1, &c, vec![frac(s, &[0, 1], a[1], 1)]).unwrap());
    t.insert((0, 1, 1), FractionMatrix::from_vec(1, 1, &c, vec![frac(s, &[0, 1], b[0], 0)]).unwrap());
    t.insert((1, 0, 1), FractionMatrix::from_vec(1, 1, &c, vec![frac(s, &[0, 1], b[1], pow_b)]).unwrap());
    let mut ds = HashMap::new();
    for i in 0..2 {
        let ci = s.chart_set(&[i]).unwrap();
        ds.insert((i, 0), FractionMatrix::from_vec(1, 1, &ci, vec![frac(s, &[i], d[i], 0)]).unwrap());
    }
    BundleComplex::new(s.clone(), (0, 1), vec![vec![1, 1]; 2], t, ds).unwrap()
}

#[test]
fn validate_examples() {
    let (s, l) = line();
    assert!(validate_complex(&trivial(&s)).is_valid());
    assert!(validate_complex(&l).is_valid());
    // Add 1 to the lift 1->2.
    let bad = l.with_transition(0, 1, 0, FractionMatrix::from_vec(1, 1, &s.chart_set(&[0, 1]).unwrap(), vec![frac(&s, &[0, 1], "x + 1", 0)]).unwrap()).unwrap();
    let report = validate_complex(&bad);
    assert!(!report.is_valid());
    let f = &report.failures[0];
    assert_eq!((f.condition, f.charts.clone(), f.s, f.row, f.col), (Condition::A, vec![0, 1], 0, 0, 0));
}

#[test]
fn off_diagonal_perturbation_is_located() {
    let (s, l) = line();
    let e = direct_sum(&l, &trivial(&s)).unwrap();
    assert!(validate_complex(&e).is_valid());
    let mut m = e.transition(1, 0, 0).into_owned();
    let c = s.chart_set(&[0, 1]).unwrap();
    let mut entries = m.entries().to_vec();
    entries[1] = &entries[1] + &LocalFraction::one(&c);
    m = FractionMatrix::from_vec(2, 2, &c, entries).unwrap();
    let report = validate_complex(&e.with_transition(1, 0, 0, m).unwrap());
    assert!(report.failures.iter().any(|f| f.condition == Condition::A && f.charts == vec![0, 1]));
    assert!(report.failures.iter().any(|f| f.condition == Condition::A && f.charts == vec![1, 0]));
}

#[test]
fn shape_errors_are_hard() {
    let (s, l) = line();
    let c = s.chart_set(&[0, 1]).unwrap();
    let err = l.with_transition(0, 1, 0, FractionMatrix::zero(2, 1, &c)).unwrap_err();
    assert!(matches!(err, ComplexError::Dimension(_)));
    let err = BundleComplex::new(s.clone(), (0, 0), vec![vec![1]; 2], HashMap::new(), HashMap::new()).unwrap_err();
    assert_eq!(err, ComplexError::MissingTransition { i: 0, j: 1, s: 0 });
}

#[test]
fn rank_examples() {
    let (s, l) = line();
    assert_eq!(rank_of(&l).constant, Some(1));
    let e = two_term(&s, ["x", "x - 1"], ["x", "x - 1"], 1, ["0", "0"]);
    assert_eq!(rank_of(&e).constant, Some(0));
    let two = direct_sum(&e, &e).unwrap();
    assert_eq!(two.rank(0, 0), 2);
    assert_eq!(rank_of(&two).constant, Some(0));
    // Ranks (1, 3, 2) in degrees −1, 0, 1.
    let r = 2;
    let ranks = vec![vec![1, 3, 2]; r];
    let mut t = HashMap::new();
    let c = s.chart_set(&[0, 1]).unwrap();
    for (i, j) in [(0, 1), (1, 0)] {
        for (k, sdeg) in (-1..=1).enumerate() {
            let n = [1, 3, 2][k];
            t.insert((i, j, sdeg), FractionMatrix::identity(n, &c));
        }
    }
    let e = BundleComplex::new(s.clone(), (-1, 1), ranks, t, HashMap::new()).unwrap();
    assert_eq!(rank_of(&e).constant, Some(0));
}

#[test]
fn dual_examples() {
    let (s, l) = line();
    let t = trivial(&s);
    let td = dual_complex(&t).unwrap();
    for (i, j) in [(0, 1), (1, 0)] {
        assert!(scalar(&td.transition(i, j, 0)).num().is_one());
    }
    let ld = dual_complex_with(&l, LiftPolicy::Opposite).unwrap();
    assert_eq!(scalar(&ld.transition(0, 1, 0)).num(), scalar(&l.transition(1, 0, 0)).num());
    let ldd = dual_complex_with(&ld, LiftPolicy::Opposite).unwrap();
    for (i, j) in [(0, 1), (1, 0)] {
        let a = scalar(&ldd.transition(i, j, 0));
        let b = scalar(&l.transition(i, j, 0));
        assert_eq!((a.num(), a.pow()), (b.num(), b.pow()));
    }
    // The refined lift agrees exactly in value when the lifts are inverse.
    let lr = dual_complex(&l).unwrap();
    assert!(validate_complex(&lr).is_valid());
    assert!(ring_eq(&s, &scalar(&lr.transition(0, 1, 0)), &scalar(&l.transition(1, 0, 0))));
}

#[test]
fn sum_and_tensor_examples() {
    let (s, l) = line();
    let t = trivial(&s);
    let lt = tensor_complex(&l, &t).unwrap();
    for (i, j) in [(0, 1), (1, 0)] {
        assert!(ring_eq(&s, &scalar(&lt.transition(i, j, 0)), &scalar(&l.transition(i, j, 0))));
    }
    let m = line_bundle(&s, &[((0, 1), "x^2", 0), ((1, 0), "x^2 - 2*x + 1", 2)]);
    assert!(validate_complex(&m).is_valid());
    let (la, mb) = (scalar(&l.transition(0, 1, 0)), scalar(&m.transition(0, 1, 0)));
    let lm = tensor_complex(&l, &m).unwrap();
    assert!(ring_eq(&s, &scalar(&lm.transition(0, 1, 0)), &(&la * &mb)));
    let sum = direct_sum(&l, &m).unwrap();
    let blk = sum.transition(0, 1, 0);
    assert_eq!((blk.get(0, 0).num(), blk.get(1, 1).num()), (la.num(), mb.num()));
    assert!(blk.get(0, 1).is_zero() && blk.get(1, 0).is_zero());
    assert_eq!(direct_sum(&l, &t).unwrap().rank(1, 0), 2);
    // (1,1) ⊗ (1,1) has rank 2 in degree 1.
    let e = two_term(&s, ["x", "x - 1"], ["x", "x - 1"], 1, ["x", "x"]);
    assert!(validate_complex(&e).is_valid());
    let ee = tensor_complex(&e, &e).unwrap();
    assert_eq!((ee.rank(0, 0), ee.rank(0, 1), ee.rank(0, 2)), (1, 2, 1));
    assert!(validate_complex(&ee).is_valid());
}

#[test]
fn hom_examples() {
    let (s, l) = line();
    let t = trivial(&s);
    let h = hom_complex(&t, &l).unwrap();
    assert!(ring_eq(&s, &scalar(&h.transition(0, 1, 0)), &scalar(&l.transition(0, 1, 0))));
    let h = hom_complex(&l, &t).unwrap();
    let ld = dual_complex(&l).unwrap();
    assert!(ring_eq(&s, &scalar(&h.transition(0, 1, 0)), &scalar(&ld.transition(0, 1, 0))));
    let e = two_term(&s, ["x", "x - 1"], ["x", "x - 1"], 1, ["x", "x"]);
    let he = hom_complex(&e, &e).unwrap();
    assert_eq!(he.degrees(), (-1, 1));
    assert_eq!((he.rank(0, -1), he.rank(0, 0), he.rank(0, 1)), (1, 2, 1));
    assert!(validate_complex(&he).is_valid());
}

#[test]
fn det_examples() {
    let (s, l) = line();
    let dl = det_complex(&l).unwrap();
    assert_eq!(scalar(&dl.transition(0, 1, 0)).num(), scalar(&l.transition(0, 1, 0)).num());
    let sum = direct_sum(&l, &l).unwrap();
    let d = det_complex(&sum).unwrap();
    let a = scalar(&l.transition(0, 1, 0));
    assert!(ring_eq(&s, &scalar(&d.transition(0, 1, 0)), &(&a * &a)));
    // Degrees 0, 1 with lifts a and b: a times the opposite lift of b.
    let e = two_term(&s, ["x", "x - 1"], ["x^2", "x^2 - 2*x + 1"], 2, ["0", "0"]);
    assert!(validate_complex(&e).is_valid());
    let d = det_complex_with(&e, LiftPolicy::Opposite).unwrap();
    let b_opp = scalar(&e.transition(1, 0, 1));
    let expect = &scalar(&e.transition(0, 1, 0)) * &b_opp;
    assert!(ring_eq(&s, &scalar(&d.transition(0, 1, 0)), &expect));
    // With J = 0 the refined lift has the same value.
    let d = det_complex(&e).unwrap();
    assert!(ring_eq(&s, &scalar(&d.transition(0, 1, 0)), &expect));
    assert!(validate_complex(&d).is_valid());
    let bad = det_complex_with(&e, LiftPolicy::IgnoreParity).unwrap();
    // Still a line bundle, but of the wrong class.
    assert!(!ring_eq(&s, &scalar(&bad.transition(0, 1, 0)), &expect));
}

#[test]
fn determinant_and_kronecker_oracles() {
    let s = CoveredScheme::parse(&["a", "b", "c", "d"], &[], &[("U", "1")]).unwrap();
    let c = s.chart_set(&[0]).unwrap();
    let v = |t: &str| frac(&s, &[0], t, 0);
    let m = FractionMatrix::from_vec(2, 2, &c, vec![v("a"), v("b"), v("c"), v("d")]).unwrap();
    assert!(ring_eq(&s, &m.det(), &v("a*d - b*c")));
    assert!(ring_eq(&s, &m.trace(), &v("a + d")));
    let k = m.kronecker(&FractionMatrix::identity(2, &c));
    assert_eq!(k.shape(), (4, 4));
    assert!(ring_eq(&s, k.get(0, 2), &v("b")));
    assert!(ring_eq(&s, k.get(1, 3), &v("b")));
    assert!(k.get(0, 1).is_zero());
    // det(A ⊗ 1_2) = det(A)^2.
    assert!(ring_eq(&s, &k.det(), &v("(a*d - b*c)^2")));
    // 3×3 Sarrus oracle.
    let m3 = FractionMatrix::from_vec(3, 3, &c, ["a", "b", "1", "c", "d", "a", "2", "b", "d"].iter().map(|t| v(t)).collect()).unwrap();
    let sarrus = v("a*d*d + b*a*2 + 1*c*b - 1*d*2 - b*c*d - a*a*b");
    assert!(ring_eq(&s, &m3.det(), &sarrus));
}
