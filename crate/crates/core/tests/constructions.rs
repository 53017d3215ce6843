use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use atiyah_core::complexes::{
    component_bundle, det_complex, direct_sum, dual_complex, hom_complex, line_power, rank_of, tensor_complex, validate_complex,
    BundleComplex,
};
use atiyah_core::corpus::{bundled_complexes, random_complex, random_corpus, CorpusEntry, RandomShape};
use atiyah_core::geometry::EqualityKind;

fn corpus() -> Vec<CorpusEntry> {
    bundled_complexes().into_iter().chain(random_corpus(77, 20)).collect()
}

fn small_partner(e: &BundleComplex, rng: &mut ChaCha8Rng) -> BundleComplex {
    random_complex(rng, e.scheme(), RandomShape { max_rank: 2, max_degrees: 2, ..RandomShape::default() })
}

fn assert_valid(name: &str, what: &str, e: &BundleComplex) {
    let report = validate_complex(e);
    assert!(report.is_valid(), "{name}: {what}: {:?}", report.failures.first());
}

/// Transition and differential lifts agree modulo `J` on nonempty charts.
fn same_mod_j(a: &BundleComplex, b: &BundleComplex) -> bool {
    let s = a.scheme();
    if a.degrees() != b.degrees() {
        return false;
    }
    let (lo, hi) = a.degrees();
    let same = |x: &atiyah_core::complexes::FractionMatrix, y: &atiyah_core::complexes::FractionMatrix| {
        x.shape() == y.shape()
            && x.entries().iter().zip(y.entries()).all(|(p, q)| s.equal_mod(EqualityKind::J, p, q).unwrap())
    };
    for deg in lo..=hi {
        for i in 0..a.ncharts() {
            if !s.chart_empty(&a.chart(&[i])) && !same(&a.differential(i, deg), &b.differential(i, deg)) {
                return false;
            }
            for j in 0..a.ncharts() {
                if i != j && !s.chart_empty(&a.chart(&[i, j])) && !same(&a.transition(i, j, deg), &b.transition(i, j, deg)) {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn constructions_preserve_validity() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for entry in corpus() {
        let e = &entry.complex;
        let name = &entry.name;
        assert_valid(name, "input", e);
        let f = small_partner(e, &mut rng);
        assert_valid(name, "dual", &dual_complex(e).unwrap());
        assert_valid(name, "sum", &direct_sum(e, &f).unwrap());
        assert_valid(name, "tensor", &tensor_complex(e, &f).unwrap());
        assert_valid(name, "hom", &hom_complex(e, &f).unwrap());
        let det = det_complex(e).unwrap();
        assert_valid(name, "det", &det);
        if e.degrees() == (0, 0) && rank_of(e).constant == Some(1) {
            assert_valid(name, "inverse", &line_power(e, -1).unwrap());
            assert_valid(name, "square", &line_power(e, 2).unwrap());
        }
        let (lo, hi) = e.degrees();
        for deg in lo..=hi {
            assert_valid(name, "component", &component_bundle(e, deg).unwrap());
        }
    }
}

#[test]
fn dual_is_an_involution_mod_j() {
    for entry in corpus() {
        let e = &entry.complex;
        let dd = dual_complex(&dual_complex(e).unwrap()).unwrap();
        assert!(same_mod_j(e, &dd), "{}", entry.name);
    }
}

#[test]
fn det_of_sum_is_product_of_dets() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for entry in corpus() {
        let e = &entry.complex;
        let f = small_partner(e, &mut rng);
        let lhs = det_complex(&direct_sum(e, &f).unwrap()).unwrap();
        let rhs = tensor_complex(&det_complex(e).unwrap(), &det_complex(&f).unwrap()).unwrap();
        assert!(same_mod_j(&lhs, &rhs), "{}", entry.name);
    }
}

#[test]
fn det_of_tensor_matches_powers() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for entry in corpus() {
        let e = &entry.complex;
        let f = small_partner(e, &mut rng);
        assert!(atiyah_core::atiyah::check_det_tensor(e, &f).unwrap(), "{}", entry.name);
    }
}
