//! Exact multivariate polynomials over the rationals.
//!
//! A [`PolyRing`] is an ordered list of variable names; a [`Polynomial`] is a
//! sparse sum of terms stored in descending degrevlex order (first declared
//! variable largest). Coefficients are arbitrary-precision rationals.

mod monomial;
mod parse;
mod poly;

pub use monomial::{degrevlex_cmp, lex_cmp, Monomial};
pub use parse::{format_rational, parse_poly, parse_rational};
pub use poly::{PolyRing, Polynomial};

pub(crate) use poly::same_ring;

/// Coefficient field.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("operands belong to different polynomial rings")]
    RingMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("invalid ring: {0}")]
    InvalidRing(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn ring_xy() -> Arc<PolyRing> {
        PolyRing::new(&["x", "y"]).unwrap()
    }

    #[test]
    fn parse_examples() {
        let r = ring_xy();
        assert!(parse_poly("0", &r).unwrap().is_zero());
        let g = parse_poly("y^2 - x^3 - x^2", &r).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.to_string(), "-x^3 - x^2 + y^2");
        let p = parse_poly("(x+y)*(x-y)", &r).unwrap();
        assert_eq!(p, parse_poly("x^2 - y^2", &r).unwrap());
    }

    #[test]
    fn arithmetic_examples() {
        let r = ring_xy();
        let p = parse_poly("3*x*y - 7/2*y + 1", &r).unwrap();
        assert!((&p + &(-&p)).is_zero());
        let a = parse_poly("x + y", &r).unwrap();
        let b = parse_poly("x - y", &r).unwrap();
        assert_eq!(&a * &b, parse_poly("x^2 - y^2", &r).unwrap());
        let x2 = parse_poly("x^2", &r).unwrap();
        assert_eq!(x2.scale(&rat(3, 2)).to_string(), "3/2*x^2");
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let r1 = ring_xy();
        let r2 = PolyRing::new(&["x", "z"]).unwrap();
        let a = Polynomial::var(&r1, 0);
        let b = Polynomial::var(&r2, 0);
        assert_eq!(a.try_add(&b), Err(RingError::RingMismatch));
        assert_eq!(a.try_mul(&b), Err(RingError::RingMismatch));
        // Structurally equal rings are interchangeable.
        let r3 = ring_xy();
        assert!(a.try_add(&Polynomial::var(&r3, 1)).is_ok());
    }

    #[test]
    fn derivative_examples() {
        let r = ring_xy();
        let g = parse_poly("y^2 - x^3 - x^2", &r).unwrap();
        assert_eq!(g.partial_derivative("x").unwrap(), parse_poly("-3*x^2 - 2*x", &r).unwrap());
        assert_eq!(g.partial_derivative("y").unwrap(), parse_poly("2*y", &r).unwrap());
        assert!(parse_poly("5/3", &r).unwrap().partial_derivative("x").unwrap().is_zero());
        assert_eq!(
            g.partial_derivative("z"),
            Err(RingError::UnknownVariable("z".into()))
        );
    }

    #[test]
    fn parse_errors() {
        let r = ring_xy();
        assert!(matches!(parse_poly("x + ", &r), Err(RingError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_poly("2x", &r), Err(RingError::Syntax { pos: 1, .. })));
        assert!(matches!(parse_poly("x/2", &r), Err(RingError::Syntax { pos: 1, .. })));
        assert!(matches!(parse_poly("x^-1", &r), Err(RingError::Syntax { .. })));
        assert_eq!(parse_poly("z + 1", &r), Err(RingError::UnknownVariable("z".into())));
        assert!(matches!(parse_poly("1/0", &r), Err(RingError::Syntax { .. })));
    }

    #[test]
    fn exact_division() {
        let r = ring_xy();
        let f = parse_poly("x^2 - x", &r).unwrap();
        let p = parse_poly("x^3*y - x^2*y", &r).unwrap();
        assert_eq!(p.exact_div(&f).unwrap(), parse_poly("x*y", &r).unwrap());
        assert!(parse_poly("x*y + 1", &r).unwrap().exact_div(&f).is_none());
    }

    fn arb_poly() -> impl Strategy<Value = Vec<(Vec<u32>, i64, i64)>> {
        prop::collection::vec((prop::collection::vec(0u32..=4, 3), -5i64..=5, 1i64..=4), 0..6)
    }

    fn build(r: &Arc<PolyRing>, spec: Vec<(Vec<u32>, i64, i64)>) -> Polynomial {
        Polynomial::from_terms(
            r,
            spec.into_iter().filter(|(e, _, _)| e.iter().sum::<u32>() <= 4).map(|(e, n, d)| (Monomial::from_exponents(&e), rat(n, d))),
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            let r = PolyRing::new(&["x", "y", "z"]).unwrap();
            let (p, q, s) = (build(&r, a), build(&r, b), build(&r, c));
            prop_assert_eq!(&(&p + &q) + &s, &p + &(&q + &s));
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&p * &(&q + &s), &(&p * &q) + &(&p * &s));
        }

        #[test]
        fn print_parse_round_trip(a in arb_poly()) {
            let r = PolyRing::new(&["x", "y", "z"]).unwrap();
            let p = build(&r, a);
            prop_assert_eq!(parse_poly(&p.to_string(), &r).unwrap(), p);
        }

        #[test]
        fn leibniz(a in arb_poly(), b in arb_poly()) {
            let r = PolyRing::new(&["x", "y", "z"]).unwrap();
            let (p, q) = (build(&r, a), build(&r, b));
            let lhs = (&p * &q).derivative(0);
            let rhs = &(&p * &q.derivative(0)) + &(&q * &p.derivative(0));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
