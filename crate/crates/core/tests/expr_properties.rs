use std::sync::Arc;

use homchar::expr::{int, rat, MultiIndex, Rational, SymPoly, SymbolId, UnknownPoly, Universe};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(cases: u32, seed: u64) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

fn universe() -> Arc<Universe> {
    Universe::new(
        [SymbolId::hom(1, 1), SymbolId::hom(2, 1), SymbolId::log_deriv(1, 1)],
        ["c1".to_string(), "c2".to_string()],
    )
}

type RawTerm = ([u32; 3], i64, u32, u32);

fn raw_poly() -> impl Strategy<Value = Vec<RawTerm>> {
    prop::collection::vec(([0u32..3, 0..3, 0..3], -5i64..=5, 0u32..2, 0u32..2), 0..5)
}

fn build(u: &Arc<Universe>, raw: &[RawTerm]) -> SymPoly {
    let terms = raw.iter().map(|(m, c, e1, e2)| {
        let coeff = UnknownPoly::from_terms(2, [(MultiIndex::from_vec(vec![*e1, *e2]), int(*c))]);
        (MultiIndex::from_vec(m.to_vec()), coeff)
    });
    SymPoly::from_terms(u, terms).unwrap()
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=20).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(config(96, 11))]

    #[test]
    fn addition_is_associative_and_commutative(a in raw_poly(), b in raw_poly(), c in raw_poly()) {
        let u = universe();
        let (p, q, r) = (build(&u, &a), build(&u, &b), build(&u, &c));
        prop_assert_eq!(p.add(&q).unwrap().add(&r).unwrap(), p.add(&q.add(&r).unwrap()).unwrap());
        prop_assert_eq!(p.add(&q).unwrap(), q.add(&p).unwrap());
        prop_assert!(p.sub(&p).unwrap().is_zero());
    }

    #[test]
    fn multiplication_laws(a in raw_poly(), b in raw_poly(), c in raw_poly()) {
        let u = universe();
        let (p, q, r) = (build(&u, &a), build(&u, &b), build(&u, &c));
        prop_assert_eq!(p.mul(&q).unwrap(), q.mul(&p).unwrap());
        prop_assert_eq!(p.mul(&q).unwrap().mul(&r).unwrap(), p.mul(&q.mul(&r).unwrap()).unwrap());
        prop_assert_eq!(
            p.mul(&q.add(&r).unwrap()).unwrap(),
            p.mul(&q).unwrap().add(&p.mul(&r).unwrap()).unwrap()
        );
        prop_assert_eq!(p.mul(&SymPoly::one(&u)).unwrap(), p.clone());
    }

    #[test]
    fn pow_is_repeated_multiplication(a in raw_poly(), e in 0u32..=6) {
        let u = universe();
        let p = build(&u, &a);
        let mut expected = SymPoly::one(&u);
        for _ in 0..e {
            expected = expected.mul(&p).unwrap();
        }
        prop_assert_eq!(p.pow(e), expected);
    }

    #[test]
    fn substitute_power_composes(a in raw_poly(), k in 1u32..5, m in 1u32..5) {
        let p = build(&universe(), &a);
        prop_assert_eq!(p.substitute_power(1, k).substitute_power(1, m), p.substitute_power(1, k * m));
    }

    #[test]
    fn substitute_power_is_a_ring_map(a in raw_poly(), b in raw_poly(), k in 1u32..5) {
        let u = universe();
        let (p, q) = (build(&u, &a), build(&u, &b));
        prop_assert_eq!(
            p.mul(&q).unwrap().substitute_power(1, k),
            p.substitute_power(1, k).mul(&q.substitute_power(1, k)).unwrap()
        );
        prop_assert_eq!(
            p.add(&q).unwrap().substitute_power(1, k),
            p.substitute_power(1, k).add(&q.substitute_power(1, k)).unwrap()
        );
    }

    #[test]
    fn unit_evaluation_forgets_powers(a in raw_poly(), b in raw_poly(), k in 1u32..6) {
        let u = universe();
        let (p, q) = (build(&u, &a), build(&u, &b));
        prop_assert_eq!(p.substitute_power(1, k).eval_at_one(1), p.eval_at_one(1));
        prop_assert_eq!(
            p.mul(&q).unwrap().eval_at_one(1),
            p.eval_at_one(1).mul(&q.eval_at_one(1)).unwrap()
        );
        prop_assert!(p.eval_at_one(1).as_coefficient().is_some());
    }

    #[test]
    fn collected_coefficients_rebuild_the_polynomial(a in raw_poly()) {
        let u = universe();
        let p = build(&u, &a);
        let parts = p.collect_coefficients();
        prop_assert_eq!(parts.len(), p.len());
        prop_assert!(parts.iter().all(|(_, c)| !c.is_zero()));
        prop_assert!(parts.windows(2).all(|w| w[0].0 != w[1].0));
        prop_assert_eq!(SymPoly::from_terms(&u, parts).unwrap(), p);
    }

    #[test]
    fn rationals_stay_reduced(a in small_rational(), b in small_rational()) {
        for r in [&a + &b, &a * &b, &a - &b] {
            prop_assert!(r.denom().is_positive());
            prop_assert!(r.numer().gcd(r.denom()).is_one() || r.is_zero());
            if r.is_zero() {
                prop_assert!(r.denom().is_one());
            }
        }
    }
}
