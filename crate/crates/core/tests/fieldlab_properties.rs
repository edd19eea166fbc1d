use std::collections::BTreeMap;

use homchar::equation::ExponentProfile;
use homchar::expr::{rat, Rational};
use homchar::fieldlab::{
    derive_ratfunc, embed_quad, equation_oracle, eval_poly, random_quads, random_ratfuncs, Bindings, OracleField,
    QPoly, QuadExtElem, RatFunc,
};
use homchar::verify::{check_equation, Candidate};
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

fn small_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

const RADICANDS: [i64; 5] = [2, 3, 5, 6, 7];

fn quad_triple() -> impl Strategy<Value = (QuadExtElem, QuadExtElem, QuadExtElem)> {
    (0..RADICANDS.len(), prop::collection::vec(small_rational(), 6)).prop_map(|(i, r)| {
        let d = RADICANDS[i];
        let e = |k: usize| QuadExtElem::new(r[k].clone(), r[k + 1].clone(), d).unwrap();
        (e(0), e(2), e(4))
    })
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (
        prop::collection::vec(small_rational(), 1..4),
        prop::collection::vec(small_rational(), 0..3),
    )
        .prop_map(|(num, mut den)| {
            den.push(rat(1, 1));
            RatFunc::new(QPoly::new(num), QPoly::new(den)).unwrap()
        })
}

proptest! {
    #![proptest_config(config(128, 23))]

    #[test]
    fn quadratic_field_axioms((a, b, c) in quad_triple()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.mul(&a.conj()).a, a.norm());
        if !a.is_zero() {
            let one = QuadExtElem::rational(rat(1, 1), a.d()).unwrap();
            prop_assert_eq!(a.mul(&a.inv().unwrap()), one);
        } else {
            prop_assert!(a.inv().is_err());
        }
    }

    #[test]
    fn embeddings_are_field_homomorphisms((a, b, _c) in quad_triple(), conj in any::<bool>()) {
        let e = |x: &QuadExtElem| embed_quad(x, conj);
        prop_assert_eq!(e(&a.add(&b)), e(&a).add(&e(&b)));
        prop_assert_eq!(e(&a.mul(&b)), e(&a).mul(&e(&b)));
        let one = QuadExtElem::rational(rat(1, 1), a.d()).unwrap();
        prop_assert_eq!(e(&one), one);
    }

    #[test]
    fn rational_function_field_axioms(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        if a.is_zero() {
            prop_assert!(a.inv().is_err());
        } else {
            prop_assert_eq!(a.mul(&a.inv().unwrap()), RatFunc::constant(rat(1, 1)));
        }
        let den = a.denominator();
        prop_assert_eq!(den.lead(), rat(1, 1));
        prop_assert_eq!(a.numerator().gcd(den).degree(), 0);
    }

    #[test]
    fn d_dt_is_a_derivation(a in ratfunc(), b in ratfunc()) {
        prop_assert_eq!(derive_ratfunc(&a.add(&b)), derive_ratfunc(&a).add(&derive_ratfunc(&b)));
        prop_assert_eq!(
            derive_ratfunc(&a.mul(&b)),
            derive_ratfunc(&a).mul(&b).add(&a.mul(&derive_ratfunc(&b)))
        );
    }
}

/// Profiles with `(N, 1)` in them, so that
/// `f1 = -Σ_{i>1} c_i^{q_i}·phi`, `f_i = c_i·phi` solves the equation.
fn divisor_profile() -> impl Strategy<Value = Vec<(u32, u32)>> {
    (2u32..=6).prop_flat_map(|n| {
        let divisors: Vec<u32> = (2..=n).filter(|q| n % q == 0).collect();
        prop::sample::subsequence(divisors.clone(), 1..=divisors.len()).prop_map(move |qs| {
            let mut pairs = vec![(n, 1)];
            pairs.extend(qs.iter().map(|&q| (n / q, q)));
            pairs
        })
    })
}

fn solution_text(pairs: &[(u32, u32)], coeffs: &[i64], hom: &str) -> Vec<(String, String)> {
    let mut rows = Vec::new();
    let mut first = Vec::new();
    for (i, &(_, q)) in pairs.iter().enumerate().skip(1) {
        let c = coeffs[i];
        first.push(format!("({c})^{q}"));
        rows.push((format!("f{}", i + 1), format!("{c}*{hom}")));
    }
    rows.insert(0, ("f1".into(), format!("-({})*{hom}", first.join(" + "))));
    rows
}

fn candidate(rows: &[(String, String)]) -> Candidate {
    let borrowed: Vec<(&str, &str)> = rows.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    Candidate::parse(&borrowed).unwrap()
}

fn bindings(pairs: &[(&str, &str)]) -> Bindings {
    let map: BTreeMap<String, String> = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    Bindings::parse_map(&map).unwrap()
}

proptest! {
    #![proptest_config(config(48, 31))]

    /// A zero symbolic residual holds at every sample; a perturbed candidate
    /// has a nonzero residual and is caught on some sample.
    #[test]
    fn symbolic_zero_implies_semantic_zero(
        pairs in divisor_profile(),
        coeffs in prop::collection::vec(-3i64..=3, 4),
        conj in any::<bool>(),
        seed in 0u64..1000,
    ) {
        let profile = ExponentProfile::from_pairs(&pairs).unwrap();
        let rows = solution_text(&pairs, &coeffs, "phi1");
        let good = candidate(&rows);
        prop_assert!(check_equation(&profile, &good).unwrap().is_zero());

        let b = if conj { bindings(&[("phi1", "conj(5)")]) } else { bindings(&[]) };
        let quads = random_quads(5, seed, 32).unwrap();
        let funcs = random_ratfuncs(seed, 32);
        prop_assert!(equation_oracle(&profile, &good, &b, &quads).unwrap().holds);
        if !conj {
            prop_assert!(equation_oracle(&profile, &good, &b, &funcs).unwrap().holds);
        }

        let mut bad_rows = rows.clone();
        bad_rows[0].1 = format!("{} + phi1", bad_rows[0].1);
        let bad = candidate(&bad_rows);
        prop_assert!(!check_equation(&profile, &bad).unwrap().is_zero());
        prop_assert!(!equation_oracle(&profile, &bad, &b, &quads).unwrap().holds);
    }

    /// The rendered residual and the direct evaluation agree pointwise.
    #[test]
    fn residual_value_matches_direct_evaluation(
        pairs in divisor_profile(),
        coeffs in prop::collection::vec(-3i64..=3, 8),
        seed in 0u64..1000,
    ) {
        let profile = ExponentProfile::from_pairs(&pairs).unwrap();
        let rows: Vec<(String, String)> = (0..pairs.len())
            .map(|i| (format!("f{}", i + 1), format!("{}*phi1 + ({})*phi1*a1", coeffs[2 * i], coeffs[2 * i + 1])))
            .collect();
        let cand = candidate(&rows);
        let residual = check_equation(&profile, &cand).unwrap();
        let b = bindings(&[]);
        for point in random_ratfuncs(seed, 2) {
            let symbolic = eval_poly(&residual, &b, &point).unwrap();
            let mut direct = RatFunc::zero();
            for (i, &(p, q)) in pairs.iter().enumerate() {
                let row = cand.get(&format!("f{}", i + 1)).unwrap();
                direct = direct.add(&eval_poly(row, &b, &point.pow(p)).unwrap().pow(q));
            }
            prop_assert_eq!(symbolic, direct);
        }
    }
}
