use std::collections::BTreeMap;

use homchar::ansatz::{
    check_family, expand_ansatz, expand_ansatz_by_powers, extract_constraints, solution_families,
    solve_weighted_block_constraint, ConstraintSystem, Tolerances,
};
use homchar::equation::ExponentProfile;
use homchar::expr::{int, MultiIndex, Rational, UnknownPoly};
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config(cases: u32, seed: u64) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

/// Pairs `(N/q, q)` for a nonempty set of divisors `q` of `N`.
fn profile(max_n: u32, max_rows: usize) -> impl Strategy<Value = ExponentProfile> {
    (2..=max_n).prop_flat_map(move |n| {
        let divisors: Vec<u32> = (1..=n).filter(|q| n % q == 0).collect();
        let hi = divisors.len().min(max_rows);
        prop::sample::subsequence(divisors, 1..=hi)
            .prop_map(move |qs| ExponentProfile::from_pairs(&qs.iter().map(|&q| (n / q, q)).collect::<Vec<_>>()).unwrap())
    })
}

fn complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

proptest! {
    #![proptest_config(config(96, 41))]

    /// With one homomorphism the expansion is the single constraint `Σ wᵢ cᵢ^{qᵢ}`.
    #[test]
    fn one_homomorphism_gives_one_constraint(p in profile(12, 5)) {
        let system = extract_constraints(&expand_ansatz(&p, 1).unwrap(), 1);
        prop_assert_eq!(system.len(), 1);
        let nv = p.len();
        let mut expected = UnknownPoly::zero(nv);
        for (i, row) in p.rows().iter().enumerate() {
            expected = expected.add(&UnknownPoly::var(nv, i).pow(row.q).scale(&row.weight));
        }
        prop_assert_eq!(&system.constraints[0].poly, &expected);
        let mut mono = vec![0; 1];
        mono[0] = p.n();
        prop_assert_eq!(&system.constraints[0].exponents, &MultiIndex::from_vec(mono));
    }

    #[test]
    fn multinomial_and_ring_expansions_agree(p in profile(8, 4), k in 1u32..=3) {
        prop_assert_eq!(expand_ansatz(&p, k).unwrap(), expand_ansatz_by_powers(&p, k).unwrap());
    }

    /// Addends `(i, J)` land on the monomial `Π phi_j^{J_j·p_i}`, so two addends
    /// share a monomial exactly when `J_j·p_i = J'_j·p_i'` for all `j`.
    #[test]
    fn monomial_grouping_law(p in profile(12, 4), k in 1u32..=3) {
        let ks = k as usize;
        let system = extract_constraints(&expand_ansatz(&p, k).unwrap(), k);
        let mut addends = 0usize;
        for c in &system.constraints {
            for (m, _) in c.poly.terms() {
                let rows: Vec<usize> = (0..p.len())
                    .filter(|&i| (0..ks).any(|j| m.get(i * ks + j) > 0))
                    .collect();
                prop_assert_eq!(rows.len(), 1);
                let i = rows[0];
                let row = &p.rows()[i];
                let j_sum: u32 = (0..ks).map(|j| m.get(i * ks + j)).sum();
                prop_assert_eq!(j_sum, row.q);
                for j in 0..ks {
                    prop_assert_eq!(m.get(i * ks + j) * row.p, c.exponents.get(j));
                }
                addends += 1;
            }
        }
        let binom = |n: u64, r: u64| (0..r).fold(1u64, |acc, t| acc * (n - t) / (t + 1));
        let expected: u64 = p.rows().iter().map(|r| binom(r.q as u64 + k as u64 - 1, k as u64 - 1)).sum();
        prop_assert_eq!(addends as u64, expected);
    }

    /// Every family instance built from block-constraint roots passes the check.
    #[test]
    fn family_soundness(p in profile(12, 4), seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for fam in solution_families(&p) {
            let mut values: BTreeMap<String, Complex64> = BTreeMap::new();
            for c in &fam.constraints {
                let weights: Vec<f64> = c.terms.iter().map(|t| t.weight_f64()).collect();
                let q: Vec<u32> = c.terms.iter().map(|t| t.q).collect();
                let free = rng.gen_range(0..q.len());
                let fixed: Vec<Complex64> = (0..q.len() - 1).map(|_| complex(&mut rng)).collect();
                let roots = solve_weighted_block_constraint(&weights, &q, &fixed, free).unwrap();
                let root = roots[rng.gen_range(0..roots.len())];
                let mut others = fixed.into_iter();
                for (idx, t) in c.terms.iter().enumerate() {
                    let v = if idx == free { root } else { others.next().unwrap() };
                    values.insert(t.unknown.clone(), v);
                }
            }
            let check = check_family(&p, &fam, &values, seed, Tolerances::default()).unwrap();
            prop_assert!(check.holds, "{} {:?}", fam.label(), check);
        }
    }
}

fn solve_complex(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))?;
        if a[piv][col].norm() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
            let v = b[col];
            b[r] -= f * v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let s: Complex64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// Levenberg-Marquardt on the complex constraint system.
fn refine(system: &ConstraintSystem, start: Vec<Complex64>) -> Vec<Complex64> {
    let nv = start.len();
    let jac: Vec<Vec<UnknownPoly>> = system
        .constraints
        .iter()
        .map(|c| (0..nv).map(|i| c.poly.derivative(i)).collect())
        .collect();
    let mut x = start;
    let mut lambda = 1e-3;
    for _ in 0..400 {
        let r: Vec<Complex64> = system.constraints.iter().map(|c| c.poly.eval_complex(&x)).collect();
        let norm: f64 = r.iter().map(|v| v.norm_sqr()).sum();
        if norm.sqrt() < 1e-13 {
            break;
        }
        let j: Vec<Vec<Complex64>> = jac.iter().map(|row| row.iter().map(|d| d.eval_complex(&x)).collect()).collect();
        let mut a = vec![vec![Complex64::new(0.0, 0.0); nv]; nv];
        let mut g = vec![Complex64::new(0.0, 0.0); nv];
        for (jr, rv) in j.iter().zip(&r) {
            for p in 0..nv {
                g[p] -= jr[p].conj() * rv;
                for q in 0..nv {
                    a[p][q] += jr[p].conj() * jr[q];
                }
            }
        }
        loop {
            let mut damped = a.clone();
            for (p, row) in damped.iter_mut().enumerate() {
                row[p] += lambda;
            }
            let Some(step) = solve_complex(damped, g.clone()) else { return x };
            let trial: Vec<Complex64> = x.iter().zip(&step).map(|(a, b)| a + b).collect();
            let tn: f64 = system.constraints.iter().map(|c| c.poly.eval_complex(&trial).norm_sqr()).sum();
            if tn < norm {
                x = trial;
                lambda = (lambda / 3.0).max(1e-15);
                break;
            }
            lambda *= 4.0;
            if lambda > 1e12 {
                return x;
            }
        }
    }
    x
}

/// Small-scale completeness: numeric solutions found by random search carry,
/// in every row with `q ≥ 2`, at most one coefficient above the support
/// threshold.
#[test]
fn numeric_solutions_have_single_support() {
    const SUPPORT: f64 = 0.05;
    let profiles: [&[(u32, u32)]; 6] = [
        &[(4, 1), (2, 2), (1, 4)],
        &[(6, 1), (3, 2), (2, 3)],
        &[(3, 2), (2, 3)],
        &[(6, 1), (2, 3), (1, 6)],
        &[(2, 2), (1, 4)],
        &[(8, 1), (4, 2), (2, 4)],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut converged = 0;
    for pairs in profiles {
        let p = ExponentProfile::from_pairs(pairs).unwrap();
        for k in 1..=2u32 {
            let system = extract_constraints(&expand_ansatz(&p, k).unwrap(), k);
            for _ in 0..20 {
                let start: Vec<Complex64> = (0..p.len() * k as usize).map(|_| complex(&mut rng)).collect();
                let x = refine(&system, start);
                if system.max_residual(&x) > 1e-10 {
                    continue;
                }
                converged += 1;
                for (i, row) in p.rows().iter().enumerate() {
                    if row.q < 2 {
                        continue;
                    }
                    let support = (0..k as usize).filter(|&j| x[i * k as usize + j].norm() > SUPPORT).count();
                    assert!(support <= 1, "{pairs:?} k={k} row {i}: {x:?}");
                }
            }
        }
    }
    assert!(converged >= 60, "only {converged} runs converged");
}

#[test]
fn weights_enter_the_constraint() {
    let terms = homchar::equation::parse_equation("f(x^4) - 3*g^2(x^2) = 0").unwrap();
    let p = ExponentProfile::from_terms(&terms).unwrap();
    let system = extract_constraints(&expand_ansatz(&p, 1).unwrap(), 1);
    let expected = UnknownPoly::var(2, 0).sub(&UnknownPoly::var(2, 1).pow(2).scale(&int(3)));
    assert_eq!(system.constraints[0].poly, expected);
    let zero: Rational = system.constraints[0].poly.eval(&[int(12), int(2)]);
    assert_eq!(zero, int(0));
}
