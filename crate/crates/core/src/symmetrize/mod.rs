//! Identities of the symmetrized multiadditive form.
//!
//! For additive `fᵢ`, the form
//! `F(x₁…x_N) = Σᵢ wᵢ/N! Σ_σ Π_blocks fᵢ(product of the block)` (slots cut
//! into `qᵢ` consecutive blocks of `pᵢ`) is symmetric and `N`-additive with
//! trace equal to the left-hand side of the equation, so it vanishes
//! identically. Evaluating it at a [`BlockPattern`] yields an
//! [`AbstractIdentity`].
//!
//! [`evaluate_pattern`] computes the coefficients from block-occupancy
//! counts; [`brute_force_pattern`] enumerates `S_N` and is the oracle.

mod identity;
mod pattern;
mod polarization;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::equation::ExponentProfile;
use crate::error::{Error, Result};
use crate::expr::{factorial, Rational};

pub use identity::{AbstractIdentity, ArgMonomial, IdentityKey};
pub use pattern::{BlockPattern, TOKEN_NAMES};
pub use polarization::{polarization_check, PolarizationProof, POLARIZATION_CAP};

/// Largest `N` the permutation oracle accepts.
pub const BRUTE_FORCE_CAP: u32 = 8;

/// Probability that a uniformly random `σ ∈ S_N` places the marked
/// tokens so that each group of `grouping` shares one block and distinct
/// groups occupy distinct blocks (blocks of size `p`).
pub fn pattern_weight(p: u32, n: u32, grouping: &[u32]) -> Result<Rational> {
    if p == 0 || n % p != 0 {
        return Err(Error::NotDivisible { p, n });
    }
    let blocks = n / p;
    let marked: u32 = grouping.iter().sum();
    if grouping.len() as u32 > blocks || grouping.iter().any(|&s| s > p) || marked > n {
        return Ok(Rational::zero());
    }
    let falling = |top: u32, k: u32| (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(top - i));
    let mut num = falling(blocks, grouping.len() as u32);
    for &s in grouping {
        num *= falling(p, s);
    }
    Ok(Rational::new(num, falling(n, marked)))
}

fn check_pattern(profile: &ExponentProfile, pattern: &BlockPattern) -> Result<()> {
    if pattern.total() != profile.n() {
        return Err(Error::UnsupportedPattern(format!(
            "pattern {pattern} has {} slots, the form has {}",
            pattern.total(),
            profile.n()
        )));
    }
    Ok(())
}

/// Turns a list of block contents (token counts `x, y, z, 1`) into the
/// identity key of row `row`.
fn block_key(row: usize, blocks: &[[u32; 4]]) -> IdentityKey {
    let mut ones = 0;
    let mut args = Vec::with_capacity(blocks.len());
    for b in blocks {
        if b[0] + b[1] + b[2] == 0 {
            ones += 1;
        } else {
            args.push([b[0], b[1], b[2]]);
        }
    }
    IdentityKey::new(row, ones, args)
}

/// All token-count vectors of size `p` fitting inside `avail`, in
/// descending lexicographic order.
fn block_types(p: u32, avail: [u32; 4]) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for a in (0..=avail[0].min(p)).rev() {
        for b in (0..=avail[1].min(p - a)).rev() {
            for c in (0..=avail[2].min(p - a - b)).rev() {
                let d = p - a - b - c;
                if d <= avail[3] {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// Enumerates multisets of `blocks_left` block types (non-increasing
/// indices into `types`) exhausting `remaining`.
fn distribute(
    types: &[[u32; 4]],
    start: usize,
    blocks_left: u32,
    remaining: [u32; 4],
    chosen: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if blocks_left == 0 {
        if remaining == [0; 4] {
            visit(chosen);
        }
        return;
    }
    for (i, t) in types.iter().enumerate().skip(start) {
        if (0..4).all(|k| t[k] <= remaining[k]) {
            let rest = [
                remaining[0] - t[0],
                remaining[1] - t[1],
                remaining[2] - t[2],
                remaining[3] - t[3],
            ];
            chosen.push(i);
            distribute(types, i, blocks_left - 1, rest, chosen, visit);
            chosen.pop();
        }
    }
}

/// `F(pattern) = 0` with coefficients from exact block-occupancy counts.
///
/// A block multiset `{B₁…B_q}` arises from
/// `q!/Π mult! · Π_b p!/Π c_b(t)!` of the `N!/Π n_t!` equally likely token
/// arrangements.
pub fn evaluate_pattern(profile: &ExponentProfile, pattern: &BlockPattern) -> Result<AbstractIdentity> {
    check_pattern(profile, pattern)?;
    let n = profile.n();
    let avail = [pattern.counts[0], pattern.counts[1], pattern.counts[2], pattern.ones];
    let fact_prod = |v: &[u32]| v.iter().fold(BigInt::one(), |acc, &c| acc * factorial(c));
    let arrangements = factorial(n) / fact_prod(&avail);

    let mut out = AbstractIdentity::zero(profile.names());
    for (row, r) in profile.rows().iter().enumerate() {
        let types = block_types(r.p, avail);
        let per_block: Vec<BigInt> = types.iter().map(|t| factorial(r.p) / fact_prod(t)).collect();
        let mut chosen = Vec::new();
        distribute(&types, 0, r.q, avail, &mut chosen, &mut |multiset| {
            let mut count = factorial(r.q);
            let mut i = 0;
            while i < multiset.len() {
                let mut j = i;
                while j < multiset.len() && multiset[j] == multiset[i] {
                    j += 1;
                }
                count /= factorial((j - i) as u32);
                i = j;
            }
            for &t in multiset {
                count *= &per_block[t];
            }
            let blocks: Vec<[u32; 4]> = multiset.iter().map(|&t| types[t]).collect();
            let weight = Rational::new(count, arrangements.clone()) * &r.weight;
            out.add_term(block_key(row, &blocks), weight);
        });
    }
    Ok(out)
}

/// Visits every permutation of `0..n` (Heap's algorithm).
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Same contract as [`evaluate_pattern`], by explicit enumeration of all
/// `N!` permutations per row. `N ≤ 8`.
pub fn brute_force_pattern(profile: &ExponentProfile, pattern: &BlockPattern) -> Result<AbstractIdentity> {
    let n = profile.n();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::CapExceeded {
            what: "brute-force degree N",
            value: n as u64,
            cap: BRUTE_FORCE_CAP as u64,
        });
    }
    check_pattern(profile, pattern)?;
    let slots = pattern.slots();
    let total = Rational::from_integer(factorial(n));
    let mut out = AbstractIdentity::zero(profile.names());
    for (row, r) in profile.rows().iter().enumerate() {
        let p = r.p as usize;
        let mut counts: HashMap<IdentityKey, u64> = HashMap::new();
        let mut blocks = vec![[0u32; 4]; r.q as usize];
        for_each_permutation(n as usize, |perm| {
            for (b, block) in blocks.iter_mut().enumerate() {
                *block = [0; 4];
                for s in 0..p {
                    block[slots[perm[b * p + s]]] += 1;
                }
            }
            *counts.entry(block_key(row, &blocks)).or_default() += 1;
        });
        for (key, c) in counts {
            out.add_term(key, Rational::from_integer(c.into()) / &total * &r.weight);
        }
    }
    Ok(out)
}

/// Cancels the single-argument term of `target_row` between two identities.
///
/// `id_a` must involve a single formal token `t` and contain
/// `f(1)^e · f(t)` for the target row; `id_b` must contain a term
/// `f(1)^e · f(m)`. Since `id_a` holds for every value of `t`, it may be
/// rewritten with `t ↦ m`; the returned identity is
/// `c_a·id_b − c_b·id_a[t ↦ m]`, rescaled to coprime integer coefficients.
/// Only rational multipliers are used, so no `f(1) ≠ 0` assumption enters.
pub fn eliminate_dependence(
    id_a: &AbstractIdentity,
    id_b: &AbstractIdentity,
    target_row: usize,
) -> Result<AbstractIdentity> {
    if id_a.names() != id_b.names() {
        return Err(Error::CannotEliminate("identities concern different functions".into()));
    }
    let name = id_a
        .names()
        .get(target_row)
        .ok_or_else(|| Error::CannotEliminate(format!("no row {target_row}")))?
        .clone();
    let mut used = [false; 3];
    for (k, _) in id_a.terms() {
        for a in &k.args {
            for t in 0..3 {
                used[t] |= a[t] > 0;
            }
        }
    }
    let tokens: Vec<usize> = (0..3).filter(|&t| used[t]).collect();
    let [token] = tokens[..] else {
        return Err(Error::CannotEliminate(
            "the substituted identity must involve exactly one token".into(),
        ));
    };
    let mut linear = [0u32; 3];
    linear[token] = 1;
    let (key_a, c_a) = id_a
        .terms()
        .find(|(k, _)| k.row == target_row && k.args == [linear])
        .map(|(k, c)| (k.clone(), c.clone()))
        .ok_or_else(|| Error::CannotEliminate(format!("no linear {name} term in the first identity")))?;
    let (key_b, c_b) = id_b
        .terms()
        .filter(|(k, _)| k.row == target_row && k.args.len() == 1 && k.ones == key_a.ones)
        .max_by(|(x, _), (y, _)| {
            let dx: u32 = x.args[0].iter().sum();
            let dy: u32 = y.args[0].iter().sum();
            dx.cmp(&dy).then_with(|| x.args[0].cmp(&y.args[0]))
        })
        .map(|(k, c)| (k.clone(), c.clone()))
        .ok_or_else(|| Error::CannotEliminate(format!("no matching {name} term in the second identity")))?;
    let target = key_b.args[0];
    let substituted = id_a.map_args(|a| {
        let k = a[token];
        [target[0] * k, target[1] * k, target[2] * k]
    });
    Ok(id_b.scale(&c_a).sub(&substituted.scale(&c_b)).primitive())
}
