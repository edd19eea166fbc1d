//! Expansion of an equation under the ansatz `fᵢ = Σⱼ c_{i,j}·phiJ`, the
//! resulting monomial constraint system, and the partition solution families.

mod families;
mod roots;

pub use families::{
    check_family, solution_families, solve_block_constraint, solve_weighted_block_constraint, BlockConstraint, ConstraintTerm, FamilyCheck,
    PartitionFamily, Tolerances, SAMPLE_POINTS,
};
pub use roots::{nonzero_roots, polynomial_roots};

use std::sync::Arc;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::equation::ExponentProfile;
use crate::expr::{multinomial, MultiIndex, Rational, SymPoly, SymbolId, UnknownPoly, Universe};
use crate::{Error, Result};

/// Largest basis size accepted by [`expand_ansatz`].
pub const MAX_BASIS: u32 = 8;

/// Name of the coefficient of `phiJ` in the `i`-th row (both 1-based).
pub fn coefficient_name(i: usize, j: usize) -> String {
    format!("c{i}_{j}")
}

/// Universe with `phi1(x) … phiK(x)` and unknowns `c{i}_{j}` row-major.
pub fn ansatz_universe(rows: usize, k: u32) -> Arc<Universe> {
    let symbols = (1..=k).map(|j| SymbolId::hom(j, 1));
    let unknowns = (1..=rows).flat_map(|i| (1..=k as usize).map(move |j| coefficient_name(i, j)));
    Universe::new(symbols, unknowns)
}

/// Calls `visit` with every composition of `total` into `parts` non-negative parts.
pub(crate) fn for_each_composition(total: u32, parts: usize, visit: &mut impl FnMut(&[u32])) {
    fn go(rest: u32, slot: usize, buf: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
        if slot + 1 == buf.len() {
            buf[slot] = rest;
            visit(buf);
            return;
        }
        for v in (0..=rest).rev() {
            buf[slot] = v;
            go(rest - v, slot + 1, buf, visit);
        }
    }
    if parts == 0 {
        if total == 0 {
            visit(&[]);
        }
        return;
    }
    let mut buf = vec![0; parts];
    go(total, 0, &mut buf, visit);
}

/// Substitutes the ansatz into `Σ wᵢ fᵢ^{qᵢ}(x^{pᵢ})`, expanding each power by
/// the multinomial theorem (`phiJ(x^p) = phiJ(x)^p`).
pub fn expand_ansatz(profile: &ExponentProfile, k: u32) -> Result<SymPoly> {
    if k == 0 || k > MAX_BASIS {
        return Err(Error::CapExceeded {
            what: "basis size",
            value: k as u64,
            cap: MAX_BASIS as u64,
        });
    }
    let rows = profile.rows();
    let u = ansatz_universe(rows.len(), k);
    let nv = u.unknowns().len();
    let ks = k as usize;
    let mut terms: Vec<(MultiIndex, UnknownPoly)> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        for_each_composition(row.q, ks, &mut |parts| {
            let coeff = Rational::from_integer(multinomial(parts)) * &row.weight;
            let mut unknown_exp = MultiIndex::zeros(nv);
            for (j, &e) in parts.iter().enumerate() {
                unknown_exp.set(i * ks + j, e);
            }
            let symbol_exp = MultiIndex::from_vec(parts.iter().map(|e| e * row.p).collect());
            terms.push((symbol_exp, UnknownPoly::from_terms(nv, [(unknown_exp, coeff)])));
        });
    }
    SymPoly::from_terms(&u, terms)
}

/// Same expansion computed with ring operations only; kept as an independent
/// route for cross-checking.
pub fn expand_ansatz_by_powers(profile: &ExponentProfile, k: u32) -> Result<SymPoly> {
    let rows = profile.rows();
    let u = ansatz_universe(rows.len(), k);
    let mut total = SymPoly::zero(&u);
    for (i, row) in rows.iter().enumerate() {
        let mut f = SymPoly::zero(&u);
        for j in 1..=k as usize {
            let c = SymPoly::unknown(&u, &coefficient_name(i + 1, j))?;
            let phi = SymPoly::symbol(&u, SymbolId::hom(j as u32, 1))?;
            f = f.add(&c.mul(&phi)?)?;
        }
        let term = f.substitute_power(1, row.p).pow(row.q).scale(&row.weight);
        total = total.add(&term)?;
    }
    Ok(total)
}

/// One monomial of the expansion with its coefficient polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct Constraint {
    pub monomial: String,
    #[serde(skip)]
    pub exponents: MultiIndex,
    #[serde(skip)]
    pub poly: UnknownPoly,
    /// `poly` rendered over the unknown names.
    pub equation: String,
}

/// The system `coefficient = 0` for every monomial of the expansion.
#[derive(Clone, Debug, Serialize)]
pub struct ConstraintSystem {
    pub k: u32,
    pub unknowns: Vec<String>,
    pub constraints: Vec<Constraint>,
}

impl ConstraintSystem {
    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Largest absolute value over all constraints at the given unknown values.
    pub fn max_residual(&self, values: &[Complex64]) -> f64 {
        self.constraints
            .iter()
            .map(|c| c.poly.eval_complex(values).norm())
            .fold(0.0, f64::max)
    }

    /// Rendered `poly = 0` lines in canonical order.
    pub fn lines(&self) -> Vec<String> {
        self.constraints
            .iter()
            .map(|c| format!("[{}] {} = 0", c.monomial, c.equation))
            .collect()
    }
}

pub fn extract_constraints(expansion: &SymPoly, k: u32) -> ConstraintSystem {
    let names = expansion.universe().unknowns().to_vec();
    let constraints = expansion
        .collect_coefficients()
        .into_iter()
        .map(|(m, poly)| Constraint {
            monomial: expansion.render_monomial(&m),
            equation: poly.render(&names),
            exponents: m,
            poly,
        })
        .collect();
    ConstraintSystem {
        k,
        unknowns: names,
        constraints,
    }
}

/// Evaluates a symbolic polynomial numerically: unknowns from `unknowns`,
/// symbols from `symbols` (both in universe order).
pub fn eval_numeric(poly: &SymPoly, unknowns: &[Complex64], symbols: &[Complex64]) -> Complex64 {
    poly.terms()
        .map(|(m, c)| {
            let mut v = c.eval_complex(unknowns);
            for (s, &e) in symbols.iter().zip(m.exponents()) {
                v *= s.powu(e);
            }
            v
        })
        .sum()
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
