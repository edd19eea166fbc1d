//! Exact residuals of symbolic candidates. Reduction uses only
//! `phiJ(x^k) = phiJ(x)^k`, `aR(x^k) = k·aR(x)`, `phiJ(1) = 1`, `aR(1) = 0`
//! and commutative ring arithmetic; residuals are returned, never booleans.

mod candidate;

pub use candidate::{parse_expression, Candidate};

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::equation::ExponentProfile;
use crate::expr::{SymPoly, SymbolKind, Universe};
use crate::symmetrize::{evaluate_pattern, BlockPattern};
use crate::{Error, Result};

fn rows_in_profile_order<'a>(profile: &ExponentProfile, cand: &'a Candidate) -> Result<Vec<&'a SymPoly>> {
    if cand.len() != profile.len() {
        return Err(Error::RowCountMismatch {
            expected: profile.len(),
            found: cand.len(),
        });
    }
    profile
        .rows()
        .iter()
        .map(|r| {
            cand.get(&r.name)
                .ok_or_else(|| Error::IncompleteAssignment(format!("no candidate for '{}'", r.name)))
        })
        .collect()
}

fn empty_universe() -> Arc<Universe> {
    Universe::new([], Vec::<String>::new())
}

/// `Σ wᵢ·candᵢ(x^{pᵢ})^{qᵢ}`, expanded and collected.
pub fn check_equation(profile: &ExponentProfile, cand: &Candidate) -> Result<SymPoly> {
    let rows = rows_in_profile_order(profile, cand)?;
    let u = cand.universe().cloned().unwrap_or_else(empty_universe);
    let mut total = SymPoly::zero(&u);
    for (row, poly) in profile.rows().iter().zip(rows) {
        let term = poly.substitute_power(1, row.p).pow(row.q).scale(&row.weight);
        total = total.add(&term)?;
    }
    Ok(total)
}

/// Substitutes the candidate into the identity obtained from `pattern`.
/// Arguments `x^α y^β z^γ` become symbols on the base variables x, y, z.
pub fn check_pattern_identity(profile: &ExponentProfile, cand: &Candidate, pattern: &BlockPattern) -> Result<SymPoly> {
    let rows = rows_in_profile_order(profile, cand)?;
    let identity = evaluate_pattern(profile, pattern)?;
    let base = cand.universe().cloned().unwrap_or_else(empty_universe);
    let target = base.with_bases(&[2, 3]);
    let mut total = SymPoly::zero(&target);
    for (key, coeff) in identity.terms() {
        let f = rows[key.row];
        let mut term = f.eval_at_one(1).lift(&target)?.pow(key.ones);
        for arg in &key.args {
            let factors: Vec<(u32, u32)> = arg
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(t, &e)| (t as u32 + 1, e))
                .collect();
            term = term.mul(&f.substitute_monomial(1, &factors, &target)?)?;
        }
        total = total.add(&term.scale(coeff))?;
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum CandidateClass {
    /// `Σ cⱼ·phiJ`: no log-derivatives, each term a single homomorphism.
    HomCombination,
    /// One homomorphism times a polynomial in log-derivatives.
    PolynomialTimesHom { hom: u32, log_degree: u32 },
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowClass {
    pub name: String,
    pub class: CandidateClass,
}

pub fn classify_poly(p: &SymPoly) -> CandidateClass {
    let symbols = p.universe().symbols();
    let mut homs = BTreeSet::new();
    let mut log_degree = 0;
    let mut linear_homs = true;
    for (m, _) in p.terms() {
        let mut hom_in_term = Vec::new();
        let mut logs = 0;
        for (s, &e) in symbols.iter().zip(m.exponents()) {
            if e == 0 {
                continue;
            }
            match s.kind {
                SymbolKind::Hom => hom_in_term.push((s.index, s.base, e)),
                SymbolKind::LogDeriv => logs += e,
            }
        }
        match hom_in_term.as_slice() {
            [(index, 1, 1)] => {
                homs.insert(*index);
            }
            _ => return CandidateClass::Mixed,
        }
        if logs > 0 {
            linear_homs = false;
        }
        log_degree = log_degree.max(logs);
    }
    if linear_homs {
        CandidateClass::HomCombination
    } else if homs.len() == 1 {
        CandidateClass::PolynomialTimesHom {
            hom: *homs.iter().next().unwrap(),
            log_degree,
        }
    } else {
        CandidateClass::Mixed
    }
}

pub fn classify_candidate(cand: &Candidate) -> Vec<RowClass> {
    cand.names()
        .iter()
        .zip(cand.rows())
        .map(|(n, r)| RowClass {
            name: n.clone(),
            class: classify_poly(r),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::{parse_equation, ExponentProfile};

    fn ex1() -> ExponentProfile {
        ExponentProfile::from_terms(&parse_equation("f(x^4) + g^2(x^2) + h^4(x) = 0").unwrap()).unwrap()
    }

    fn ex3_candidate() -> Candidate {
        Candidate::parse(&[("f", "-(20 + 4*a + a^2)*phi"), ("g", "2*(1 + a)*phi"), ("h", "2*phi")]).unwrap()
    }

    #[test]
    fn log_derivative_candidate_satisfies_equation() {
        let r = check_equation(&ex1(), &ex3_candidate()).unwrap();
        assert!(r.is_zero(), "{r}");
    }

    #[test]
    fn unit_pattern_exposes_nonadditive_candidate() {
        let r = check_pattern_identity(&ex1(), &ex3_candidate(), &BlockPattern::single(4)).unwrap();
        assert_eq!(r.to_string(), "-phi1(x)*a1(x)^2");
    }

    #[test]
    fn family_solution_satisfies_equation_and_pattern() {
        let cand = Candidate::parse(&[("f", "-g(1)^2*phi1 - h(1)^4*phi2"), ("g", "g(1)*phi1"), ("h", "h(1)*phi2")])
            .unwrap();
        // with g(1) = h(1) = 1
        let ones = Candidate::parse(&[("f", "-phi1 - phi2"), ("g", "phi1"), ("h", "phi2")]).unwrap();
        assert!(check_equation(&ex1(), &ones).unwrap().is_zero());
        // g(1), h(1) left as free constants also cancel
        assert!(check_equation(&ex1(), &cand).unwrap().is_zero());
        for pattern in [BlockPattern::single(4), BlockPattern::pair(4)] {
            assert!(check_pattern_identity(&ex1(), &ones, &pattern).unwrap().is_zero());
        }
    }

    #[test]
    fn two_term_family() {
        let profile = ExponentProfile::from_pairs(&[(2, 1), (1, 2)]).unwrap();
        let cand = Candidate::parse(&[("f1", "-phi"), ("f2", "phi")]).unwrap();
        assert!(check_equation(&profile, &cand).unwrap().is_zero());
        let zero = Candidate::parse(&[("f1", "0"), ("f2", "0")]).unwrap();
        assert!(check_pattern_identity(&profile, &zero, &BlockPattern::single(2)).unwrap().is_zero());
    }

    #[test]
    fn row_mismatch() {
        let cand = Candidate::parse(&[("f", "phi")]).unwrap();
        assert!(matches!(check_equation(&ex1(), &cand), Err(Error::RowCountMismatch { .. })));
        let cand = Candidate::parse(&[("f", "phi"), ("g", "phi"), ("k", "phi")]).unwrap();
        assert!(matches!(check_equation(&ex1(), &cand), Err(Error::IncompleteAssignment(_))));
    }

    #[test]
    fn classification() {
        let c = Candidate::parse(&[("f", "3*phi1 - 2*phi2"), ("g", "-(20+4*a+a^2)*phi"), ("h", "phi1 + a*phi2")]).unwrap();
        let classes: Vec<CandidateClass> = classify_candidate(&c).into_iter().map(|r| r.class).collect();
        assert_eq!(
            classes,
            [
                CandidateClass::HomCombination,
                CandidateClass::PolynomialTimesHom { hom: 1, log_degree: 2 },
                CandidateClass::Mixed
            ]
        );
    }
}
