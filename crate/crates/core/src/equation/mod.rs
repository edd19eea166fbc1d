//! Equation model: the surface DSL, exponent profiles and degree splitting.
//!
//! An equation is a list of summands `s·f^q(x^p)`. Exact analysis runs on an
//! [`ExponentProfile`], the validated list of `(p, q)` rows sharing one
//! degree `N = p·q`.

pub(crate) mod parser;
mod scalar;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Rational;

pub use parser::{parse_equation, print_equation};
pub use scalar::Scalar;

/// One summand `scalar · name^q(x^p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationTerm {
    pub name: String,
    pub q: u32,
    pub p: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar: Option<Scalar>,
}

impl EquationTerm {
    pub fn new(name: impl Into<String>, p: u32, q: u32) -> Self {
        EquationTerm {
            name: name.into(),
            q,
            p,
            scalar: None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.p * self.q
    }
}

/// A row of a profile: the unknown `name` enters as `weight · name^q(x^p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileRow {
    pub name: String,
    pub p: u32,
    pub q: u32,
    #[serde(serialize_with = "serialize_rational")]
    pub weight: Rational,
}

fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::expr::render_rational(r))
}

/// Rows satisfying condition (C): distinct `p`, distinct `q`, common
/// product `N > 1`. Rows are kept sorted by ascending `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentProfile {
    rows: Vec<ProfileRow>,
    n: u32,
}

impl ExponentProfile {
    /// Builds a profile from `(p, q)` pairs, naming the unknowns `f1, f2, …`
    /// in input order.
    pub fn from_pairs(pairs: &[(u32, u32)]) -> Result<Self> {
        let rows = pairs
            .iter()
            .enumerate()
            .map(|(i, &(p, q))| ProfileRow {
                name: format!("f{}", i + 1),
                p,
                q,
                weight: Rational::from_integer(1.into()),
            })
            .collect();
        Self::from_rows(rows)
    }

    /// Parses `[(p,q), (p,q), …]`.
    pub fn parse_pairs(text: &str) -> Result<Vec<(u32, u32)>> {
        let bad = |m: &str| Error::Syntax {
            line: 1,
            column: 1,
            message: format!("{m} in profile '{text}', expected [(p,q), ...]"),
        };
        let body = text
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| bad("missing brackets"))?;
        let mut pairs = Vec::new();
        let mut rest = body.trim();
        while !rest.is_empty() {
            let inner_end = rest.find(')').ok_or_else(|| bad("unclosed pair"))?;
            let inner = rest[..inner_end]
                .trim()
                .strip_prefix('(')
                .ok_or_else(|| bad("missing '('"))?;
            let (p, q) = inner.split_once(',').ok_or_else(|| bad("pair without ','"))?;
            let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad("non-numeric exponent"));
            pairs.push((num(p)?, num(q)?));
            rest = rest[inner_end + 1..].trim_start();
            if let Some(r) = rest.strip_prefix(',') {
                rest = r.trim_start();
                if rest.is_empty() {
                    return Err(bad("trailing ','"));
                }
            } else if !rest.is_empty() {
                return Err(bad("missing ','"));
            }
        }
        Ok(pairs)
    }

    /// Builds a profile from parsed terms. Scalars must be real rationals.
    pub fn from_terms(terms: &[EquationTerm]) -> Result<Self> {
        let mut rows = Vec::with_capacity(terms.len());
        for t in terms {
            let weight = match &t.scalar {
                None => Rational::from_integer(1.into()),
                Some(s) if s.is_real() => s.re.clone(),
                Some(s) => {
                    return Err(Error::Unsupported(format!(
                        "non-real scalar {s} on {} in exact analysis",
                        t.name
                    )))
                }
            };
            rows.push(ProfileRow {
                name: t.name.clone(),
                p: t.p,
                q: t.q,
                weight,
            });
        }
        Self::from_rows(rows)
    }

    pub fn from_rows(mut rows: Vec<ProfileRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidProfile("no rows".into()));
        }
        let pairs: Vec<(u32, u32)> = rows.iter().map(|r| (r.p, r.q)).collect();
        let report = check_condition_c(&pairs);
        if !report.valid {
            return Err(Error::InvalidProfile(report.violations.join("; ")));
        }
        for (i, r) in rows.iter().enumerate() {
            if rows[..i].iter().any(|o| o.name == r.name) {
                return Err(Error::InvalidProfile(format!("repeated function name {}", r.name)));
            }
        }
        rows.sort_by_key(|r| r.q);
        Ok(ExponentProfile {
            rows,
            n: report.n.expect("valid report carries N"),
        })
    }

    pub fn rows(&self) -> &[ProfileRow] {
        &self.rows
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pairs(&self) -> Vec<(u32, u32)> {
        self.rows.iter().map(|r| (r.p, r.q)).collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.rows.iter().map(|r| r.name.clone()).collect()
    }

    pub fn to_terms(&self) -> Vec<EquationTerm> {
        self.rows
            .iter()
            .map(|r| EquationTerm {
                name: r.name.clone(),
                q: r.q,
                p: r.p,
                scalar: (r.weight != Rational::from_integer(1.into())).then(|| Scalar::real(r.weight.clone())),
            })
            .collect()
    }
}

impl fmt::Display for ExponentProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rows.iter().map(|r| format!("({},{})", r.p, r.q)).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Outcome of checking condition (C) on a list of `(p, q)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub distinct_p: bool,
    pub distinct_q: bool,
    pub common_product: bool,
    /// The common product when there is one.
    pub n: Option<u32>,
    pub valid: bool,
    pub violations: Vec<String>,
}

fn repeated(values: &[u32]) -> Vec<u32> {
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &v in values {
        *counts.entry(v).or_default() += 1;
    }
    counts.into_iter().filter(|&(_, c)| c > 1).map(|(v, _)| v).collect()
}

pub fn check_condition_c(rows: &[(u32, u32)]) -> ValidationReport {
    let ps: Vec<u32> = rows.iter().map(|r| r.0).collect();
    let qs: Vec<u32> = rows.iter().map(|r| r.1).collect();
    let rep_p = repeated(&ps);
    let rep_q = repeated(&qs);
    let mut products: Vec<u32> = rows.iter().map(|&(p, q)| p * q).collect();
    products.sort_unstable();
    products.dedup();

    let mut violations = Vec::new();
    if rows.iter().any(|&(p, q)| p == 0 || q == 0) {
        violations.push("exponents must be positive".to_string());
    }
    if !rep_p.is_empty() {
        violations.push(format!("repeated p: {rep_p:?}"));
    }
    if !rep_q.is_empty() {
        violations.push(format!("repeated q: {rep_q:?}"));
    }
    let common_product = products.len() == 1;
    let n = common_product.then(|| products[0]);
    if !common_product {
        violations.push(format!("products differ: {products:?}"));
    } else if products[0] <= 1 {
        violations.push("common product must exceed 1".to_string());
    }
    ValidationReport {
        distinct_p: rep_p.is_empty(),
        distinct_q: rep_q.is_empty(),
        common_product,
        n,
        valid: violations.is_empty() && !rows.is_empty(),
        violations,
    }
}

/// A homogeneous part of an equation, all summands of degree `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeGroup {
    pub n: u32,
    pub terms: Vec<EquationTerm>,
    /// Set for `N = 1`: the group is `f(x)` alone and is not analyzed.
    pub degenerate: bool,
}

/// Groups summands by `p·q`, ascending. Substituting `r·x` for rational `r`
/// turns the equation into a polynomial in `r`, so each homogeneous part
/// vanishes on its own.
pub fn degree_split(terms: &[EquationTerm]) -> Vec<DegreeGroup> {
    let mut groups: BTreeMap<u32, Vec<EquationTerm>> = BTreeMap::new();
    for t in terms {
        groups.entry(t.degree()).or_default().push(t.clone());
    }
    groups
        .into_iter()
        .map(|(n, terms)| DegreeGroup {
            n,
            terms,
            degenerate: n == 1,
        })
        .collect()
}

/// True when every `q` is even: real-valued additive solutions are then
/// identically zero, each summand being a square.
pub fn real_even_note(profile: &ExponentProfile) -> bool {
    profile.rows().iter().all(|r| r.q % 2 == 0)
}
