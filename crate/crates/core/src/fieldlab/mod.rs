//! Concrete exact fields used as a semantic oracle: `Q(√d)` with its two
//! embeddings and `Q(t)` with the derivation `d/dt`.

mod quad;
mod ratfunc;

pub use quad::{check_radicand, embed_quad, QuadExtElem};
pub use ratfunc::{derive_ratfunc, QPoly, RatFunc};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::equation::ExponentProfile;
use crate::expr::{Rational, SymPoly, SymbolId, SymbolKind};
use crate::verify::Candidate;
use crate::{Error, Result};

/// Largest numerator or denominator degree allowed during evaluation in `Q(t)`.
pub const RATFUNC_DEGREE_CAP: usize = 24;
pub const DEFAULT_SAMPLES: usize = 32;
pub const DEFAULT_SEED: u64 = 42;

/// How a homomorphism symbol acts on field elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HomBinding {
    Identity,
    /// Conjugation of `Q(√d)`.
    Conjugate(i64),
}

/// A field the oracle can evaluate candidates in.
pub trait OracleField: Clone + PartialEq + fmt::Display {
    fn zero_like(&self) -> Self;
    fn from_rational_like(&self, r: Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Result<Self>;
    fn apply_hom(&self, b: HomBinding) -> Result<Self>;
    /// `d(v)/v` for the field's derivation.
    fn log_derivative(&self) -> Result<Self>;
    /// Guards against coefficient blow-up.
    fn check_size(&self) -> Result<()> {
        Ok(())
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = self.from_rational_like(Rational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl OracleField for QuadExtElem {
    fn zero_like(&self) -> Self {
        QuadExtElem::rational(Rational::zero(), self.d()).expect("valid field")
    }

    fn from_rational_like(&self, r: Rational) -> Self {
        QuadExtElem::rational(r, self.d()).expect("valid field")
    }

    fn is_zero(&self) -> bool {
        QuadExtElem::is_zero(self)
    }

    fn add(&self, o: &Self) -> Self {
        QuadExtElem::add(self, o)
    }

    fn sub(&self, o: &Self) -> Self {
        QuadExtElem::sub(self, o)
    }

    fn mul(&self, o: &Self) -> Self {
        QuadExtElem::mul(self, o)
    }

    fn inv(&self) -> Result<Self> {
        QuadExtElem::inv(self)
    }

    fn apply_hom(&self, b: HomBinding) -> Result<Self> {
        match b {
            HomBinding::Identity => Ok(self.clone()),
            HomBinding::Conjugate(d) if d == self.d() => Ok(embed_quad(self, true)),
            HomBinding::Conjugate(d) => Err(Error::Binding(format!(
                "conj({d}) does not act on Q(sqrt({}))",
                self.d()
            ))),
        }
    }

    fn log_derivative(&self) -> Result<Self> {
        Err(Error::Binding("log-derivative symbols need the field Q(t)".into()))
    }
}

impl OracleField for RatFunc {
    fn zero_like(&self) -> Self {
        RatFunc::zero()
    }

    fn from_rational_like(&self, r: Rational) -> Self {
        RatFunc::constant(r)
    }

    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }

    fn add(&self, o: &Self) -> Self {
        RatFunc::add(self, o)
    }

    fn sub(&self, o: &Self) -> Self {
        RatFunc::sub(self, o)
    }

    fn mul(&self, o: &Self) -> Self {
        RatFunc::mul(self, o)
    }

    fn inv(&self) -> Result<Self> {
        RatFunc::inv(self)
    }

    fn apply_hom(&self, b: HomBinding) -> Result<Self> {
        match b {
            HomBinding::Identity => Ok(self.clone()),
            HomBinding::Conjugate(d) => Err(Error::Binding(format!("conj({d}) does not act on Q(t)"))),
        }
    }

    fn log_derivative(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("log-derivative at 0".into()));
        }
        derive_ratfunc(self).div(self)
    }

    fn check_size(&self) -> Result<()> {
        if self.degree() > RATFUNC_DEGREE_CAP {
            return Err(Error::Resource(format!(
                "rational function of degree {} exceeds the cap {RATFUNC_DEGREE_CAP}",
                self.degree()
            )));
        }
        Ok(())
    }
}

/// Which concrete field the bindings select.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FieldChoice {
    Quadratic(i64),
    RationalFunctions,
}

/// Interpretation of symbols and unknown constants. Unbound homomorphisms
/// act as the identity; unbound log-derivatives use `d/dt`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Bindings {
    pub homs: BTreeMap<u32, HomBinding>,
    #[serde(skip)]
    pub constants: BTreeMap<String, Rational>,
}

fn parse_symbol_key(key: &str) -> Option<(SymbolKind, u32)> {
    let idx = |rest: &str| {
        if rest.is_empty() {
            Some(1)
        } else {
            rest.parse().ok().filter(|&i: &u32| i > 0)
        }
    };
    if let Some(rest) = key.strip_prefix("phi") {
        return idx(rest).map(|i| (SymbolKind::Hom, i));
    }
    key.strip_prefix('a').and_then(idx).map(|i| (SymbolKind::LogDeriv, i))
}

fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim();
    match t.split_once('/') {
        Some((n, d)) => {
            let d: num_bigint::BigInt = d.trim().parse().ok()?;
            let n: num_bigint::BigInt = n.trim().parse().ok()?;
            (!d.is_zero()).then(|| Rational::new(n, d))
        }
        None => Some(Rational::from_integer(t.parse().ok()?)),
    }
}

impl Bindings {
    /// Parses `{"phi1": "id" | "conj(d)", "a1": "dlog(t)", "g(1)": "3/2"}`.
    pub fn parse_map(map: &BTreeMap<String, String>) -> Result<Bindings> {
        let mut b = Bindings::default();
        for (key, value) in map {
            let v = value.trim();
            match parse_symbol_key(key) {
                Some((SymbolKind::Hom, i)) => {
                    let h = if v == "id" {
                        HomBinding::Identity
                    } else if let Some(d) = v.strip_prefix("conj(").and_then(|r| r.strip_suffix(')')) {
                        let d: i64 = d
                            .trim()
                            .parse()
                            .map_err(|_| Error::Binding(format!("bad radicand in '{v}'")))?;
                        check_radicand(d)?;
                        HomBinding::Conjugate(d)
                    } else {
                        return Err(Error::Binding(format!("'{key}' must be bound to id or conj(d), not '{v}'")));
                    };
                    b.homs.insert(i, h);
                }
                Some((SymbolKind::LogDeriv, _)) => {
                    if v != "dlog(t)" {
                        return Err(Error::Binding(format!("'{key}' must be bound to dlog(t), not '{v}'")));
                    }
                }
                None => {
                    let r = parse_rational(v)
                        .ok_or_else(|| Error::Binding(format!("constant '{key}' needs a rational value, not '{v}'")))?;
                    b.constants.insert(key.clone(), r);
                }
            }
        }
        b.field()?;
        Ok(b)
    }

    pub fn hom(&self, index: u32) -> HomBinding {
        self.homs.get(&index).copied().unwrap_or(HomBinding::Identity)
    }

    /// `Q(√d)` when some homomorphism is a conjugation, otherwise `Q(t)`.
    pub fn field(&self) -> Result<FieldChoice> {
        let mut ds = self.homs.values().filter_map(|h| match h {
            HomBinding::Conjugate(d) => Some(*d),
            HomBinding::Identity => None,
        });
        match ds.next() {
            None => Ok(FieldChoice::RationalFunctions),
            Some(d) if ds.all(|e| e == d) => Ok(FieldChoice::Quadratic(d)),
            Some(_) => Err(Error::Binding("conjugations of different fields".into())),
        }
    }
}

/// Value of a symbolic polynomial at `point` (every symbol on `x`).
pub fn eval_poly<F: OracleField>(poly: &SymPoly, bindings: &Bindings, point: &F) -> Result<F> {
    let u = poly.universe();
    let mut symbol_values: Vec<Option<F>> = vec![None; u.symbols().len()];
    let value_of = |s: &SymbolId| -> Result<F> {
        if s.base != 1 {
            return Err(Error::Binding(format!("{s} is not a function of x")));
        }
        match s.kind {
            SymbolKind::Hom => point.apply_hom(bindings.hom(s.index)),
            SymbolKind::LogDeriv => {
                if point.is_zero() {
                    return Err(Error::Domain(format!("{s} is undefined at 0")));
                }
                point.log_derivative()
            }
        }
    };
    let constants: Vec<Option<&Rational>> = u.unknowns().iter().map(|n| bindings.constants.get(n)).collect();
    let mut acc = point.zero_like();
    for (m, c) in poly.terms() {
        let mut coeff = Rational::zero();
        for (cm, cv) in c.terms() {
            let mut t = cv.clone();
            for (i, &e) in cm.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = constants[i]
                    .ok_or_else(|| Error::Binding(format!("no value for the constant '{}'", u.unknowns()[i])))?;
                t *= num_traits::pow(v.clone(), e as usize);
            }
            coeff += t;
        }
        let mut term = point.from_rational_like(coeff);
        for (pos, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if symbol_values[pos].is_none() {
                symbol_values[pos] = Some(value_of(&u.symbols()[pos])?);
            }
            term = term.mul(&symbol_values[pos].as_ref().unwrap().pow(e));
            term.check_size()?;
        }
        acc = acc.add(&term);
        acc.check_size()?;
    }
    Ok(acc)
}

/// Value of the named row of a candidate at `point`.
pub fn eval_candidate<F: OracleField>(cand: &Candidate, row: &str, bindings: &Bindings, point: &F) -> Result<F> {
    let poly = cand
        .get(row)
        .ok_or_else(|| Error::IncompleteAssignment(format!("no candidate for '{row}'")))?;
    eval_poly(poly, bindings, point)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdditivityWitness {
    pub u: String,
    pub v: String,
    /// `f(u+v) − f(u) − f(v)`.
    pub defect: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdditivityVerdict {
    pub holds: bool,
    pub samples: usize,
    pub witness: Option<AdditivityWitness>,
}

/// Tests `f(u+v) = f(u) + f(v)` exactly on the given pairs.
pub fn additivity_oracle<F: OracleField>(poly: &SymPoly, bindings: &Bindings, pairs: &[(F, F)]) -> Result<AdditivityVerdict> {
    for (u, v) in pairs {
        let defect = eval_poly(poly, bindings, &u.add(v))?
            .sub(&eval_poly(poly, bindings, u)?)
            .sub(&eval_poly(poly, bindings, v)?);
        if !defect.is_zero() {
            return Ok(AdditivityVerdict {
                holds: false,
                samples: pairs.len(),
                witness: Some(AdditivityWitness {
                    u: u.to_string(),
                    v: v.to_string(),
                    defect: defect.to_string(),
                }),
            });
        }
    }
    Ok(AdditivityVerdict {
        holds: true,
        samples: pairs.len(),
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationWitness {
    pub point: String,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationVerdict {
    pub holds: bool,
    pub samples: usize,
    pub witness: Option<EquationWitness>,
}

/// Tests `Σ wᵢ·candᵢ(point^{pᵢ})^{qᵢ} = 0` exactly at every point.
pub fn equation_oracle<F: OracleField>(
    profile: &ExponentProfile,
    cand: &Candidate,
    bindings: &Bindings,
    points: &[F],
) -> Result<EquationVerdict> {
    if cand.len() != profile.len() {
        return Err(Error::RowCountMismatch {
            expected: profile.len(),
            found: cand.len(),
        });
    }
    for point in points {
        let mut total = point.zero_like();
        for row in profile.rows() {
            let arg = point.pow(row.p);
            arg.check_size()?;
            let value = eval_candidate(cand, &row.name, bindings, &arg)?.pow(row.q);
            value.check_size()?;
            total = total.add(&value.mul(&point.from_rational_like(row.weight.clone())));
        }
        if !total.is_zero() {
            return Ok(EquationVerdict {
                holds: false,
                samples: points.len(),
                witness: Some(EquationWitness {
                    point: point.to_string(),
                    residual: total.to_string(),
                }),
            });
        }
    }
    Ok(EquationVerdict {
        holds: true,
        samples: points.len(),
        witness: None,
    })
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into())
}

/// Nonzero elements `r(t)` with numerator degree ≤ 2 and denominator degree ≤ 1.
pub fn random_ratfuncs(seed: u64, count: usize) -> Vec<RatFunc> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let num = QPoly::new((0..=rng.gen_range(1..=2)).map(|_| small_rational(&mut rng)).collect());
        let den = if rng.gen_bool(0.5) {
            QPoly::new(vec![small_rational(&mut rng), Rational::one()])
        } else {
            QPoly::constant(Rational::one())
        };
        if num.is_zero() || den.is_zero() {
            continue;
        }
        out.push(RatFunc::new(num, den).expect("nonzero denominator"));
    }
    out
}

/// Nonzero elements `a + b√d` with small rational parts.
pub fn random_quads(d: i64, seed: u64, count: usize) -> Result<Vec<QuadExtElem>> {
    check_radicand(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let e = QuadExtElem::new(small_rational(&mut rng), small_rational(&mut rng), d)?;
        if !e.is_zero() {
            out.push(e);
        }
    }
    Ok(out)
}

/// Pairs `(u, v)` with `u`, `v` and `u + v` all nonzero.
pub fn nonzero_pairs<F: OracleField>(points: &[F]) -> Vec<(F, F)> {
    points
        .iter()
        .zip(points.iter().cycle().skip(1))
        .filter(|(u, v)| !u.add(v).is_zero())
        .map(|(u, v)| (u.clone(), v.clone()))
        .collect()
}
