use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::One;

use super::multi_index::MultiIndex;
use super::rational::{int, Rational};
use super::symbol::{SymbolId, SymbolKind, Universe};
use super::unknown::UnknownPoly;
use crate::error::{Error, Result};

/// Sparse polynomial over the formal symbols of a [`Universe`], with
/// [`UnknownPoly`] coefficients.
///
/// Monomials are exponent vectors indexed by symbol position. Zero
/// coefficients are never stored; iteration is in descending graded-lex
/// order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymPoly {
    universe: Arc<Universe>,
    terms: BTreeMap<MultiIndex, UnknownPoly>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(p: &SymPoly, q: &SymPoly, op: ArithOp) -> Result<SymPoly> {
    match op {
        ArithOp::Add => p.add(q),
        ArithOp::Sub => p.sub(q),
        ArithOp::Mul => p.mul(q),
    }
}

impl SymPoly {
    pub fn zero(universe: &Arc<Universe>) -> Self {
        SymPoly {
            universe: universe.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(universe: &Arc<Universe>, c: Rational) -> Self {
        Self::from_coefficient(universe, UnknownPoly::constant(universe.unknowns().len(), c))
    }

    pub fn one(universe: &Arc<Universe>) -> Self {
        Self::constant(universe, Rational::one())
    }

    pub fn from_coefficient(universe: &Arc<Universe>, c: UnknownPoly) -> Self {
        let mut p = Self::zero(universe);
        p.add_term(MultiIndex::zeros(universe.symbols().len()), c);
        p
    }

    pub fn symbol(universe: &Arc<Universe>, s: SymbolId) -> Result<Self> {
        let pos = universe.symbol_position(&s).ok_or(Error::UniverseMismatch)?;
        let mut p = Self::zero(universe);
        p.add_term(
            MultiIndex::unit(universe.symbols().len(), pos, 1),
            UnknownPoly::one(universe.unknowns().len()),
        );
        Ok(p)
    }

    pub fn unknown(universe: &Arc<Universe>, name: &str) -> Result<Self> {
        let pos = universe.unknown_position(name).ok_or(Error::UniverseMismatch)?;
        Ok(Self::from_coefficient(
            universe,
            UnknownPoly::var(universe.unknowns().len(), pos),
        ))
    }

    pub fn from_terms(
        universe: &Arc<Universe>,
        terms: impl IntoIterator<Item = (MultiIndex, UnknownPoly)>,
    ) -> Result<Self> {
        let mut p = Self::zero(universe);
        for (m, c) in terms {
            if m.len() != universe.symbols().len() || c.nvars() != universe.unknowns().len() {
                return Err(Error::UniverseMismatch);
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (descending graded-lex) order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &UnknownPoly)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &MultiIndex) -> UnknownPoly {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| UnknownPoly::zero(self.universe.unknowns().len()))
    }

    /// The constant term when the polynomial has no symbol occurrences.
    pub fn as_coefficient(&self) -> Option<UnknownPoly> {
        match self.terms.len() {
            0 => Some(UnknownPoly::zero(self.universe.unknowns().len())),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_zero().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, m: MultiIndex, c: UnknownPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn same_universe(&self, other: &SymPoly) -> Result<()> {
        if Arc::ptr_eq(&self.universe, &other.universe) || self.universe == other.universe {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    pub fn add(&self, other: &SymPoly) -> Result<SymPoly> {
        self.same_universe(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SymPoly) -> Result<SymPoly> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &SymPoly) -> Result<SymPoly> {
        self.same_universe(other)?;
        let mut out = SymPoly::zero(&self.universe);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.add(mb), ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> SymPoly {
        SymPoly {
            universe: self.universe.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> SymPoly {
        let mut out = SymPoly::zero(&self.universe);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.scale(k));
        }
        out
    }

    pub fn scale_by(&self, k: &UnknownPoly) -> SymPoly {
        let mut out = SymPoly::zero(&self.universe);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.mul(k));
        }
        out
    }

    /// Exact `e`-th power by repeated squaring; `p^0 = 1`.
    pub fn pow(&self, e: u32) -> SymPoly {
        let mut result = SymPoly::one(&self.universe);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same universe");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same universe");
            }
        }
        result
    }

    /// Rewrites `p(v)` into `p(v^k)`: `phiJ(v)^e -> phiJ(v)^{k·e}` and
    /// `aR(v)^e -> k^e·aR(v)^e`. Symbols on other base variables are
    /// untouched.
    pub fn substitute_power(&self, base: u32, k: u32) -> SymPoly {
        let symbols = self.universe.symbols();
        let kq = int(k as i64);
        let mut out = SymPoly::zero(&self.universe);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let mut log_degree = 0u32;
            for (pos, s) in symbols.iter().enumerate() {
                if s.base != base {
                    continue;
                }
                let e = m.get(pos);
                match s.kind {
                    SymbolKind::Hom => m2.set(pos, e * k),
                    SymbolKind::LogDeriv => log_degree += e,
                }
            }
            out.add_term(m2, c.scale(&kq.pow(log_degree as i32)));
        }
        out
    }

    /// Evaluates every symbol on `base` at the unit: `phiJ(1) = 1`,
    /// `aR(1) = 0`.
    pub fn eval_at_one(&self, base: u32) -> SymPoly {
        let symbols = self.universe.symbols();
        let mut out = SymPoly::zero(&self.universe);
        'terms: for (m, c) in &self.terms {
            let mut m2 = m.clone();
            for (pos, s) in symbols.iter().enumerate() {
                if s.base != base || m.get(pos) == 0 {
                    continue;
                }
                match s.kind {
                    SymbolKind::Hom => m2.set(pos, 0),
                    SymbolKind::LogDeriv => continue 'terms,
                }
            }
            out.add_term(m2, c.clone());
        }
        out
    }

    /// Rewrites `p(v)` into `p(Π w^e)` for the product of base variables
    /// given by `factors` (pairs of base variable and exponent), computing
    /// in `target`, which must contain `self`'s universe and every
    /// rewritten symbol.
    ///
    /// `phiJ(v) -> Π phiJ(w)^e` and `aR(v) -> Σ e·aR(w)`. An empty product
    /// is the unit and agrees with [`SymPoly::eval_at_one`].
    pub fn substitute_monomial(&self, base: u32, factors: &[(u32, u32)], target: &Arc<Universe>) -> Result<SymPoly> {
        let lifted = self.lift(target)?;
        let symbols = target.symbols();
        let mut images: Vec<Option<SymPoly>> = Vec::with_capacity(symbols.len());
        for s in symbols {
            if s.base != base {
                images.push(None);
                continue;
            }
            let img = match s.kind {
                SymbolKind::Hom => {
                    let mut acc = SymPoly::one(target);
                    for &(w, e) in factors {
                        acc = acc.mul(&SymPoly::symbol(target, s.with_base(w))?.pow(e))?;
                    }
                    acc
                }
                SymbolKind::LogDeriv => {
                    let mut acc = SymPoly::zero(target);
                    for &(w, e) in factors {
                        acc = acc.add(&SymPoly::symbol(target, s.with_base(w))?.scale(&int(e as i64)))?;
                    }
                    acc
                }
            };
            images.push(Some(img));
        }
        let mut out = SymPoly::zero(target);
        for (m, c) in &lifted.terms {
            let mut rest = m.clone();
            let mut acc = SymPoly::from_coefficient(target, c.clone());
            for (pos, img) in images.iter().enumerate() {
                let e = m.get(pos);
                if let (Some(img), true) = (img, e > 0) {
                    rest.set(pos, 0);
                    acc = acc.mul(&img.pow(e))?;
                }
            }
            let mono = SymPoly::from_terms(target, [(rest, UnknownPoly::one(target.unknowns().len()))])?;
            out = out.add(&acc.mul(&mono)?)?;
        }
        Ok(out)
    }

    /// Re-expresses the polynomial in a universe containing this one.
    pub fn lift(&self, target: &Arc<Universe>) -> Result<SymPoly> {
        if Arc::ptr_eq(&self.universe, target) || *self.universe == **target {
            return Ok(SymPoly {
                universe: target.clone(),
                terms: self.terms.clone(),
            });
        }
        if !self.universe.is_subset_of(target) {
            return Err(Error::UniverseMismatch);
        }
        let sym_map: Vec<usize> = self
            .universe
            .symbols()
            .iter()
            .map(|s| target.symbol_position(s).unwrap())
            .collect();
        let unk_map: Vec<usize> = self
            .universe
            .unknowns()
            .iter()
            .map(|u| target.unknown_position(u).unwrap())
            .collect();
        let nsym = target.symbols().len();
        let nunk = target.unknowns().len();
        let mut out = SymPoly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; nsym];
            for (i, &x) in m.exponents().iter().enumerate() {
                e[sym_map[i]] = x;
            }
            out.add_term(MultiIndex::from_vec(e), c.remap(&unk_map, nunk));
        }
        Ok(out)
    }

    /// One `(monomial, coefficient)` pair per stored term, canonical order.
    pub fn collect_coefficients(&self) -> Vec<(MultiIndex, UnknownPoly)> {
        self.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
    }

    /// Highest total exponent of symbols of the given kind over all terms.
    pub fn degree_in_kind(&self, kind: SymbolKind) -> u32 {
        let symbols = self.universe.symbols();
        self.terms
            .keys()
            .map(|m| {
                symbols
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.kind == kind)
                    .map(|(i, _)| m.get(i))
                    .sum::<u32>()
            })
            .max()
            .unwrap_or(0)
    }

    /// Renders a monomial, e.g. `phi1(x)^4*a1(x)^2`.
    pub fn render_monomial(&self, m: &MultiIndex) -> String {
        let mut parts = Vec::new();
        for (s, &e) in self.universe.symbols().iter().zip(m.exponents()) {
            match e {
                0 => {}
                1 => parts.push(s.to_string()),
                _ => parts.push(format!("{s}^{e}")),
            }
        }
        parts.join("*")
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.universe.unknowns();
        for (k, (m, c)) in self.terms().enumerate() {
            let (negative, coeff, is_number) = c.render_factor(names);
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            let mono = self.render_monomial(m);
            if mono.is_empty() {
                write!(f, "{coeff}")?;
            } else if is_number && coeff == "1" {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{coeff}*{mono}")?;
            }
        }
        Ok(())
    }
}
