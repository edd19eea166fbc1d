use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::multi_index::MultiIndex;
use super::rational::{render_rational, Rational};

/// Exact polynomial over `Q` in `nvars` unknown constants.
///
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UnknownPoly {
    nvars: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl UnknownPoly {
    pub fn zero(nvars: usize) -> Self {
        UnknownPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(MultiIndex::zeros(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The unknown with index `i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.terms.insert(MultiIndex::unit(nvars, i, 1), Rational::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (MultiIndex, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
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

    /// Returns the value when the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_zero().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    /// Terms in canonical (descending graded-lex) order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &MultiIndex) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub(crate) fn add_term(&mut self, m: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.len(), self.nvars);
        let entry = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &UnknownPoly) -> UnknownPoly {
        assert_eq!(self.nvars, other.nvars, "unknown spaces differ");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> UnknownPoly {
        UnknownPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &UnknownPoly) -> UnknownPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UnknownPoly) -> UnknownPoly {
        assert_eq!(self.nvars, other.nvars, "unknown spaces differ");
        let mut out = UnknownPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.add(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> UnknownPoly {
        if k.is_zero() {
            return UnknownPoly::zero(self.nvars);
        }
        UnknownPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> UnknownPoly {
        let mut result = UnknownPoly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Formal partial derivative with respect to unknown `i`.
    pub fn derivative(&self, i: usize) -> UnknownPoly {
        let mut out = UnknownPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.get(i);
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.set(i, e - 1);
            out.add_term(m2, c * Rational::from_integer(e.into()));
        }
        out
    }

    /// Re-indexes unknowns: unknown `i` becomes unknown `map[i]` of a space
    /// with `nvars` unknowns.
    pub(crate) fn remap(&self, map: &[usize], nvars: usize) -> UnknownPoly {
        let mut out = UnknownPoly::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            for (i, &x) in m.exponents().iter().enumerate() {
                e[map[i]] += x;
            }
            out.add_term(MultiIndex::from_vec(e), c.clone());
        }
        out
    }

    pub fn eval(&self, values: &[Rational]) -> Rational {
        assert_eq!(values.len(), self.nvars);
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in values.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= v.pow(e as i32);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_complex(&self, values: &[Complex64]) -> Complex64 {
        assert_eq!(values.len(), self.nvars);
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (v, &e) in values.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= v.powu(e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Renders a single monomial of unknowns, e.g. `c1_1^2*c1_2`.
    fn render_monomial(m: &MultiIndex, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{}", names[i], e)),
            }
        }
        parts.join("*")
    }

    /// Canonical text: terms in descending order, `*` and `^` explicit.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = Self::render_monomial(m, names);
            if mono.is_empty() {
                out.push_str(&render_rational(&mag));
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&render_rational(&mag));
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }

    /// Splits off a sign and reports whether the rendering is a single term.
    pub(crate) fn render_factor(&self, names: &[String]) -> (bool, String, bool) {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            let single = UnknownPoly::from_terms(self.nvars, [(m.clone(), c.abs())]);
            (c.is_negative(), single.render(names), m.is_zero())
        } else {
            (false, format!("({})", self.render(names)), false)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::rational::int;

    fn names() -> Vec<String> {
        vec!["c1".into(), "c2".into()]
    }

    #[test]
    fn arithmetic_and_rendering() {
        let c1 = UnknownPoly::var(2, 0);
        let c2 = UnknownPoly::var(2, 1);
        let s = c1.add(&c2);
        let sq = s.pow(2);
        assert_eq!(sq.render(&names()), "c1^2 + 2*c1*c2 + c2^2");
        let d = c1.sub(&c1);
        assert!(d.is_zero());
        assert_eq!(d.render(&names()), "0");
        let v = sq.eval(&[int(2), int(3)]);
        assert_eq!(v, int(25));
        assert_eq!(sq.derivative(0).render(&names()), "2*c1 + 2*c2");
    }

    #[test]
    fn constants() {
        let k = UnknownPoly::constant(2, int(-3));
        assert_eq!(k.as_constant(), Some(int(-3)));
        assert_eq!(k.render(&names()), "-3");
        assert_eq!(UnknownPoly::var(2, 0).as_constant(), None);
    }
}
