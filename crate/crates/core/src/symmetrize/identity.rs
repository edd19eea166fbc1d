use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::pattern::TOKEN_NAMES;
use crate::expr::{render_rational, Rational};

/// A product `x^a y^b z^c` used as an argument of an unknown function.
pub type ArgMonomial = [u32; 3];

pub(crate) fn render_arg(m: &ArgMonomial) -> String {
    let parts: Vec<String> = TOKEN_NAMES
        .iter()
        .zip(m)
        .filter(|(_, &e)| e > 0)
        .map(|(n, &e)| if e == 1 { n.to_string() } else { format!("{n}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// One product `f_row(1)^ones · Π f_row(arg)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdentityKey {
    pub row: usize,
    pub ones: u32,
    /// Non-unit arguments, sorted descending.
    pub args: Vec<ArgMonomial>,
}

impl IdentityKey {
    pub fn new(row: usize, ones: u32, mut args: Vec<ArgMonomial>) -> Self {
        args.sort_unstable_by(|a, b| b.cmp(a));
        IdentityKey { row, ones, args }
    }

    fn render(&self, name: &str) -> String {
        let mut parts = Vec::new();
        match self.ones {
            0 => {}
            1 => parts.push(format!("{name}(1)")),
            k => parts.push(format!("{name}(1)^{k}")),
        }
        let mut i = 0;
        while i < self.args.len() {
            let mut j = i;
            while j < self.args.len() && self.args[j] == self.args[i] {
                j += 1;
            }
            let base = format!("{name}({})", render_arg(&self.args[i]));
            parts.push(if j - i == 1 { base } else { format!("{base}^{}", j - i) });
            i = j;
        }
        parts.join("*")
    }
}

impl Ord for IdentityKey {
    /// Rows ascending; within a row, more unit factors first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.row
            .cmp(&other.row)
            .then_with(|| other.ones.cmp(&self.ones))
            .then_with(|| other.args.cmp(&self.args))
    }
}

impl PartialOrd for IdentityKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A formal identity `Σ coeff · f_row(1)^ones · Π f_row(arg) = 0` with exact
/// rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractIdentity {
    names: Vec<String>,
    terms: BTreeMap<IdentityKey, Rational>,
}

impl AbstractIdentity {
    pub fn zero(names: Vec<String>) -> Self {
        AbstractIdentity {
            names,
            terms: BTreeMap::new(),
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn add_term(&mut self, key: IdentityKey, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
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

    pub fn terms(&self) -> impl Iterator<Item = (&IdentityKey, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &IdentityKey) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `f_row(1)^ones · Π f_row(arg)`, with `args` in any order.
    pub fn coeff_of(&self, row: usize, ones: u32, args: &[ArgMonomial]) -> Rational {
        self.coefficient(&IdentityKey::new(row, ones, args.to_vec()))
    }

    pub fn scale(&self, k: &Rational) -> AbstractIdentity {
        let mut out = AbstractIdentity::zero(self.names.clone());
        for (key, c) in &self.terms {
            out.add_term(key.clone(), c * k);
        }
        out
    }

    pub fn add(&self, other: &AbstractIdentity) -> AbstractIdentity {
        let mut out = self.clone();
        for (key, c) in &other.terms {
            out.add_term(key.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &AbstractIdentity) -> AbstractIdentity {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Rescales to coprime integer coefficients with a positive factor.
    pub fn primitive(&self) -> AbstractIdentity {
        if self.terms.is_empty() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        self.scale(&Rational::new(den_lcm, num_gcd.abs()))
    }

    /// Rewrites every argument through `map` (applied to exponent vectors
    /// over `x, y, z`).
    pub(crate) fn map_args(&self, map: impl Fn(&ArgMonomial) -> ArgMonomial) -> AbstractIdentity {
        let mut out = AbstractIdentity::zero(self.names.clone());
        for (key, c) in &self.terms {
            let args = key.args.iter().map(&map).collect();
            out.add_term(IdentityKey::new(key.row, key.ones, args), c.clone());
        }
        out
    }
}

impl fmt::Display for AbstractIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 = 0");
        }
        for (i, (key, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let body = key.render(&self.names[key.row]);
            if mag.is_one() {
                write!(f, "{body}")?;
            } else {
                write!(f, "{}*{body}", render_rational(&mag))?;
            }
        }
        write!(f, " = 0")
    }
}

#[derive(Serialize)]
struct TermView {
    function: String,
    unit_power: u32,
    args: Vec<String>,
    coefficient: String,
}

impl Serialize for AbstractIdentity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermView> = self
            .terms
            .iter()
            .map(|(k, c)| TermView {
                function: self.names[k.row].clone(),
                unit_power: k.ones,
                args: k.args.iter().map(render_arg).collect(),
                coefficient: render_rational(c),
            })
            .collect();
        let mut st = s.serialize_struct("AbstractIdentity", 2)?;
        st.serialize_field("text", &self.to_string())?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}
