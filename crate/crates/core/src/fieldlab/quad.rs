use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::expr::{render_rational, Rational};
use crate::{Error, Result};

/// `a + b·√d` in `Q(√d)`, `d ≥ 2` square-free.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExtElem {
    pub a: Rational,
    pub b: Rational,
    d: i64,
}

fn square_free(d: i64) -> bool {
    let mut k = 2i64;
    while k * k <= d {
        if d % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Checks that `d` defines a real quadratic field.
pub fn check_radicand(d: i64) -> Result<()> {
    if d < 2 || !square_free(d) {
        return Err(Error::Binding(format!("{d} is not a square-free integer >= 2")));
    }
    Ok(())
}

impl QuadExtElem {
    pub fn new(a: Rational, b: Rational, d: i64) -> Result<Self> {
        check_radicand(d)?;
        Ok(QuadExtElem { a, b, d })
    }

    pub fn rational(a: Rational, d: i64) -> Result<Self> {
        Self::new(a, Rational::zero(), d)
    }

    /// `√d` itself.
    pub fn sqrt(d: i64) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(self.d, other.d, "elements of different quadratic fields");
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_field(o);
        QuadExtElem {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            d: self.d,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        QuadExtElem {
            a: -&self.a,
            b: -&self.b,
            d: self.d,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_field(o);
        let d = Rational::from_integer(self.d.into());
        QuadExtElem {
            a: &self.a * &o.a + &self.b * &o.b * d,
            b: &self.a * &o.b + &self.b * &o.a,
            d: self.d,
        }
    }

    /// `a² − d·b²`, the product with the conjugate.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(self.d.into()) * &self.b * &self.b
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        let n = self.norm();
        Ok(QuadExtElem {
            a: &self.a / &n,
            b: -&self.b / &n,
            d: self.d,
        })
    }

    pub fn conj(&self) -> Self {
        QuadExtElem {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d,
        }
    }
}

/// The identity embedding or the conjugation `√d ↦ −√d`.
pub fn embed_quad(e: &QuadExtElem, conj: bool) -> QuadExtElem {
    if conj {
        e.conj()
    } else {
        e.clone()
    }
}

impl fmt::Display for QuadExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = format!("sqrt({})", self.d);
        let b_abs = self.b.abs();
        let b_text = if b_abs.is_one() {
            root
        } else {
            format!("{}*{root}", render_rational(&b_abs))
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", render_rational(&self.a)),
            (true, false) => write!(f, "{}{b_text}", if self.b.is_negative() { "-" } else { "" }),
            (false, false) => write!(
                f,
                "{} {} {b_text}",
                render_rational(&self.a),
                if self.b.is_negative() { "-" } else { "+" }
            ),
        }
    }
}
