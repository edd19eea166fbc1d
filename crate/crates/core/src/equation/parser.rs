//! Recursive-descent parser and printer for the equation DSL.
//!
//! ```text
//! equation := ['-'] term (('+' | '-') term)* '=' '0'
//! term     := [scalar '*'] ident ['^' nat] '(' 'x' ['^' nat] ')'
//! scalar   := rational | rational 'i' | 'i' | '(' rational ('+'|'-') [rational] 'i' ')'
//! ```

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{EquationTerm, Scalar};
use crate::error::{Error, Result};
use crate::expr::Rational;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    /// Digits, with `imag` set for an adjacent trailing `i` (`2i`).
    Num { digits: String, imag: bool },
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eq,
    End,
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub(crate) tok: Tok,
    pub(crate) line: usize,
    pub(crate) column: usize,
}

pub(crate) fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Num { digits, imag } => format!("'{}{}'", digits, if *imag { "i" } else { "" }),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Eq => "'='".into(),
        Tok::End => "end of input".into(),
    }
}

pub(crate) fn lex(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, line: l0, column: c0 });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let imag = i < chars.len()
                && chars[i] == 'i'
                && !chars.get(i + 1).is_some_and(|n| n.is_alphanumeric() || *n == '_');
            if imag {
                i += 1;
            }
            col += i - start;
            out.push(Spanned {
                tok: Tok::Num { digits, imag },
                line: l0,
                column: c0,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Spanned {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l0,
                column: c0,
            });
            continue;
        }
        return Err(Error::Syntax {
            line: l0,
            column: c0,
            message: format!("unexpected character '{c}'"),
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, at: &Spanned, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: at.line,
            column: at.column,
            message: message.into(),
        }
    }

    fn error_here(&self, message: impl Into<String>) -> Error {
        self.error_at(&self.toks[self.pos], message)
    }

    fn expect(&mut self, want: Tok) -> Result<Spanned> {
        if *self.peek() == want {
            Ok(self.bump())
        } else {
            Err(self.error_here(format!("expected {}, found {}", describe(&want), describe(self.peek()))))
        }
    }

    fn nat(&mut self) -> Result<u32> {
        match self.peek().clone() {
            Tok::Num { digits, imag: false } => {
                let at = self.bump();
                match digits.parse::<u32>() {
                    Ok(v) if v >= 1 => Ok(v),
                    _ => Err(self.error_at(&at, format!("exponent must be a positive integer, found {digits}"))),
                }
            }
            other => Err(self.error_here(format!("expected positive integer, found {}", describe(&other)))),
        }
    }

    /// `digits ['/' digits]`, returning the value and whether the last
    /// literal carried the imaginary unit.
    fn rational(&mut self) -> Result<(Rational, bool)> {
        let (digits, imag) = match self.peek().clone() {
            Tok::Num { digits, imag } => {
                self.bump();
                (digits, imag)
            }
            other => return Err(self.error_here(format!("expected number, found {}", describe(&other)))),
        };
        let numer: BigInt = digits.parse().expect("lexer produced digits");
        if imag || *self.peek() != Tok::Slash {
            return Ok((Rational::from_integer(numer), imag));
        }
        let slash = self.bump();
        match self.peek().clone() {
            Tok::Num { digits, imag } => {
                self.bump();
                let denom: BigInt = digits.parse().expect("lexer produced digits");
                if denom.is_zero() {
                    return Err(self.error_at(&slash, "division by zero"));
                }
                Ok((Rational::new(numer, denom), imag))
            }
            other => Err(self.error_here(format!("expected denominator, found {}", describe(&other)))),
        }
    }

    /// A real or imaginary literal, possibly followed by a bare `i`.
    fn signed_part(&mut self) -> Result<Scalar> {
        if matches!(self.peek(), Tok::Ident(s) if s == "i") {
            self.bump();
            return Ok(Scalar {
                re: Rational::zero(),
                im: Rational::one(),
            });
        }
        let (v, imag) = self.rational()?;
        let imag = imag || {
            if matches!(self.peek(), Tok::Ident(s) if s == "i") {
                self.bump();
                true
            } else {
                false
            }
        };
        Ok(if imag {
            Scalar { re: Rational::zero(), im: v }
        } else {
            Scalar::real(v)
        })
    }

    fn scalar(&mut self) -> Result<Scalar> {
        if *self.peek() != Tok::LParen {
            return self.signed_part();
        }
        self.bump();
        let mut negate = false;
        if *self.peek() == Tok::Minus {
            self.bump();
            negate = true;
        }
        let mut value = self.signed_part()?;
        if negate {
            value = value.neg();
        }
        match self.peek() {
            Tok::Plus | Tok::Minus => {
                let minus = *self.peek() == Tok::Minus;
                self.bump();
                let mut rest = self.signed_part()?;
                if minus {
                    rest = rest.neg();
                }
                value = Scalar {
                    re: &value.re + &rest.re,
                    im: &value.im + &rest.im,
                };
            }
            _ => {}
        }
        self.expect(Tok::RParen)?;
        Ok(value)
    }

    fn starts_scalar(&self) -> bool {
        match self.peek() {
            Tok::Num { .. } | Tok::LParen => true,
            Tok::Ident(s) if s == "i" => *self.peek_at(1) == Tok::Star,
            _ => false,
        }
    }

    fn term(&mut self, sign: bool) -> Result<EquationTerm> {
        let mut scalar = None;
        if self.starts_scalar() {
            let s = self.scalar()?;
            self.expect(Tok::Star)?;
            scalar = Some(s);
        }
        let name = match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                s
            }
            other => return Err(self.error_here(format!("expected function name, found {}", describe(&other)))),
        };
        let q = if *self.peek() == Tok::Caret {
            self.bump();
            self.nat()?
        } else {
            1
        };
        self.expect(Tok::LParen)?;
        match self.peek().clone() {
            Tok::Ident(v) if v == "x" => {
                self.bump();
            }
            other => return Err(self.error_here(format!("expected 'x', found {}", describe(&other)))),
        }
        let p = if *self.peek() == Tok::Caret {
            self.bump();
            self.nat()?
        } else {
            1
        };
        self.expect(Tok::RParen)?;
        if sign {
            scalar = Some(scalar.unwrap_or_else(Scalar::one).neg());
        }
        let scalar = scalar.filter(|s| !s.is_one());
        Ok(EquationTerm { name, q, p, scalar })
    }

    fn equation(&mut self) -> Result<Vec<EquationTerm>> {
        let mut terms = Vec::new();
        let mut negative = false;
        if *self.peek() == Tok::Minus {
            self.bump();
            negative = true;
        }
        terms.push(self.term(negative)?);
        loop {
            match self.peek() {
                Tok::Plus | Tok::Minus => {
                    let op = self.bump();
                    if matches!(self.peek(), Tok::Plus | Tok::Minus | Tok::Eq | Tok::End) {
                        return Err(self.error_at(&op, format!("expected term after {}", describe(&op.tok))));
                    }
                    terms.push(self.term(op.tok == Tok::Minus)?);
                }
                Tok::Eq => break,
                other => {
                    return Err(self.error_here(format!("expected '+', '-' or '=', found {}", describe(other))));
                }
            }
        }
        self.expect(Tok::Eq)?;
        let rhs_start = self.toks[self.pos].clone();
        let is_zero = matches!(self.peek(), Tok::Num { digits, imag: false } if digits.chars().all(|c| c == '0'));
        if !is_zero || *self.peek_at(1) != Tok::End {
            return Err(Error::UnsupportedForm(format!(
                "right-hand side must be the literal 0 (line {}, column {})",
                rhs_start.line, rhs_start.column
            )));
        }
        Ok(terms)
    }
}

/// Parses `Σ terms = 0`. Omitted exponents default to 1; function names
/// must be distinct.
pub fn parse_equation(text: &str) -> Result<Vec<EquationTerm>> {
    if text.trim().is_empty() {
        return Err(Error::Syntax {
            line: 1,
            column: 1,
            message: "empty equation".into(),
        });
    }
    let mut parser = Parser { toks: lex(text)?, pos: 0 };
    let terms = parser.equation()?;
    for (i, t) in terms.iter().enumerate() {
        if terms[..i].iter().any(|o| o.name == t.name) {
            return Err(Error::UnsupportedForm(format!("function {} appears in more than one term", t.name)));
        }
    }
    Ok(terms)
}

fn print_term(t: &EquationTerm) -> String {
    let mut s = String::new();
    if let Some(sc) = &t.scalar {
        let mag = if sc.is_negative() { sc.neg() } else { sc.clone() };
        if !mag.is_one() {
            s.push_str(&mag.to_string());
            s.push('*');
        }
    }
    s.push_str(&t.name);
    if t.q != 1 {
        s.push_str(&format!("^{}", t.q));
    }
    if t.p == 1 {
        s.push_str("(x)");
    } else {
        s.push_str(&format!("(x^{})", t.p));
    }
    s
}

/// Canonical text of an equation, e.g. `f1^2(x^6) + f2^3(x^4) = 0`.
pub fn print_equation(terms: &[EquationTerm]) -> String {
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let negative = t.scalar.as_ref().is_some_and(Scalar::is_negative);
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&print_term(t));
    }
    out.push_str(" = 0");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{int, rat};

    #[test]
    fn four_term_example() {
        let terms = parse_equation("f1^2(x^6) + f2^3(x^4) + f3^4(x^3) + f4^6(x^2) = 0").unwrap();
        let pq: Vec<(u32, u32)> = terms.iter().map(|t| (t.p, t.q)).collect();
        assert_eq!(pq, vec![(6, 2), (4, 3), (3, 4), (2, 6)]);
        assert_eq!(terms[0].name, "f1");
    }

    #[test]
    fn defaults() {
        let terms = parse_equation("f(x^2) = 0").unwrap();
        assert_eq!(terms, vec![EquationTerm::new("f", 2, 1)]);
    }

    #[test]
    fn dangling_operator() {
        match parse_equation("f^2(x^6) + = 0") {
            Err(Error::Syntax { line, column, message }) => {
                assert_eq!((line, column), (1, 10));
                assert!(message.contains("'+'"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rhs_must_be_zero() {
        assert!(matches!(parse_equation("f(x^2) = 1"), Err(Error::UnsupportedForm(_))));
        assert!(matches!(parse_equation("f(x^2) = 0 + g(x)"), Err(Error::UnsupportedForm(_))));
    }

    #[test]
    fn repeated_names_rejected() {
        assert!(matches!(parse_equation("f(x^2) + f^2(x) = 0"), Err(Error::UnsupportedForm(_))));
    }

    #[test]
    fn scalars() {
        let terms = parse_equation("f^2(x^3) - g^3(x^2) = 0").unwrap();
        assert_eq!(terms[1].scalar, Some(Scalar::real(int(-1))));
        let terms = parse_equation("3/2*f(x^2) + (1-2i)*g^2(x) - 2i*h(x^2) + i*k^2(x) = 0").unwrap();
        assert_eq!(terms[0].scalar, Some(Scalar::real(rat(3, 2))));
        assert_eq!(terms[1].scalar, Some(Scalar { re: int(1), im: int(-2) }));
        assert_eq!(terms[2].scalar, Some(Scalar { re: int(0), im: int(-2) }));
        assert_eq!(terms[3].scalar, Some(Scalar { re: int(0), im: int(1) }));
        let printed = print_equation(&terms);
        assert_eq!(parse_equation(&printed).unwrap(), terms);
    }

    #[test]
    fn multiline_positions() {
        match parse_equation("f(x^2)\n + g(y) = 0") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 6)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn printing() {
        let terms = parse_equation("f(x^4)+g^2(x^2)+h^4(x)=0").unwrap();
        assert_eq!(print_equation(&terms), "f(x^4) + g^2(x^2) + h^4(x) = 0");
    }
}
