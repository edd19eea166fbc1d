//! Candidate DSL: `expr := ['-'] term (('+'|'-') term)*`, terms are products
//! and quotients of powers of atoms. Atoms are rational literals, `phiJ`,
//! `aR` (optionally applied to `x`), parenthesized expressions, and any other
//! identifier, which names an unknown constant (`g(1)` is allowed).

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::equation::parser::{describe, lex, Spanned, Tok};
use crate::expr::{Rational, SymPoly, SymbolId, Universe};
use crate::{Error, Result};

#[derive(Clone, Debug)]
enum Node {
    Num(BigInt),
    Symbol(SymbolId),
    Unknown(String),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>, usize, usize),
    Pow(Box<Node>, u32),
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_at(&self, t: &Spanned, message: String) -> Error {
        Error::Syntax {
            line: t.line,
            column: t.column,
            message,
        }
    }

    fn unexpected(&self, t: &Spanned, wanted: &str) -> Error {
        self.err_at(t, format!("expected {wanted}, found {}", describe(&t.tok)))
    }

    fn expr(&mut self) -> Result<Node> {
        let mut node = match self.peek() {
            Tok::Minus => {
                self.next();
                Node::Neg(Box::new(self.term()?))
            }
            Tok::Plus => {
                self.next();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    node = Node::Add(Box::new(node), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.next();
                    node = Node::Sub(Box::new(node), Box::new(self.term()?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut node = self.power()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.next();
                    node = Node::Mul(Box::new(node), Box::new(self.power()?));
                }
                Tok::Slash => {
                    let t = self.next();
                    node = Node::Div(Box::new(node), Box::new(self.power()?), t.line, t.column);
                }
                _ => return Ok(node),
            }
        }
    }

    fn power(&mut self) -> Result<Node> {
        if matches!(self.peek(), Tok::Minus) {
            self.next();
            return Ok(Node::Neg(Box::new(self.power()?)));
        }
        let base = self.atom()?;
        if matches!(self.peek(), Tok::Caret) {
            self.next();
            let t = self.next();
            return match &t.tok {
                Tok::Num { digits, imag: false } => {
                    let e: u32 = digits
                        .parse()
                        .map_err(|_| self.err_at(&t, format!("exponent {digits} is too large")))?;
                    Ok(Node::Pow(Box::new(base), e))
                }
                _ => Err(self.unexpected(&t, "a natural exponent")),
            };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        let t = self.next();
        match &t.tok {
            Tok::Num { imag: true, .. } => Err(Error::Unsupported(format!(
                "complex literal at {}:{}; candidates are exact over the rationals",
                t.line, t.column
            ))),
            Tok::Num { digits, .. } => Ok(Node::Num(digits.parse().expect("lexer yields digits"))),
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.next();
                if close.tok != Tok::RParen {
                    return Err(self.unexpected(&close, "')'"));
                }
                Ok(inner)
            }
            Tok::Ident(name) => self.identifier(&t, name.clone()),
            _ => Err(self.unexpected(&t, "an operand")),
        }
    }

    fn identifier(&mut self, t: &Spanned, name: String) -> Result<Node> {
        if name == "i" {
            return Err(Error::Unsupported(format!(
                "imaginary unit at {}:{}; candidates are exact over the rationals",
                t.line, t.column
            )));
        }
        let symbol = symbol_from_name(&name);
        if !matches!(self.peek(), Tok::LParen) || (symbol.is_none() && !self.applied_to_atom()) {
            return Ok(match symbol {
                Some(s) => Node::Symbol(s),
                None => Node::Unknown(name),
            });
        }
        self.next();
        let arg = self.next();
        let arg_text = match &arg.tok {
            Tok::Ident(a) => a.clone(),
            Tok::Num { digits, imag: false } => digits.clone(),
            _ => return Err(self.unexpected(&arg, "an argument")),
        };
        let close = self.next();
        if close.tok != Tok::RParen {
            return Err(self.unexpected(&close, "')'"));
        }
        match symbol {
            Some(s) if arg_text == "x" => Ok(Node::Symbol(s)),
            Some(_) => Err(self.err_at(&arg, format!("symbols take the argument x, found '{arg_text}'"))),
            None => Ok(Node::Unknown(format!("{name}({arg_text})"))),
        }
    }

    /// `name(atom)` is an applied constant only for a single-token argument.
    fn applied_to_atom(&self) -> bool {
        let arg = &self.toks.get(self.pos + 1).map(|t| &t.tok);
        let close = &self.toks.get(self.pos + 2).map(|t| &t.tok);
        matches!(arg, Some(Tok::Ident(_)) | Some(Tok::Num { imag: false, .. })) && matches!(close, Some(Tok::RParen))
    }
}

fn symbol_from_name(name: &str) -> Option<SymbolId> {
    let index = |rest: &str| -> Option<u32> {
        if rest.is_empty() {
            Some(1)
        } else if rest.bytes().all(|b| b.is_ascii_digit()) && !rest.starts_with('0') {
            rest.parse().ok()
        } else {
            None
        }
    };
    if let Some(rest) = name.strip_prefix("phi") {
        return index(rest).map(|i| SymbolId::hom(i, 1));
    }
    if let Some(rest) = name.strip_prefix('a') {
        return index(rest).map(|i| SymbolId::log_deriv(i, 1));
    }
    None
}

fn collect(node: &Node, symbols: &mut Vec<SymbolId>, unknowns: &mut Vec<String>) {
    match node {
        Node::Num(_) => {}
        Node::Symbol(s) => symbols.push(*s),
        Node::Unknown(u) => {
            if !unknowns.contains(u) {
                unknowns.push(u.clone());
            }
        }
        Node::Neg(a) | Node::Pow(a, _) => collect(a, symbols, unknowns),
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b, _, _) => {
            collect(a, symbols, unknowns);
            collect(b, symbols, unknowns);
        }
    }
}

fn build(node: &Node, u: &Arc<Universe>) -> Result<SymPoly> {
    Ok(match node {
        Node::Num(n) => SymPoly::constant(u, Rational::from_integer(n.clone())),
        Node::Symbol(s) => SymPoly::symbol(u, *s)?,
        Node::Unknown(name) => SymPoly::unknown(u, name)?,
        Node::Neg(a) => build(a, u)?.neg(),
        Node::Add(a, b) => build(a, u)?.add(&build(b, u)?)?,
        Node::Sub(a, b) => build(a, u)?.sub(&build(b, u)?)?,
        Node::Mul(a, b) => build(a, u)?.mul(&build(b, u)?)?,
        Node::Pow(a, e) => build(a, u)?.pow(*e),
        Node::Div(a, b, line, column) => {
            let d = build(b, u)?
                .as_coefficient()
                .and_then(|c| c.as_constant())
                .filter(|c| !c.is_zero())
                .ok_or_else(|| Error::Syntax {
                    line: *line,
                    column: *column,
                    message: "division is only allowed by a nonzero rational constant".into(),
                })?;
            build(a, u)?.scale(&d.recip())
        }
    })
}

fn parse_node(text: &str) -> Result<Node> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let node = p.expr()?;
    let t = p.next();
    if t.tok != Tok::End {
        return Err(p.unexpected(&t, "an operator or end of input"));
    }
    Ok(node)
}

/// Parses one expression in its own universe.
pub fn parse_expression(text: &str) -> Result<SymPoly> {
    let node = parse_node(text)?;
    let (mut symbols, mut unknowns) = (Vec::new(), Vec::new());
    collect(&node, &mut symbols, &mut unknowns);
    build(&node, &Universe::new(symbols, unknowns))
}

/// A symbolic value for each unknown function, all in one universe.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    names: Vec<String>,
    rows: Vec<SymPoly>,
}

impl Candidate {
    /// Parses `(name, expression)` pairs.
    pub fn parse(rows: &[(&str, &str)]) -> Result<Candidate> {
        let owned: Vec<(String, String)> = rows.iter().map(|(n, e)| (n.to_string(), e.to_string())).collect();
        Self::parse_owned(&owned, &[])
    }

    fn parse_owned(rows: &[(String, String)], origins: &[(usize, usize)]) -> Result<Candidate> {
        let mut nodes = Vec::new();
        let (mut symbols, mut unknowns) = (Vec::new(), Vec::new());
        for (k, (name, text)) in rows.iter().enumerate() {
            if rows[..k].iter().any(|(n, _)| n == name) {
                return Err(Error::Binding(format!("'{name}' is assigned twice")));
            }
            let node = parse_node(text).map_err(|e| match (e, origins.get(k)) {
                (Error::Syntax { column, message, .. }, Some(&(line, offset))) => Error::Syntax {
                    line,
                    column: column + offset,
                    message,
                },
                (e, _) => e,
            })?;
            collect(&node, &mut symbols, &mut unknowns);
            nodes.push(node);
        }
        let u = Universe::new(symbols, unknowns);
        let polys = nodes.iter().map(|n| build(n, &u)).collect::<Result<Vec<_>>>()?;
        Ok(Candidate {
            names: rows.iter().map(|(n, _)| n.clone()).collect(),
            rows: polys,
        })
    }

    /// Parses `name = expression` lines; `#` starts a comment.
    pub fn parse_file(text: &str) -> Result<Candidate> {
        let mut rows = Vec::new();
        let mut origins = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let Some(eq) = line.find('=') else {
                return Err(Error::Syntax {
                    line: idx + 1,
                    column: 1,
                    message: "expected 'name = expression'".into(),
                });
            };
            let name = line[..eq].trim();
            if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::Syntax {
                    line: idx + 1,
                    column: 1,
                    message: format!("invalid function name '{name}'"),
                });
            }
            rows.push((name.to_string(), line[eq + 1..].to_string()));
            origins.push((idx + 1, line[..eq + 1].chars().count()));
        }
        Self::parse_owned(&rows, &origins)
    }

    /// Builds a candidate from polynomials, lifting them into a common universe.
    pub fn from_polys(rows: Vec<(String, SymPoly)>) -> Result<Candidate> {
        let mut u = Universe::new([], Vec::<String>::new());
        for (_, p) in &rows {
            u = u.union(p.universe());
        }
        let mut names = Vec::new();
        let mut polys = Vec::new();
        for (n, p) in rows {
            polys.push(p.lift(&u)?);
            names.push(n);
        }
        Ok(Candidate { names, rows: polys })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rows(&self) -> &[SymPoly] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&SymPoly> {
        self.names.iter().position(|n| n == name).map(|i| &self.rows[i])
    }

    pub fn universe(&self) -> Option<&Arc<Universe>> {
        self.rows.first().map(|r| r.universe())
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (n, r)) in self.names.iter().zip(&self.rows).enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{n} = {r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_log_derivative_polynomial() {
        let p = parse_expression("-(20 + 4*a + a^2)*phi").unwrap();
        assert_eq!(p.to_string(), "-phi1(x)*a1(x)^2 - 4*phi1(x)*a1(x) - 20*phi1(x)");
    }

    #[test]
    fn applied_constants_and_aliases() {
        let p = parse_expression("-g(1)^2*phi1(x) - h(1)^4*phi2").unwrap();
        assert_eq!(p.universe().unknowns(), ["g(1)".to_string(), "h(1)".to_string()]);
        assert_eq!(parse_expression("phi(x) / 2").unwrap().to_string(), "1/2*phi1(x)");
    }

    #[test]
    fn rejects_complex_and_bad_division() {
        assert!(matches!(parse_expression("2i*phi"), Err(Error::Unsupported(_))));
        assert!(matches!(parse_expression("i*phi"), Err(Error::Unsupported(_))));
        assert!(matches!(parse_expression("phi/a"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expression("phi/0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expression("phi(y)"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn syntax_positions() {
        match parse_expression("phi1 + * a1") {
            Err(Error::Syntax { line: 1, column: 8, .. }) => {}
            other => panic!("{other:?}"),
        }
        let file = "# ex\nf = phi\ng = 2*(1 + a)*phi\nh = 2*phi +\n";
        match Candidate::parse_file(file) {
            Err(Error::Syntax { line: 4, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn file_shares_universe() {
        let c = Candidate::parse_file("f = -(20+4*a+a^2)*phi  # note\ng = 2*(1+a)*phi\n\nh = 2*phi\n").unwrap();
        assert_eq!(c.len(), 3);
        assert!(Arc::ptr_eq(c.rows()[0].universe(), c.rows()[2].universe()));
        assert_eq!(c.get("h").unwrap().to_string(), "2*phi1(x)");
        assert!(Candidate::parse_file("f = phi\nf = phi").is_err());
    }
}
