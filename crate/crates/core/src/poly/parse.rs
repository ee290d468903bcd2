//! Polynomial text syntax.
//!
//! Indeterminates `d` (∂), `l` (λ), `m` (μ) and parameters by identifier;
//! integer and `p/q` literals; `+ - * ^` and parentheses. Exponents are
//! integer expressions (`c^-1`, `c^(i+1)`). In action templates the names
//! bound in [`ParseOptions::indices`] (`i`, `m`) denote integers and shadow
//! the indeterminates.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};

use super::{MultiPoly, Var};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Parsed expression, evaluated later against [`ParseOptions`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    Ident { name: String, column: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow { base: Box<Expr>, exp: Box<Expr>, column: usize },
}

/// Evaluation context: which identifiers are unit indeterminates and which
/// are integer index symbols.
#[derive(Clone, Debug, Default)]
pub struct ParseOptions {
    pub units: BTreeSet<String>,
    pub indices: BTreeMap<String, i64>,
}

impl ParseOptions {
    pub fn with_units(units: &[&str]) -> Self {
        ParseOptions { units: units.iter().map(|s| s.to_string()).collect(), indices: BTreeMap::new() }
    }

    pub fn bind(mut self, name: &str, value: i64) -> Self {
        self.indices.insert(name.to_string(), value);
        self
    }
}

pub fn parse_poly(text: &str) -> Result<MultiPoly> {
    parse_poly_with_units(text, &ParseOptions::default())
}

pub fn parse_poly_with_units(text: &str, opts: &ParseOptions) -> Result<MultiPoly> {
    parse_expr(text)?.eval(opts)
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

impl Expr {
    pub fn eval(&self, opts: &ParseOptions) -> Result<MultiPoly> {
        Ok(match self {
            Expr::Num(r) => MultiPoly::from_rational(r.clone()),
            Expr::Ident { name, .. } => {
                if let Some(v) = opts.indices.get(name) {
                    MultiPoly::from_int(*v)
                } else {
                    MultiPoly::var(match name.as_str() {
                        "d" => Var::D,
                        "l" => Var::L,
                        "m" => Var::M,
                        n if opts.units.contains(n) => Var::unit(n),
                        n => Var::param(n),
                    })
                }
            }
            Expr::Neg(a) => -a.eval(opts)?,
            Expr::Add(a, b) => a.eval(opts)? + b.eval(opts)?,
            Expr::Sub(a, b) => a.eval(opts)? - b.eval(opts)?,
            Expr::Mul(a, b) => a.eval(opts)?.mul(&b.eval(opts)?),
            Expr::Pow { base, exp, column } => {
                let e = exp.eval(opts)?;
                let n = e
                    .to_constant()
                    .and_then(|r| r.to_i64())
                    .filter(|n| n.unsigned_abs() <= 4096)
                    .ok_or_else(|| Error::Parse {
                        column: *column,
                        message: format!("exponent `{}` is not a small integer", e),
                    })?;
                let b = base.eval(opts)?;
                if n >= 0 {
                    b.pow(n as u32)
                } else {
                    b.unit_inverse()
                        .ok_or_else(|| Error::Parse {
                            column: *column,
                            message: format!("negative power of non-invertible `{}`", b),
                        })?
                        .pow((-n) as u32)
                }
            }
        })
    }

    /// Identifiers occurring in the expression.
    pub fn identifiers(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk_idents(&mut out);
        out
    }

    fn walk_idents(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Ident { name, .. } => {
                out.insert(name.clone());
            }
            Expr::Neg(a) => a.walk_idents(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.walk_idents(out);
                b.walk_idents(out);
            }
            Expr::Pow { base, exp, .. } => {
                base.walk_idents(out);
                exp.walk_idents(out);
            }
        }
    }
}

impl MultiPoly {
    /// The value if the polynomial is a constant.
    pub fn to_constant(&self) -> Option<Rational> {
        match self.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { column: self.pos + 1, message: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            let column = self.pos + 1;
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Expr::Pow { base: Box::new(base), exp: Box::new(exp), column });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
                Ok(Expr::Ident { name: name.to_string(), column: start + 1 })
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        self.digits();
        if self.src.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            if !self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                return Err(self.error("expected denominator digits"));
            }
            self.digits();
        }
        let text = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
        let r: Rational = text.parse().map_err(|_| Error::Parse {
            column: start + 1,
            message: format!("bad rational literal `{}`", text),
        })?;
        Ok(Expr::Num(r))
    }

    fn digits(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
    }
}
