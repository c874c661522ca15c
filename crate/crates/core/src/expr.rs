//! Polynomial expressions: parsing with source positions, printing with
//! minimal parentheses, and conversion to polynomials and factored forms.
//!
//! ```text
//! expr  = term (('+' | '-') term)*
//! term  = unary ('*' unary)*
//! unary = '-' unary | power
//! power = atom ('^' INT)?
//! atom  = INT ('/' INT)? | VAR | '(' expr ')'
//! ```

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::jet::Jet;
use crate::poly::Poly;
use crate::vars::VarContext;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// Nonnegative rational literal.
    Num(Rational),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, column);
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
        } else if c.is_whitespace() {
            chars.next();
            column += 1;
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                column += 1;
            }
            out.push(Token { tok: Tok::Int(s.parse().expect("digits")), line: l0, column: c0 });
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                s.push(d);
                chars.next();
                column += 1;
            }
            out.push(Token { tok: Tok::Ident(s), line: l0, column: c0 });
        } else if "+-*^/()".contains(c) {
            chars.next();
            column += 1;
            out.push(Token { tok: Tok::Sym(c), line: l0, column: c0 });
        } else {
            return Err(Error::Syntax { line, column, message: format!("unexpected character `{c}`") });
        }
    }
    out.push(Token { tok: Tok::End, line, column });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    names: Option<&'a [String]>,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let t = self.peek();
        Err(Error::Syntax { line: t.line, column: t.column, message: message.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let Tok::Int(n) = self.peek().tok.clone() else {
                return self.error("expected a nonnegative integer exponent");
            };
            let Ok(k) = u32::try_from(n) else {
                return self.error("exponent too large");
            };
            self.pos += 1;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().tok.clone() {
            Tok::Int(n) => {
                self.pos += 1;
                if self.peek().tok == Tok::Sym('/') {
                    self.pos += 1;
                    let Tok::Int(d) = self.peek().tok.clone() else {
                        return self.error("expected an integer denominator");
                    };
                    if d.is_zero() {
                        return self.error("zero denominator");
                    }
                    self.pos += 1;
                    return Ok(Expr::Num(Rational::new(n, d)));
                }
                Ok(Expr::Num(Rational::from_integer(n)))
            }
            Tok::Ident(name) => {
                if let Some(names) = self.names {
                    if !names.contains(&name) {
                        let t = self.peek();
                        return Err(Error::UnknownVariableAt { name, line: t.line, column: t.column });
                    }
                }
                self.pos += 1;
                Ok(Expr::Var(name))
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.error("expected `)`");
                }
                Ok(e)
            }
            Tok::End => self.error("unexpected end of input"),
            Tok::Sym(c) => self.error(format!("unexpected `{c}`")),
        }
    }
}

fn parse_with(text: &str, names: Option<&[String]>) -> Result<Expr> {
    let mut p = Parser { toks: lex(text)?, pos: 0, names };
    let e = p.expr()?;
    if p.peek().tok != Tok::End {
        return p.error("unexpected input after expression");
    }
    Ok(e)
}

impl Expr {
    pub fn parse(text: &str) -> Result<Self> {
        parse_with(text, None)
    }

    /// Parses, rejecting variables outside `names`.
    pub fn parse_in(text: &str, names: &[String]) -> Result<Self> {
        parse_with(text, Some(names))
    }

    fn level(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(q) if !q.is_integer() => 4,
            Expr::Num(_) | Expr::Var(_) => 5,
        }
    }

    pub fn to_poly<S: Field>(&self, names: &[String]) -> Result<Poly<S>> {
        let n = names.len();
        Ok(match self {
            Expr::Num(q) => Poly::constant(n, S::from_rational(q.clone())),
            Expr::Var(v) => {
                let i = names
                    .iter()
                    .position(|m| m == v)
                    .ok_or_else(|| Error::UnknownVariable(v.clone()))?;
                Poly::var(n, i)
            }
            Expr::Neg(a) => -&a.to_poly(names)?,
            Expr::Add(a, b) => &a.to_poly(names)? + &b.to_poly(names)?,
            Expr::Sub(a, b) => &a.to_poly(names)? - &b.to_poly(names)?,
            Expr::Mul(a, b) => &a.to_poly(names)? * &b.to_poly(names)?,
            Expr::Pow(a, k) => a.to_poly(names)?.pow(*k),
        })
    }

    /// The polynomial as an exact jet truncated at `order`.
    pub fn to_jet<S: Field>(&self, ctx: &Arc<VarContext>, order: u32) -> Result<Jet<S>> {
        let p = self.to_poly(ctx.names())?;
        Ok(Jet::new(ctx, order, p, true))
    }

    /// Splits a top-level product into a rational constant and powers of the
    /// remaining factors.
    pub fn factored(&self) -> (Rational, Vec<(Expr, u32)>) {
        let mut unit = Rational::one();
        let mut out = Vec::new();
        fn walk(e: &Expr, unit: &mut Rational, out: &mut Vec<(Expr, u32)>) {
            match e {
                Expr::Mul(a, b) => {
                    walk(a, unit, out);
                    walk(b, unit, out);
                }
                Expr::Neg(a) => {
                    *unit = -unit.clone();
                    walk(a, unit, out);
                }
                Expr::Num(q) => *unit *= q,
                Expr::Pow(a, k) if !matches!(**a, Expr::Num(_)) => out.push(((**a).clone(), *k)),
                other => out.push((other.clone(), 1)),
            }
        }
        walk(self, &mut unit, &mut out);
        (unit, out)
    }
}

struct Wrapped<'a>(&'a Expr, u8);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.level() < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(q) => write!(f, "{q}"),
            Expr::Var(v) => f.write_str(v),
            Expr::Neg(a) => write!(f, "-{}", Wrapped(a, 3)),
            Expr::Add(a, b) => write!(f, "{} + {}", Wrapped(a, 1), Wrapped(b, 2)),
            Expr::Sub(a, b) => write!(f, "{} - {}", Wrapped(a, 1), Wrapped(b, 2)),
            Expr::Mul(a, b) => write!(f, "{}*{}", Wrapped(a, 2), Wrapped(b, 3)),
            Expr::Pow(a, k) => write!(f, "{}^{k}", Wrapped(a, 5)),
        }
    }
}
