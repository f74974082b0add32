//! Recursive-descent parser for polynomials with Puiseux-series coefficients.
//!
//! Grammar (whitespace is insignificant, implicit multiplication is not
//! allowed):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('+' | '-') unary | power
//! power   := primary ('^' exponent)?
//! exponent:= ['-'] number | '(' ['+' | '-'] number ['/' number] ')'
//! primary := number | 't' | variable | 'O' '(' expr ')' | '(' expr ')'
//! ```
//!
//! `t` is the series parameter and may carry any rational exponent. Declared
//! variables take nonnegative integer exponents only. `O(t^T)` denotes an
//! unknown tail. Division is allowed by nonzero constants and powers of `t`.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exponent::{parse_rational, Exponent};
use crate::field::Field;
use crate::poly::SeriesPoly;
use crate::series::PuiseuxSeries;

const MAX_POWER: u32 = 10_000;

/// A parsed polynomial together with its variable order.
#[derive(Clone)]
pub struct ParsedPolynomial<F> {
    pub poly: SeriesPoly<F>,
    pub variables: Vec<String>,
}

impl<F: Field> std::fmt::Debug for ParsedPolynomial<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.poly.render(&self.variables))
    }
}

/// Parses a nonzero polynomial. With `declared`, variables are exactly that
/// list in that order; otherwise they are ordered by first appearance.
pub fn parse_polynomial<F: Field>(src: &str, declared: Option<&[String]>) -> Result<ParsedPolynomial<F>> {
    let parsed = parse_any(src, declared)?;
    if parsed.poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(parsed)
}

/// Parses a single series such as `-3 - t^2 + O(t^5)`. Zero is allowed.
pub fn parse_series<F: Field>(src: &str) -> Result<PuiseuxSeries<F>> {
    let parsed = parse_any::<F>(src, Some(&[]))?;
    Ok(parsed.poly.coefficient(&[]).cloned().unwrap_or_else(PuiseuxSeries::zero))
}

fn parse_any<F: Field>(src: &str, declared: Option<&[String]>) -> Result<ParsedPolynomial<F>> {
    if let Some(names) = declared {
        for (i, n) in names.iter().enumerate() {
            if n == "t" || n == "O" {
                return Err(Error::InvalidInput(format!("`{n}` is reserved and cannot be a variable")));
            }
            if !is_identifier(n) {
                return Err(Error::InvalidInput(format!("`{n}` is not a valid variable name")));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidInput(format!("variable `{n}` declared twice")));
            }
        }
    }
    let tokens = tokenize(src)?;
    let mut parser = Parser { tokens, pos: 0, end: src.len() };
    let ast = parser.expr()?;
    if let Some(tok) = parser.peek() {
        return Err(Error::parse(tok.pos, format!("unexpected {}", tok.kind.describe())));
    }

    let variables = match declared {
        Some(names) => {
            let mut seen = Vec::new();
            ast.collect_vars(&mut seen);
            if let Some((name, pos)) = seen.iter().find(|(n, _)| !names.contains(n)) {
                return Err(Error::parse(*pos, format!("undeclared variable `{name}`")));
            }
            names.to_vec()
        }
        None => {
            let mut seen = Vec::new();
            ast.collect_vars(&mut seen);
            seen.into_iter().map(|(n, _)| n).collect()
        }
    };
    let poly = ast.eval::<F>(&variables)?;
    Ok(ParsedPolynomial { poly, variables })
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Number(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Number(n) => format!("number `{n}`"),
            TokenKind::Ident(n) => format!("identifier `{n}`"),
            TokenKind::Plus => "`+`".into(),
            TokenKind::Minus => "`-`".into(),
            TokenKind::Star => "`*`".into(),
            TokenKind::Slash => "`/`".into(),
            TokenKind::Caret => "`^`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    pos: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let kind = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => TokenKind::Plus,
            '-' => TokenKind::Minus,
            '*' => TokenKind::Star,
            '/' => TokenKind::Slash,
            '^' => TokenKind::Caret,
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            c if c.is_ascii_digit() || c == '.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                let text = &src[start..i];
                if text.matches('.').count() > 1 || text == "." {
                    return Err(Error::parse(start, format!("malformed number `{text}`")));
                }
                tokens.push(Token { kind: TokenKind::Number(text.to_string()), pos: start });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push(Token { kind: TokenKind::Ident(src[start..i].to_string()), pos: start });
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap();
                return Err(Error::parse(start, format!("unexpected character `{ch}`")));
            }
        };
        tokens.push(Token { kind, pos: start });
        i += 1;
    }
    Ok(tokens)
}

#[derive(Debug, Clone)]
enum Ast {
    Number(BigRational),
    T,
    Var(String, usize),
    BigO(Box<Ast>, usize),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>, usize),
    Pow(Box<Ast>, BigRational, usize),
}

impl Ast {
    fn collect_vars(&self, out: &mut Vec<(String, usize)>) {
        match self {
            Ast::Var(name, pos) => {
                if !out.iter().any(|(n, _)| n == name) {
                    out.push((name.clone(), *pos));
                }
            }
            Ast::Number(_) | Ast::T => {}
            Ast::Neg(a) | Ast::Pow(a, _, _) | Ast::BigO(a, _) => a.collect_vars(out),
            Ast::Add(a, b) | Ast::Sub(a, b) | Ast::Mul(a, b) | Ast::Div(a, b, _) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    fn eval<F: Field>(&self, vars: &[String]) -> Result<SeriesPoly<F>> {
        let n = vars.len();
        Ok(match self {
            Ast::Number(q) => SeriesPoly::constant(n, PuiseuxSeries::constant(F::from_rational(q))),
            Ast::T => SeriesPoly::constant(n, PuiseuxSeries::monomial(F::one(), Exponent::integer(1))),
            Ast::Var(name, _) => {
                let j = vars.iter().position(|v| v == name).expect("variables collected before eval");
                SeriesPoly::variable(n, j)
            }
            Ast::BigO(inner, pos) => {
                let value = inner.eval::<F>(vars)?;
                let (c, e) = as_t_monomial(&value)
                    .ok_or_else(|| Error::parse(*pos, "O(...) expects a power of t such as O(t^5)"))?;
                if !c.is_one() {
                    return Err(Error::parse(*pos, "O(...) expects a power of t such as O(t^5)"));
                }
                SeriesPoly::constant(n, PuiseuxSeries::big_o(e))
            }
            Ast::Neg(a) => a.eval::<F>(vars)?.neg(),
            Ast::Add(a, b) => a.eval::<F>(vars)?.add(&b.eval(vars)?),
            Ast::Sub(a, b) => a.eval::<F>(vars)?.sub(&b.eval(vars)?),
            Ast::Mul(a, b) => a.eval::<F>(vars)?.mul(&b.eval(vars)?),
            Ast::Div(a, b, pos) => {
                let num = a.eval::<F>(vars)?;
                let den = b.eval::<F>(vars)?;
                let (c, e) = as_t_monomial(&den)
                    .ok_or_else(|| Error::parse(*pos, "can only divide by a nonzero constant or a power of t"))?;
                let inv = c.inv().map_err(|_| Error::parse(*pos, "division by zero"))?;
                num.scale(&PuiseuxSeries::monomial(inv, -e))
            }
            Ast::Pow(base, k, pos) => {
                let value = base.eval::<F>(vars)?;
                if k.is_integer() && !Signed::is_negative(k) {
                    let k = k.to_integer().to_u32().filter(|k| *k <= MAX_POWER);
                    let k = k.ok_or_else(|| Error::parse(*pos, format!("exponent exceeds {MAX_POWER}")))?;
                    value.pow(k)
                } else {
                    let Some((c, e)) = as_t_monomial(&value) else {
                        return Err(Error::parse(
                            *pos,
                            "negative or fractional exponent is only allowed on t (variable exponents must be nonnegative integers)",
                        ));
                    };
                    let scaled = Exponent::from_rational(e.into_rational() * k);
                    let coeff = if c.is_one() {
                        F::one()
                    } else if k.is_integer() {
                        let inv = c.inv().map_err(|_| Error::parse(*pos, "division by zero"))?;
                        let mut acc = F::one();
                        for _ in 0..k.abs().to_integer().to_u32().unwrap_or(MAX_POWER + 1).min(MAX_POWER + 1) {
                            acc = acc.mul(&inv);
                        }
                        acc
                    } else {
                        return Err(Error::parse(*pos, "fractional powers need a unit coefficient, e.g. t^(1/2)"));
                    };
                    SeriesPoly::constant(n, PuiseuxSeries::monomial(coeff, scaled))
                }
            }
        })
    }
}

/// Recognizes a polynomial that is an exact single-term constant `c·t^e`.
fn as_t_monomial<F: Field>(p: &SeriesPoly<F>) -> Option<(F, Exponent)> {
    if p.len() != 1 {
        return None;
    }
    let (m, s) = p.terms().next()?;
    if m.iter().any(|e| *e != 0) || !s.is_exact() || s.terms().len() != 1 {
        return None;
    }
    let (e, c) = &s.terms()[0];
    Some((c.clone(), e.clone()))
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek().is_some_and(|t| &t.kind == kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: &TokenKind) -> Result<()> {
        if self.eat(kind) {
            Ok(())
        } else {
            let found = self.peek().map_or("end of input".to_string(), |t| t.kind.describe());
            Err(Error::parse(self.here(), format!("expected {}, found {found}", kind.describe())))
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&TokenKind::Plus) {
                lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&TokenKind::Minus) {
                lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(&TokenKind::Star) {
                lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek().is_some_and(|t| t.kind == TokenKind::Slash) {
                let pos = self.here();
                self.pos += 1;
                lhs = Ast::Div(Box::new(lhs), Box::new(self.unary()?), pos);
            } else if matches!(
                self.peek().map(|t| &t.kind),
                Some(TokenKind::Number(_) | TokenKind::Ident(_) | TokenKind::LParen)
            ) {
                return Err(Error::parse(self.here(), "implicit multiplication is not allowed; use `*`"));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        if self.eat(&TokenKind::Minus) {
            Ok(Ast::Neg(Box::new(self.unary()?)))
        } else if self.eat(&TokenKind::Plus) {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.primary()?;
        if self.peek().is_some_and(|t| t.kind == TokenKind::Caret) {
            let pos = self.here();
            self.pos += 1;
            let k = self.exponent()?;
            Ok(Ast::Pow(Box::new(base), k, pos))
        } else {
            Ok(base)
        }
    }

    fn exponent(&mut self) -> Result<BigRational> {
        if self.eat(&TokenKind::LParen) {
            let negative = if self.eat(&TokenKind::Minus) {
                true
            } else {
                self.eat(&TokenKind::Plus);
                false
            };
            let mut value = self.number()?;
            if self.eat(&TokenKind::Slash) {
                let pos = self.here();
                let den = self.number()?;
                if Zero::is_zero(&den) {
                    return Err(Error::parse(pos, "zero denominator in exponent"));
                }
                value /= den;
            }
            self.expect(&TokenKind::RParen)?;
            Ok(if negative { -value } else { value })
        } else {
            let negative = self.eat(&TokenKind::Minus);
            let value = self.number()?;
            Ok(if negative { -value } else { value })
        }
    }

    fn number(&mut self) -> Result<BigRational> {
        match self.peek().cloned() {
            Some(Token { kind: TokenKind::Number(text), pos }) => {
                self.pos += 1;
                parse_rational(&text).map_err(|_| Error::parse(pos, format!("malformed number `{text}`")))
            }
            other => {
                let found = other.map_or("end of input".to_string(), |t| t.kind.describe());
                Err(Error::parse(self.here(), format!("expected a number, found {found}")))
            }
        }
    }

    fn primary(&mut self) -> Result<Ast> {
        let Some(tok) = self.peek().cloned() else {
            return Err(Error::parse(self.end, "unexpected end of input"));
        };
        match tok.kind {
            TokenKind::Number(_) => Ok(Ast::Number(self.number()?)),
            TokenKind::Ident(name) => {
                self.pos += 1;
                match name.as_str() {
                    "t" => Ok(Ast::T),
                    "O" => {
                        self.expect(&TokenKind::LParen)?;
                        let inner = self.expr()?;
                        self.expect(&TokenKind::RParen)?;
                        Ok(Ast::BigO(Box::new(inner), tok.pos))
                    }
                    _ => Ok(Ast::Var(name, tok.pos)),
                }
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(&TokenKind::RParen)?;
                Ok(inner)
            }
            kind => Err(Error::parse(tok.pos, format!("unexpected {}", kind.describe()))),
        }
    }
}
