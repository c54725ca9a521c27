//! Parser for the bracket notation `(e^{25}+e^{34},e^{35},0,0,0)` and for
//! the coefficient, 1-form, point and constraint snippets used alongside it.
//!
//! Coefficients are built from integers, `/`, the parameters `p q r eps`
//! (also `ε`), the surds `sqrt2 sqrt3 sqrt6` (also `√2`, `r2`, …), products by
//! juxtaposition or `*`, powers `p^2` and parentheses. Monomials are written
//! `e^{ij}`, `e^ij` or `e7`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exterior::{Form, KForm, MAX_DIM};
use crate::liealg::{Constraint, Relation};
use crate::poly::{Param, ParamPoint, Poly};
use crate::ring::Ring;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}, near '{token}': {message}")]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub token: String,
    pub message: String,
}

impl ParseError {
    fn new(column: usize, token: impl Into<String>, message: impl Into<String>) -> Self {
        ParseError {
            column,
            token: token.into(),
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Mono(Vec<usize>),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "{n}"),
            Tok::Ident(s) => f.write_str(s),
            Tok::Mono(l) => {
                let s: String = l.iter().map(ToString::to_string).collect();
                write!(f, "e^{{{s}}}")
            }
            Tok::Plus => f.write_str("+"),
            Tok::Minus => f.write_str("-"),
            Tok::Star => f.write_str("*"),
            Tok::Slash => f.write_str("/"),
            Tok::Caret => f.write_str("^"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
            Tok::Comma => f.write_str(","),
            Tok::End => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' | '·' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, column });
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Spanned {
                tok: Tok::Num(s.parse().expect("digits")),
                column,
            });
            continue;
        }
        if c == '√' {
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Spanned {
                tok: Tok::Ident(format!("sqrt{s}")),
                column,
            });
            continue;
        }
        if c == 'e' && i + 1 < chars.len() && (chars[i + 1] == '^' || chars[i + 1].is_ascii_digit())
        {
            let (labels, next) = lex_monomial(&chars, i)?;
            out.push(Spanned {
                tok: Tok::Mono(labels),
                column,
            });
            i = next;
            continue;
        }
        if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Spanned {
                tok: Tok::Ident(s),
                column,
            });
            continue;
        }
        return Err(ParseError::new(
            column,
            c.to_string(),
            "unexpected character",
        ));
    }
    out.push(Spanned {
        tok: Tok::End,
        column: chars.len() + 1,
    });
    Ok(out)
}

/// Lexes `e^{ij…}`, `e^ij…` or `eN` starting at `chars[i] == 'e'`.
fn lex_monomial(chars: &[char], i: usize) -> Result<(Vec<usize>, usize), ParseError> {
    let mut j = i + 1;
    let braced = chars[j] == '^' && chars.get(j + 1) == Some(&'{');
    if chars[j] == '^' {
        j += if braced { 2 } else { 1 };
    }
    let start = j;
    while j < chars.len() && chars[j].is_ascii_digit() {
        j += 1;
    }
    let labels: Vec<usize> = chars[start..j]
        .iter()
        .map(|d| d.to_digit(10).expect("digit") as usize)
        .collect();
    if labels.is_empty() {
        return Err(ParseError::new(i + 1, "e", "monomial without indices"));
    }
    if braced {
        if chars.get(j) != Some(&'}') {
            return Err(ParseError::new(
                j + 1,
                chars.get(j).map_or(String::new(), char::to_string),
                "expected '}'",
            ));
        }
        j += 1;
    }
    Ok((labels, j))
}

#[derive(Clone, Debug)]
enum Expr {
    Num(BigInt),
    Param(Param),
    Sqrt(u8),
    Mono(Vec<usize>, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>, usize),
    Sub(Box<Expr>, Box<Expr>, usize),
    Mul(Box<Expr>, Box<Expr>, usize),
    Div(Box<Expr>, BigInt, usize),
    Pow(Box<Expr>, u32, usize),
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn column(&self) -> usize {
        self.toks[self.pos].column
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.column(), self.peek().to_string(), message)
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected '{tok}'")))
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = match self.peek() {
            Tok::Minus => {
                self.bump();
                Expr::Neg(Box::new(self.product()?))
            }
            Tok::Plus => {
                self.bump();
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            let col = self.column();
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?), col);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?), col);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Num(_) | Tok::Ident(_) | Tok::Mono(_) | Tok::LParen
        )
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.power()?;
        loop {
            let col = self.column();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?), col);
                }
                Tok::Slash => {
                    self.bump();
                    let Tok::Num(d) = self.peek().clone() else {
                        return Err(self.error("only integer divisors are supported"));
                    };
                    if d.is_zero() {
                        return Err(self.error("division by zero"));
                    }
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), d, col);
                }
                _ if self.starts_factor() => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?), col);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let col = self.column();
        self.bump();
        let Tok::Num(k) = self.peek().clone() else {
            return Err(self.error("expected an integer exponent"));
        };
        let k = k
            .to_u32()
            .filter(|&k| k <= 16)
            .ok_or_else(|| self.error("exponent too large"))?;
        self.bump();
        Ok(Expr::Pow(Box::new(base), k, col))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let col = self.column();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Expr::Num(n))
            }
            Tok::Mono(l) => {
                self.bump();
                Ok(Expr::Mono(l, col))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(s) => {
                let atom = match s.as_str() {
                    "sqrt2" | "r2" => Expr::Sqrt(2),
                    "sqrt3" | "r3" => Expr::Sqrt(3),
                    "sqrt6" | "r6" => Expr::Sqrt(6),
                    _ => match Param::from_name(&s) {
                        Some(p) => Expr::Param(p),
                        None => return Err(self.error("unknown identifier")),
                    },
                };
                self.bump();
                Ok(atom)
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

/// Coefficient rings the notation can be evaluated into.
pub trait Coefficient: Ring + fmt::Display {
    fn from_bigint(n: BigInt) -> Self;
    fn param(p: Param) -> Option<Self>;
    fn surd(k: u8) -> Option<Self>;
    fn div_int(&self, d: &BigInt) -> Self;
}

impl Coefficient for Poly {
    fn from_bigint(n: BigInt) -> Self {
        Poly::constant(BigRational::from_integer(n))
    }

    fn param(p: Param) -> Option<Self> {
        Some(Poly::var(p))
    }

    fn surd(_: u8) -> Option<Self> {
        None
    }

    fn div_int(&self, d: &BigInt) -> Self {
        self.clone() * &Poly::constant(BigRational::new(BigInt::one(), d.clone()))
    }
}

impl Coefficient for Scalar {
    fn from_bigint(n: BigInt) -> Self {
        Scalar::from_rational(BigRational::from_integer(n))
    }

    fn param(_: Param) -> Option<Self> {
        None
    }

    fn surd(k: u8) -> Option<Self> {
        Some(match k {
            2 => Scalar::sqrt2(),
            3 => Scalar::sqrt3(),
            _ => Scalar::sqrt6(),
        })
    }

    fn div_int(&self, d: &BigInt) -> Self {
        self.clone() * &Scalar::from_rational(BigRational::new(BigInt::one(), d.clone()))
    }
}

fn eval<C: Coefficient>(e: &Expr, n: usize) -> Result<Form<C>, ParseError> {
    Ok(match e {
        Expr::Num(k) => Form::constant(n, C::from_bigint(k.clone())),
        Expr::Param(p) => Form::constant(
            n,
            C::param(*p)
                .ok_or_else(|| ParseError::new(0, p.name(), "parameters are not allowed here"))?,
        ),
        Expr::Sqrt(k) => Form::constant(
            n,
            C::surd(*k).ok_or_else(|| {
                ParseError::new(0, format!("sqrt{k}"), "surds are not allowed here")
            })?,
        ),
        Expr::Mono(labels, col) => {
            if let Some(&bad) = labels.iter().find(|&&l| l == 0 || l > n) {
                return Err(ParseError::new(
                    *col,
                    Tok::Mono(labels.clone()).to_string(),
                    format!("index {bad} exceeds dimension {n}"),
                ));
            }
            Form::monomial(n, labels, C::one())
        }
        Expr::Neg(a) => eval::<C>(a, n)?.neg(),
        Expr::Add(a, b, col) | Expr::Sub(a, b, col) => {
            let x = eval::<C>(a, n)?;
            let mut y = eval::<C>(b, n)?;
            if matches!(e, Expr::Sub(..)) {
                y = y.neg();
            }
            x.try_add(&y).map_err(|_| {
                ParseError::new(
                    *col,
                    "+",
                    format!(
                        "cannot add forms of degree {} and {}",
                        x.degree(),
                        y.degree()
                    ),
                )
            })?
        }
        Expr::Mul(a, b, col) => {
            let x = eval::<C>(a, n)?;
            let y = eval::<C>(b, n)?;
            if x.degree() == 0 {
                y.scale(&x.coeff(0))
            } else if y.degree() == 0 {
                x.scale(&y.coeff(0))
            } else {
                return Err(ParseError::new(
                    *col,
                    "*",
                    "products of two forms are not supported",
                ));
            }
        }
        Expr::Div(a, d, _) => {
            let x = eval::<C>(a, n)?;
            x.map_coeffs(|c| c.div_int(d))
        }
        Expr::Pow(a, k, col) => {
            let x = eval::<C>(a, n)?;
            if x.degree() != 0 {
                return Err(ParseError::new(
                    *col,
                    "^",
                    "only coefficients can be raised to a power",
                ));
            }
            let c = x.coeff(0);
            let mut acc = C::one();
            for _ in 0..*k {
                acc = acc * &c;
            }
            Form::constant(n, acc)
        }
    })
}

fn finish(p: &Parser) -> Result<(), ParseError> {
    if *p.peek() == Tok::End {
        Ok(())
    } else {
        Err(p.error("unexpected trailing input"))
    }
}

/// Splits a parenthesised or bare comma-separated list into expressions.
fn parse_list(src: &str) -> Result<Vec<Expr>, ParseError> {
    let mut p = Parser::new(src)?;
    let paren = *p.peek() == Tok::LParen && {
        // A leading parenthesis opens the tuple only if a top-level comma or
        // the closing parenthesis ends the list.
        let mut depth = 0i32;
        let mut outer = false;
        for (k, t) in p.toks.iter().enumerate() {
            match t.tok {
                Tok::LParen => depth += 1,
                Tok::RParen => {
                    depth -= 1;
                    if depth == 0 {
                        outer = matches!(p.toks[k + 1].tok, Tok::End);
                        break;
                    }
                }
                _ => {}
            }
        }
        outer
    };
    if paren {
        p.bump();
    }
    let mut items = vec![p.sum()?];
    while *p.peek() == Tok::Comma {
        p.bump();
        items.push(p.sum()?);
    }
    if paren {
        p.expect(Tok::RParen)?;
    }
    finish(&p)?;
    Ok(items)
}

fn evaluate_list<C: Coefficient>(
    items: &[Expr],
    n: usize,
    degree: usize,
) -> Result<Vec<Form<C>>, ParseError> {
    items
        .iter()
        .map(|e| {
            let f = eval::<C>(e, n)?;
            if f.is_zero() {
                return Ok(Form::zero(n, degree));
            }
            if f.degree() != degree {
                return Err(ParseError::new(
                    expr_column(e),
                    f.to_string(),
                    format!("expected a {degree}-form, found a {}-form", f.degree()),
                ));
            }
            Ok(f)
        })
        .collect()
}

fn expr_column(e: &Expr) -> usize {
    match e {
        Expr::Mono(_, c)
        | Expr::Add(_, _, c)
        | Expr::Sub(_, _, c)
        | Expr::Mul(_, _, c)
        | Expr::Div(_, _, c)
        | Expr::Pow(_, _, c) => *c,
        Expr::Neg(a) => expr_column(a),
        _ => 0,
    }
}

/// Structure constants `(de¹,…,deⁿ)`; the dimension is the tuple length.
pub fn parse_constants<C: Coefficient>(src: &str) -> Result<Vec<Form<C>>, ParseError> {
    let items = parse_list(src)?;
    if items.len() > MAX_DIM {
        return Err(ParseError::new(
            1,
            "(",
            format!("at most {MAX_DIM} entries are supported"),
        ));
    }
    evaluate_list(&items, items.len(), 2)
}

/// A comma-separated list of 1-forms on an n-dimensional space.
pub fn parse_one_forms<C: Coefficient>(src: &str, n: usize) -> Result<Vec<Form<C>>, ParseError> {
    let items = parse_list(src)?;
    evaluate_list(&items, n, 1)
}

/// A single form of any degree on an n-dimensional space.
pub fn parse_form<C: Coefficient>(src: &str, n: usize) -> Result<Form<C>, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.sum()?;
    finish(&p)?;
    eval::<C>(&e, n)
}

pub fn parse_poly(src: &str) -> Result<Poly, ParseError> {
    let f = parse_form::<Poly>(src, 0)?;
    if f.degree() != 0 {
        return Err(ParseError::new(1, src, "expected a polynomial"));
    }
    Ok(f.coeff(0))
}

pub fn parse_rational(src: &str) -> Result<BigRational, ParseError> {
    parse_poly(src)?
        .as_constant()
        .ok_or_else(|| ParseError::new(1, src, "expected a rational number"))
}

/// `p=1/2,q=-3`; `-` or the empty string is the empty point.
pub fn parse_point(src: &str) -> Result<ParamPoint, ParseError> {
    let src = src.trim();
    let mut pt = ParamPoint::new();
    if src.is_empty() || src == "-" {
        return Ok(pt);
    }
    for part in src.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| ParseError::new(1, part, "expected name=value"))?;
        let p = Param::from_name(k.trim())
            .ok_or_else(|| ParseError::new(1, k.trim(), "unknown parameter"))?;
        pt = pt.with(p, parse_rational(v.trim())?);
    }
    Ok(pt)
}

/// `q != 0`, `1-q^2 > 0`, `p >= 0`, `q < 1`, `eps in {-1,0,1}`.
pub fn parse_constraint(src: &str) -> Result<Constraint, ParseError> {
    let s = src.trim();
    if let Some((lhs, rhs)) = s.split_once(" in ") {
        let p = Param::from_name(lhs.trim())
            .ok_or_else(|| ParseError::new(1, lhs.trim(), "unknown parameter"))?;
        let body = rhs.trim().trim_start_matches('{').trim_end_matches('}');
        let vals = body
            .split(',')
            .map(|v| parse_rational(v.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(Constraint::OneOf(p, vals));
    }
    for (op, rel, flip) in [
        ("!=", Relation::NonZero, false),
        (">=", Relation::NonNegative, false),
        ("<=", Relation::NonNegative, true),
        (">", Relation::Positive, false),
        ("<", Relation::Positive, true),
    ] {
        if let Some((lhs, rhs)) = s.split_once(op) {
            let diff = parse_poly(lhs)? - &parse_poly(rhs)?;
            return Ok(Constraint::Poly(if flip { -diff } else { diff }, rel));
        }
    }
    Err(ParseError::new(
        1,
        s,
        "expected a relation (!=, >, >=, <, <=) or 'in'",
    ))
}

/// Canonical text of a tuple of 2-forms.
pub fn print_constants<C: Ring + fmt::Display>(de: &[Form<C>]) -> String {
    let parts: Vec<String> = de.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

/// Rational coefficients of a Poly-valued form, when it has no parameters.
pub fn constant_form(f: &Form<Poly>) -> Option<KForm> {
    let mut out = KForm::zero(f.dim(), f.degree());
    for (m, c) in f.terms() {
        out = out.add(&KForm::from_mask(
            f.dim(),
            m,
            Scalar::from_rational(c.as_constant()?),
        ));
    }
    Some(out)
}

/// Evaluates a Poly-valued form at a point.
pub fn evaluate_form(f: &Form<Poly>, pt: &ParamPoint) -> Result<KForm, Param> {
    let mut out = KForm::zero(f.dim(), f.degree());
    for (m, c) in f.terms() {
        out = out.add(&KForm::from_mask(
            f.dim(),
            m,
            Scalar::from_rational(c.eval(pt)?),
        ));
    }
    Ok(out)
}

/// True for rationals that print without a fraction bar or sign.
pub fn is_small_natural(q: &BigRational) -> bool {
    q.is_integer() && !q.is_negative()
}
