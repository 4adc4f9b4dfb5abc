//! Form expressions: `<a, b, ...>`, `mat[[..], ..]`, `pfister(a, ...)`,
//! sums `+` and tensor products `*`, with an optional field suffix
//! `@ Q`, `@ Fp(p)` or `@ R`. Whitespace is ignored. `*` binds tighter
//! than `+` and both associate to the left.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;
use witt_core::{symmetrize, FieldCtx, GramMatrix, Matrix, Scalar};

/// Syntax error at a character offset (0-based) of the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Diagonal(Vec<BigRational>),
    Matrix(Vec<Vec<BigRational>>),
    Pfister(Vec<BigRational>),
    Sum(Box<Expr>, Box<Expr>),
    Tensor(Box<Expr>, Box<Expr>),
}

/// Field named by a suffix. The modulus is checked only when the expression
/// is evaluated, so that `Fp(9)` parses and then fails as an invalid field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldTag {
    Q,
    Fp(u64),
    R,
}

impl FieldTag {
    pub fn ctx(self) -> witt_core::Result<FieldCtx> {
        match self {
            FieldTag::Q => Ok(FieldCtx::Rationals),
            FieldTag::Fp(p) => FieldCtx::prime_field(p),
            FieldTag::R => Ok(FieldCtx::RealQ),
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Q => f.write_str("Q"),
            FieldTag::Fp(p) => write!(f, "Fp({p})"),
            FieldTag::R => f.write_str("R"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormExpression {
    pub expr: Expr,
    pub field: FieldTag,
}

impl FormExpression {
    /// Gram matrix over the tagged field. `mat[..]` literals are read as the
    /// coefficient matrix of a polynomial and symmetrized.
    pub fn evaluate(&self) -> witt_core::Result<GramMatrix> {
        eval(&self.expr, self.field.ctx()?)
    }
}

fn scalars(ctx: FieldCtx, xs: &[BigRational]) -> witt_core::Result<Vec<Scalar>> {
    xs.iter().map(|x| ctx.from_rational(x)).collect()
}

fn eval(e: &Expr, ctx: FieldCtx) -> witt_core::Result<GramMatrix> {
    match e {
        Expr::Diagonal(xs) => Ok(GramMatrix::diagonal(ctx, &scalars(ctx, xs)?)),
        Expr::Matrix(rows) => {
            let rows = rows.iter().map(|r| scalars(ctx, r)).collect::<witt_core::Result<_>>()?;
            symmetrize(&Matrix::from_rows(ctx, rows)?)
        }
        Expr::Pfister(xs) => Ok(witt_core::pfister(ctx, &scalars(ctx, xs)?)?.expanded.to_gram()),
        Expr::Sum(a, b) => eval(a, ctx)?.direct_sum(&eval(b, ctx)?),
        Expr::Tensor(a, b) => eval(a, ctx)?.tensor_product(&eval(b, ctx)?),
    }
}

pub fn format_scalar(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn list(xs: &[BigRational]) -> String {
    xs.iter().map(format_scalar).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Diagonal(xs) => write!(f, "<{}>", list(xs)),
            Expr::Matrix(rows) => {
                let rows: Vec<String> = rows.iter().map(|r| format!("[{}]", list(r))).collect();
                write!(f, "mat[{}]", rows.join(", "))
            }
            Expr::Pfister(xs) => write!(f, "pfister({})", list(xs)),
            Expr::Sum(a, b) => {
                // left associative: a right-hand sum needs parentheses
                if matches!(**b, Expr::Sum(..)) {
                    write!(f, "{a} + ({b})")
                } else {
                    write!(f, "{a} + {b}")
                }
            }
            Expr::Tensor(a, b) => {
                let left = if matches!(**a, Expr::Sum(..)) { format!("({a})") } else { a.to_string() };
                let right = if matches!(**b, Expr::Sum(..) | Expr::Tensor(..)) { format!("({b})") } else { b.to_string() };
                write!(f, "{left} * {right}")
            }
        }
    }
}

impl fmt::Display for FormExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ {}", self.expr, self.field)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser { chars: text.chars().collect(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.pos, message: message.into() })
    }

    fn found(&self) -> String {
        match self.chars.get(self.pos) {
            Some(c) => format!("'{c}'"),
            None => "end of input".to_string(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected '{c}', found {}", self.found()))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        let w: Vec<char> = word.chars().collect();
        if self.chars[self.pos..].starts_with(&w) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error(format!("expected a number, found {}", self.found()));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("ascii digits"))
    }

    fn scalar(&mut self) -> Result<BigRational, ParseError> {
        let negative = self.eat('-');
        let n = self.digits()?;
        let d = if self.eat('/') {
            let at = self.pos;
            let d = self.digits()?;
            if d.is_zero() {
                return Err(ParseError { position: at, message: "zero denominator".to_string() });
            }
            d
        } else {
            BigInt::from(1)
        };
        let x = BigRational::new(n, d);
        Ok(if negative { -x } else { x })
    }

    fn scalar_list(&mut self, close: char) -> Result<Vec<BigRational>, ParseError> {
        let mut xs = vec![self.scalar()?];
        while !self.eat(close) {
            self.expect(',')?;
            xs.push(self.scalar()?);
        }
        Ok(xs)
    }

    fn rows(&mut self) -> Result<Vec<Vec<BigRational>>, ParseError> {
        self.expect('[')?;
        let mut rows = Vec::new();
        loop {
            self.expect('[')?;
            rows.push(self.scalar_list(']')?);
            if self.eat(']') {
                break;
            }
            self.expect(',')?;
        }
        Ok(rows)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some('<') => {
                self.pos += 1;
                Ok(Expr::Diagonal(self.scalar_list('>')?))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            _ if self.keyword("mat") => Ok(Expr::Matrix(self.rows()?)),
            _ if self.keyword("pfister") => {
                self.expect('(')?;
                Ok(Expr::Pfister(self.scalar_list(')')?))
            }
            _ => self.error(format!("expected a form, found {}", self.found())),
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.atom()?;
        while self.eat('*') {
            e = Expr::Tensor(Box::new(e), Box::new(self.atom()?));
        }
        Ok(e)
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.product()?;
        while self.eat('+') {
            e = Expr::Sum(Box::new(e), Box::new(self.product()?));
        }
        Ok(e)
    }

    fn field(&mut self) -> Result<FieldTag, ParseError> {
        if self.keyword("Fp") {
            self.expect('(')?;
            let at = self.pos;
            let p = self.digits()?;
            self.expect(')')?;
            let p = u64::try_from(p).map_err(|_| ParseError { position: at, message: "modulus too large".to_string() })?;
            Ok(FieldTag::Fp(p))
        } else if self.keyword("Q") {
            Ok(FieldTag::Q)
        } else if self.keyword("R") {
            Ok(FieldTag::R)
        } else {
            self.error(format!("expected Q, R or Fp(p), found {}", self.found()))
        }
    }

    fn end(&mut self) -> Result<(), ParseError> {
        if self.peek().is_some() {
            return self.error(format!("unexpected {}", self.found()));
        }
        Ok(())
    }
}

/// Parse a form expression. Without a suffix the field is `Q`.
pub fn parse_form(text: &str) -> Result<FormExpression, ParseError> {
    let mut p = Parser::new(text);
    let expr = p.sum()?;
    let field = if p.eat('@') { p.field()? } else { FieldTag::Q };
    p.end()?;
    Ok(FormExpression { expr, field })
}

/// A bare field tag such as `Fp(7)`.
pub fn parse_field(text: &str) -> Result<FieldTag, ParseError> {
    let mut p = Parser::new(text);
    let f = p.field()?;
    p.end()?;
    Ok(f)
}

/// A matrix literal `[[a, b], [c, d]]`, optionally prefixed by `mat`.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<BigRational>>, ParseError> {
    let mut p = Parser::new(text);
    p.keyword("mat");
    let rows = p.rows()?;
    p.end()?;
    Ok(rows)
}

/// A vector literal `[a, b, ...]`.
pub fn parse_vector(text: &str) -> Result<Vec<BigRational>, ParseError> {
    let mut p = Parser::new(text);
    p.expect('[')?;
    let v = p.scalar_list(']')?;
    p.end()?;
    Ok(v)
}

/// A single scalar `n` or `n/d`.
pub fn parse_scalar(text: &str) -> Result<BigRational, ParseError> {
    let mut p = Parser::new(text);
    let x = p.scalar()?;
    p.end()?;
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn diagonal_over_q() {
        let f = parse_form("<1,-1> @ Q").unwrap();
        assert_eq!(f.expr, Expr::Diagonal(vec![q(1, 1), q(-1, 1)]));
        assert_eq!(f.field, FieldTag::Q);
    }

    #[test]
    fn unclosed_bracket_points_at_the_suffix() {
        let e = parse_form("<1,2 @ Q").unwrap_err();
        assert_eq!(e.position, 5);
    }

    #[test]
    fn pfister_expands_to_four_dimensions() {
        let g = parse_form("pfister(-1,-1) @ R").unwrap().evaluate().unwrap();
        assert_eq!(g.dim(), 4);
        assert_eq!(g.to_string(), "<1, -1, -1, 1>");
    }

    #[test]
    fn precedence_and_parentheses() {
        let a = parse_form("<1> + <2> * <3>").unwrap();
        let b = parse_form("<1> + (<2> * <3>)").unwrap();
        let c = parse_form("(<1> + <2>) * <3>").unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(c.evaluate().unwrap().to_string(), "<3, 6>");
    }

    #[test]
    fn display_reparses() {
        for t in ["<1> + (<2> + <3>) @ Fp(7)", "<1/2> * (<3> * <4>) @ R", "mat[[1, 2], [2, -5/3]] + pfister(2) @ Q"] {
            let f = parse_form(t).unwrap();
            assert_eq!(parse_form(&f.to_string()).unwrap(), f, "{t}");
        }
    }

    #[test]
    fn matrices_are_symmetrized() {
        let g = parse_form("mat[[1, 2], [0, 1]]").unwrap().evaluate().unwrap();
        assert_eq!(g.to_string(), "[[1, 1], [1, 1]]");
    }

    #[test]
    fn field_and_syntax_errors() {
        assert!(parse_form("<1> @ Fp(9)").unwrap().evaluate().is_err());
        assert_eq!(parse_form("<1/0>").unwrap_err().position, 3);
        assert_eq!(parse_form("<1> @ Z").unwrap_err().position, 6);
        assert_eq!(parse_form("<1> <2>").unwrap_err().position, 4);
        assert!(parse_form("<2/3> @ Fp(3)").unwrap().evaluate().is_err());
    }

    #[test]
    fn matrix_and_vector_literals() {
        assert_eq!(parse_matrix("[[3/5,4/5],[-4/5,3/5]]").unwrap()[1][0], q(-4, 5));
        assert_eq!(parse_vector("[1, -2]").unwrap(), vec![q(1, 1), q(-2, 1)]);
        assert_eq!(parse_scalar(" -7/14 ").unwrap(), q(-1, 2));
    }
}
