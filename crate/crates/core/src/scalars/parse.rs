//! Shared expression syntax for scalars and tensor-algebra elements.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' ['-'] INT)?
//! atom  := INT | 'z(' INT ')' | 'x' INT | '(' expr ')'
//! ```
//!
//! `z(m)` is the primitive root ζ_m and `xN` is the N-th basis vector of V
//! (1-based). Columns in errors are 1-based character offsets.

use super::cyclotomic::{root_of_unity, CycScalar};
use super::rational::{parse_integer_literal, Rational};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(column: usize, message: impl Into<String>) -> Self {
        ParseError {
            column,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(Rational),
    Zeta(u32),
    Letter(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// divisor, column of the `/`
    Div(Box<Expr>, Box<Expr>, usize),
    /// base, exponent, column of the `^`
    Pow(Box<Expr>, i64, usize),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(String),
    Zeta,
    Letter(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((Tok::Plus, col)),
            '-' => out.push((Tok::Minus, col)),
            '*' => out.push((Tok::Star, col)),
            '/' => out.push((Tok::Slash, col)),
            '^' => out.push((Tok::Caret, col)),
            '(' => out.push((Tok::LParen, col)),
            ')' => out.push((Tok::RParen, col)),
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(chars[start..i].iter().collect()), col));
                continue;
            }
            'z' => out.push((Tok::Zeta, col)),
            'x' => {
                let start = i + 1;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let n: usize = digits
                    .parse()
                    .map_err(|_| ParseError::new(col, "expected a letter index after 'x'"))?;
                if n == 0 {
                    return Err(ParseError::new(col, "letter indices start at x1"));
                }
                out.push((Tok::Letter(n - 1), col));
                continue;
            }
            other => {
                return Err(ParseError::new(
                    col,
                    format!("unexpected character '{other}'"),
                ))
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, c)| *c)
            .unwrap_or(self.end_col)
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        match self.bump() {
            Some((t, _)) if t == want => Ok(()),
            Some((_, c)) => Err(ParseError::new(c, format!("expected {what}"))),
            None => Err(ParseError::new(self.end_col, format!("expected {what}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    let col = self.col();
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), col);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            let col = self.col();
            self.bump();
            let neg = if self.peek() == Some(&Tok::Minus) {
                self.bump();
                true
            } else {
                false
            };
            let ecol = self.col();
            match self.bump() {
                Some((Tok::Int(s), _)) => {
                    let e: i64 = s
                        .parse()
                        .map_err(|_| ParseError::new(ecol, "exponent out of range"))?;
                    return Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }, col));
                }
                _ => return Err(ParseError::new(ecol, "expected an integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let col = self.col();
        match self.bump() {
            Some((Tok::Int(s), c)) => parse_integer_literal(&s)
                .map(Expr::Int)
                .ok_or_else(|| ParseError::new(c, "bad integer literal")),
            Some((Tok::Zeta, _)) => {
                self.expect(Tok::LParen, "'(' after z")?;
                let ocol = self.col();
                let m = match self.bump() {
                    Some((Tok::Int(s), _)) => s.parse::<u32>().ok().filter(|&m| m >= 1),
                    _ => None,
                }
                .ok_or_else(|| ParseError::new(ocol, "expected a positive root order"))?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Expr::Zeta(m))
            }
            Some((Tok::Letter(i), _)) => Ok(Expr::Letter(i)),
            Some((Tok::LParen, _)) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Some((_, c)) => Err(ParseError::new(
                c,
                "expected a number, z(m), a letter or '('",
            )),
            None => Err(ParseError::new(col, "unexpected end of input")),
        }
    }
}

/// Parses an expression in the shared scalar/element syntax.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let toks = tokenize(src)?;
    let end_col = src.chars().count() + 1;
    if toks.is_empty() {
        return Err(ParseError::new(1, "empty expression"));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end_col,
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(ParseError::new(p.col(), "unexpected trailing input"));
    }
    Ok(e)
}

/// Evaluates a letter-free expression to a field element.
pub fn eval_scalar(e: &Expr) -> Result<CycScalar, ParseError> {
    Ok(match e {
        Expr::Int(r) => CycScalar::rational(r.clone()),
        Expr::Zeta(m) => root_of_unity(*m, 1),
        Expr::Letter(i) => {
            return Err(ParseError::new(
                0,
                format!("letter x{} not allowed in a scalar", i + 1),
            ))
        }
        Expr::Neg(a) => -eval_scalar(a)?,
        Expr::Add(a, b) => &eval_scalar(a)? + &eval_scalar(b)?,
        Expr::Sub(a, b) => &eval_scalar(a)? - &eval_scalar(b)?,
        Expr::Mul(a, b) => &eval_scalar(a)? * &eval_scalar(b)?,
        Expr::Div(a, b, col) => eval_scalar(a)?
            .checked_div(&eval_scalar(b)?)
            .map_err(|_| ParseError::new(*col, "division by zero"))?,
        Expr::Pow(a, k, col) => eval_scalar(a)?
            .pow(*k)
            .map_err(|_| ParseError::new(*col, "zero raised to a negative power"))?,
    })
}

/// Parses the textual scalar syntax.
pub fn parse_scalar(src: &str) -> Result<CycScalar, ParseError> {
    eval_scalar(&parse_expr(src)?)
}

impl std::str::FromStr for CycScalar {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_scalar(s)
    }
}
