//! Recursive descent parser for vector-field expressions such as
//! `exp(x1)*(2*d1 - d2) + 1/2*i*x2^3*d2`.
//!
//! Signs may lead a sum or a linear form, parentheses may group any sum,
//! and products distribute over them. The literal `0` is the zero field.

use std::fmt;

use liefield_core::{ExpPoly, GaussianRational, Rational, VectorField};
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    IndexOutOfRange { index: usize, dim: usize },
    NonRational(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::Syntax(m) => write!(f, "syntax error: {}", m),
            ParseErrorKind::IndexOutOfRange { index, dim } => {
                write!(f, "index {} out of range for dimension {}", index, dim)
            }
            ParseErrorKind::NonRational(s) => write!(f, "non-rational literal `{}`", s),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    X(usize),
    D(usize),
    I,
    Exp,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "`{}`", n),
            Tok::X(k) => write!(f, "`x{}`", k),
            Tok::D(k) => write!(f, "`d{}`", k),
            Tok::I => f.write_str("`i`"),
            Tok::Exp => f.write_str("`exp`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err<T>(line: usize, column: usize, kind: ParseErrorKind) -> Result<T, ParseError> {
    Err(ParseError { line, column, kind })
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let (l0, c0) = (line, column);
        let advance = |k: &mut usize, column: &mut usize, n: usize| {
            *k += n;
            *column += n;
        };
        if c == '\n' {
            k += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(&mut k, &mut column, 1);
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
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, line: l0, column: c0 });
            advance(&mut k, &mut column, 1);
            continue;
        }
        if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            if k < chars.len() && (chars[k] == '.' || chars[k] == 'e' && chars.get(k + 1).is_some_and(|c| c.is_ascii_digit())) {
                while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '.') {
                    k += 1;
                }
                let lit: String = chars[start..k].iter().collect();
                return err(l0, c0, ParseErrorKind::NonRational(lit));
            }
            let digits: String = chars[start..k].iter().collect();
            column += k - start;
            out.push(Spanned { tok: Tok::Int(digits.parse().expect("digits")), line: l0, column: c0 });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_alphabetic() {
                k += 1;
            }
            let word: String = chars[start..k].iter().collect();
            let dstart = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let digits: String = chars[dstart..k].iter().collect();
            column += k - start;
            let index = || -> Result<usize, ParseError> {
                match digits.parse::<usize>() {
                    Ok(n) if n >= 1 => Ok(n),
                    _ => err(l0, c0, ParseErrorKind::Syntax(format!("`{}` needs an index of at least 1", word))),
                }
            };
            let tok = match word.as_str() {
                "x" => Tok::X(index()?),
                "d" => Tok::D(index()?),
                "i" if digits.is_empty() => Tok::I,
                "exp" if digits.is_empty() => Tok::Exp,
                "sqrt" | "pi" | "e" | "log" | "sin" | "cos" => {
                    return err(l0, c0, ParseErrorKind::NonRational(format!("{}{}", word, digits)))
                }
                _ => return err(l0, c0, ParseErrorKind::Syntax(format!("unknown symbol `{}{}`", word, digits))),
            };
            out.push(Spanned { tok, line: l0, column: c0 });
            continue;
        }
        return err(l0, c0, ParseErrorKind::Syntax(format!("unexpected character `{}`", c)));
    }
    out.push(Spanned { tok: Tok::End, line, column });
    Ok(out)
}

/// A partially parsed value: either a function or a field.
#[derive(Debug, Clone)]
enum Value {
    Scalar(ExpPoly),
    Field(VectorField),
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.column)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (l, c) = self.here();
        err(l, c, ParseErrorKind::Syntax(msg.into()))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected {}, found {}", tok, self.peek()))
        }
    }

    fn check_index(&self, k: usize) -> Result<usize, ParseError> {
        if k > self.dim {
            let (l, c) = self.here();
            return err(l, c, ParseErrorKind::IndexOutOfRange { index: k, dim: self.dim });
        }
        Ok(k - 1)
    }

    fn sum(&mut self) -> Result<Value, ParseError> {
        let mut negative = false;
        if matches!(self.peek(), Tok::Plus | Tok::Minus) {
            negative = self.bump() == Tok::Minus;
        }
        let mut acc = self.term()?;
        if negative {
            acc = neg(acc);
        }
        while matches!(self.peek(), Tok::Plus | Tok::Minus) {
            let (l, c) = self.here();
            let minus = self.bump() == Tok::Minus;
            let mut t = self.term()?;
            if minus {
                t = neg(t);
            }
            acc = match (acc, t) {
                (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(&a + &b),
                (Value::Field(a), Value::Field(b)) => Value::Field(a.try_add(&b).expect("same dimension")),
                (Value::Scalar(a), Value::Field(b)) | (Value::Field(b), Value::Scalar(a)) if a.is_zero() => Value::Field(b),
                _ => return err(l, c, ParseErrorKind::Syntax("every term needs exactly one direction factor".into())),
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let (l, c) = self.here();
            let f = self.factor()?;
            acc = match (acc, f) {
                (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(&a * &b),
                (Value::Scalar(a), Value::Field(v)) | (Value::Field(v), Value::Scalar(a)) => {
                    Value::Field(v.mul_function(&a).expect("same dimension"))
                }
                (Value::Field(_), Value::Field(_)) => {
                    return err(l, c, ParseErrorKind::Syntax("a term may hold only one direction factor".into()))
                }
            };
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Value, ParseError> {
        let n = self.dim;
        match self.peek().clone() {
            Tok::Int(_) => {
                let q = self.rational()?;
                Ok(Value::Scalar(ExpPoly::constant(n, GaussianRational::real(q))))
            }
            Tok::I => {
                self.bump();
                Ok(Value::Scalar(ExpPoly::constant(n, GaussianRational::i())))
            }
            Tok::X(k) => {
                let i = self.check_index(k)?;
                self.bump();
                let mut p = ExpPoly::var(n, i);
                if *self.peek() == Tok::Caret {
                    self.bump();
                    let e = self.natural()?;
                    p = (0..e).fold(ExpPoly::one(n), |acc, _| &acc * &p);
                }
                Ok(Value::Scalar(p))
            }
            Tok::D(k) => {
                let j = self.check_index(k)?;
                self.bump();
                Ok(Value::Field(VectorField::coordinate(n, j)))
            }
            Tok::Exp => {
                self.bump();
                self.expect(Tok::LParen)?;
                let freq = self.linform()?;
                self.expect(Tok::RParen)?;
                Ok(Value::Scalar(ExpPoly::exp_linear(freq)))
            }
            Tok::LParen => {
                self.bump();
                let v = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(v)
            }
            other => self.fail(format!("expected a factor, found {}", other)),
        }
    }

    fn natural(&mut self) -> Result<u32, ParseError> {
        match self.peek().clone() {
            Tok::Int(v) => {
                let Ok(e) = u32::try_from(&v) else {
                    return self.fail("exponent too large");
                };
                self.bump();
                Ok(e)
            }
            other => self.fail(format!("expected a natural number, found {}", other)),
        }
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let Tok::Int(num) = self.peek().clone() else {
            return self.fail(format!("expected a number, found {}", self.peek()));
        };
        self.bump();
        // `a/b` only when a number follows, so `x1/` stays an error.
        if *self.peek() == Tok::Slash {
            self.bump();
            let Tok::Int(den) = self.peek().clone() else {
                return self.fail(format!("expected a denominator, found {}", self.peek()));
            };
            if den.is_zero() {
                return self.fail("zero denominator");
            }
            self.bump();
            return Ok(Rational::new(num, den));
        }
        Ok(Rational::from_integer(num))
    }

    fn linform(&mut self) -> Result<Vec<Rational>, ParseError> {
        let mut freq = vec![Rational::zero(); self.dim];
        let mut first = true;
        loop {
            let mut sign = Rational::one();
            match self.peek() {
                Tok::Plus | Tok::Minus => {
                    if self.bump() == Tok::Minus {
                        sign = -sign;
                    }
                }
                _ if first => {}
                _ => break,
            }
            first = false;
            let mut q = Rational::one();
            if matches!(self.peek(), Tok::Int(_)) {
                q = self.rational()?;
                self.expect(Tok::Star)?;
            }
            let Tok::X(k) = self.peek().clone() else {
                return self.fail(format!("expected a variable in the exponent, found {}", self.peek()));
            };
            let i = self.check_index(k)?;
            self.bump();
            freq[i] += sign * q;
        }
        Ok(freq)
    }
}

fn neg(v: Value) -> Value {
    match v {
        Value::Scalar(p) => Value::Scalar(-&p),
        Value::Field(f) => Value::Field(f.neg()),
    }
}

/// Parses `text` as a vector field on `C^dim`.
pub fn parse_field(text: &str, dim: usize) -> Result<VectorField, ParseError> {
    let toks = tokenize(text)?;
    if dim == 0 {
        return err(1, 1, ParseErrorKind::Syntax("dimension must be at least 1".into()));
    }
    let mut p = Parser { toks, pos: 0, dim };
    let v = p.sum()?;
    if *p.peek() != Tok::End {
        return p.fail(format!("unexpected {}", p.peek()));
    }
    match v {
        Value::Field(f) => Ok(f),
        Value::Scalar(s) if s.is_zero() => Ok(VectorField::zero(dim)),
        Value::Scalar(_) => err(1, 1, ParseErrorKind::Syntax("expression has no direction factor".into())),
    }
}

/// Largest `x`/`d` index mentioned, used when no dimension is given.
pub fn max_index(text: &str) -> Result<usize, ParseError> {
    Ok(tokenize(text)?
        .iter()
        .filter_map(|t| match t.tok {
            Tok::X(k) | Tok::D(k) => Some(k),
            _ => None,
        })
        .max()
        .unwrap_or(1))
}
