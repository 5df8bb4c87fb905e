//! Expression front-end: tokenizer, recursive-descent parser and printer for
//! algebra expressions in `E`, `F`, `K`, `K^-1`, `H` with rational-function
//! scalars in `q`.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (['*'] factor)*          juxtaposition multiplies
//! factor := atom ('^' exponent)?
//! atom   := 'E' | 'F' | 'K' | 'Kinv' | 'H' | 'q' | number
//!         | '{' scalar '}' | '(' expr ')' | '[' expr ',' expr ']'
//! ```
//!
//! Identifiers made only of generator letters (`KE`, `EFK`) are read as words.

mod lexer;

use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::scalars::QScalar;
use lexer::{tokenize, Tok, Token};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical(String),
    Syntax(String),
    NonIntegerExponent,
    Semantic(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {} (expected one of: {})", describe_kind(.kind), .expected.join(", "))]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
    pub expected: Vec<String>,
}

fn describe_kind(kind: &ParseErrorKind) -> String {
    match kind {
        ParseErrorKind::Lexical(m) => format!("lexical error: {m}"),
        ParseErrorKind::Syntax(m) => format!("syntax error: {m}"),
        ParseErrorKind::NonIntegerExponent => "non-integer exponent".to_string(),
        ParseErrorKind::Semantic(m) => m.clone(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    E,
    F,
    K,
    Kinv,
    H,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generator::E => "E",
            Generator::F => "F",
            Generator::K => "K",
            Generator::Kinv => "Kinv",
            Generator::H => "H",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Gen(Generator),
    Scalar(QScalar),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Bracket(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn gen(g: Generator) -> Self {
        Expr::Gen(g)
    }

    pub fn scalar(s: QScalar) -> Self {
        Expr::Scalar(s)
    }

    pub fn mul(a: Expr, b: Expr) -> Self {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn add(a: Expr, b: Expr) -> Self {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Self {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, n: i64) -> Self {
        Expr::Pow(Box::new(a), n)
    }

    pub fn bracket(a: Expr, b: Expr) -> Self {
        Expr::Bracket(Box::new(a), Box::new(b))
    }

    /// Whether the generator `H` occurs anywhere in the tree.
    pub fn mentions_h(&self) -> bool {
        match self {
            Expr::Gen(g) => *g == Generator::H,
            Expr::Scalar(_) => false,
            Expr::Neg(a) | Expr::Pow(a, _) => a.mentions_h(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Bracket(a, b) => {
                a.mentions_h() || b.mentions_h()
            }
        }
    }

    fn is_invertible_base(&self) -> bool {
        matches!(self, Expr::Gen(Generator::K) | Expr::Gen(Generator::Kinv) | Expr::Scalar(_))
    }
}

/// Parses an algebra expression.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

/// Parses a rational-function literal in `q`, e.g. `(q^2+1)/(q-1)`.
pub fn parse_qscalar(text: &str) -> Result<QScalar, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let s = p.scalar_expr()?;
    p.expect_eof()?;
    Ok(s)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn at_punct(&self, c: char) -> bool {
        self.peek().tok == Tok::Punct(c)
    }

    fn error(&self, kind: ParseErrorKind, expected: &[&str]) -> ParseError {
        let t = self.peek();
        ParseError { line: t.line, col: t.col, kind, expected: expected.iter().map(|s| s.to_string()).collect() }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        self.error(ParseErrorKind::Syntax(format!("unexpected {}", self.peek().tok.describe())), expected)
    }

    fn expect_punct(&mut self, c: char) -> Result<(), ParseError> {
        if self.at_punct(c) {
            self.bump();
            Ok(())
        } else {
            let want = format!("`{c}`");
            Err(self.unexpected(&[&want]))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected(&["`+`", "`-`", "`*`", "end of input"]))
        }
    }

    fn starts_atom(&self) -> bool {
        match &self.peek().tok {
            Tok::Num(_) | Tok::Ident(_) => true,
            Tok::Punct(c) => matches!(c, '(' | '[' | '{'),
            Tok::Eof => false,
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = if self.at_punct('-') {
            self.bump();
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            if self.at_punct('+') {
                self.bump();
                lhs = Expr::add(lhs, self.term()?);
            } else if self.at_punct('-') {
                self.bump();
                lhs = Expr::sub(lhs, self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            if self.at_punct('*') {
                self.bump();
                lhs = Expr::mul(lhs, self.factor()?);
            } else if self.starts_atom() {
                lhs = Expr::mul(lhs, self.factor()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let word = matches!(&self.peek().tok, Tok::Ident(s) if s.chars().count() > 1 && s != "Kinv");
        let base = self.atom()?;
        if !self.at_punct('^') {
            return Ok(base);
        }
        if word {
            // in a word like `KE^2` the power binds to the last letter only
            if let Expr::Mul(head, last) = base {
                let caret = self.peek().clone();
                let n = self.exponent_after_caret()?;
                if n < 0 && !last.is_invertible_base() {
                    return Err(negative_exponent_error(&caret));
                }
                return Ok(Expr::mul(*head, Expr::pow(*last, n)));
            }
        }
        let caret = self.peek().clone();
        let n = self.exponent_after_caret()?;
        if n < 0 && !base.is_invertible_base() {
            return Err(negative_exponent_error(&caret));
        }
        Ok(Expr::pow(base, n))
    }

    fn exponent_after_caret(&mut self) -> Result<i64, ParseError> {
        self.expect_punct('^')?;
        self.exponent()
    }

    /// `['-'] int` or `'(' ['-'] int ['/' int] ')'`.
    fn exponent(&mut self) -> Result<i64, ParseError> {
        let paren = self.at_punct('(');
        if paren {
            self.bump();
        }
        let neg = self.at_punct('-');
        if neg {
            self.bump();
        }
        let start = self.peek().clone();
        let Tok::Num(mut value) = self.bump().tok else {
            self.pos -= 1;
            return Err(self.unexpected(&["integer exponent"]));
        };
        if paren && self.at_punct('/') {
            self.bump();
            let Tok::Num(d) = self.bump().tok else {
                self.pos -= 1;
                return Err(self.unexpected(&["integer"]));
            };
            if d.is_zero() {
                return Err(ParseError {
                    line: start.line,
                    col: start.col,
                    kind: ParseErrorKind::Semantic("division by zero in exponent".into()),
                    expected: vec![],
                });
            }
            value /= d;
        }
        if paren {
            self.expect_punct(')')?;
        }
        if !value.is_integer() {
            return Err(ParseError {
                line: start.line,
                col: start.col,
                kind: ParseErrorKind::NonIntegerExponent,
                expected: vec!["integer exponent".into()],
            });
        }
        let n = value.to_integer().to_i64().filter(|n| n.abs() <= 1_000_000).ok_or(ParseError {
            line: start.line,
            col: start.col,
            kind: ParseErrorKind::Semantic("exponent out of range".into()),
            expected: vec!["integer with |n| <= 1000000".into()],
        })?;
        Ok(if neg { -n } else { n })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Num(n) => {
                self.bump();
                Ok(Expr::Scalar(QScalar::rational(n)))
            }
            Tok::Ident(name) => {
                self.bump();
                ident_to_expr(&name).ok_or_else(|| ParseError {
                    line: t.line,
                    col: t.col,
                    kind: ParseErrorKind::Syntax(format!("unknown identifier `{name}`")),
                    expected: vec!["E".into(), "F".into(), "K".into(), "Kinv".into(), "H".into(), "q".into()],
                })
            }
            Tok::Punct('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_punct(')')?;
                Ok(e)
            }
            Tok::Punct('[') => {
                self.bump();
                let a = self.expr()?;
                self.expect_punct(',')?;
                let b = self.expr()?;
                self.expect_punct(']')?;
                Ok(Expr::bracket(a, b))
            }
            Tok::Punct('{') => {
                self.bump();
                let s = self.scalar_expr()?;
                self.expect_punct('}')?;
                Ok(Expr::Scalar(s))
            }
            _ => Err(self.unexpected(&["E", "F", "K", "Kinv", "H", "scalar", "`(`", "`[`", "`{`"])),
        }
    }

    fn scalar_expr(&mut self) -> Result<QScalar, ParseError> {
        let mut acc = if self.at_punct('-') {
            self.bump();
            -self.scalar_term()?
        } else {
            self.scalar_term()?
        };
        loop {
            if self.at_punct('+') {
                self.bump();
                acc = &acc + &self.scalar_term()?;
            } else if self.at_punct('-') {
                self.bump();
                acc = &acc - &self.scalar_term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn scalar_term(&mut self) -> Result<QScalar, ParseError> {
        let mut acc = self.scalar_pow()?;
        loop {
            if self.at_punct('*') {
                self.bump();
                acc = &acc * &self.scalar_pow()?;
            } else if self.at_punct('/') {
                self.bump();
                let at = self.peek().clone();
                let d = self.scalar_pow()?;
                if d.is_zero() {
                    return Err(ParseError {
                        line: at.line,
                        col: at.col,
                        kind: ParseErrorKind::Semantic("division by zero".into()),
                        expected: vec!["nonzero divisor".into()],
                    });
                }
                acc = &acc / &d;
            } else if matches!(self.peek().tok, Tok::Num(_) | Tok::Ident(_)) || self.at_punct('(') {
                acc = &acc * &self.scalar_pow()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn scalar_pow(&mut self) -> Result<QScalar, ParseError> {
        let base = self.scalar_atom()?;
        if !self.at_punct('^') {
            return Ok(base);
        }
        let caret = self.bump();
        let n = self.exponent()?;
        base.pow(n).ok_or(ParseError {
            line: caret.line,
            col: caret.col,
            kind: ParseErrorKind::Semantic("zero raised to a negative power".into()),
            expected: vec![],
        })
    }

    fn scalar_atom(&mut self) -> Result<QScalar, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Num(n) => {
                self.bump();
                Ok(QScalar::rational(n))
            }
            Tok::Ident(ref name) if name == "q" => {
                self.bump();
                Ok(QScalar::q())
            }
            Tok::Punct('(') => {
                self.bump();
                let s = self.scalar_expr()?;
                self.expect_punct(')')?;
                Ok(s)
            }
            _ => Err(self.unexpected(&["number", "q", "`(`"])),
        }
    }
}

fn negative_exponent_error(caret: &Token) -> ParseError {
    ParseError {
        line: caret.line,
        col: caret.col,
        kind: ParseErrorKind::Semantic("negative exponent on a non-invertible element".into()),
        expected: vec!["nonnegative exponent".into()],
    }
}

fn ident_to_expr(name: &str) -> Option<Expr> {
    let single = |c: char| match c {
        'E' => Some(Expr::Gen(Generator::E)),
        'F' => Some(Expr::Gen(Generator::F)),
        'K' => Some(Expr::Gen(Generator::K)),
        'H' => Some(Expr::Gen(Generator::H)),
        'q' => Some(Expr::Scalar(QScalar::q())),
        _ => None,
    };
    if name == "Kinv" {
        return Some(Expr::Gen(Generator::Kinv));
    }
    let mut letters = name.chars().map(single);
    let first = letters.next()??;
    letters.try_fold(first, |acc, g| Some(Expr::mul(acc, g?)))
}

// Printing. Every form re-parses to the same tree.

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Prec {
    Sum,
    Product,
    Power,
    Atom,
}

fn prec_of(e: &Expr) -> Prec {
    match e {
        Expr::Add(..) | Expr::Sub(..) | Expr::Neg(..) => Prec::Sum,
        Expr::Mul(..) => Prec::Product,
        Expr::Pow(..) => Prec::Power,
        _ => Prec::Atom,
    }
}

fn write_at(e: &Expr, min: Prec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if prec_of(e) < min {
        write!(f, "(")?;
        write_expr(e, f)?;
        write!(f, ")")
    } else {
        write_expr(e, f)
    }
}

fn write_expr(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Gen(g) => write!(f, "{g}"),
        Expr::Scalar(s) => write!(f, "{{{s}}}"),
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            write_expr(a, f)?;
            f.write_str(if matches!(e, Expr::Add(..)) { " + " } else { " - " })?;
            write_at(b, Prec::Product, f)
        }
        Expr::Neg(a) => {
            write!(f, "-")?;
            write_at(a, Prec::Product, f)
        }
        Expr::Mul(a, b) => {
            write_at(a, Prec::Product, f)?;
            write!(f, "*")?;
            write_at(b, Prec::Power, f)
        }
        Expr::Pow(a, n) => {
            write_at(a, Prec::Atom, f)?;
            write!(f, "^{n}")
        }
        Expr::Bracket(a, b) => {
            write!(f, "[")?;
            write_expr(a, f)?;
            write!(f, ", ")?;
            write_expr(b, f)?;
            write!(f, "]")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_split_into_generators() {
        let e = parse_expr("KE").unwrap();
        assert_eq!(e, Expr::mul(Expr::gen(Generator::K), Expr::gen(Generator::E)));
    }

    #[test]
    fn power_in_word_binds_to_last_letter() {
        let e = parse_expr("KE^2").unwrap();
        assert_eq!(e, Expr::mul(Expr::gen(Generator::K), Expr::pow(Expr::gen(Generator::E), 2)));
    }

    #[test]
    fn bracket_node() {
        let e = parse_expr("[E,F]").unwrap();
        assert_eq!(e, Expr::bracket(Expr::gen(Generator::E), Expr::gen(Generator::F)));
    }

    #[test]
    fn fractional_exponent_rejected() {
        let err = parse_expr("E^(1/2)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::NonIntegerExponent);
        assert_eq!((err.line, err.col), (1, 4));
    }

    #[test]
    fn negative_exponent_only_on_invertibles() {
        assert!(parse_expr("K^-1").is_ok());
        assert!(parse_expr("{q}^-2*E").is_ok());
        assert!(matches!(parse_expr("E^-1").unwrap_err().kind, ParseErrorKind::Semantic(_)));
    }

    #[test]
    fn errors_carry_position_and_expectations() {
        let err = parse_expr("E +\n  * F").unwrap_err();
        assert_eq!((err.line, err.col), (2, 3));
        assert!(!err.expected.is_empty());
        let lex = parse_expr("E $ F").unwrap_err();
        assert!(matches!(lex.kind, ParseErrorKind::Lexical(_)));
    }

    #[test]
    fn scalar_literals() {
        let s = parse_qscalar("(q^2+1)/(q-1)").unwrap();
        assert_eq!(s.to_string(), "(q^2 + 1)/(q - 1)");
        assert_eq!(parse_qscalar("q^-1").unwrap(), QScalar::q_pow(-1));
        assert!(parse_qscalar("1/(q-q)").is_err());
        let e = parse_expr("{(q^2+1)/(q-1)}*E").unwrap();
        assert_eq!(e, Expr::mul(Expr::scalar(s), Expr::gen(Generator::E)));
    }

    #[test]
    fn printer_roundtrips_awkward_shapes() {
        for src in ["-E*F + K", "E - (-F)", "(E + F)*(E - F)", "(E^2)^3", "-(E + F)", "[E + F, K^-1]*E", "q^2*E*K"] {
            let a = parse_expr(src).unwrap();
            let b = parse_expr(&a.to_string()).unwrap();
            assert_eq!(a, b, "{src} printed as {a}");
        }
    }
}
