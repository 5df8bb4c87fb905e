use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ParseError, ParseErrorKind};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Num(BigRational),
    Ident(String),
    Punct(char),
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

const PUNCT: &str = "+-*/^()[]{},";

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() || c == '·' {
            // a middle dot is accepted as an explicit product sign
            if c == '·' {
                out.push(Token { tok: Tok::Punct('*'), line: tl, col: tc });
            }
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            col += i - start;
            let value = decimal_to_rational(&lit).ok_or(ParseError {
                line: tl,
                col: tc,
                kind: ParseErrorKind::Lexical(format!("malformed number `{lit}`")),
                expected: vec!["number".into()],
            })?;
            out.push(Token { tok: Tok::Num(value), line: tl, col: tc });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: tl, col: tc });
            continue;
        }
        if c == '⁻' && chars.get(i + 1) == Some(&'¹') {
            // K⁻¹ written with superscripts
            out.push(Token { tok: Tok::Punct('^'), line: tl, col: tc });
            out.push(Token { tok: Tok::Punct('-'), line: tl, col: tc });
            out.push(Token { tok: Tok::Num(BigRational::one()), line: tl, col: tc + 1 });
            i += 2;
            col += 2;
            continue;
        }
        if PUNCT.contains(c) {
            out.push(Token { tok: Tok::Punct(c), line: tl, col: tc });
            i += 1;
            col += 1;
            continue;
        }
        return Err(ParseError {
            line: tl,
            col: tc,
            kind: ParseErrorKind::Lexical(format!("unexpected character `{c}`")),
            expected: vec!["generator, scalar, operator or bracket".into()],
        });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

fn decimal_to_rational(lit: &str) -> Option<BigRational> {
    let mut parts = lit.split('.');
    let int_part = parts.next()?;
    let frac_part = parts.next();
    if parts.next().is_some() {
        return None;
    }
    let int_val: BigInt = if int_part.is_empty() { BigInt::zero() } else { int_part.parse().ok()? };
    match frac_part {
        None | Some("") => Some(BigRational::from_integer(int_val)),
        Some(frac) => {
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            let frac_val: BigInt = frac.parse().ok()?;
            Some(BigRational::new(int_val * &scale + frac_val, scale))
        }
    }
}
