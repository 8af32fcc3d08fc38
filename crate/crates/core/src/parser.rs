//! Recursive-descent parser for polynomial equations.
//!
//! ```text
//! equation := expr "=" expr ;
//! expr     := ["-"] term (("+"|"-") term)* ;
//! term     := factor (("*")? factor)* ;
//! factor   := integer | variable ("^" integer)? ;
//! variable := letter (letter|digit)* ;
//! integer  := digit+ ;
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::model::{Equation, NamedTerm, Polynomial};

/// What the parser was looking for when it failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expected {
    Term,
    Operator,
    Equals,
    Exponent,
    EndOfInput,
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expected::Term => "a term",
            Expected::Operator => "an operator",
            Expected::Equals => "`=`",
            Expected::Exponent => "an integer exponent",
            Expected::EndOfInput => "end of input",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("parse error at offset {position}: {message} (expected {expected})")]
pub struct ParseError {
    /// Character offset into the input.
    pub position: usize,
    pub message: String,
    pub expected: Expected,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Equals,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '=' => Tok::Equals,
            c if c.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == '.' || chars[i] == '/') {
                    return Err(ParseError {
                        position: i,
                        message: "coefficients must be integers".into(),
                        expected: Expected::Operator,
                    });
                }
                let digits: String = chars[start..i].iter().collect();
                out.push(Token {
                    tok: Tok::Int(digits.parse().expect("digit run")),
                    pos: start,
                });
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                out.push(Token {
                    tok: Tok::Ident(name),
                    pos: start,
                });
                continue;
            }
            '/' | '.' => {
                return Err(ParseError {
                    position: i,
                    message: "division and non-integer coefficients are not supported".into(),
                    expected: Expected::Operator,
                })
            }
            other => {
                return Err(ParseError {
                    position: i,
                    message: format!("unexpected character `{other}`"),
                    expected: Expected::Term,
                })
            }
        };
        i += 1;
        out.push(Token { tok, pos: start });
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.at).map(|t| &t.tok)
    }

    fn pos(&self) -> usize {
        match self.tokens.get(self.at) {
            Some(t) => t.pos,
            None => self.len.saturating_sub(1),
        }
    }

    fn err(&self, message: impl Into<String>, expected: Expected) -> ParseError {
        ParseError {
            position: self.pos(),
            message: message.into(),
            expected,
        }
    }

    fn expr(&mut self) -> Result<Vec<NamedTerm>, ParseError> {
        let mut terms = Vec::new();
        let mut negate = false;
        if self.peek() == Some(&Tok::Minus) {
            negate = true;
            self.at += 1;
        }
        loop {
            let (c, f) = self.term()?;
            terms.push((if negate { -c } else { c }, f));
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                _ => return Ok(terms),
            }
            self.at += 1;
        }
    }

    fn term(&mut self) -> Result<NamedTerm, ParseError> {
        let mut coeff = BigInt::one();
        let mut factors = Vec::new();
        self.factor(&mut coeff, &mut factors)?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    self.factor(&mut coeff, &mut factors)?;
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) => self.factor(&mut coeff, &mut factors)?,
                _ => return Ok((coeff, factors)),
            }
        }
    }

    fn factor(
        &mut self,
        coeff: &mut BigInt,
        factors: &mut Vec<(String, u32)>,
    ) -> Result<(), ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.at += 1;
                if self.peek() == Some(&Tok::Caret) {
                    return Err(self.err(
                        "powers of integer literals are not supported",
                        Expected::Operator,
                    ));
                }
                *coeff *= v;
                Ok(())
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                let mut exp = 1u32;
                if self.peek() == Some(&Tok::Caret) {
                    self.at += 1;
                    exp = self.exponent()?;
                }
                factors.push((name, exp));
                Ok(())
            }
            Some(Tok::Minus) => Err(self.err(
                "unary minus is only allowed at the head of a side",
                Expected::Term,
            )),
            _ => Err(self.err("expected an integer or a variable", Expected::Term)),
        }
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                let e: u32 = u32::try_from(&v)
                    .map_err(|_| self.err("exponent is too large", Expected::Exponent))?;
                if e == 0 {
                    return Err(self.err("exponents must be at least 1", Expected::Exponent));
                }
                self.at += 1;
                Ok(e)
            }
            Some(Tok::Minus) => {
                Err(self.err("negative exponents are not allowed", Expected::Exponent))
            }
            Some(Tok::Ident(_)) => {
                Err(self.err("symbolic exponents are not allowed", Expected::Exponent))
            }
            _ => Err(self.err("missing exponent", Expected::Exponent)),
        }
    }
}

/// Parses `lhs = rhs` into the normalized equation `lhs - rhs = 0`.
pub fn parse(text: &str) -> Result<Equation, ParseError> {
    let len = text.chars().count();
    if text.trim().is_empty() {
        return Err(ParseError {
            position: 0,
            message: "empty equation".into(),
            expected: Expected::Term,
        });
    }
    let tokens = lex(text)?;
    let mut p = Parser { tokens, at: 0, len };
    let lhs = p.expr()?;
    match p.peek() {
        Some(Tok::Equals) => p.at += 1,
        None => return Err(p.err("missing `=`", Expected::Equals)),
        Some(_) => return Err(p.err("unexpected token", Expected::Equals)),
    }
    let rhs = p.expr()?;
    if let Some(tok) = p.tokens.get(p.at) {
        let message = if tok.tok == Tok::Equals {
            "more than one `=`"
        } else {
            "unexpected trailing input"
        };
        return Err(p.err(message, Expected::EndOfInput));
    }
    let lhs_text = text.split('=').next().map(|s| s.trim().to_string());
    let rhs_text = text.split_once('=').map(|(_, r)| r.trim().to_string());
    let poly =
        Polynomial::from_named_terms(lhs.into_iter().chain(rhs.into_iter().map(|(c, f)| (-c, f))));
    let mut eq = Equation::new(poly);
    eq.source_lhs = lhs_text;
    eq.source_rhs = rhs_text;
    Ok(eq)
}

/// Canonical text for an equation; `parse(&pretty(e)) == e`.
pub fn pretty(eq: &Equation) -> String {
    eq.to_string()
}
