//! Word-syntax parser for free-algebra elements: sums of `*`-joined factors,
//! where a factor is a declared generator (primes allowed, e.g. `x'`), an
//! integer or `n/d` via constant division, or a parenthesized subexpression,
//! optionally raised to a power.

use super::{FreeAlgebra, FreeElement, FreeError};
use crate::scalar::Rat;
use num_traits::One;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Ident(String),
    Number(Rat),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, FreeError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push((i, Token::Plus));
                i += 1;
            }
            '-' => {
                tokens.push((i, Token::Minus));
                i += 1;
            }
            '*' => {
                tokens.push((i, Token::Star));
                i += 1;
            }
            '/' => {
                tokens.push((i, Token::Slash));
                i += 1;
            }
            '^' => {
                tokens.push((i, Token::Caret));
                i += 1;
            }
            '(' => {
                tokens.push((i, Token::LParen));
                i += 1;
            }
            ')' => {
                tokens.push((i, Token::RParen));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let value: Rat = text[start..i]
                    .parse::<crate::scalar::Int>()
                    .map(Rat::from_integer)
                    .map_err(|_| FreeError::Parse {
                        position: start,
                        message: "bad integer literal".into(),
                    })?;
                tokens.push((start, Token::Number(value)));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                i += 1;
                while i < bytes.len() {
                    let c = bytes[i] as char;
                    if c.is_ascii_alphanumeric() || c == '\'' || c == '_' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                tokens.push((start, Token::Ident(text[start..i].to_string())));
            }
            other => {
                return Err(FreeError::Parse {
                    position: i,
                    message: format!("unexpected character '{other}'"),
                });
            }
        }
    }
    Ok(tokens)
}

impl Lexer {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn next(&mut self) -> Option<(usize, Token)> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.end)
    }
}

pub(super) fn parse_element(alg: &FreeAlgebra, text: &str) -> Result<FreeElement, FreeError> {
    let tokens = tokenize(text)?;
    let mut lexer = Lexer {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let value = parse_expr(alg, &mut lexer)?;
    if let Some((pos, _)) = lexer.next() {
        return Err(FreeError::Parse {
            position: pos,
            message: "trailing input".into(),
        });
    }
    Ok(value)
}

fn parse_expr(alg: &FreeAlgebra, lex: &mut Lexer) -> Result<FreeElement, FreeError> {
    let mut negate = false;
    if let Some(Token::Minus) = lex.peek() {
        lex.next();
        negate = true;
    }
    let mut acc = parse_term(alg, lex)?;
    if negate {
        acc = acc.neg();
    }
    loop {
        match lex.peek() {
            Some(Token::Plus) => {
                lex.next();
                let rhs = parse_term(alg, lex)?;
                acc = acc.add(&rhs);
            }
            Some(Token::Minus) => {
                lex.next();
                let rhs = parse_term(alg, lex)?;
                acc = acc.sub(&rhs);
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_term(alg: &FreeAlgebra, lex: &mut Lexer) -> Result<FreeElement, FreeError> {
    let mut acc = parse_factor(alg, lex)?;
    loop {
        match lex.peek() {
            Some(Token::Star) => {
                lex.next();
                let rhs = parse_factor(alg, lex)?;
                acc = acc.multiply(&rhs)?;
            }
            Some(Token::Slash) => {
                let pos = lex.here();
                lex.next();
                let rhs = parse_factor(alg, lex)?;
                let c = constant_of(&rhs).ok_or_else(|| FreeError::Parse {
                    position: pos,
                    message: "division only by nonzero constants".into(),
                })?;
                acc = acc.scale(&(Rat::one() / c));
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_factor(alg: &FreeAlgebra, lex: &mut Lexer) -> Result<FreeElement, FreeError> {
    let base = parse_atom(alg, lex)?;
    if let Some(Token::Caret) = lex.peek() {
        lex.next();
        let pos = lex.here();
        match lex.next() {
            Some((_, Token::Number(n))) => {
                let k: usize = n
                    .numer()
                    .to_string()
                    .parse()
                    .map_err(|_| FreeError::Parse {
                        position: pos,
                        message: "exponent too large".into(),
                    })?;
                return base.pow(k);
            }
            _ => {
                return Err(FreeError::Parse {
                    position: pos,
                    message: "expected a non-negative integer exponent".into(),
                })
            }
        }
    }
    Ok(base)
}

fn parse_atom(alg: &FreeAlgebra, lex: &mut Lexer) -> Result<FreeElement, FreeError> {
    let pos = lex.here();
    match lex.next() {
        Some((p, Token::Ident(name))) => match alg.generator_index(&name) {
            Some(i) => Ok(alg.generator(i)),
            None => Err(FreeError::Parse {
                position: p,
                message: format!("unknown generator '{name}'"),
            }),
        },
        Some((_, Token::Number(n))) => Ok(alg.one().scale(&n)),
        Some((_, Token::LParen)) => {
            let inner = parse_expr(alg, lex)?;
            match lex.next() {
                Some((_, Token::RParen)) => Ok(inner),
                other => Err(FreeError::Parse {
                    position: other.map(|(p, _)| p).unwrap_or(lex.end),
                    message: "expected ')'".into(),
                }),
            }
        }
        Some((p, t)) => Err(FreeError::Parse {
            position: p,
            message: format!("unexpected token {t:?}"),
        }),
        None => Err(FreeError::Parse {
            position: pos,
            message: "unexpected end of input".into(),
        }),
    }
}

/// The value of a constant element; `None` if non-constant or zero.
fn constant_of(e: &FreeElement) -> Option<Rat> {
    if e.is_zero() || e.degree() != Some(0) {
        return None;
    }
    Some(e.coefficient(&super::Word::empty()))
}
