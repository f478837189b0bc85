//! Operator-syntax parser. `tX`, `tY` are the divided powers θ_X, θ_Y; `dX`,
//! `dY` are the plain derivations, expanded as i!·θ^i. An exponent written
//! directly on a symbol is the symbol's own power (`tX^2` = θ_X², `dX^2` =
//! ∂_X² = 2θ_X²); an exponent on a parenthesized expression is iterated
//! composition. `*` composes, `+`/`-` add, `/` divides by a nonzero constant.

use super::{DPOp, DiffopError, Poly, VarCount};
use crate::algebra::ScalarMode;
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

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    vars: VarCount,
    mode: ScalarMode,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, DiffopError> {
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
                let value = text[start..i]
                    .parse::<crate::scalar::Int>()
                    .map(Rat::from_integer)
                    .map_err(|_| DiffopError::Parse {
                        position: start,
                        message: "bad integer literal".into(),
                    })?;
                tokens.push((start, Token::Number(value)));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_alphanumeric() {
                    i += 1;
                }
                tokens.push((start, Token::Ident(text[start..i].to_string())));
            }
            other => {
                return Err(DiffopError::Parse {
                    position: i,
                    message: format!("unexpected character '{other}'"),
                });
            }
        }
    }
    Ok(tokens)
}

pub(super) fn parse_operator(
    text: &str,
    vars: VarCount,
    mode: ScalarMode,
) -> Result<DPOp, DiffopError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
        vars,
        mode,
    };
    let op = parser.expr()?;
    if let Some((pos, _)) = parser.next() {
        return Err(DiffopError::Parse {
            position: pos,
            message: "trailing input".into(),
        });
    }
    Ok(op)
}

impl Parser {
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

    fn expr(&mut self) -> Result<DPOp, DiffopError> {
        let mut negate = false;
        if let Some(Token::Minus) = self.peek() {
            self.next();
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                    let rhs = self.term()?;
                    acc = acc.add(&rhs)?;
                }
                Some(Token::Minus) => {
                    self.next();
                    let rhs = self.term()?;
                    acc = acc.sub(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<DPOp, DiffopError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.next();
                    let rhs = self.factor()?;
                    acc = acc.compose(&rhs)?;
                }
                Some(Token::Slash) => {
                    let pos = self.here();
                    self.next();
                    let rhs = self.factor()?;
                    let c = constant_of(&rhs)
                        .ok_or(DiffopError::DivisionByNonConstant)
                        .map_err(|e| match e {
                            DiffopError::DivisionByNonConstant => DiffopError::Parse {
                                position: pos,
                                message: "division only by nonzero constants".into(),
                            },
                            other => other,
                        })?;
                    acc = acc.scale(&(Rat::one() / c))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    /// An exponent bound directly to a symbol selects the symbol's power;
    /// on anything else it iterates composition.
    fn factor(&mut self) -> Result<DPOp, DiffopError> {
        let pos = self.here();
        match self.next() {
            Some((p, Token::Ident(name))) => {
                let power = self.optional_exponent()?;
                self.symbol(&name, power.unwrap_or(1), p)
            }
            Some((_, Token::Number(n))) => {
                let power = self.optional_exponent()?;
                let value = match power {
                    None => n,
                    Some(k) => num_traits::pow::pow(n, k as usize),
                };
                Ok(DPOp::mult_op(Poly::constant(self.vars, self.mode, value)?))
            }
            Some((_, Token::LParen)) => {
                let inner = self.expr()?;
                match self.next() {
                    Some((_, Token::RParen)) => {}
                    other => {
                        return Err(DiffopError::Parse {
                            position: other.map(|(p, _)| p).unwrap_or(self.end),
                            message: "expected ')'".into(),
                        })
                    }
                }
                match self.optional_exponent()? {
                    None => Ok(inner),
                    Some(k) => {
                        let mut acc = DPOp::identity(self.vars, self.mode);
                        for _ in 0..k {
                            acc = acc.compose(&inner)?;
                        }
                        Ok(acc)
                    }
                }
            }
            Some((p, t)) => Err(DiffopError::Parse {
                position: p,
                message: format!("unexpected token {t:?}"),
            }),
            None => Err(DiffopError::Parse {
                position: pos,
                message: "unexpected end of input".into(),
            }),
        }
    }

    fn optional_exponent(&mut self) -> Result<Option<u32>, DiffopError> {
        if let Some(Token::Caret) = self.peek() {
            self.next();
            let pos = self.here();
            match self.next() {
                Some((_, Token::Number(n))) => {
                    let k: u32 = n
                        .numer()
                        .to_string()
                        .parse()
                        .map_err(|_| DiffopError::Parse {
                            position: pos,
                            message: "exponent too large".into(),
                        })?;
                    Ok(Some(k))
                }
                _ => Err(DiffopError::Parse {
                    position: pos,
                    message: "expected a non-negative integer exponent".into(),
                }),
            }
        } else {
            Ok(None)
        }
    }

    fn symbol(&mut self, name: &str, power: u32, position: usize) -> Result<DPOp, DiffopError> {
        if self.vars == VarCount::One && matches!(name, "Y" | "tY" | "dY") {
            return Err(DiffopError::Parse {
                position,
                message: "Y symbols need two-variable mode".into(),
            });
        }
        match name {
            "X" => Ok(DPOp::mult_op(Poly::monomial(
                self.vars,
                self.mode,
                (power, 0),
                Rat::one(),
            )?)),
            "Y" => Ok(DPOp::mult_op(Poly::monomial(
                self.vars,
                self.mode,
                (0, power),
                Rat::one(),
            )?)),
            "tX" => Ok(DPOp::theta(self.vars, self.mode, (power, 0))?),
            "tY" => Ok(DPOp::theta(self.vars, self.mode, (0, power))?),
            "dX" => Ok(DPOp::partial(self.vars, self.mode, (power, 0))?),
            "dY" => Ok(DPOp::partial(self.vars, self.mode, (0, power))?),
            other => Err(DiffopError::Parse {
                position,
                message: format!("unknown symbol '{other}' (expected X, Y, tX, tY, dX, dY)"),
            }),
        }
    }
}

/// The value of a constant operator (a nonzero multiple of the identity).
fn constant_of(op: &DPOp) -> Option<Rat> {
    if op.order() != Some(0) {
        return None;
    }
    let poly = op.coefficient((0, 0));
    let mut terms = poly.terms();
    match (terms.next(), terms.next()) {
        (Some((&(0, 0), c)), None) => Some(c.clone()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn parses_the_syntax_example() {
        let d = DPOp::parse(
            "(X^2+1)*tX^2*tY + 3*tX",
            VarCount::Two,
            ScalarMode::Rational,
        )
        .unwrap();
        assert_eq!(d.order(), Some(3));
        let coeff = d.coefficient((2, 1));
        assert_eq!(coeff.coefficient((2, 0)), rat_int(1));
        assert_eq!(coeff.coefficient((0, 0)), rat_int(1));
        assert_eq!(d.coefficient((1, 0)).coefficient((0, 0)), rat_int(3));
    }

    #[test]
    fn symbol_powers_are_divided_powers() {
        let v = VarCount::One;
        let m = ScalarMode::Rational;
        let t2 = DPOp::parse("tX^2", v, m).unwrap();
        assert_eq!(t2, DPOp::theta(v, m, (2, 0)).unwrap());
        // Parenthesized composition power differs: (tX)^2 = tX∘tX = 2·tX².
        let squared = DPOp::parse("(tX)^2", v, m).unwrap();
        assert_eq!(squared, t2.scale(&rat_int(2)).unwrap());
    }

    #[test]
    fn division_by_constants() {
        let v = VarCount::One;
        let m = ScalarMode::Rational;
        let d = DPOp::parse("dX^2/2", v, m).unwrap();
        assert_eq!(d, DPOp::theta(v, m, (2, 0)).unwrap());
        assert!(DPOp::parse("tX/X", v, m).is_err());
        let half = DPOp::parse_poly("1/2", v, m).unwrap();
        assert_eq!(half.coefficient((0, 0)), rat(1, 2));
    }

    #[test]
    fn composition_in_text() {
        let v = VarCount::One;
        let m = ScalarMode::Rational;
        // tX*X = X*tX + 1 after normal ordering.
        let lhs = DPOp::parse("tX*X", v, m).unwrap();
        let rhs = DPOp::parse("X*tX + 1", v, m).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let v = VarCount::Two;
        let m = ScalarMode::Rational;
        match DPOp::parse("tX + tZ", v, m) {
            Err(DiffopError::Parse { position, .. }) => assert_eq!(position, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(DPOp::parse("tX +", v, m).is_err());
        assert!(DPOp::parse("(tX", v, m).is_err());
    }

    #[test]
    fn z_mode_rejects_fractional_literals() {
        let v = VarCount::One;
        let err = DPOp::parse("tX/2", v, ScalarMode::Integer).unwrap_err();
        assert_eq!(err, DiffopError::NonIntegerCoefficient);
        assert!(DPOp::parse("2*tX/2", v, ScalarMode::Integer).is_ok());
    }

    #[test]
    fn parse_poly_rejects_operators() {
        let v = VarCount::One;
        let m = ScalarMode::Rational;
        assert_eq!(
            DPOp::parse_poly("tX + X", v, m).unwrap_err(),
            DiffopError::NotAPolynomial
        );
        let p = DPOp::parse_poly("X^3 - 2", v, m).unwrap();
        assert_eq!(p.coefficient((3, 0)), rat_int(1));
    }
}
