//! Recursive-descent parser for phase-space expressions.
//!
//! Grammar (UTF-8 text):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-'* atom ('^' uint)?
//! atom   := ident | number | '(' expr ')'
//! ```
//!
//! Identifiers are `q p a abar hbar i`; `q p` belong to the canonical basis,
//! `a abar` to the holomorphic one. `^` takes a non-negative integer literal
//! and implicit multiplication is not allowed.

use thiserror::Error;

use super::{Basis, HbarPoly, PhasePoly, Var, MAX_EXPONENT};
use crate::C64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: unexpected character `{found}`")]
    UnexpectedChar { pos: usize, found: char },
    #[error("syntax error at byte {pos}: expected {expected}, found `{found}`")]
    UnexpectedToken { pos: usize, expected: &'static str, found: String },
    #[error("syntax error: unexpected end of input (expected {expected})")]
    UnexpectedEnd { expected: &'static str },
    #[error("unknown identifier `{name}` at byte {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("identifier `{name}` at byte {pos} is not available in the {basis:?} basis")]
    WrongBasis { pos: usize, name: String, basis: Basis },
    #[error("negative exponent at byte {pos}: exponents must be non-negative integers")]
    NegativeExponent { pos: usize },
    #[error("exponent at byte {pos} must be an integer literal")]
    NonIntegerExponent { pos: usize },
    #[error("exponent {value} at byte {pos} exceeds the maximum {MAX_EXPONENT}")]
    ExponentTooLarge { pos: usize, value: u64 },
    #[error("invalid number literal at byte {pos}")]
    BadNumber { pos: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, bytes: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Next token with its start position, or None at end of input.
    fn next(&mut self) -> Result<Option<(usize, Tok)>, ParseError> {
        self.skip_ws();
        if self.pos >= self.bytes.len() {
            return Ok(None);
        }
        let start = self.pos;
        let b = self.bytes[start];
        let tok = match b {
            b'+' => {
                self.pos += 1;
                Tok::Plus
            }
            b'-' => {
                self.pos += 1;
                Tok::Minus
            }
            b'*' => {
                self.pos += 1;
                Tok::Star
            }
            b'^' => {
                self.pos += 1;
                Tok::Caret
            }
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            b'0'..=b'9' | b'.' => {
                let mut end = start;
                let mut seen_exp = false;
                while end < self.bytes.len() {
                    let c = self.bytes[end];
                    let is_num = c.is_ascii_digit() || c == b'.';
                    let is_exp = (c == b'e' || c == b'E')
                        && end + 1 < self.bytes.len()
                        && (self.bytes[end + 1].is_ascii_digit()
                            || ((self.bytes[end + 1] == b'+' || self.bytes[end + 1] == b'-')
                                && end + 2 < self.bytes.len()
                                && self.bytes[end + 2].is_ascii_digit()));
                    if is_num {
                        end += 1;
                    } else if is_exp && !seen_exp {
                        seen_exp = true;
                        end += 2; // consume 'e' and sign-or-digit
                    } else {
                        break;
                    }
                }
                let text = &self.src[start..end];
                let v: f64 = text.parse().map_err(|_| ParseError::BadNumber { pos: start })?;
                self.pos = end;
                Tok::Num(v)
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let mut end = start;
                while end < self.bytes.len()
                    && (self.bytes[end].is_ascii_alphanumeric() || self.bytes[end] == b'_')
                {
                    end += 1;
                }
                let name = self.src[start..end].to_string();
                self.pos = end;
                Tok::Ident(name)
            }
            _ => {
                let ch = self.src[start..].chars().next().unwrap_or('?');
                return Err(ParseError::UnexpectedChar { pos: start, found: ch });
            }
        };
        Ok(Some((start, tok)))
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    basis: Basis,
}

impl Parser {
    fn peek(&self) -> Option<&(usize, Tok)> {
        self.toks.get(self.idx)
    }

    fn bump(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<PhasePoly, ParseError> {
        let mut acc = self.term()?;
        while let Some((_, tok)) = self.peek() {
            match tok {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<PhasePoly, ParseError> {
        let mut acc = self.factor()?;
        while let Some((_, Tok::Star)) = self.peek() {
            self.bump();
            let rhs = self.factor()?;
            acc = acc.try_mul(&rhs).map_err(|_| ParseError::ExponentTooLarge {
                pos: 0,
                value: (acc.total_degree() + rhs.total_degree()) as u64,
            })?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<PhasePoly, ParseError> {
        let mut negate = false;
        while let Some((_, Tok::Minus)) = self.peek() {
            self.bump();
            negate = !negate;
        }
        let mut base = self.atom()?;
        if let Some((_, Tok::Caret)) = self.peek() {
            self.bump();
            let (pos, exp) = self.exponent()?;
            base = base
                .try_pow(exp)
                .map_err(|_| ParseError::ExponentTooLarge { pos, value: exp as u64 })?;
        }
        Ok(if negate { -&base } else { base })
    }

    fn exponent(&mut self) -> Result<(usize, u32), ParseError> {
        match self.bump() {
            Some((pos, Tok::Minus)) => Err(ParseError::NegativeExponent { pos }),
            Some((pos, Tok::Num(v))) => {
                if v.fract() != 0.0 {
                    return Err(ParseError::NonIntegerExponent { pos });
                }
                if v > MAX_EXPONENT as f64 {
                    return Err(ParseError::ExponentTooLarge { pos, value: v as u64 });
                }
                Ok((pos, v as u32))
            }
            Some((pos, tok)) => Err(ParseError::UnexpectedToken {
                pos,
                expected: "a non-negative integer exponent",
                found: format!("{tok:?}"),
            }),
            None => Err(ParseError::UnexpectedEnd { expected: "an exponent" }),
        }
    }

    fn atom(&mut self) -> Result<PhasePoly, ParseError> {
        match self.bump() {
            Some((_, Tok::Num(v))) => Ok(PhasePoly::constant(self.basis, C64::new(v, 0.0))),
            Some((pos, Tok::Ident(name))) => self.ident(pos, &name),
            Some((_, Tok::LParen)) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some((_, Tok::RParen)) => Ok(inner),
                    Some((pos, tok)) => Err(ParseError::UnexpectedToken {
                        pos,
                        expected: "`)`",
                        found: format!("{tok:?}"),
                    }),
                    None => Err(ParseError::UnexpectedEnd { expected: "`)`" }),
                }
            }
            Some((pos, tok)) => Err(ParseError::UnexpectedToken {
                pos,
                expected: "an identifier, number or `(`",
                found: format!("{tok:?}"),
            }),
            None => Err(ParseError::UnexpectedEnd { expected: "an expression" }),
        }
    }

    fn ident(&mut self, pos: usize, name: &str) -> Result<PhasePoly, ParseError> {
        let var = match name {
            "hbar" => return Ok(PhasePoly::constant_hbar(self.basis, HbarPoly::term(C64::new(1.0, 0.0), 1))),
            "i" => return Ok(PhasePoly::constant(self.basis, C64::new(0.0, 1.0))),
            "q" => Var::Q,
            "p" => Var::P,
            "a" => Var::A,
            "abar" => Var::ABar,
            _ => {
                return Err(ParseError::UnknownIdentifier { pos, name: name.to_string() });
            }
        };
        if var.basis() != self.basis {
            return Err(ParseError::WrongBasis { pos, name: name.to_string(), basis: self.basis });
        }
        Ok(PhasePoly::var(var))
    }
}

/// Parse an expression into a normalized [`PhasePoly`] in the given basis.
pub fn parse_expr(text: &str, basis: Basis) -> Result<PhasePoly, ParseError> {
    let mut lexer = Lexer::new(text);
    let mut toks = Vec::new();
    while let Some(t) = lexer.next()? {
        toks.push(t);
    }
    let mut parser = Parser { toks, idx: 0, basis };
    let poly = parser.expr()?;
    if let Some((pos, tok)) = parser.peek() {
        return Err(ParseError::UnexpectedToken {
            pos: *pos,
            expected: "end of input",
            found: format!("{tok:?}"),
        });
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_qp_plus_hbar() {
        let f = parse_expr("q*p + hbar", Basis::Canonical).unwrap();
        assert_eq!(f.coeff((1, 1)).coeff(0), C64::new(1.0, 0.0));
        assert_eq!(f.coeff((0, 0)).coeff(1), C64::new(1.0, 0.0));
        assert_eq!(f.num_terms(), 2);
    }

    #[test]
    fn parses_holomorphic_monomial() {
        let f = parse_expr("a^2*abar", Basis::Holomorphic).unwrap();
        assert_eq!(f.coeff((2, 1)).coeff(0), C64::new(1.0, 0.0));
        assert_eq!(f.num_terms(), 1);
    }

    #[test]
    fn rejects_negative_exponent() {
        let err = parse_expr("q^-1", Basis::Canonical).unwrap_err();
        assert!(matches!(err, ParseError::NegativeExponent { pos: 2 }));
    }

    #[test]
    fn rejects_unknown_identifier() {
        let err = parse_expr("q*z", Basis::Canonical).unwrap_err();
        assert!(matches!(err, ParseError::UnknownIdentifier { pos: 2, .. }));
    }

    #[test]
    fn rejects_wrong_basis_variable() {
        let err = parse_expr("a", Basis::Canonical).unwrap_err();
        assert!(matches!(err, ParseError::WrongBasis { .. }));
    }

    #[test]
    fn rejects_implicit_multiplication() {
        assert!(parse_expr("2 q", Basis::Canonical).is_err());
    }

    #[test]
    fn unary_minus_and_parens() {
        let f = parse_expr("-(q - 2*p)^2", Basis::Canonical).unwrap();
        assert_eq!(f.coeff((2, 0)).coeff(0), C64::new(-1.0, 0.0));
        assert_eq!(f.coeff((1, 1)).coeff(0), C64::new(4.0, 0.0));
        assert_eq!(f.coeff((0, 2)).coeff(0), C64::new(-4.0, 0.0));
    }

    #[test]
    fn imaginary_unit_squares_to_minus_one() {
        let f = parse_expr("i^2", Basis::Canonical).unwrap();
        assert_eq!(f.coeff((0, 0)).coeff(0), C64::new(-1.0, 0.0));
    }

    #[test]
    fn exponent_cap_enforced() {
        assert!(matches!(
            parse_expr("q^64", Basis::Canonical),
            Err(ParseError::ExponentTooLarge { value: 64, .. })
        ));
        assert!(parse_expr("q^63", Basis::Canonical).is_ok());
    }
}
