//! Text grammar for polynomials and the line-oriented generator file format.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | identifier | '(' expr ')'
//! ```
//! Implicit multiplication is rejected.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::poly::{Polynomial, Ring};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '^' => Token::Caret,
            '/' => Token::Slash,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Token::Number(text[start..i].parse().expect("digits"))));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Token::Ident(text[start..i].to_string())));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    pos: start,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a, F: Field> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    ring: &'a Arc<Ring<F>>,
}

impl<F: Field> Parser<'_, F> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Polynomial<F>> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial<F>> {
        let mut acc = self.unary()?;
        while let Some(Token::Star) = self.peek() {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial<F>> {
        if let Some(Token::Minus) = self.peek() {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial<F>> {
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Token::Number(n)) => {
                    let e: u32 = match u32::try_from(&n) {
                        Ok(e) if e <= u16::MAX as u32 => e,
                        _ => return self.err("exponent too large"),
                    };
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return self.err("expected a non-negative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial<F>> {
        let tok = match self.peek().cloned() {
            Some(t) => t,
            None => return self.err("unexpected end of input"),
        };
        match tok {
            Token::Number(n) => {
                self.pos += 1;
                let q = if let Some(Token::Slash) = self.peek() {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Token::Number(d)) if d != BigInt::from(0) => {
                            self.pos += 1;
                            Rational::new(n, d)
                        }
                        _ => return self.err("expected a nonzero integer denominator"),
                    }
                } else {
                    Rational::from_integer(n)
                };
                let c = self.ring.field().from_rational(&q).map_err(|e| Error::Syntax {
                    pos: self.offset(),
                    message: e.to_string(),
                })?;
                Ok(Polynomial::constant(self.ring, c))
            }
            Token::Ident(name) => {
                self.pos += 1;
                Polynomial::var(self.ring, &name)
            }
            Token::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Token::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            other => self.err(format!("unexpected token {other:?}")),
        }
    }
}

/// Parse a polynomial in the given ring.
pub fn parse_poly<F: Field>(text: &str, ring: &Arc<Ring<F>>) -> Result<Polynomial<F>> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        end: text.len(),
        ring,
    };
    let poly = p.expr()?;
    if p.pos != p.tokens.len() {
        return p.err("unexpected trailing input (implicit multiplication is not allowed)");
    }
    Ok(poly)
}

/// Strip a trailing `#` comment.
pub fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// One generator per line; `#` comments and blank lines ignored.
pub fn parse_poly_file<F: Field>(text: &str, ring: &Arc<Ring<F>>) -> Result<Vec<Polynomial<F>>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let body = strip_comment(line).trim();
        if body.is_empty() {
            continue;
        }
        out.push(parse_poly(body, ring).map_err(|e| match e {
            Error::Syntax { pos, message } => Error::Syntax {
                pos,
                message: format!("line {}: {message}", lineno + 1),
            },
            other => other,
        })?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldElement, PrimeField, RationalField};
    use crate::monomial::{Monomial, MonomialOrder};
    use proptest::prelude::*;

    fn ring(vars: &[&str]) -> Arc<Ring<RationalField>> {
        Ring::new(vars, RationalField, MonomialOrder::DegRevLex)
    }

    #[test]
    fn parabola_terms() {
        let r = ring(&["x", "y"]);
        let f = parse_poly("y - x^2", &r).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.coefficient(&Monomial::from_exponents(&[0, 1])), Rational::from(1));
        assert_eq!(f.coefficient(&Monomial::from_exponents(&[2, 0])), Rational::from(-1));
    }

    #[test]
    fn zero_polynomial() {
        let r = ring(&["x"]);
        assert!(parse_poly("0", &r).unwrap().is_zero());
        assert!(parse_poly("x - x", &r).unwrap().is_zero());
    }

    #[test]
    fn product_expands() {
        let r = ring(&["x", "y"]);
        let f = parse_poly("x*(x+1)*y - 1", &r).unwrap();
        assert_eq!(f, parse_poly("x^2*y + x*y - 1", &r).unwrap());
    }

    #[test]
    fn precedence() {
        let r = ring(&["x", "y"]);
        assert_eq!(parse_poly("-x^2", &r).unwrap().to_string(), "-x^2");
        assert_eq!(parse_poly("2*x^2*3", &r).unwrap().to_string(), "6*x^2");
        assert_eq!(parse_poly("(x+y)^2", &r).unwrap().to_string(), "x^2 + 2*x*y + y^2");
        assert_eq!(parse_poly("1/2*x - 3/4", &r).unwrap().to_string(), "1/2*x - 3/4");
    }

    #[test]
    fn errors() {
        let r = ring(&["x", "y"]);
        assert!(matches!(parse_poly("x + w", &r), Err(Error::UnknownVariable(v)) if v == "w"));
        assert!(matches!(parse_poly("2x", &r), Err(Error::Syntax { pos: 1, .. })));
        assert!(matches!(parse_poly("x y", &r), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("x +", &r), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse_poly("x/2", &r), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("(x", &r), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x^y", &r), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x $ 1", &r), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("1/0", &r), Err(Error::Syntax { .. })));
    }

    #[test]
    fn file_format() {
        let r = ring(&["x", "y"]);
        let text = "# header\n\ny - x^2   # parabola\n  x*y - 1\n";
        let gens = parse_poly_file(text, &r).unwrap();
        assert_eq!(gens.len(), 2);
        let err = parse_poly_file("x\nx +\n", &r).unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn prime_field_literals() {
        let r = Ring::new(&["x"], PrimeField::new(7).unwrap(), MonomialOrder::DegRevLex);
        let f = parse_poly("1/2*x", &r).unwrap();
        // 1/2 = 4 mod 7
        assert_eq!(f.leading_coeff().unwrap().value(), 4);
        assert!(f.leading_coeff().unwrap().mul_ref(&r.field().from_i64(2)).is_one());
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(ts in proptest::collection::vec(((0u16..4, 0u16..4), -20i64..21, 1i64..5), 0..6)) {
            let r = ring(&["x", "y"]);
            let raw = ts.into_iter()
                .map(|((a, b), n, d)| (Monomial::from_exponents(&[a, b]), Rational::new(n, d)))
                .collect();
            let f = crate::poly::Polynomial::from_terms(&r, raw);
            let g = parse_poly(&f.to_string(), &r).unwrap();
            prop_assert_eq!(&f, &g);
            prop_assert_eq!(f.to_string(), g.to_string());
        }
    }
}
