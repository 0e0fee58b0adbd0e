//! Text form of polynomials.
//!
//! ```text
//! polynomial ::= term (('+'|'-') term)*
//! term       ::= coeff | coeff '*' monomial | monomial
//! monomial   ::= var ('^' uint)? ('*' var ('^' uint)?)*
//! coeff      ::= int | int '/' uint
//! ```
//!
//! Whitespace is insignificant and variable names match
//! `[A-Za-z][A-Za-z0-9_]*`. A leading sign on the first term is accepted, and
//! exponents may carry a `-` so Laurent polynomials printed by `Display` parse
//! back.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{ExponentVector, PolyError, Polynomial, Variables};
use crate::linalg::Rational;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, PolyError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Num(text[start..i].parse().expect("digits")), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            other => {
                return Err(PolyError::Syntax {
                    position: start,
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    vars: &'a Variables,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn polynomial(&mut self) -> Result<Polynomial, PolyError> {
        let mut p = Polynomial::zero(self.vars);
        let mut sign = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -1
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                1
            }
            None => return self.err("empty polynomial"),
            _ => 1,
        };
        loop {
            let (e, c) = self.term()?;
            p.add_term(e, if sign < 0 { -c } else { c });
            match self.peek() {
                None => return Ok(p),
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                Some(_) => return self.err("expected '+' or '-'"),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<(ExponentVector, Rational), PolyError> {
        match self.peek() {
            Some(Tok::Num(_)) => {
                let c = self.coeff()?;
                if self.peek() == Some(&Tok::Star) {
                    self.pos += 1;
                    let e = self.monomial()?;
                    Ok((e, c))
                } else {
                    Ok((ExponentVector::zeros(self.vars.len()), c))
                }
            }
            Some(Tok::Ident(_)) => Ok((self.monomial()?, Rational::one())),
            _ => self.err("expected a coefficient or a variable"),
        }
    }

    fn coeff(&mut self) -> Result<Rational, PolyError> {
        let n = match self.peek() {
            Some(Tok::Num(n)) => n.clone(),
            _ => return self.err("expected an integer"),
        };
        self.pos += 1;
        if self.peek() == Some(&Tok::Slash) {
            self.pos += 1;
            let d = match self.peek() {
                Some(Tok::Num(d)) => d.clone(),
                _ => return self.err("expected a denominator"),
            };
            if d.is_zero() {
                return self.err("zero denominator");
            }
            self.pos += 1;
            Ok(Rational::new(n, d))
        } else {
            Ok(Rational::from_integer(n))
        }
    }

    fn monomial(&mut self) -> Result<ExponentVector, PolyError> {
        let mut e = vec![0i64; self.vars.len()];
        loop {
            let at = self.offset();
            let name = match self.peek() {
                Some(Tok::Ident(s)) => s.clone(),
                _ => return self.err("expected a variable"),
            };
            let idx = self
                .vars
                .iter()
                .position(|v| *v == name)
                .ok_or(PolyError::UnknownVariable { name, position: at })?;
            self.pos += 1;
            let mut k = 1i64;
            if self.peek() == Some(&Tok::Caret) {
                self.pos += 1;
                let neg = if self.peek() == Some(&Tok::Minus) {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                k = match self.peek() {
                    Some(Tok::Num(n)) => match i64::try_from(n) {
                        Ok(v) => v,
                        Err(_) => return self.err("exponent too large"),
                    },
                    _ => return self.err("expected an exponent"),
                };
                if neg {
                    k = -k;
                }
                self.pos += 1;
            }
            e[idx] = match e[idx].checked_add(k) {
                Some(v) => v,
                None => return self.err("exponent too large"),
            };
            if self.peek() == Some(&Tok::Star) && matches!(self.toks.get(self.pos + 1), Some((Tok::Ident(_), _))) {
                self.pos += 1;
            } else {
                return Ok(ExponentVector::new(e));
            }
        }
    }
}

/// Parses `text` in the variable context `vars`.
pub fn parse_polynomial(text: &str, vars: &Variables) -> Result<Polynomial, PolyError> {
    let toks = tokenize(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
        vars,
    };
    parser.polynomial()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};
    use crate::poly::variables;

    fn x3() -> Variables {
        variables(&["x1", "x2", "x3"])
    }

    #[test]
    fn parses_first_generator() {
        let p = parse_polynomial("x1^5 + x2^3 + x3^2 - 1", &x3()).unwrap();
        assert_eq!(p.num_terms(), 4);
        assert_eq!(p.coefficient_of(&[5, 0, 0].into()), rat(1));
        assert_eq!(p.coefficient_of(&[0, 0, 0].into()), rat(-1));
    }

    #[test]
    fn parses_zero_and_fractions() {
        assert!(parse_polynomial("0", &x3()).unwrap().is_zero());
        let p = parse_polynomial("3/2*x1*x2 - x1", &x3()).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coefficient_of(&[1, 1, 0].into()), ratio(3, 2));
        assert_eq!(p.coefficient_of(&[1, 0, 0].into()), rat(-1));
    }

    #[test]
    fn whitespace_and_repeated_variables() {
        let p = parse_polynomial("  x1 * x1^2*x3 -2 *x2  ", &x3()).unwrap();
        assert_eq!(p.coefficient_of(&[3, 0, 1].into()), rat(1));
        assert_eq!(p.coefficient_of(&[0, 1, 0].into()), rat(-2));
    }

    #[test]
    fn reports_errors_with_positions() {
        match parse_polynomial("x1 + y", &x3()) {
            Err(PolyError::UnknownVariable { name, position }) => {
                assert_eq!(name, "y");
                assert_eq!(position, 5);
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_polynomial("x1 + * x2", &x3()) {
            Err(PolyError::Syntax { position, .. }) => assert_eq!(position, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_polynomial("x1 x2", &x3()),
            Err(PolyError::Syntax { .. })
        ));
        assert!(matches!(parse_polynomial("", &x3()), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_polynomial("1/0", &x3()), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_polynomial("x1 $", &x3()), Err(PolyError::Syntax { .. })));
    }

    #[test]
    fn laurent_roundtrip() {
        let text = "x2^8*x1^-5*x3^-9 + x1^-10*x2^-4";
        let p = parse_polynomial(text, &x3()).unwrap();
        assert_eq!(p.coefficient_of(&[-5, 8, -9].into()), rat(1));
        assert_eq!(parse_polynomial(&p.to_string(), &x3()).unwrap(), p);
    }
}
