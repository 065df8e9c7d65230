//! Parser for the polynomial text grammar used everywhere in this crate
//! (factor lists, job files, reports).
//!
//! Grammar (EBNF):
//!
//! ```text
//! expr    := term { ("+" | "-") term }
//! term    := unary { "*" unary }
//! unary   := "-" unary | power
//! power   := atom [ "^" nat ]
//! atom    := "(" expr ")" | number | ident
//! number  := nat [ "/" nat ]
//! nat     := digit { digit }
//! ident   := letter { letter | digit | "_" }
//! ```
//!
//! Identifiers must be declared ambient variables, or the extension-field
//! generator symbol when the coefficient field is an extension. Whitespace is
//! insignificant. Errors carry the byte position of the offending token.

use num_bigint::BigInt;

use crate::error::Error;
use crate::field::{Field, Rat};
use crate::poly::{Poly, Vars};

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Nat(BigInt),
    Ident(String),
    End,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn next(&mut self) -> Result<(Tok, usize), Error> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.src.len() {
            return Ok((Tok::End, start));
        }
        let c = self.src[self.pos];
        self.pos += 1;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                let mut end = self.pos;
                while end < self.src.len() && self.src[end].is_ascii_digit() {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.src[start..end]).unwrap();
                self.pos = end;
                Tok::Nat(text.parse().unwrap())
            }
            c if c.is_ascii_alphabetic() => {
                let mut end = self.pos;
                while end < self.src.len()
                    && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
                {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.src[start..end]).unwrap();
                self.pos = end;
                Tok::Ident(text.to_string())
            }
            other => {
                return Err(Error::Parse {
                    position: start,
                    message: format!("unexpected character `{}`", other as char),
                })
            }
        };
        Ok((tok, start))
    }
}

struct Parser<'a> {
    lx: Lexer<'a>,
    lookahead: Option<(Tok, usize)>,
    vars: &'a Vars,
    field: &'a Field,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Result<&(Tok, usize), Error> {
        if self.lookahead.is_none() {
            self.lookahead = Some(self.lx.next()?);
        }
        Ok(self.lookahead.as_ref().unwrap())
    }

    fn bump(&mut self) -> Result<(Tok, usize), Error> {
        match self.lookahead.take() {
            Some(t) => Ok(t),
            None => self.lx.next(),
        }
    }

    fn expr(&mut self) -> Result<Poly, Error> {
        let mut acc = self.term()?;
        loop {
            match self.peek()?.0 {
                Tok::Plus => {
                    self.bump()?;
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump()?;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, Error> {
        let mut acc = self.unary()?;
        while self.peek()?.0 == Tok::Star {
            self.bump()?;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, Error> {
        if self.peek()?.0 == Tok::Minus {
            self.bump()?;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, Error> {
        let base = self.atom()?;
        if self.peek()?.0 == Tok::Caret {
            self.bump()?;
            let (tok, pos) = self.bump()?;
            let Tok::Nat(n) = tok else {
                return Err(Error::Parse {
                    position: pos,
                    message: "expected a natural-number exponent after `^`".into(),
                });
            };
            let e: u32 = n.to_string().parse().map_err(|_| Error::Parse {
                position: pos,
                message: "exponent too large".into(),
            })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, Error> {
        let (tok, pos) = self.bump()?;
        match tok {
            Tok::LParen => {
                let inner = self.expr()?;
                let (close, cpos) = self.bump()?;
                if close != Tok::RParen {
                    return Err(Error::Parse {
                        position: cpos,
                        message: "expected `)`".into(),
                    });
                }
                Ok(inner)
            }
            Tok::Nat(n) => {
                // Optional rational literal n/d.
                let mut value = Rat::from(n);
                if self.peek()?.0 == Tok::Slash {
                    self.bump()?;
                    let (dtok, dpos) = self.bump()?;
                    let Tok::Nat(d) = dtok else {
                        return Err(Error::Parse {
                            position: dpos,
                            message: "expected a denominator after `/`".into(),
                        });
                    };
                    if d == BigInt::from(0) {
                        return Err(Error::Parse {
                            position: dpos,
                            message: "zero denominator".into(),
                        });
                    }
                    value /= Rat::from(d);
                }
                Ok(Poly::constant(
                    self.vars.clone(),
                    self.field.clone(),
                    self.field.from_rat(value),
                ))
            }
            Tok::Ident(name) => {
                if let Some(i) = self.vars.index_of(&name) {
                    return Ok(Poly::var(self.vars.clone(), self.field.clone(), i));
                }
                if Some(name.as_str()) == self.field.symbol() {
                    let g = self.field.generator().unwrap();
                    return Ok(Poly::constant(self.vars.clone(), self.field.clone(), g));
                }
                if self.field.symbol().is_none() && name.len() == 1 {
                    // A plausible generator symbol over plain Q gets the
                    // dedicated diagnostic when it is not a variable.
                    if !self.vars.names().iter().any(|v| v == &name) && name != "t" {
                        return Err(Error::UnknownVariable(name));
                    }
                    return Err(Error::SymbolOverRationals(name));
                }
                Err(Error::UnknownVariable(name))
            }
            Tok::End => Err(Error::Parse {
                position: pos,
                message: "unexpected end of input".into(),
            }),
            other => Err(Error::Parse {
                position: pos,
                message: format!("unexpected token {other:?}"),
            }),
        }
    }
}

/// Parse a polynomial in the given ambient variables over the given field.
pub fn parse_poly(text: &str, vars: &Vars, field: &Field) -> Result<Poly, Error> {
    let mut p = Parser {
        lx: Lexer::new(text),
        lookahead: None,
        vars,
        field,
    };
    let out = p.expr()?;
    let (tok, pos) = p.bump()?;
    if tok != Tok::End {
        return Err(Error::Parse {
            position: pos,
            message: format!("trailing input {tok:?}"),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat_int;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn spec_examples() {
        let v = Vars::xy();
        let p = parse_poly("x^2 + x^3 + y^2", &v, &q()).unwrap();
        assert_eq!(p.num_terms(), 3);
        let z = parse_poly("0", &v, &q()).unwrap();
        assert!(z.is_zero());
        let d = parse_poly("(x+y)*(x-y)", &v, &q()).unwrap();
        assert_eq!(d, parse_poly("x^2 - y^2", &v, &q()).unwrap());
    }

    #[test]
    fn rational_literals_and_unary_minus() {
        let v = Vars::xy();
        let p = parse_poly("-x + 1/2", &v, &q()).unwrap();
        assert_eq!(p.constant_term(), q().from_rat(crate::field::rat(1, 2)));
        assert_eq!(p.num_terms(), 2);
        let p2 = parse_poly("--x", &v, &q()).unwrap();
        assert_eq!(p2, parse_poly("x", &v, &q()).unwrap());
    }

    #[test]
    fn error_positions() {
        let v = Vars::xy();
        match parse_poly("x + ?", &v, &q()) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            parse_poly("x + z", &v, &q()),
            Err(Error::UnknownVariable(_))
        ));
        assert!(matches!(
            parse_poly("x + (y", &v, &q()),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn extension_symbol() {
        let f = Field::extension("i", vec![rat_int(1), rat_int(0)]).unwrap();
        let v = Vars::xy();
        let p = parse_poly("i*x", &v, &f).unwrap();
        let sq = p.mul(&p);
        assert_eq!(sq, parse_poly("-x^2", &v, &f).unwrap());
        // the symbol is rejected over plain Q
        assert!(matches!(
            parse_poly("i*x", &v, &q()),
            Err(Error::SymbolOverRationals(_)) | Err(Error::UnknownVariable(_))
        ));
    }
}
