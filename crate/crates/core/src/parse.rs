//! Expression grammar for polynomials:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | identifier | '(' expr ')'
//! ```

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Poly, VarSpace};

pub fn parse_poly(space: &Arc<VarSpace>, src: &str) -> Result<Poly> {
    let mut p = Parser { space, src: src.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error(&format!("unexpected `{}`", p.peek_char())));
    }
    Ok(e)
}

struct Parser<'a> {
    space: &'a Arc<VarSpace>,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { column: self.pos + 1, message: msg.to_string() }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        self.peek().map(|b| b as char).unwrap_or(' ')
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            let digits = self.integer().ok_or_else(|| self.error("expected a non-negative integer exponent"))?;
            let e: u32 = digits
                .try_into()
                .map_err(|_| Error::Parse { column: start + 1, message: "exponent too large".into() })?;
            self.skip_ws();
            if self.peek() == Some(b'^') {
                return Err(self.error("chained exponents need parentheses"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn atom(&mut self) -> Result<Poly> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some(b) if b.is_ascii_digit() => {
                let num = self.integer().expect("digit present");
                let save = self.pos;
                self.skip_ws();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self
                        .integer()
                        .ok_or_else(|| self.error("only integer literals may be divided"))?;
                    if den.is_zero() {
                        return Err(self.error("division by zero"));
                    }
                    return Ok(Poly::constant(self.space, BigRational::new(num, den)));
                }
                self.pos = save;
                Ok(Poly::constant(self.space, BigRational::from_integer(num)))
            }
            Some(b) if b.is_ascii_alphabetic() || b == b'_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.space.index_of(name) {
                    Some(i) => Ok(Poly::var(self.space, i)),
                    None => Err(Error::Parse {
                        column: start + 1,
                        message: format!("unknown variable `{name}`"),
                    }),
                }
            }
            Some(_) => Err(self.error(&format!("unexpected `{}`", self.peek_char()))),
            None => Err(self.error("unexpected end of expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp() -> Arc<VarSpace> {
        VarSpace::new(&["x", "z"], &["y"]).unwrap()
    }

    #[test]
    fn parses_precedence() {
        let a = parse_poly(&sp(), "-x^2 + 2*x*y - 3/4").unwrap();
        assert_eq!(a.to_string(), "-x^2 + 2*x*y - 3/4");
        let b = parse_poly(&sp(), "(x+1)^2").unwrap();
        assert_eq!(b.to_string(), "x^2 + 2*x + 1");
    }

    #[test]
    fn reports_columns() {
        match parse_poly(&sp(), "x +* y") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_poly(&sp(), "x + w") {
            Err(Error::Parse { column, message }) => {
                assert_eq!(column, 5);
                assert!(message.contains("unknown variable"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_poly(&sp(), "x/y").is_err());
        assert!(parse_poly(&sp(), "(x").is_err());
        assert!(parse_poly(&sp(), "").is_err());
        assert!(parse_poly(&sp(), "x^2^2").is_err());
    }
}
