//! Recursive-descent parser for the polynomial text syntax:
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' integer)*
//! atom   := integer | variable | '(' expr ')'
//! ```
//!
//! Integer literals are reduced modulo the characteristic. Whitespace is
//! ignored between tokens.

use super::{Polynomial, RingRef};
use crate::arith::Field;
use crate::error::{Error, Result};

struct Parser<'a> {
    ring: &'a RingRef,
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

pub(super) fn parse_polynomial(ring: &RingRef, text: &str) -> Result<Polynomial> {
    let mut p = Parser {
        ring,
        src: text,
        bytes: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.pos == p.bytes.len() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let f = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in '{}'", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                negate = true;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let mut base = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.exponent()?;
            base = base.pow(e);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a non-negative integer exponent"));
        }
        self.src[start..self.pos]
            .parse::<u64>()
            .map_err(|_| self.error("exponent out of range"))
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let field = self.ring.field();
                let p = field.modulus() as u64;
                let mut value = 0u64;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    value = (value * 10 + (self.bytes[self.pos] - b'0') as u64) % p;
                    self.pos += 1;
                }
                Ok(self.ring.constant(field.from_i64(value as i64) as i64))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                match self.ring.var_index(name) {
                    Some(i) => Ok(self.ring.var(i)),
                    None => Err(Error::Parse(format!(
                        "unknown variable '{name}' in '{}'",
                        self.src
                    ))),
                }
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }
}

/// Variable names in order of first appearance in `text`.
pub fn scan_variables(text: &str) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let name = &text[start..i];
            if !names.iter().any(|n| n == name) {
                names.push(name.to_string());
            }
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
        } else {
            i += 1;
        }
    }
    names
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;

    #[test]
    fn parses_nested_expressions() {
        let r = PolyRing::standard(5, &["x", "y"]).unwrap();
        let f = r.parse("-(x + 2*y)^2 + 4*x*y").unwrap();
        // -(x^2 + 4xy + 4y^2) + 4xy = -x^2 - 4y^2 = 4x^2 + y^2 mod 5
        assert_eq!(f, r.parse("4*x^2 + y^2").unwrap());
    }

    #[test]
    fn reduces_large_literals() {
        let r = PolyRing::standard(7, &["x"]).unwrap();
        let f = r.parse("123456789123456789123*x").unwrap();
        let c = (123456789123456789123u128 % 7) as i64;
        assert_eq!(f, r.parse(&format!("{c}*x")).unwrap());
    }

    #[test]
    fn rejects_garbage() {
        let r = PolyRing::standard(7, &["x"]).unwrap();
        assert!(r.parse("x +").is_err());
        assert!(r.parse("w").is_err());
        assert!(r.parse("x^").is_err());
        assert!(r.parse("(x").is_err());
        assert!(r.parse("").is_err());
        assert!(r.parse("x y").is_err());
    }

    #[test]
    fn scans_variables_in_order() {
        assert_eq!(scan_variables("x^2+y^3+z1*x"), vec!["x", "y", "z1"]);
    }
}
