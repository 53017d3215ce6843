//! Polynomial expression grammar and canonical printing.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := ('+' | '-') unary | power
//! power   := primary ('^' integer)?
//! primary := integer ('/' integer)? | variable | '(' expr ')'
//! ```

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::{PolyRing, Polynomial, Rational, RingError};

pub fn parse_poly(text: &str, ring: &Arc<PolyRing>) -> Result<Polynomial, RingError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ring };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

/// Parses `a` or `a/b` (optionally signed) into a rational.
pub fn parse_rational(text: &str) -> Result<Rational, RingError> {
    let t = text.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let syntax = |msg: &str| RingError::Syntax { pos: 0, msg: msg.to_string() };
    let (n, d) = match body.split_once('/') {
        Some((n, d)) => (n, d),
        None => (body, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| syntax("bad numerator"))?;
    let d: BigInt = d.trim().parse().map_err(|_| syntax("bad denominator"))?;
    if d.is_zero() {
        return Err(syntax("zero denominator"));
    }
    let r = Rational::new(n, d);
    Ok(if neg { -r } else { r })
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<PolyRing>,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> RingError {
        RingError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial, RingError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, RingError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        match self.peek() {
            Some(c) if c.is_ascii_alphanumeric() || c == b'(' || c == b'_' => {
                Err(self.error("expected operator (`*` is mandatory between factors)"))
            }
            Some(b'/') => Err(self.error("division is only allowed inside rational literals")),
            _ => Ok(acc),
        }
    }

    fn unary(&mut self) -> Result<Polynomial, RingError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, RingError> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected a non-negative integer exponent"));
            }
            let e: u32 = digits.parse().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn primary(&mut self) -> Result<Polynomial, RingError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n: BigInt = self.digits().parse().expect("digits");
                let mut value = Rational::from_integer(n);
                // `a/b` is a literal only when both sides are digits.
                if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    let d = self.digits();
                    if d.is_empty() {
                        return Err(self.error("expected denominator digits"));
                    }
                    let d: BigInt = d.parse().expect("digits");
                    if d.is_zero() {
                        return Err(self.error("zero denominator"));
                    }
                    value /= Rational::from_integer(d);
                }
                Ok(Polynomial::constant(self.ring, value))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Polynomial::var_named(self.ring, name)
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => Err(self.error("expected a number, variable or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, ring: &PolyRing, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (name, &e) in ring.vars().iter().zip(m.exponents()) {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(name)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                f.write_str(&format_rational(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", format_rational(&abs))?;
                }
                write_monomial(f, self.ring(), m)?;
            }
        }
        Ok(())
    }
}
