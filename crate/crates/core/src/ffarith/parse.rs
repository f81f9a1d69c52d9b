//! Text syntax for elements of k: integers (read mod p), `T`, `+ - * / ^`,
//! parentheses, and implicit multiplication such as `2T` or `T(T+1)`.

use super::field::Fq;
use super::poly::Poly;
use super::rational::RationalK;
use crate::error::{Error, Result};

/// A parsed element, kept as a polynomial when no denominator survives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    Poly(Poly),
    Rational(RationalK),
}

impl Element {
    pub fn into_rational(self) -> RationalK {
        match self {
            Element::Poly(p) => RationalK::from_poly(p),
            Element::Rational(x) => x,
        }
    }
}

pub fn parse_elem(text: &str, fq: &Fq) -> Result<Element> {
    let x = parse_rational(text, fq)?;
    Ok(match x.as_poly() {
        Some(p) => Element::Poly(p.clone()),
        None => Element::Rational(x),
    })
}

pub fn parse_rational(text: &str, fq: &Fq) -> Result<RationalK> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, fq };
    let x = p.expr()?;
    p.skip_ws();
    if p.pos < p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(x)
}

/// Parses a polynomial, rejecting proper fractions.
pub fn parse_poly(text: &str, fq: &Fq) -> Result<Poly> {
    match parse_elem(text, fq)? {
        Element::Poly(p) => Ok(p),
        Element::Rational(_) => Err(Error::Parse { pos: 0, msg: format!("'{text}' is not a polynomial") }),
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    fq: &'a Fq,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RationalK> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalK> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.unary()?;
                    if rhs.is_zero() {
                        return Err(Error::Parse { pos: at, msg: "zero denominator".into() });
                    }
                    acc = acc.div(&rhs)?;
                }
                Some(b'T' | b'(' | b'0'..=b'9') => acc = &acc * &self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalK> {
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

    fn power(&mut self) -> Result<RationalK> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        let e: i64 = digits.parse().map_err(|_| Error::Parse { pos: start, msg: "expected an exponent".into() })?;
        if e > 100_000 {
            return Err(Error::Parse { pos: start, msg: "exponent too large".into() });
        }
        base.pow(if neg { -e } else { e }).map_err(|_| Error::Parse { pos: start, msg: "zero denominator".into() })
    }

    fn atom(&mut self) -> Result<RationalK> {
        match self.peek() {
            Some(b'T') => {
                self.pos += 1;
                Ok(RationalK::from_poly(Poly::var(self.fq)))
            }
            Some(b'(') => {
                self.pos += 1;
                let x = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(x)
            }
            Some(b'0'..=b'9') => {
                let p = self.fq.characteristic() as u64;
                let mut v = 0u64;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    v = (v * 10 + (self.s[self.pos] - b'0') as u64) % p;
                    self.pos += 1;
                }
                Ok(RationalK::constant(self.fq, self.fq.from_int(v as i64)))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_literal() {
        let fq = Fq::new(3).unwrap();
        let p = parse_poly("T^2+2*T+1", &fq).unwrap();
        assert_eq!(p, Poly::from_ints(&fq, &[1, 2, 1]));
        assert_eq!(parse_poly("(T+1)^2", &fq).unwrap(), p);
        assert_eq!(parse_poly("2T - 5", &fq).unwrap(), Poly::from_ints(&fq, &[1, 2]));
    }

    #[test]
    fn fraction_literal() {
        let fq = Fq::new(3).unwrap();
        let x = parse_rational("(T+1)/(T^2-T)", &fq).unwrap();
        assert_eq!(x.num(), &Poly::from_ints(&fq, &[1, 1]));
        assert_eq!(x.den(), &Poly::from_ints(&fq, &[0, -1, 1]));
        assert_eq!(parse_rational("T^-2", &fq).unwrap(), parse_rational("1/T^2", &fq).unwrap());
    }

    #[test]
    fn errors_carry_position() {
        let fq = Fq::new(3).unwrap();
        assert_eq!(parse_elem("T+", &fq).unwrap_err(), Error::Parse { pos: 2, msg: "unexpected end of input".into() });
        assert!(matches!(parse_elem("T % 2", &fq), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_elem("1/(T-T)", &fq), Err(Error::Parse { pos: 2, ref msg }) if msg == "zero denominator"));
        assert!(matches!(parse_elem("1/3", &fq), Err(Error::Parse { .. })));
    }
}
