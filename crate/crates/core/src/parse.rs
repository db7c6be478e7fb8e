//! Text forms of polynomials, field elements and two-element ideals.
//!
//! Elements are written in the root `a`, for example `2/3a^2-3a-8/3`;
//! coefficients are integers or `n/d` fractions, whitespace is ignored and
//! an optional `*` may separate a coefficient from the variable.
//! Polynomials are written in `x` (`x^3 - x^2 - 24x + 27`) or as the
//! comma-separated list `c2,c1,c0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{CubicPolynomial, FieldElement};

struct Scanner<'s> {
    src: &'s [u8],
    pos: usize,
}

impl<'s> Scanner<'s> {
    fn new(s: &'s str) -> Self {
        Scanner {
            src: s.as_bytes(),
            pos: 0,
        }
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected '{}'", c as char)))
        }
    }

    fn unexpected(&mut self, what: &str) -> Error {
        match self.peek() {
            Some(c) => Error::parse(self.pos, format!("{what}, found '{}'", c as char)),
            None => Error::parse(self.pos, format!("{what}, found end of input")),
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn integer(&mut self) -> Result<Option<BigInt>> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(Some(text.parse().expect("digits parse")))
    }

    fn exponent(&mut self) -> Result<u32> {
        if !self.eat(b'^') {
            return Ok(1);
        }
        let at = self.pos;
        match self.integer()? {
            Some(e) => e
                .try_into()
                .map_err(|_| Error::parse(at, "exponent too large")),
            None => Err(self.unexpected("expected exponent")),
        }
    }

    /// One signed term `[±][n[/d]][*]var[^k]`; returns coefficient and
    /// degree. `first` allows a missing sign.
    fn term(&mut self, var: u8, first: bool) -> Result<(BigRational, u32)> {
        let neg = match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                false
            }
            Some(b'-') => {
                self.pos += 1;
                true
            }
            _ if first => false,
            _ => return Err(self.unexpected("expected '+' or '-'")),
        };
        let num_at = self.pos;
        let coeff = match self.integer()? {
            Some(n) => {
                if self.eat(b'/') {
                    let den_at = self.pos;
                    let d = self
                        .integer()?
                        .ok_or_else(|| self.unexpected("expected denominator"))?;
                    if d.is_zero() {
                        return Err(Error::parse(den_at, "zero denominator"));
                    }
                    Some(BigRational::new(n, d))
                } else {
                    Some(BigRational::from_integer(n))
                }
            }
            None => None,
        };
        let star = coeff.is_some() && self.eat(b'*');
        let deg = if self.peek() == Some(var) {
            self.pos += 1;
            self.exponent()?
        } else if star || coeff.is_none() {
            self.pos = self.pos.max(num_at);
            return Err(self.unexpected(&format!("expected '{}'", var as char)));
        } else {
            0
        };
        let c = coeff.unwrap_or_else(BigRational::one);
        Ok((if neg { -c } else { c }, deg))
    }

    /// A sum of terms, stopping at `stop` or end of input.
    fn sum(&mut self, var: u8, max_deg: u32, stop: Option<u8>) -> Result<Vec<BigRational>> {
        let mut coeffs = vec![BigRational::zero(); max_deg as usize + 1];
        let mut first = true;
        loop {
            let at = {
                self.skip_ws();
                self.pos
            };
            match self.peek() {
                None => break,
                Some(c) if Some(c) == stop => break,
                _ => {}
            }
            let (c, d) = self.term(var, first)?;
            if d > max_deg {
                return Err(Error::parse(at, format!("degree {d} exceeds {max_deg}")));
            }
            coeffs[d as usize] += c;
            first = false;
        }
        if first {
            return Err(self.unexpected("expected a term"));
        }
        Ok(coeffs)
    }
}

/// Parse a field element written in the root `a`.
pub fn parse_element(s: &str) -> Result<FieldElement> {
    let mut sc = Scanner::new(s);
    let c = sc.sum(b'a', 2, None)?;
    Ok(FieldElement::new([
        c[0].clone(),
        c[1].clone(),
        c[2].clone(),
    ]))
}

/// Parse `(q, element)`.
pub fn parse_ideal(s: &str) -> Result<(BigInt, FieldElement)> {
    let mut sc = Scanner::new(s);
    sc.expect(b'(')?;
    let q = sc
        .integer()?
        .ok_or_else(|| sc.unexpected("expected an integer"))?;
    sc.expect(b',')?;
    let c = sc.sum(b'a', 2, Some(b')'))?;
    sc.expect(b')')?;
    if !sc.at_end() {
        return Err(sc.unexpected("expected end of input"));
    }
    Ok((
        q,
        FieldElement::new([c[0].clone(), c[1].clone(), c[2].clone()]),
    ))
}

/// Parse a monic cubic in `x`, or the list `c2,c1,c0`.
pub fn parse_polynomial(s: &str) -> Result<CubicPolynomial> {
    if s.contains(',') {
        return parse_coefficient_list(s);
    }
    let mut sc = Scanner::new(s);
    let c = sc.sum(b'x', 3, None)?;
    if !c[3].is_one() {
        return Err(Error::parse(0, "polynomial must be monic of degree 3"));
    }
    let int = |q: &BigRational, i: usize| {
        if q.is_integer() {
            Ok(q.to_integer())
        } else {
            Err(Error::parse(
                0,
                format!("coefficient of x^{i} is not an integer"),
            ))
        }
    };
    Ok(CubicPolynomial::from_big(
        int(&c[2], 2)?,
        int(&c[1], 1)?,
        int(&c[0], 0)?,
    ))
}

fn parse_coefficient_list(s: &str) -> Result<CubicPolynomial> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in s.split(',') {
        let mut sc = Scanner::new(part);
        let neg = sc.eat(b'-') || {
            sc.eat(b'+');
            false
        };
        let n = sc.integer()?.ok_or_else(|| {
            let e = sc.unexpected("expected an integer");
            shift(e, offset)
        })?;
        if !sc.at_end() {
            return Err(shift(sc.unexpected("expected ','"), offset));
        }
        out.push(if neg { -n } else { n });
        offset += part.len() + 1;
    }
    if out.len() != 3 {
        return Err(Error::parse(
            0,
            format!("expected 3 coefficients, got {}", out.len()),
        ));
    }
    let c0 = out.pop().unwrap();
    let c1 = out.pop().unwrap();
    let c2 = out.pop().unwrap();
    Ok(CubicPolynomial::from_big(c2, c1, c0))
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { offset, message } => Error::Parse {
            offset: offset + by,
            message,
        },
        other => other,
    }
}

fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Compact notation: `2/3a^2-3a-8/3`.
pub fn format_element(x: &FieldElement) -> String {
    let mut out = String::new();
    for (deg, var) in [(2usize, "a^2"), (1, "a"), (0, "")] {
        let c = &x.coords()[deg];
        if c.is_zero() {
            continue;
        }
        if c.is_negative() {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let mag = c.abs();
        if !(mag.is_one() && deg > 0) {
            out.push_str(&format_rational(&mag));
        }
        out.push_str(var);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn format_ideal(q: &BigInt, alpha: &FieldElement) -> String {
    format!("({q}, {})", format_element(alpha))
}
