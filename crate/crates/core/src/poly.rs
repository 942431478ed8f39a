//! Dense univariate polynomials over the integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::bareiss_det;

/// Coefficients are stored constant term first, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<String>", try_from = "Vec<String>")]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl From<IntPoly> for Vec<String> {
    fn from(p: IntPoly) -> Self {
        p.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl TryFrom<Vec<String>> for IntPoly {
    type Error = String;
    fn try_from(v: Vec<String>) -> std::result::Result<Self, String> {
        let coeffs = v
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| format!("bad coefficient {s:?}: {e}")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(IntPoly::new(coeffs))
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        IntPoly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Division with remainder by a monic divisor.
    pub fn divrem_monic(&self, divisor: &Self) -> Result<(Self, Self)> {
        if !divisor.is_monic() {
            return Err(Error::NonMonic);
        }
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Resultant via the determinant of the Sylvester matrix.
    pub fn resultant(&self, other: &Self) -> BigInt {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return BigInt::zero();
        };
        if m == 0 && n == 0 {
            return BigInt::one();
        }
        let size = m + n;
        let mut s = vec![vec![BigInt::zero(); size]; size];
        for row in 0..n {
            for (i, c) in self.coeffs.iter().rev().enumerate() {
                s[row][row + i] = c.clone();
            }
        }
        for row in 0..m {
            for (i, c) in other.coeffs.iter().rev().enumerate() {
                s[n + row][row + i] = c.clone();
            }
        }
        bareiss_det(&s)
    }

    /// `disc(f) = (-1)^{r(r-1)/2} Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> Result<BigInt> {
        let r = match self.degree() {
            Some(r) if r >= 2 => r,
            _ => return Err(Error::arg("discriminant needs degree at least 2")),
        };
        let res = self.resultant(&self.derivative());
        let (q, rem) = res.div_rem(&self.leading());
        if !rem.is_zero() {
            return Err(Error::internal("resultant not divisible by the leading coefficient"));
        }
        Ok(if (r * (r - 1) / 2) % 2 == 1 { -q } else { q })
    }

    /// Parses a sum of terms in `x`; coefficients must be integers.
    pub fn parse(text: &str) -> Result<Self> {
        Parser { s: text.as_bytes(), pos: 0 }.poly()
    }

    /// `n`-th cyclotomic polynomial.
    pub fn cyclotomic(n: usize) -> Self {
        let mut num = Self::monomial(n).sub(&Self::one());
        for d in 1..n {
            if n % d == 0 {
                num = num.divrem_monic(&Self::cyclotomic(d)).expect("monic").0;
            }
        }
        num
    }
}

/// Parses a polynomial and requires it to be monic.
pub fn parse_poly(text: &str) -> Result<IntPoly> {
    let f = IntPoly::parse(text)?;
    if !f.is_monic() {
        return Err(Error::NonMonic);
    }
    Ok(f)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
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

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
        Some(text.parse().expect("digits"))
    }

    fn poly(&mut self) -> Result<IntPoly> {
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if first => return self.err("empty polynomial"),
                None => break,
                Some(b'+') if !first => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                Some(_) if first => 1,
                Some(_) => return self.err("expected '+' or '-'"),
            };
            first = false;
            let (c, e) = self.term()?;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, BigInt::zero());
            }
            coeffs[e] += c * sign;
        }
        Ok(IntPoly::new(coeffs))
    }

    fn term(&mut self) -> Result<(BigInt, usize)> {
        let coeff = self.digits();
        if coeff.is_some() && self.peek() == Some(b'.') {
            return self.err("non-integer coefficient");
        }
        let mut star = false;
        if coeff.is_some() && self.peek() == Some(b'*') {
            self.pos += 1;
            star = true;
        }
        if self.peek() == Some(b'x') {
            self.pos += 1;
            let exp = if self.peek() == Some(b'^') {
                self.pos += 1;
                match self.digits() {
                    Some(e) if e.is_positive() => {
                        usize::try_from(&e).or_else(|_| self.err("exponent too large"))?
                    }
                    _ => return self.err("expected a positive integer exponent"),
                }
            } else {
                1
            };
            Ok((coeff.unwrap_or_else(BigInt::one), exp))
        } else if star {
            self.err("expected 'x' after '*'")
        } else if let Some(c) = coeff {
            Ok((c, 0))
        } else {
            self.err("expected a term")
        }
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{a}*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        let f = parse_poly("x^8 + x + 1").unwrap();
        assert_eq!(f, IntPoly::from_i64(&[1, 1, 0, 0, 0, 0, 0, 0, 1]));
        assert_eq!(parse_poly("x^2").unwrap(), IntPoly::from_i64(&[0, 0, 1]));
        assert!(matches!(IntPoly::parse("x^-1"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(IntPoly::parse("1.5x"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("2x^2+1"), Err(Error::NonMonic)));
        assert_eq!(
            IntPoly::parse("-3*x^2 + 2 x - 7 + x^2").unwrap(),
            IntPoly::from_i64(&[-7, 2, -2])
        );
        assert!(IntPoly::parse("").is_err());
        assert!(IntPoly::parse("x x").is_err());
        let g = parse_poly("x^5 - 4*x + 2").unwrap();
        assert_eq!(IntPoly::parse(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn discriminants() {
        let f = parse_poly("x^8 + x + 1").unwrap();
        assert_eq!(f.discriminant().unwrap(), BigInt::from(15953673));
        assert_eq!(parse_poly("x^2+1").unwrap().discriminant().unwrap(), BigInt::from(-4));
        assert_eq!(parse_poly("x^2-1").unwrap().discriminant().unwrap(), BigInt::from(4));
        assert!(parse_poly("x+1").unwrap().discriminant().is_err());
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(IntPoly::cyclotomic(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(IntPoly::cyclotomic(6), IntPoly::from_i64(&[1, -1, 1]));
        assert_eq!(IntPoly::cyclotomic(12), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
        assert_eq!(IntPoly::cyclotomic(22).degree(), Some(10));
    }
}
