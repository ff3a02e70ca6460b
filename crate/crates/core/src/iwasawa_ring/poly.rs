//! Exact integer polynomials in `T_1, ..., T_r`.
//!
//! Presentations are stored in this form so that they can be reduced into any
//! context, including the large-prime contexts used for rank certificates.
//!
//! Grammar accepted by [`IntPoly::parse`] (whitespace is ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'p' | 'T' index | '(' expr ')'
//! ```
//!
//! `index` runs from 1 to `r`; `p` stands for the prime.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::padic_linalg::bigint_valuation;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    r: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPoly {
    pub fn zero(r: usize) -> Self {
        IntPoly {
            r,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(r: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(r, vec![0; r], c)
    }

    pub fn one(r: usize) -> Self {
        Self::constant(r, 1)
    }

    /// `T_{i+1}` (zero-based index).
    pub fn variable(r: usize, i: usize) -> Self {
        assert!(i < r, "variable index {i} out of range for r = {r}");
        let mut e = vec![0; r];
        e[i] = 1;
        Self::monomial(r, e, 1)
    }

    pub fn monomial(r: usize, exponents: Vec<u32>, c: impl Into<BigInt>) -> Self {
        assert_eq!(exponents.len(), r);
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponents, c);
        }
        IntPoly { r, terms }
    }

    /// `Π (1 + T_i)^{a_i}`.
    pub fn group_element(r: usize, a: &[u64]) -> Self {
        assert_eq!(a.len(), r);
        let mut acc = Self::one(r);
        for (i, &ai) in a.iter().enumerate() {
            let tau = Self::one(r).add(&Self::variable(r, i));
            acc = acc.mul(&tau.pow(ai));
        }
        acc
    }

    /// `ω_{m,i} = (1 + T_i)^{p^m} - 1`.
    pub fn omega(r: usize, p: u64, m: u32, i: usize) -> Self {
        let tau = Self::one(r).add(&Self::variable(r, i));
        tau.pow(p.pow(m)).sub(&Self::one(r))
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exponents: &[u32]) -> BigInt {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Largest `k` with every coefficient divisible by `p^k`; `None` for zero.
    pub fn p_content(&self, p: u64) -> Option<u32> {
        self.terms.values().filter_map(|c| bigint_valuation(c, p)).min()
    }

    /// Coefficients of a univariate polynomial, constant term first.
    pub fn univariate_coefficients(&self) -> Vec<BigInt> {
        assert_eq!(self.r, 1);
        let deg = self.degree_in(0) as usize;
        let mut out = vec![BigInt::zero(); if self.is_zero() { 0 } else { deg + 1 }];
        for (e, c) in &self.terms {
            out[e[0] as usize] = c.clone();
        }
        out
    }

    fn insert(&mut self, e: Vec<u32>, c: BigInt) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        assert_eq!(self.r, other.r);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            r: self.r,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        if c.is_zero() {
            return IntPoly::zero(self.r);
        }
        IntPoly {
            r: self.r,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        assert_eq!(self.r, other.r);
        let mut out = IntPoly::zero(self.r);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut exp: u64) -> IntPoly {
        let mut acc = IntPoly::one(self.r);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Parses a polynomial in `T1..Tr`; errors carry one-based line and column.
    pub fn parse(src: &str, r: usize, p: u64) -> Result<IntPoly> {
        let mut parser = Parser {
            chars: src.chars().collect(),
            pos: 0,
            r,
            p,
        };
        let poly = parser.expr()?;
        parser.skip_ws();
        if parser.pos < parser.chars.len() {
            return Err(parser.error(format!("unexpected '{}'", parser.chars[parser.pos])));
        }
        Ok(poly)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let mut vars = String::new();
            for (i, &a) in e.iter().enumerate() {
                match a {
                    0 => {}
                    1 => vars.push_str(&format!("*T{}", i + 1)),
                    _ => vars.push_str(&format!("*T{}^{}", i + 1, a)),
                }
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", &vars[1..])?;
            } else {
                write!(f, "{mag}{vars}")?;
            }
        }
        Ok(())
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    r: usize,
    p: u64,
}

impl Parser {
    fn error(&self, message: String) -> Error {
        let mut line = 1;
        let mut column = 1;
        for &c in &self.chars[..self.pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        Error::Parse { line, column, message }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer".into()));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn expr(&mut self) -> Result<IntPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<IntPoly> {
        let mut acc = self.unary()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<IntPoly> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<IntPoly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer()?;
            let e = e
                .to_u64()
                .filter(|&e| e <= 1 << 20)
                .ok_or_else(|| self.error("exponent out of range".into()))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<IntPoly> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(IntPoly::constant(self.r, self.integer()?)),
            Some('p') => {
                self.pos += 1;
                Ok(IntPoly::constant(self.r, self.p))
            }
            Some('T') => {
                let at = self.pos;
                self.pos += 1;
                if !self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    return Err(self.error("expected a variable index after 'T'".into()));
                }
                let idx = self.integer()?;
                match idx.to_usize() {
                    Some(i) if (1..=self.r).contains(&i) => Ok(IntPoly::variable(self.r, i - 1)),
                    _ => {
                        self.pos = at;
                        Err(self.error(format!("variable T{idx} out of range for r = {}", self.r)))
                    }
                }
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input".into())),
        }
    }
}
