//! Sparse bivariate polynomials in `x`, `y`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use super::field::Field;
use crate::error::{Error, Result};

/// Largest exponent accepted by the parser.
pub const EXPONENT_CAP: u64 = 10_000;

/// Exponent pair `(a, b)` standing for `x^a y^b`.
pub type Mono = (u32, u32);

/// A polynomial `sum c_ab x^a y^b` with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F: Field> {
    terms: BTreeMap<Mono, F>,
}

impl<F: Field> Default for Poly<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::term(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(0, 1)
    }

    /// The monomial `x^a y^b`.
    pub fn monomial(a: u32, b: u32) -> Self {
        Self::term(F::one(), a, b)
    }

    /// `c x^a y^b`; zero if `c` is zero.
    pub fn term(c: F, a: u32, b: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((a, b), c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, F)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &F)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, a: u32, b: u32) -> F {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(F::zero)
    }

    pub fn constant_term(&self) -> F {
        self.coeff(0, 0)
    }

    /// A unit of the local ring: nonzero constant term.
    pub fn is_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    /// `Some((c, a, b))` if the polynomial is a single term.
    pub fn as_term(&self) -> Option<(F, u32, u32)> {
        if self.terms.len() == 1 {
            let (&(a, b), c) = self.terms.iter().next().unwrap();
            Some((c.clone(), a, b))
        } else {
            None
        }
    }

    /// The m-adic order: least total degree of a term, `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&(a, b)| a + b).min()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(a, b)| a + b).max()
    }

    pub fn add_term(&mut self, m: Mono, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, v)| (*m, v.clone() * c.clone())).collect() }
    }

    /// Multiply by the monomial `x^a y^b`.
    pub fn shift(&self, a: u32, b: u32) -> Self {
        Poly { terms: self.terms.iter().map(|(&(u, v), c)| ((u + a, v + b), c.clone())).collect() }
    }

    /// Drop every term of total degree `>= n`.
    pub fn truncate(&self, n: u32) -> Self {
        Poly { terms: self.terms.iter().filter(|(&(a, b), _)| a + b < n).map(|(m, c)| (*m, c.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &F, y: &F) -> F {
        let mut acc = F::zero();
        for (&(a, b), c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..a {
                t = t * x.clone();
            }
            for _ in 0..b {
                t = t * y.clone();
            }
            acc = acc + t;
        }
        acc
    }

    /// Coefficients of `f(x, 0)` as a dense univariate vector.
    pub fn restrict_y0(&self) -> Vec<F> {
        let mut out = Vec::new();
        for (&(a, b), c) in &self.terms {
            if b == 0 {
                let a = a as usize;
                if out.len() <= a {
                    out.resize(a + 1, F::zero());
                }
                out[a] = c.clone();
            }
        }
        out
    }

    /// Exact division by `y`; `None` if some term has no `y`.
    pub fn div_y(&self) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (&(a, b), c) in &self.terms {
            if b == 0 {
                return None;
            }
            terms.insert((a, b - 1), c.clone());
        }
        Some(Poly { terms })
    }

    /// Parse a polynomial in the grammar: integer coefficients, variables
    /// `x` and `y`, operators `+ - * ^`, no juxtaposition, whitespace ignored.
    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).parse()
    }
}

impl<F: Field> std::ops::Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, o: &Poly<F>) -> Poly<F> {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c.clone());
        }
        r
    }
}

impl<F: Field> std::ops::Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, o: &Poly<F>) -> Poly<F> {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, -c.clone());
        }
        r
    }
}

impl<F: Field> std::ops::Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }
}

impl<F: Field> std::ops::Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, o: &Poly<F>) -> Poly<F> {
        let mut r = Poly::zero();
        for (&(a, b), c) in &self.terms {
            for (&(u, v), d) in &o.terms {
                r.add_term((a + u, b + v), c.clone() * d.clone());
            }
        }
        r
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Descending total degree, then descending power of x.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(&(a, b), _)| std::cmp::Reverse((a + b, a)));
        for (i, (&(a, b), c)) in terms.into_iter().enumerate() {
            let (neg, mag) = match c.as_small_int() {
                Some(v) if v < 0 => (true, Coef::Int(v.unsigned_abs())),
                Some(v) => (false, Coef::Int(v as u64)),
                None => (false, Coef::Other(c.to_string())),
            };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            match mag {
                Coef::Int(1) if a + b > 0 => {}
                Coef::Int(v) => factors.push(v.to_string()),
                Coef::Other(s) => factors.push(s),
            }
            match a {
                0 => {}
                1 => factors.push("x".into()),
                _ => factors.push(format!("x^{a}")),
            }
            match b {
                0 => {}
                1 => factors.push("y".into()),
                _ => factors.push(format!("y^{b}")),
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

enum Coef {
    Int(u64),
    Other(String),
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        let chars: Vec<(usize, char)> = text.chars().enumerate().filter(|(_, c)| !c.is_whitespace()).collect();
        let end = text.chars().count();
        Parser { chars, at: 0, end }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map(|&(p, _)| p).unwrap_or(self.end)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn parse<F: Field>(mut self) -> Result<Poly<F>> {
        if self.chars.is_empty() {
            return self.err("empty polynomial");
        }
        let mut acc = Poly::zero();
        let mut sign = match self.peek() {
            Some('-') => {
                self.at += 1;
                -1
            }
            Some('+') => {
                self.at += 1;
                1
            }
            _ => 1,
        };
        loop {
            let (c, a, b) = self.term()?;
            let c = if sign < 0 { -c } else { c };
            acc.add_term((a, b), F::from_bigint(&c));
            match self.peek() {
                None => break,
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                Some(ch) if ch == 'x' || ch == 'y' || ch.is_ascii_digit() => {
                    return self.err("juxtaposition is not allowed; use '*'")
                }
                Some(ch) => return self.err(format!("unexpected character '{ch}'")),
            }
            self.at += 1;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<(BigInt, u32, u32)> {
        let mut coef = BigInt::from(1);
        let (mut a, mut b) = (0u64, 0u64);
        loop {
            match self.peek() {
                Some(ch) if ch.is_ascii_digit() => {
                    coef *= self.integer()?;
                }
                Some(v @ ('x' | 'y')) => {
                    self.at += 1;
                    let mut e = 1u64;
                    if self.peek() == Some('^') {
                        self.at += 1;
                        let n = self.integer()?;
                        e = u64::try_from(&n).unwrap_or(u64::MAX);
                        if e > EXPONENT_CAP {
                            return Err(Error::ExponentOverflow { exp: e, cap: EXPONENT_CAP });
                        }
                    }
                    if v == 'x' {
                        a += e;
                    } else {
                        b += e;
                    }
                    if a > EXPONENT_CAP || b > EXPONENT_CAP {
                        return Err(Error::ExponentOverflow { exp: a.max(b), cap: EXPONENT_CAP });
                    }
                }
                Some(ch) => return self.err(format!("expected a number or variable, found '{ch}'")),
                None => return self.err("unexpected end of input"),
            }
            match self.peek() {
                Some('*') => self.at += 1,
                Some('x' | 'y') => return self.err("juxtaposition is not allowed; use '*'"),
                Some(ch) if ch.is_ascii_digit() => return self.err("juxtaposition is not allowed; use '*'"),
                _ => break,
            }
        }
        Ok((coef, a as u32, b as u32))
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.at;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.at += 1;
        }
        if start == self.at {
            return self.err("expected an integer");
        }
        let s: String = self.chars[start..self.at].iter().map(|&(_, c)| c).collect();
        Ok(s.parse::<BigInt>().expect("digits parse"))
    }
}
