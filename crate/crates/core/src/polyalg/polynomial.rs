use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Exponent vector of a monomial `x^I`; its length is the ambient dimension.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentIndex(pub Vec<u32>);

impl ExponentIndex {
    pub fn zero(dim: usize) -> Self {
        ExponentIndex(vec![0; dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        ExponentIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn add(&self, other: &Self) -> Self {
        ExponentIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// Polynomial in `dim` variables with exact rational coefficients.
///
/// Terms are kept in a `BTreeMap`, so iteration (and therefore printing and
/// serialization) is deterministic. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<ExponentIndex, Rational>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::monomial(dim, ExponentIndex::zero(dim), c)
    }

    pub fn monomial(dim: usize, exps: ExponentIndex, c: Rational) -> Self {
        assert_eq!(exps.dim(), dim, "exponent length must equal dimension");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Polynomial { dim, terms }
    }

    /// The coordinate function `x_{i+1}` (0-based index `i`).
    pub fn var(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::IndexOutOfRange { index: i, dim });
        }
        Ok(Self::monomial(dim, ExponentIndex::unit(dim, i), Rational::one()))
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentIndex, Rational)>,
    {
        let mut p = Polynomial::zero(dim);
        for (e, c) in terms {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch(dim, e.dim()));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Returns the constant value if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                (e.total_degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(ExponentIndex::total_degree).max()
    }

    pub fn coefficient(&self, e: &ExponentIndex) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub(crate) fn add_term(&mut self, e: ExponentIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Polynomial::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Polynomial::one(self.dim);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to `x_{i+1}` (0-based index `i`).
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i >= self.dim {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: self.dim,
            });
        }
        let mut out = Polynomial::zero(self.dim);
        for (e, c) in &self.terms {
            let k = e.0[i];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2.0[i] -= 1;
            out.add_term(e2, c * Rational::from_integer(k.into()));
        }
        Ok(out)
    }

    /// Applies `∂^K` for a multi-index `K` (one exponent per variable).
    pub fn derivative(&self, k: &[u32]) -> Result<Self> {
        if k.len() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, k.len()));
        }
        let mut out = Polynomial::zero(self.dim);
        'terms: for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut e2 = e.clone();
            for (v, &kv) in k.iter().enumerate() {
                let ev = e.0[v];
                if kv > ev {
                    continue 'terms;
                }
                // falling factorial ev (ev-1) ... (ev-kv+1)
                for t in 0..kv {
                    coeff *= Rational::from_integer((ev - t).into());
                }
                e2.0[v] = ev - kv;
            }
            out.add_term(e2, coeff);
        }
        Ok(out)
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, point.len()));
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(&e.0) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Parses the text grammar `[±][coef] [x<i>[^e]]*` summed over terms,
    /// e.g. `3/2 x1^2 x3 - x2`. Variables are 1-based.
    pub fn parse(s: &str, dim: usize) -> Result<Self> {
        parse_polynomial(s, dim)
    }

    /// Like [`Polynomial::parse`], but takes the dimension from the highest
    /// variable index mentioned (at least `min_dim`).
    pub fn parse_infer(s: &str, min_dim: usize) -> Result<Self> {
        let max_var = scan_max_var(s)?;
        parse_polynomial(s, max_var.max(min_dim).max(1))
    }
}

fn scan_max_var(s: &str) -> Result<usize> {
    let mut max = 0;
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        if b[i] == b'x' {
            let start = i + 1;
            let mut j = start;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            let idx: usize = s[start..j]
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable in {s:?}")))?;
            max = max.max(idx);
            i = j;
        } else {
            i += 1;
        }
    }
    Ok(max)
}

fn parse_polynomial(s: &str, dim: usize) -> Result<Polynomial> {
    let mut out = Polynomial::zero(dim);
    let mut chars = s.char_indices().peekable();
    let mut any_term = false;
    loop {
        // sign(s)
        let mut negative = false;
        let mut saw_sign = false;
        while let Some(&(_, ch)) = chars.peek() {
            match ch {
                c if c.is_whitespace() => {
                    chars.next();
                }
                '+' => {
                    saw_sign = true;
                    chars.next();
                }
                '-' => {
                    saw_sign = true;
                    negative = !negative;
                    chars.next();
                }
                _ => break,
            }
        }
        let Some(&(start, _)) = chars.peek() else {
            if saw_sign {
                return Err(Error::Parse(format!("dangling sign in {s:?}")));
            }
            if !any_term {
                return Err(Error::Parse("empty polynomial".into()));
            }
            break;
        };
        if any_term && !saw_sign {
            return Err(Error::Parse(format!("missing operator in {s:?}")));
        }
        // term body: runs until the next '+' or '-'
        let mut end = s.len();
        while let Some(&(pos, ch)) = chars.peek() {
            if ch == '+' || ch == '-' {
                end = pos;
                break;
            }
            chars.next();
        }
        let body = &s[start..end];
        let (coef, exps) = parse_term(body, dim)?;
        let coef = if negative { -coef } else { coef };
        out.add_term(exps, coef);
        any_term = true;
    }
    Ok(out)
}

fn parse_term(body: &str, dim: usize) -> Result<(Rational, ExponentIndex)> {
    let mut coef = Rational::one();
    let mut exps = ExponentIndex::zero(dim);
    let mut seen_coef = false;
    let mut seen_factor = false;
    for tok in body.split(|c: char| c.is_whitespace() || c == '*') {
        if tok.is_empty() {
            continue;
        }
        if let Some(rest) = tok.strip_prefix('x') {
            let (idx, exp) = match rest.split_once('^') {
                Some((i, e)) => (i, e),
                None => (rest, "1"),
            };
            let idx: usize = idx
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable {tok:?}")))?;
            let exp: u32 = exp
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {tok:?}")))?;
            if idx == 0 || idx > dim {
                return Err(Error::IndexOutOfRange { index: idx, dim });
            }
            exps.0[idx - 1] += exp;
            seen_factor = true;
        } else {
            if seen_coef || seen_factor {
                return Err(Error::Parse(format!(
                    "coefficient must lead the term in {body:?}"
                )));
            }
            coef = parse_rational(tok)?;
            seen_coef = true;
        }
    }
    if !seen_coef && !seen_factor {
        return Err(Error::Parse(format!("empty term in {body:?}")));
    }
    Ok((coef, exps))
}

fn format_monomial(e: &ExponentIndex) -> String {
    e.0.iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            if k == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{}", i + 1, k)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for Polynomial {
    /// Terms are printed in descending lexicographic exponent order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono = format_monomial(e);
            if mono.is_empty() {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{} {mono}", format_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial dimension mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial dimension mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial dimension mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
