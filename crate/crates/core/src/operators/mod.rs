//! Multidifferential operators with polynomial coefficients.
//!
//! An operator of arity `m` is a finite sum of terms
//! `c(x) · ∂^{K_1} f_1 ⋯ ∂^{K_m} f_m`. Terms with equal derivative
//! signatures are merged, so two operators are equal exactly when their
//! term maps are.

mod bgamma;
mod hochschild;

pub use bgamma::{build_b_gamma, build_b_gamma_with_dim};
pub use hochschild::{compose_gerstenhaber, gerstenhaber_bracket, hkr, hochschild_d};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::rational::factorial;
use crate::polyalg::{Polynomial, Rational};

/// Derivative multi-index on one argument slot: how often each `∂_i` acts.
pub type DerivIndex = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiDiffOp {
    dim: usize,
    arity: usize,
    terms: BTreeMap<Vec<DerivIndex>, Polynomial>,
}

impl MultiDiffOp {
    /// Panics on arity 0.
    pub fn zero(dim: usize, arity: usize) -> Self {
        assert!(arity >= 1, "operators take at least one argument");
        MultiDiffOp {
            dim,
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zero(dim, 1);
        op.terms.insert(vec![vec![0; dim]], Polynomial::one(dim));
        op
    }

    /// Pointwise multiplication `m(f, g) = fg`.
    pub fn multiplication(dim: usize) -> Self {
        let mut op = Self::zero(dim, 2);
        op.terms.insert(vec![vec![0; dim]; 2], Polynomial::one(dim));
        op
    }

    /// `f ↦ c f`.
    pub fn multiply_by(c: Polynomial) -> Self {
        let dim = c.dim();
        let mut op = Self::zero(dim, 1);
        op.add_term(vec![vec![0; dim]], c).expect("shapes match");
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Gerstenhaber degree `arity − 1`.
    pub fn degree(&self) -> usize {
        self.arity - 1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<DerivIndex>, &Polynomial)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, derivs: Vec<DerivIndex>, c: Polynomial) -> Result<()> {
        if derivs.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: derivs.len(),
            });
        }
        if let Some(k) = derivs.iter().find(|k| k.len() != self.dim) {
            return Err(Error::DimensionMismatch(self.dim, k.len()));
        }
        if c.dim() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, c.dim()));
        }
        self.add_term_unchecked(derivs, c);
        Ok(())
    }

    pub(crate) fn add_term_unchecked(&mut self, derivs: Vec<DerivIndex>, c: Polynomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(derivs) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term_unchecked(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = Self::zero(self.dim, self.arity);
        if r.is_zero() {
            return out;
        }
        for (k, c) in &self.terms {
            out.terms.insert(k.clone(), c.scale(r));
        }
        out
    }

    /// Multiplies every coefficient by a polynomial.
    pub fn scale_poly(&self, p: &Polynomial) -> Result<Self> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, p.dim()));
        }
        let mut out = Self::zero(self.dim, self.arity);
        for (k, c) in &self.terms {
            out.add_term_unchecked(k.clone(), c * p);
        }
        Ok(out)
    }

    /// `Σ_terms c · ∏_s ∂^{K_s} args[s]`.
    pub fn apply(&self, args: &[Polynomial]) -> Result<Polynomial> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: args.len(),
            });
        }
        if let Some(a) = args.iter().find(|a| a.dim() != self.dim) {
            return Err(Error::DimensionMismatch(self.dim, a.dim()));
        }
        let mut cache: Vec<BTreeMap<&DerivIndex, Polynomial>> = vec![BTreeMap::new(); self.arity];
        let mut acc = Polynomial::zero(self.dim);
        'terms: for (ks, c) in &self.terms {
            let mut t = c.clone();
            for (s, k) in ks.iter().enumerate() {
                let d = cache[s]
                    .entry(k)
                    .or_insert_with(|| args[s].derivative(k).expect("dimension checked"));
                if d.is_zero() {
                    continue 'terms;
                }
                t = &t * d;
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Insertion `φ ∘_i ψ`: `ψ` fills slot `i` of `φ`, and the result has
    /// arity `arity(φ) + arity(ψ) − 1`. Derivatives of `φ` on slot `i` are
    /// distributed over `ψ`'s coefficient and arguments by the Leibniz rule.
    pub fn insert(&self, i: usize, psi: &MultiDiffOp) -> Result<MultiDiffOp> {
        if self.dim != psi.dim {
            return Err(Error::DimensionMismatch(self.dim, psi.dim));
        }
        if i >= self.arity {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: self.arity,
            });
        }
        let d = self.dim;
        let n1 = psi.arity;
        let mut out = MultiDiffOp::zero(d, self.arity + n1 - 1);
        let mut split_cache: BTreeMap<&DerivIndex, Vec<(Vec<DerivIndex>, Rational)>> = BTreeMap::new();
        for (ks, c) in &self.terms {
            let splits = split_cache
                .entry(&ks[i])
                .or_insert_with(|| leibniz_splits(&ks[i], n1 + 1));
            for (ls, c2) in &psi.terms {
                for (parts, mult) in splits.iter() {
                    let dc = c2.derivative(&parts[0]).expect("dimension checked");
                    if dc.is_zero() {
                        continue;
                    }
                    let mut derivs = Vec::with_capacity(out.arity);
                    derivs.extend(ks[..i].iter().cloned());
                    for (j, l) in ls.iter().enumerate() {
                        derivs.push(l.iter().zip(&parts[j + 1]).map(|(a, b)| a + b).collect());
                    }
                    derivs.extend(ks[i + 1..].iter().cloned());
                    out.add_term_unchecked(derivs, (c * &dc).scale(mult));
                }
            }
        }
        Ok(out)
    }

    /// Ordinary composition of unary operators, `(self ∘ other)(f) = self(other(f))`.
    pub fn then_after(&self, other: &MultiDiffOp) -> Result<MultiDiffOp> {
        if self.arity != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: self.arity,
            });
        }
        self.insert(0, other)
    }

    /// Largest total derivative order on any slot.
    pub fn max_slot_order(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|ks| ks.iter().map(|k| k.iter().sum::<u32>()))
            .max()
            .unwrap_or(0)
    }
}

/// All ways to write the multi-index `k` as an ordered sum of `parts`
/// multi-indices, with the multinomial factor `k! / ∏ a_j!`.
pub(crate) fn leibniz_splits(k: &[u32], parts: usize) -> Vec<(Vec<DerivIndex>, Rational)> {
    let d = k.len();
    let mut out: Vec<(Vec<DerivIndex>, Rational)> = vec![(vec![vec![0; d]; parts], Rational::one())];
    for v in 0..d {
        let kv = k[v];
        if kv == 0 {
            continue;
        }
        let comps = compositions(kv, parts);
        let mut next = Vec::with_capacity(out.len() * comps.len());
        for (base, c) in &out {
            for comp in &comps {
                let mut b = base.clone();
                let mut denom = Rational::one();
                for (j, &a) in comp.iter().enumerate() {
                    b[j][v] = a;
                    denom *= factorial(a);
                }
                next.push((b, c * factorial(kv) / denom));
            }
        }
        out = next;
    }
    out
}

/// Weak compositions of `total` into `parts` non-negative integers.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl fmt::Display for MultiDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (ks, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (s, k) in ks.iter().enumerate() {
                write!(f, " ")?;
                for (v, &e) in k.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => write!(f, "d{} ", v + 1)?,
                        _ => write!(f, "d{}^{} ", v + 1, e)?,
                    }
                }
                write!(f, "f{}", s + 1)?;
            }
        }
        Ok(())
    }
}

/// JSON term-list form: `{"dim", "arity", "terms": [{"derivs", "coeff"}]}`.
#[derive(Serialize, Deserialize)]
struct OpRepr {
    dim: usize,
    arity: usize,
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    derivs: Vec<DerivIndex>,
    coeff: String,
}

impl Serialize for MultiDiffOp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OpRepr {
            dim: self.dim,
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| TermRepr {
                    derivs: k.clone(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiDiffOp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = OpRepr::deserialize(d)?;
        if r.arity == 0 {
            return Err(D::Error::custom("arity must be at least 1"));
        }
        let mut op = MultiDiffOp::zero(r.dim, r.arity);
        for t in r.terms {
            let c = Polynomial::parse(&t.coeff, r.dim).map_err(D::Error::custom)?;
            op.add_term(t.derivs, c).map_err(D::Error::custom)?;
        }
        Ok(op)
    }
}
