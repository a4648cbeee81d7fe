use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::polynomial::Polynomial;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Sorts `idx` in place and reports the parity of the sorting permutation.
/// Returns `None` if an index repeats (the wedge monomial vanishes).
pub(crate) fn normalize_wedge(idx: &mut [usize]) -> Option<bool> {
    let mut odd = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(odd)
    }
}

/// Skew multivector field `Σ X^I ∂_{i_1} ∧ ⋯ ∧ ∂_{i_k}` with polynomial
/// components, stored on strictly increasing index tuples (0-based).
///
/// A degree-0 polyvector is a function, stored under the empty tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyVector {
    dim: usize,
    degree: usize,
    components: BTreeMap<Vec<usize>, Polynomial>,
}

impl PolyVector {
    pub fn zero(dim: usize, degree: usize) -> Self {
        PolyVector {
            dim,
            degree,
            components: BTreeMap::new(),
        }
    }

    pub fn function(f: Polynomial) -> Self {
        let mut v = PolyVector::zero(f.dim(), 0);
        if !f.is_zero() {
            v.components.insert(Vec::new(), f);
        }
        v
    }

    /// Coordinate wedge `∂_{i_1} ∧ ⋯ ∧ ∂_{i_k}` with unit coefficient.
    pub fn basis(dim: usize, indices: &[usize]) -> Result<Self> {
        Self::from_components(dim, indices.len(), [(indices.to_vec(), Polynomial::one(dim))])
    }

    /// Builds a polyvector from `(indices, coefficient)` pairs. Index tuples
    /// may be in any order; they are sorted with the matching sign and
    /// entries with repeated indices vanish.
    pub fn from_components<I>(dim: usize, degree: usize, comps: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Polynomial)>,
    {
        let mut v = PolyVector::zero(dim, degree);
        for (idx, p) in comps {
            v.add_component(idx, p)?;
        }
        Ok(v)
    }

    pub fn add_component(&mut self, mut idx: Vec<usize>, p: Polynomial) -> Result<()> {
        if idx.len() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: idx.len(),
            });
        }
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, p.dim()));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.dim) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                dim: self.dim,
            });
        }
        let Some(odd) = normalize_wedge(&mut idx) else {
            return Ok(());
        };
        if p.is_zero() {
            return Ok(());
        }
        let p = if odd { -p } else { p };
        let entry = self
            .components
            .entry(idx)
            .or_insert_with(|| Polynomial::zero(self.dim));
        *entry = &*entry + &p;
        if entry.is_zero() {
            self.components.retain(|_, q| !q.is_zero());
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Polynomial)> {
        self.components.iter()
    }

    /// Component for an arbitrary index tuple, extended by skew-symmetry.
    pub fn component(&self, idx: &[usize]) -> Polynomial {
        if idx.len() != self.degree {
            return Polynomial::zero(self.dim);
        }
        let mut sorted = idx.to_vec();
        match normalize_wedge(&mut sorted) {
            None => Polynomial::zero(self.dim),
            Some(odd) => match self.components.get(&sorted) {
                None => Polynomial::zero(self.dim),
                Some(p) if odd => -p,
                Some(p) => p.clone(),
            },
        }
    }

    /// The underlying function of a degree-0 polyvector.
    pub fn as_function(&self) -> Option<Polynomial> {
        (self.degree == 0).then(|| self.component(&[]))
    }

    pub fn is_constant(&self) -> bool {
        self.components.values().all(Polynomial::is_constant)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (idx, p) in &other.components {
            out.add_component(idx.clone(), p.clone())?;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return PolyVector::zero(self.dim, self.degree);
        }
        PolyVector {
            dim: self.dim,
            degree: self.degree,
            components: self
                .components
                .iter()
                .map(|(k, p)| (k.clone(), p.scale(c)))
                .collect(),
        }
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let mut out = PolyVector::zero(self.dim, self.degree + other.degree);
        for (i, f) in &self.components {
            for (j, g) in &other.components {
                let mut idx = i.clone();
                idx.extend_from_slice(j);
                out.add_component(idx, f * g)?;
            }
        }
        Ok(out)
    }

    /// Schouten–Nijenhuis bracket, extended bilinearly from wedge products
    /// of vector fields:
    ///
    /// `[X_1∧⋯∧X_m, Y_1∧⋯∧Y_n] = Σ (-1)^{i+j} [X_i,Y_j] ∧ X_1..X̂_i..X_m ∧ Y_1..Ŷ_j..Y_n`
    ///
    /// with `[f, Y] = -ι_Y df` for functions. The result has degree
    /// `|X| + |Y| - 1`, except that two functions bracket to the zero function.
    pub fn schouten(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let degree = (self.degree + other.degree).saturating_sub(1);
        let mut out = PolyVector::zero(self.dim, degree);
        if self.degree + other.degree == 0 {
            return Ok(out);
        }
        for (xi, f) in &self.components {
            for (yj, g) in &other.components {
                bracket_monomials(f, xi, g, yj, &mut out)?;
            }
        }
        Ok(out)
    }

    /// Evaluates a bivector on the differentials of two functions with the
    /// convention `π(df, dg) = Σ_{i<j} π^{ij} (∂_i f ∂_j g − ∂_j f ∂_i g)`.
    pub fn poisson_bracket(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        poisson_bracket(self, f, g)
    }
}

/// `[f, g ∂_J] = g Σ_b (-1)^b ∂_{j_b} f ∂_{J∖j_b}` (b counted from 1).
fn bracket_function_left(
    f: &Polynomial,
    g: &Polynomial,
    yj: &[usize],
    sign: bool,
    out: &mut PolyVector,
) -> Result<()> {
    for b in 0..yj.len() {
        let df = f.partial(yj[b])?;
        if df.is_zero() {
            continue;
        }
        // (-1)^{b+1} for the 1-based position b+1
        let neg = (b % 2 == 0) ^ sign;
        let coef = g * &df;
        let idx: Vec<usize> = yj
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != b)
            .map(|(_, &j)| j)
            .collect();
        out.add_component(idx, if neg { -coef } else { coef })?;
    }
    Ok(())
}

fn bracket_monomials(
    f: &Polynomial,
    xi: &[usize],
    g: &Polynomial,
    yj: &[usize],
    out: &mut PolyVector,
) -> Result<()> {
    let (m, n) = (xi.len(), yj.len());
    let dim = f.dim();
    if m == 0 {
        return bracket_function_left(f, g, yj, false, out);
    }
    if n == 0 {
        // [X, g] = (-1)^{|X|} [g, X]
        return bracket_function_left(g, f, xi, m % 2 == 1, out);
    }
    let one = Polynomial::one(dim);
    for a in 0..m {
        for b in 0..n {
            let neg = (a + b) % 2 == 1;
            let u = if a == 0 { f } else { &one };
            let v = if b == 0 { g } else { &one };
            let rest = match (a == 0, b == 0) {
                (true, true) => one.clone(),
                (true, false) => g.clone(),
                (false, true) => f.clone(),
                (false, false) => f * g,
            };
            let (p, q) = (xi[a], yj[b]);
            let mut rest_idx: Vec<usize> = Vec::with_capacity(m + n - 2);
            rest_idx.extend(xi.iter().enumerate().filter(|&(k, _)| k != a).map(|(_, &i)| i));
            rest_idx.extend(yj.iter().enumerate().filter(|&(k, _)| k != b).map(|(_, &j)| j));

            // [u ∂_p, v ∂_q] = u ∂_p(v) ∂_q − v ∂_q(u) ∂_p
            let t1 = &(u * &v.partial(p)?) * &rest;
            let t2 = -&(&(v * &u.partial(q)?) * &rest);
            for (dir, coef) in [(q, t1), (p, t2)] {
                if coef.is_zero() {
                    continue;
                }
                let mut idx = Vec::with_capacity(m + n - 1);
                idx.push(dir);
                idx.extend_from_slice(&rest_idx);
                out.add_component(idx, if neg { -coef } else { coef })?;
            }
        }
    }
    Ok(())
}

/// `{f, g} = Σ_{i<j} π^{ij} (∂_i f ∂_j g − ∂_j f ∂_i g)`.
pub fn poisson_bracket(pi: &PolyVector, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    if pi.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            found: pi.degree(),
        });
    }
    if f.dim() != pi.dim() {
        return Err(Error::DimensionMismatch(pi.dim(), f.dim()));
    }
    if g.dim() != pi.dim() {
        return Err(Error::DimensionMismatch(pi.dim(), g.dim()));
    }
    let mut out = Polynomial::zero(pi.dim());
    for (idx, c) in pi.components() {
        let (i, j) = (idx[0], idx[1]);
        let t = &(&f.partial(i)? * &g.partial(j)?) - &(&f.partial(j)? * &g.partial(i)?);
        out = &out + &(c * &t);
    }
    Ok(out)
}

/// `[π, π]`; vanishes exactly when `π` is a Poisson structure.
pub fn jacobiator(pi: &PolyVector) -> Result<PolyVector> {
    if pi.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            found: pi.degree(),
        });
    }
    pi.schouten(pi)
}

impl fmt::Display for PolyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(idx, p)| {
                let wedge = idx
                    .iter()
                    .map(|i| format!("d{}", i + 1))
                    .collect::<Vec<_>>()
                    .join("^");
                if wedge.is_empty() {
                    format!("({p})")
                } else {
                    format!("({p}) {wedge}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
