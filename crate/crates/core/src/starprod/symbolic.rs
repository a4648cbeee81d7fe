//! Star products with graph weights kept as formal symbols.
//!
//! Each coefficient is a polynomial in the coordinates whose coefficients
//! are polynomials in the unknown weights `w_Γ`. Substituting exact values
//! gives the ordinary expansion; substituting intervals bounds it.

use std::collections::BTreeMap;

use num_traits::One;

use super::{contributing_graphs, Interval, MAX_GRAPH_ORDER};
use crate::error::{Error, Result};
use crate::graphs::GraphId;
use crate::operators::MultiDiffOp;
use crate::polyalg::polynomial::ExponentIndex;
use crate::polyalg::rational::{factorial, to_f64};
use crate::polyalg::{PolyVector, Polynomial, Rational};
use crate::weights::WeightTable;

/// A product of weight symbols, stored as a sorted list with repetition.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightMonomial(Vec<GraphId>);

impl WeightMonomial {
    pub fn one() -> Self {
        WeightMonomial(Vec::new())
    }

    pub fn single(id: GraphId) -> Self {
        WeightMonomial(vec![id])
    }

    pub fn factors(&self) -> &[GraphId] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn times(&self, other: &WeightMonomial) -> WeightMonomial {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        v.sort();
        WeightMonomial(v)
    }
}

/// `Σ_m m · p_m` over weight monomials `m` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicPoly {
    dim: usize,
    terms: BTreeMap<WeightMonomial, Polynomial>,
}

impl SymbolicPoly {
    pub fn zero(dim: usize) -> Self {
        SymbolicPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_poly(p: &Polynomial) -> Self {
        let mut s = Self::zero(p.dim());
        s.add_term(WeightMonomial::one(), p.clone());
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeightMonomial, &Polynomial)> {
        self.terms.iter()
    }

    fn add_term(&mut self, m: WeightMonomial, p: Polynomial) {
        if p.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(q) => {
                *q = &*q + &p;
                if q.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, p);
            }
        }
    }

    pub fn try_sub(&self, other: &SymbolicPoly) -> Result<SymbolicPoly> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let mut out = self.clone();
        for (m, p) in &other.terms {
            out.add_term(m.clone(), -p);
        }
        Ok(out)
    }

    /// Substitutes exact weights. Fails on the first symbol `weight` cannot
    /// supply.
    pub fn evaluate<F>(&self, mut weight: F) -> Result<Polynomial>
    where
        F: FnMut(&GraphId) -> Option<Rational>,
    {
        let mut acc = Polynomial::zero(self.dim);
        for (m, p) in &self.terms {
            let mut c = Rational::one();
            for id in m.factors() {
                c *= weight(id).ok_or_else(|| Error::MissingWeight(id.to_string()))?;
            }
            acc = &acc + &p.scale(&c);
        }
        Ok(acc)
    }

    /// Substitutes an interval for every weight and returns, for every
    /// coordinate monomial that occurs, the interval its coefficient lies in.
    pub fn evaluate_intervals<F>(&self, mut weight: F) -> Result<BTreeMap<ExponentIndex, Interval>>
    where
        F: FnMut(&GraphId) -> Option<Interval>,
    {
        let mut out: BTreeMap<ExponentIndex, Interval> = BTreeMap::new();
        for (m, p) in &self.terms {
            let mut c = Interval::point(1.0);
            for id in m.factors() {
                c = c * weight(id).ok_or_else(|| Error::MissingWeight(id.to_string()))?;
            }
            for (e, a) in p.terms() {
                let t = c.scale(to_f64(a));
                let slot = out.entry(e.clone()).or_insert(Interval::point(0.0));
                *slot = *slot + t;
            }
        }
        Ok(out)
    }

    /// [`SymbolicPoly::evaluate_intervals`] with `mean ± k·stderr` read
    /// from a table.
    pub fn intervals_from_table(&self, table: &WeightTable, k: f64) -> Result<BTreeMap<ExponentIndex, Interval>> {
        self.evaluate_intervals(|id| table.get(id).map(|e| Interval::around(e.mean, e.stderr, k)))
    }
}

/// The graph expansion with symbolic weights, to a fixed order.
struct SymbolicStar {
    dim: usize,
    /// `levels[n]` holds `(Γ, B_Γ / n!)` for every contributing graph.
    levels: Vec<Vec<(WeightMonomial, MultiDiffOp)>>,
}

impl SymbolicStar {
    fn new(pi: &PolyVector, order: usize) -> Result<Self> {
        if order > MAX_GRAPH_ORDER {
            return Err(Error::Unsupported(format!(
                "graph expansion is limited to order {MAX_GRAPH_ORDER}"
            )));
        }
        let dim = pi.dim();
        let mut levels = vec![vec![(WeightMonomial::one(), MultiDiffOp::multiplication(dim))]];
        for n in 1..=order {
            let inv = Rational::one() / factorial(n as u32);
            let level = contributing_graphs(pi, n)?
                .into_iter()
                .map(|(g, b)| Ok((WeightMonomial::single(g.id()?), b.scale(&inv))))
                .collect::<Result<Vec<_>>>()?;
            levels.push(level);
        }
        Ok(SymbolicStar { dim, levels })
    }

    fn order(&self) -> usize {
        self.levels.len() - 1
    }

    /// Coefficient `k` is `Σ_{a+b+c=k} B_c(F_a, G_b)`.
    fn product(&self, f: &[SymbolicPoly], g: &[SymbolicPoly]) -> Result<Vec<SymbolicPoly>> {
        let n = self.order();
        let mut out = vec![SymbolicPoly::zero(self.dim); n + 1];
        for (a, fa) in f.iter().enumerate().take(n + 1) {
            for (b, gb) in g.iter().enumerate().take(n + 1 - a) {
                for c in 0..=n - a - b {
                    for (mf, pf) in fa.terms() {
                        for (mg, pg) in gb.terms() {
                            let args = [pf.clone(), pg.clone()];
                            let base = mf.times(mg);
                            for (mw, op) in &self.levels[c] {
                                let p = op.apply(&args)?;
                                out[a + b + c].add_term(base.times(mw), p);
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `(f⋆g)⋆h − f⋆(g⋆h)` with every weight left as a symbol, one entry per
/// power of `h` up to `order`.
pub fn symbolic_associator(
    pi: &PolyVector,
    f: &Polynomial,
    g: &Polynomial,
    h: &Polynomial,
    order: usize,
) -> Result<Vec<SymbolicPoly>> {
    for p in [f, g, h] {
        if p.dim() != pi.dim() {
            return Err(Error::DimensionMismatch(pi.dim(), p.dim()));
        }
    }
    let star = SymbolicStar::new(pi, order)?;
    let lift = |p: &Polynomial| vec![SymbolicPoly::from_poly(p)];
    let fg = star.product(&lift(f), &lift(g))?;
    let gh = star.product(&lift(g), &lift(h))?;
    let left = star.product(&fg, &lift(h))?;
    let right = star.product(&lift(f), &gh)?;
    left.iter().zip(&right).map(|(a, b)| a.try_sub(b)).collect()
}
