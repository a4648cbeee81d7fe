//! Star products as truncated series of bidifferential operators.
//!
//! The formal parameter is a single real `h`. The Moyal product is
//! `exp(h Σ π^{ij} ∂_i ⊗ ∂_j)`, and the graph expansion at order `n` is
//! `(1/n!) Σ_Γ w_Γ B_Γ(π, …, π)` over labeled graphs with `n` aerial
//! vertices, two boundary vertices and two edges per aerial vertex.

mod gauge;
mod interval;
mod symbolic;
mod wick;

pub use gauge::{gauge_transform, GaugeOperator};
pub use interval::Interval;
pub use symbolic::{symbolic_associator, SymbolicPoly, WeightMonomial};
pub use wick::{moyal_via_wick, wick_pairings, Pairing};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graphs::{enumerate, Graph};
use crate::operators::{build_b_gamma, gerstenhaber_bracket, hochschild_d, MultiDiffOp};
use crate::polyalg::rational::{factorial, rat};
use crate::polyalg::{FormalSeries, PolyVector, Polynomial, Rational};
use crate::weights::WeightTable;

/// Largest order supported by the graph expansion.
pub const MAX_GRAPH_ORDER: usize = 3;

/// `f ⋆ g = fg + Σ_{k≥1} h^k B_k(f, g)`, truncated after `h^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct StarSeries {
    dim: usize,
    ops: FormalSeries<MultiDiffOp>,
}

impl StarSeries {
    /// Every operator must be bidifferential on the same space, and
    /// `ops[0]` must be pointwise multiplication.
    pub fn new(ops: FormalSeries<MultiDiffOp>) -> Result<Self> {
        let dim = ops[0].dim();
        for op in &ops {
            if op.arity() != 2 {
                return Err(Error::ArityMismatch {
                    expected: 2,
                    found: op.arity(),
                });
            }
            if op.dim() != dim {
                return Err(Error::DimensionMismatch(dim, op.dim()));
            }
        }
        if ops[0] != MultiDiffOp::multiplication(dim) {
            return Err(Error::Unsupported("the order-0 term must be pointwise multiplication".into()));
        }
        Ok(StarSeries { dim, ops })
    }

    /// The undeformed product, to the given order.
    pub fn pointwise(dim: usize, order: usize) -> Self {
        let ops = FormalSeries::from_fn(order, |k| {
            if k == 0 {
                MultiDiffOp::multiplication(dim)
            } else {
                MultiDiffOp::zero(dim, 2)
            }
        });
        StarSeries { dim, ops }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.ops.order()
    }

    pub fn op(&self, k: usize) -> &MultiDiffOp {
        &self.ops[k]
    }

    pub fn ops(&self) -> &FormalSeries<MultiDiffOp> {
        &self.ops
    }

    pub fn truncated(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::Unsupported(format!(
                "series is known to order {}, asked for {order}",
                self.order()
            )));
        }
        let mut ops = self.ops.clone();
        ops.truncate(order);
        Ok(StarSeries { dim: self.dim, ops })
    }

    /// `B_i(1, f) = B_i(f, 1) = 0` for every `i ≥ 1`: no term of a
    /// higher-order operator leaves a slot undifferentiated.
    pub fn is_strict(&self) -> bool {
        self.ops.iter().skip(1).all(|op| {
            op.terms()
                .all(|(ks, _)| ks.iter().all(|k| k.iter().any(|&e| e > 0)))
        })
    }

    pub fn apply(&self, f: &Polynomial, g: &Polynomial) -> Result<FormalSeries<Polynomial>> {
        let ops: Vec<Polynomial> = self
            .ops
            .iter()
            .map(|b| b.apply(&[f.clone(), g.clone()]))
            .collect::<Result<_>>()?;
        Ok(FormalSeries::new(ops))
    }

    /// Star product of two series: coefficient `k` is
    /// `Σ_{a+b+c=k} B_c(F_a, G_b)`, truncated at `order`.
    pub fn apply_series(
        &self,
        f: &FormalSeries<Polynomial>,
        g: &FormalSeries<Polynomial>,
        order: usize,
    ) -> Result<FormalSeries<Polynomial>> {
        if order > self.order() {
            return Err(Error::Unsupported(format!(
                "series is known to order {}, asked for {order}",
                self.order()
            )));
        }
        let mut out = vec![Polynomial::zero(self.dim); order + 1];
        for (k, slot) in out.iter_mut().enumerate() {
            for a in 0..=k.min(f.order()) {
                for b in 0..=(k - a).min(g.order()) {
                    let c = k - a - b;
                    let t = self.ops[c].apply(&[f[a].clone(), g[b].clone()])?;
                    *slot = slot.try_add(&t)?;
                }
            }
        }
        Ok(FormalSeries::new(out))
    }

    /// Coefficients of `(f⋆g)⋆h − f⋆(g⋆h)` as trilinear operators:
    /// `Σ_{i+j=k} (B_i ∘_0 B_j − B_i ∘_1 B_j)`.
    pub fn operator_associator(&self) -> Result<FormalSeries<MultiDiffOp>> {
        let n = self.order();
        let mut out = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = MultiDiffOp::zero(self.dim, 3);
            for i in 0..=k {
                let (bi, bj) = (&self.ops[i], &self.ops[k - i]);
                acc = acc.try_add(&bi.insert(0, bj)?)?.try_sub(&bi.insert(1, bj)?)?;
            }
            out.push(acc);
        }
        Ok(FormalSeries::new(out))
    }

    /// Coefficients of `d_m B + ½[B, B]_G` for `B = Σ_{k≥1} h^k B_k`:
    /// `d_m B_k + ½ Σ_{i+j=k, i,j≥1} [B_i, B_j]_G`.
    pub fn maurer_cartan(&self) -> Result<FormalSeries<MultiDiffOp>> {
        let n = self.order();
        let half = rat(1, 2);
        let mut out = vec![MultiDiffOp::zero(self.dim, 3)];
        for k in 1..=n {
            let mut acc = hochschild_d(&self.ops[k])?;
            for i in 1..k {
                let br = gerstenhaber_bracket(&self.ops[i], &self.ops[k - i])?;
                acc = acc.try_add(&br.scale(&half))?;
            }
            out.push(acc);
        }
        Ok(FormalSeries::new(out))
    }
}

fn constant_bivector_check(pi: &PolyVector) -> Result<()> {
    if pi.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            found: pi.degree(),
        });
    }
    if !pi.is_constant() {
        return Err(Error::NonConstant);
    }
    Ok(())
}

fn check_dims(d: usize, ps: &[&Polynomial]) -> Result<()> {
    match ps.iter().find(|p| p.dim() != d) {
        Some(p) => Err(Error::DimensionMismatch(d, p.dim())),
        None => Ok(()),
    }
}

/// The Moyal series for a constant bivector: `B_k = P^k / k!` with
/// `P = Σ_{i,j} π^{ij} ∂_i ⊗ ∂_j`, built as `B_k = (1/k) P B_{k−1}`.
pub fn moyal_series(pi: &PolyVector, order: usize) -> Result<StarSeries> {
    constant_bivector_check(pi)?;
    let d = pi.dim();
    let mut p_terms: Vec<(usize, usize, Rational)> = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let c = pi.component(&[i, j]).as_constant().expect("constant checked");
            if !c.is_zero() {
                p_terms.push((i, j, c));
            }
        }
    }
    let mut ops = vec![MultiDiffOp::multiplication(d)];
    for k in 1..=order {
        let prev = &ops[k - 1];
        let mut next = MultiDiffOp::zero(d, 2);
        let inv_k = Rational::one() / Rational::from_integer((k as i64).into());
        for (ks, c) in prev.terms() {
            for (i, j, pij) in &p_terms {
                let mut ks2 = ks.clone();
                ks2[0][*i] += 1;
                ks2[1][*j] += 1;
                next.add_term(ks2, c.scale(&(pij * &inv_k)))?;
            }
        }
        ops.push(next);
    }
    StarSeries::new(FormalSeries::new(ops))
}

pub fn moyal(pi: &PolyVector, f: &Polynomial, g: &Polynomial, order: usize) -> Result<FormalSeries<Polynomial>> {
    check_dims(pi.dim(), &[f, g])?;
    moyal_series(pi, order)?.apply(f, g)
}

/// Graphs that enter the expansion at order `n`, with their operators.
/// Graphs whose operator vanishes for this `π` are dropped.
pub fn contributing_graphs(pi: &PolyVector, n: usize) -> Result<Vec<(Graph, MultiDiffOp)>> {
    if pi.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            found: pi.degree(),
        });
    }
    let xs = vec![pi.clone(); n];
    let mut out = Vec::new();
    for g in enumerate(n, 2, 2)? {
        let b = build_b_gamma(&g, &xs)?;
        if !b.is_zero() {
            out.push((g, b));
        }
    }
    Ok(out)
}

/// Graph expansion up to `order`, asking `weight` for the weight of every
/// graph whose operator is nonzero.
pub fn kontsevich_series_with<F>(pi: &PolyVector, order: usize, mut weight: F) -> Result<StarSeries>
where
    F: FnMut(&Graph) -> Result<Rational>,
{
    if order > MAX_GRAPH_ORDER {
        return Err(Error::Unsupported(format!(
            "graph expansion is limited to order {MAX_GRAPH_ORDER}"
        )));
    }
    let d = pi.dim();
    let mut ops = vec![MultiDiffOp::multiplication(d)];
    for n in 1..=order {
        let mut acc = MultiDiffOp::zero(d, 2);
        for (g, b) in contributing_graphs(pi, n)? {
            let w = weight(&g)?;
            if !w.is_zero() {
                acc = acc.try_add(&b.scale(&w))?;
            }
        }
        ops.push(acc.scale(&(Rational::one() / factorial(n as u32))));
    }
    StarSeries::new(FormalSeries::new(ops))
}

/// Graph expansion with snapped weights from a table. Graphs whose
/// operator vanishes need no entry; any other missing or unsnapped entry
/// is an error.
///
/// `π` is not required to be Poisson; callers that care should check
/// [`crate::polyalg::jacobiator`] themselves.
pub fn kontsevich_series(pi: &PolyVector, order: usize, weights: &WeightTable) -> Result<StarSeries> {
    kontsevich_series_with(pi, order, |g| {
        let id = g.id()?;
        weights
            .snapped(&id)
            .cloned()
            .ok_or_else(|| Error::MissingWeight(id.to_string()))
    })
}

pub fn kontsevich_star(
    pi: &PolyVector,
    f: &Polynomial,
    g: &Polynomial,
    order: usize,
    weights: &WeightTable,
) -> Result<FormalSeries<Polynomial>> {
    check_dims(pi.dim(), &[f, g])?;
    kontsevich_series(pi, order, weights)?.apply(f, g)
}

/// `(f⋆g)⋆h − f⋆(g⋆h)` truncated at `order`.
pub fn associator(
    star: &StarSeries,
    f: &Polynomial,
    g: &Polynomial,
    h: &Polynomial,
    order: usize,
) -> Result<FormalSeries<Polynomial>> {
    check_dims(star.dim(), &[f, g, h])?;
    let lift = |p: &Polynomial| FormalSeries::new(vec![p.clone()]);
    let fg = star.apply_series(&lift(f), &lift(g), order)?;
    let gh = star.apply_series(&lift(g), &lift(h), order)?;
    let left = star.apply_series(&fg, &lift(h), order)?;
    let right = star.apply_series(&lift(f), &gh, order)?;
    let coeffs = left
        .iter()
        .zip(right.iter())
        .map(|(a, b)| a.try_sub(b))
        .collect::<Result<Vec<_>>>()?;
    Ok(FormalSeries::new(coeffs))
}

/// The bivector `β` with `β(df, dg) = ½(B_1(f, g) − B_1(g, f))`, read off
/// on coordinate functions. Fails if `B_1` differentiates some slot more
/// than once, since such a term is not induced by a bivector.
pub fn first_order_antisym(star: &StarSeries) -> Result<PolyVector> {
    if star.order() < 1 {
        return Err(Error::Unsupported("series has no first-order term".into()));
    }
    let b1 = star.op(1);
    if b1.max_slot_order() > 1 {
        return Err(Error::NotBivector("first-order term has higher derivatives".into()));
    }
    let d = star.dim();
    let xs: Vec<Polynomial> = (0..d).map(|i| Polynomial::var(d, i)).collect::<Result<_>>()?;
    let half = rat(1, 2);
    let mut beta = PolyVector::zero(d, 2);
    for i in 0..d {
        for j in i + 1..d {
            let a = b1.apply(&[xs[i].clone(), xs[j].clone()])?;
            let b = b1.apply(&[xs[j].clone(), xs[i].clone()])?;
            beta.add_component(vec![i, j], a.try_sub(&b)?.scale(&half))?;
        }
    }
    Ok(beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::GraphId;
    use crate::polyalg::poisson_bracket;
    use crate::random::{random_constant_bivector, random_polynomial, Rng};
    use proptest::prelude::*;

    fn p(s: &str, d: usize) -> Polynomial {
        Polynomial::parse(s, d).unwrap()
    }

    fn pi0() -> PolyVector {
        PolyVector::basis(2, &[0, 1]).unwrap()
    }

    fn so3() -> PolyVector {
        PolyVector::from_components(
            3,
            2,
            [(vec![0, 1], p("x3", 3)), (vec![1, 2], p("x1", 3)), (vec![2, 0], p("x2", 3))],
        )
        .unwrap()
    }

    fn order_one_table() -> WeightTable {
        let mut t = WeightTable::new();
        for (s, w) in [("1;2;[b1,b2]", rat(1, 2)), ("1;2;[b2,b1]", rat(-1, 2))] {
            let est = crate::weights::WeightEstimate {
                graph: GraphId::parse(s).unwrap(),
                mean: 0.0,
                stderr: 0.0,
                samples: 0,
                seed: 0,
            };
            t.insert(&est, Some(w));
        }
        t
    }

    #[test]
    fn moyal_examples() {
        let s = moyal(&pi0(), &p("x1", 2), &p("x2", 2), 2).unwrap();
        assert_eq!(s.coeffs(), &[p("x1 x2", 2), p("1", 2), p("0", 2)]);
        let s = moyal(&pi0(), &p("x1^2", 2), &p("x2^2", 2), 2).unwrap();
        assert_eq!(s.coeffs(), &[p("x1^2 x2^2", 2), p("4 x1 x2", 2), p("2", 2)]);
        let g = p("x1^3 x2 - x2", 2);
        let s = moyal(&pi0(), &p("1", 2), &g, 3).unwrap();
        assert_eq!(s.coeffs(), &[g.clone(), p("0", 2), p("0", 2), p("0", 2)]);
    }

    #[test]
    fn moyal_rejects_nonconstant() {
        assert_eq!(moyal(&so3(), &p("x1", 3), &p("x2", 3), 1).unwrap_err(), Error::NonConstant);
    }

    #[test]
    fn strictness_counterexample() {
        let mut ops = moyal_series(&pi0(), 1).unwrap().ops().clone().into_coeffs();
        ops[1] = MultiDiffOp::multiplication(2);
        let bad = StarSeries::new(FormalSeries::new(ops)).unwrap();
        assert!(!bad.is_strict());
        // (1 + h)·m is still associative; the defect shows up in the unit axiom
        let a = associator(&bad, &p("x1", 2), &p("x2", 2), &p("x1 + 1", 2), 1).unwrap();
        assert!(a.iter().all(Polynomial::is_zero));
        assert_ne!(bad.apply(&p("1", 2), &p("x2", 2)).unwrap()[1], p("0", 2));
    }

    #[test]
    fn order_one_graph_term_is_the_bracket() {
        let t = order_one_table();
        for pi in [pi0(), so3()] {
            let d = pi.dim();
            for i in 0..d {
                for j in 0..d {
                    let (f, g) = (Polynomial::var(d, i).unwrap(), Polynomial::var(d, j).unwrap());
                    let s = kontsevich_star(&pi, &f, &g, 1, &t).unwrap();
                    assert_eq!(s[1], poisson_bracket(&pi, &f, &g).unwrap());
                }
            }
        }
    }

    #[test]
    fn missing_weights_and_order_limit() {
        let t = WeightTable::new();
        assert!(matches!(kontsevich_series(&pi0(), 1, &t), Err(Error::MissingWeight(_))));
        assert!(kontsevich_series(&pi0(), 4, &order_one_table()).is_err());
        // π = 0 needs no weights at all
        let zero = PolyVector::zero(2, 2);
        let s = kontsevich_star(&zero, &p("x1", 2), &p("x2", 2), 3, &t).unwrap();
        assert_eq!(s.coeffs(), &[p("x1 x2", 2), p("0", 2), p("0", 2), p("0", 2)]);
    }

    #[test]
    fn first_order_extraction() {
        let m = moyal_series(&pi0(), 2).unwrap();
        assert_eq!(first_order_antisym(&m).unwrap(), pi0());
        let k = kontsevich_series(&so3(), 1, &order_one_table()).unwrap();
        assert_eq!(first_order_antisym(&k).unwrap(), so3());
        // symmetric first-order term: ∂_1 f ∂_2 g + ∂_2 f ∂_1 g
        let mut b1 = MultiDiffOp::zero(2, 2);
        b1.add_term(vec![vec![1, 0], vec![0, 1]], p("1", 2)).unwrap();
        b1.add_term(vec![vec![0, 1], vec![1, 0]], p("1", 2)).unwrap();
        let s = StarSeries::new(FormalSeries::new(vec![MultiDiffOp::multiplication(2), b1])).unwrap();
        assert!(first_order_antisym(&s).unwrap().is_zero());
        let m2 = moyal_series(&pi0(), 2).unwrap();
        let shifted = StarSeries::new(FormalSeries::new(vec![
            MultiDiffOp::multiplication(2),
            m2.op(2).clone(),
        ]))
        .unwrap();
        assert!(matches!(first_order_antisym(&shifted), Err(Error::NotBivector(_))));
    }

    #[test]
    fn maurer_cartan_matches_operator_associator() {
        let mut rng = Rng::new(5);
        let pi = random_constant_bivector(&mut rng, 3);
        let m = moyal_series(&pi, 3).unwrap();
        let mc = m.maurer_cartan().unwrap();
        let assoc = m.operator_associator().unwrap();
        assert_eq!(mc, assoc);
        assert!(assoc.iter().all(MultiDiffOp::is_zero));
        // a non-associative deformation: both sides agree and are nonzero
        let mut ops = m.ops().clone().into_coeffs();
        ops[2] = MultiDiffOp::zero(3, 2);
        let bad = StarSeries::new(FormalSeries::new(ops)).unwrap();
        let mc = bad.maurer_cartan().unwrap();
        assert_eq!(mc, bad.operator_associator().unwrap());
        assert!(!mc[2].is_zero());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn moyal_is_associative(seed in any::<u64>()) {
            let mut rng = Rng::new(seed);
            let d = rng.range(1, 3);
            let pi = random_constant_bivector(&mut rng, d);
            let m = moyal_series(&pi, 3).unwrap();
            let (f, g, h) = (
                random_polynomial(&mut rng, d, 3),
                random_polynomial(&mut rng, d, 3),
                random_polynomial(&mut rng, d, 3),
            );
            let a = associator(&m, &f, &g, &h, 3).unwrap();
            prop_assert!(a.iter().all(Polynomial::is_zero));
            prop_assert!(m.is_strict());
            let one = Polynomial::one(d);
            prop_assert_eq!(m.apply(&one, &f).unwrap(), m.apply(&f, &one).unwrap());
        }
    }
}
