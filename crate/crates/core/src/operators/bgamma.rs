use super::MultiDiffOp;
use crate::error::{Error, Result};
use crate::graphs::{Graph, Vertex};
use crate::polyalg::{PolyVector, Polynomial};

/// The operator `B_Γ(ξ_1 ∧ ⋯ ∧ ξ_n)` of arity `n̄`.
///
/// Each edge carries a summation index. Aerial vertex `v` contributes its
/// tensor component `ξ_v^{i_{e_1} ⋯ i_{e_k}}` (indices in star order),
/// differentiated along every edge landing on `v`; boundary slot `j` is
/// differentiated along every edge landing on it.
///
/// The ambient dimension is read off the tensors; for graphs without aerial
/// vertices use [`build_b_gamma_with_dim`].
pub fn build_b_gamma(g: &Graph, xs: &[PolyVector]) -> Result<MultiDiffOp> {
    match xs.first() {
        Some(x) => build_b_gamma_with_dim(g, xs, x.dim()),
        None => Err(Error::Unsupported(
            "graph without aerial vertices: the dimension must be given explicitly".into(),
        )),
    }
}

pub fn build_b_gamma_with_dim(g: &Graph, xs: &[PolyVector], dim: usize) -> Result<MultiDiffOp> {
    if !g.is_admissible() {
        return Err(Error::NotAdmissible);
    }
    if xs.len() != g.n() {
        return Err(Error::ArityMismatch {
            expected: g.n(),
            found: xs.len(),
        });
    }
    if g.nbar() == 0 {
        return Err(Error::Unsupported("operators need at least one boundary vertex".into()));
    }
    for (v, x) in xs.iter().enumerate() {
        if x.dim() != dim {
            return Err(Error::DimensionMismatch(dim, x.dim()));
        }
        if x.degree() != g.star(v).len() {
            return Err(Error::DegreeMismatch {
                expected: g.star(v).len(),
                found: x.degree(),
            });
        }
    }

    // nonzero components over all orderings of distinct indices
    let choices: Vec<Vec<(Vec<usize>, Polynomial)>> = xs
        .iter()
        .map(|x| {
            index_tuples(dim, x.degree())
                .into_iter()
                .filter_map(|idx| {
                    let c = x.component(&idx);
                    (!c.is_zero()).then_some((idx, c))
                })
                .collect()
        })
        .collect();

    let mut out = MultiDiffOp::zero(dim, g.nbar());
    let mut chosen: Vec<usize> = vec![0; g.n()];
    if choices.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    loop {
        accumulate(g, dim, &choices, &chosen, &mut out);
        // odometer over the vertex choices
        let mut v = g.n();
        loop {
            if v == 0 {
                return Ok(out);
            }
            v -= 1;
            chosen[v] += 1;
            if chosen[v] < choices[v].len() {
                break;
            }
            chosen[v] = 0;
        }
    }
}

fn accumulate(
    g: &Graph,
    dim: usize,
    choices: &[Vec<(Vec<usize>, Polynomial)>],
    chosen: &[usize],
    out: &mut MultiDiffOp,
) {
    let n = g.n();
    let mut incoming = vec![vec![0u32; dim]; n + g.nbar()];
    for v in 0..n {
        let idx = &choices[v][chosen[v]].0;
        for (s, t) in g.star(v).iter().enumerate() {
            let slot = match *t {
                Vertex::Aerial(k) => k,
                Vertex::Boundary(k) => n + k,
            };
            incoming[slot][idx[s]] += 1;
        }
    }
    let mut coeff = Polynomial::one(dim);
    for v in 0..n {
        let c = choices[v][chosen[v]].1.derivative(&incoming[v]).expect("dimension checked");
        if c.is_zero() {
            return;
        }
        coeff = &coeff * &c;
    }
    out.add_term_unchecked(incoming[n..].to_vec(), coeff);
}

/// All length-`k` tuples of distinct indices below `dim`.
fn index_tuples(dim: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for t in &out {
            for i in (0..dim).filter(|i| !t.contains(i)) {
                let mut t2 = t.clone();
                t2.push(i);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{enumerate, GraphId};
    use crate::polyalg::poisson_bracket;
    use crate::random::{random_constant_bivector, random_polynomial, random_polyvector, Rng};
    use proptest::prelude::*;
    use Vertex::{Aerial as A, Boundary as B};

    fn p(s: &str, d: usize) -> Polynomial {
        Polynomial::parse(s, d).unwrap()
    }

    fn so3() -> PolyVector {
        PolyVector::from_components(
            3,
            2,
            [(vec![0, 1], p("x3", 3)), (vec![1, 2], p("x1", 3)), (vec![2, 0], p("x2", 3))],
        )
        .unwrap()
    }

    fn wedge() -> Graph {
        GraphId::parse("1;2;[b1,b2]").unwrap().graph()
    }

    #[test]
    fn wedge_operator_is_the_bracket() {
        let pi0 = PolyVector::basis(2, &[0, 1]).unwrap();
        let b = build_b_gamma(&wedge(), &[pi0]).unwrap();
        assert_eq!(b.apply(&[p("x1", 2), p("x2", 2)]).unwrap(), p("1", 2));
        let b = build_b_gamma(&wedge(), &[so3()]).unwrap();
        assert_eq!(b.apply(&[p("x1", 3), p("x2", 3)]).unwrap(), p("x3", 3));
    }

    #[test]
    fn wedge_operator_matches_poisson_bracket() {
        let mut rng = Rng::new(11);
        for _ in 0..20 {
            let pi = random_polyvector(&mut rng, 3, 2, 2);
            let f = random_polynomial(&mut rng, 3, 3);
            let g = random_polynomial(&mut rng, 3, 3);
            let b = build_b_gamma(&wedge(), &[pi.clone()]).unwrap();
            assert_eq!(b.apply(&[f.clone(), g.clone()]).unwrap(), poisson_bracket(&pi, &f, &g).unwrap());
        }
    }

    /// Second worked example: χ_1 at vertex 1 with star (2, 3̄), χ_2 at
    /// vertex 2 with star (1̄, 2̄, 3̄):
    /// `χ_1^{i1 i2} ∂_{i1} χ_2^{j1 j2 j3} ∂_{j1} f ∂_{j2} g ∂_{j3} ∂_{i2} h`.
    #[test]
    fn tridifferential_example() {
        let d = 3;
        let g = Graph::new(2, 3, vec![vec![A(1), B(2)], vec![B(0), B(1), B(2)]]);
        let mut rng = Rng::new(5);
        let chi1 = random_polyvector(&mut rng, d, 2, 1);
        let chi2 = random_polyvector(&mut rng, d, 3, 2);
        let b = build_b_gamma(&g, &[chi1.clone(), chi2.clone()]).unwrap();
        let f = random_polynomial(&mut rng, d, 3);
        let gg = random_polynomial(&mut rng, d, 3);
        let h = random_polynomial(&mut rng, d, 3);
        // direct index sum
        let mut expected = Polynomial::zero(d);
        for i1 in 0..d {
            for i2 in 0..d {
                for j1 in 0..d {
                    for j2 in 0..d {
                        for j3 in 0..d {
                            let c1 = chi1.component(&[i1, i2]);
                            let c2 = chi2.component(&[j1, j2, j3]).partial(i1).unwrap();
                            let t = &(&(&c1 * &c2) * &f.partial(j1).unwrap())
                                * &(&gg.partial(j2).unwrap() * &h.partial(j3).unwrap().partial(i2).unwrap());
                            expected = &expected + &t;
                        }
                    }
                }
            }
        }
        assert_eq!(b.apply(&[f, gg, h]).unwrap(), expected);
    }

    #[test]
    fn parallel_edges_give_zero() {
        let g = GraphId::parse("2;2;[2,2],[b1,b2]").unwrap().graph();
        let mut rng = Rng::new(3);
        let pi = random_polyvector(&mut rng, 3, 2, 2);
        assert!(build_b_gamma(&g, &[pi.clone(), pi]).unwrap().is_zero());
    }

    #[test]
    fn shape_errors() {
        let pi = PolyVector::basis(2, &[0, 1]).unwrap();
        assert!(build_b_gamma(&wedge(), &[]).is_err());
        assert!(build_b_gamma(&wedge(), &[PolyVector::basis(2, &[0]).unwrap()]).is_err());
        let g = GraphId::parse("2;2;[2,b1],[b1,b2]").unwrap().graph();
        let pi3 = PolyVector::basis(3, &[0, 1]).unwrap();
        assert!(build_b_gamma(&g, &[pi.clone(), pi3]).is_err());
    }

    #[test]
    fn empty_graph_is_pointwise_product() {
        let g = GraphId::parse("0;2;").unwrap().graph();
        assert!(build_b_gamma(&g, &[]).is_err());
        let b = build_b_gamma_with_dim(&g, &[], 2).unwrap();
        assert_eq!(b, MultiDiffOp::multiplication(2));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        /// Relabeling aerial vertices together with their tensors leaves
        /// the operator unchanged.
        #[test]
        fn relabeling_equivariance(seed in any::<u64>()) {
            let mut rng = Rng::new(seed);
            let d = rng.range(2, 3);
            let gs = enumerate(2, 2, 2).unwrap();
            let g = &gs[rng.range(0, gs.len() - 1)];
            let x1 = random_polyvector(&mut rng, d, 2, 1);
            let x2 = random_polyvector(&mut rng, d, 2, 1);
            let swap = |t: &Vertex| match *t {
                A(k) => A(1 - k),
                b => b,
            };
            let h = Graph::new(2, 2, vec![
                g.star(1).iter().map(swap).collect(),
                g.star(0).iter().map(swap).collect(),
            ]);
            prop_assert_eq!(
                build_b_gamma(g, &[x1.clone(), x2.clone()]).unwrap(),
                build_b_gamma(&h, &[x2, x1]).unwrap()
            );
        }

        /// Multilinearity in each tensor slot.
        #[test]
        fn multilinearity(seed in any::<u64>()) {
            let mut rng = Rng::new(seed);
            let d = 2;
            let gs = enumerate(2, 2, 2).unwrap();
            let g = &gs[rng.range(0, gs.len() - 1)];
            let a = random_constant_bivector(&mut rng, d);
            let b = random_polyvector(&mut rng, d, 2, 2);
            let c = random_polyvector(&mut rng, d, 2, 2);
            let lhs = build_b_gamma(g, &[a.try_add(&b).unwrap(), c.clone()]).unwrap();
            let rhs = build_b_gamma(g, &[a, c.clone()]).unwrap()
                .try_add(&build_b_gamma(g, &[b, c]).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
