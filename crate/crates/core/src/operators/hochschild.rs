use num_traits::One;

use super::MultiDiffOp;
use crate::error::{Error, Result};
use crate::polyalg::rational::{factorial, sign_rat};
use crate::polyalg::{PolyVector, Rational};

/// `φ ∘ ψ = Σ_{0≤i≤m} (−1)^{in} φ ∘_i ψ` for `φ` of degree `m` and `ψ` of
/// degree `n`.
pub fn compose_gerstenhaber(phi: &MultiDiffOp, psi: &MultiDiffOp) -> Result<MultiDiffOp> {
    if phi.dim() != psi.dim() {
        return Err(Error::DimensionMismatch(phi.dim(), psi.dim()));
    }
    let n = psi.degree();
    let mut out = MultiDiffOp::zero(phi.dim(), phi.arity() + psi.arity() - 1);
    for i in 0..phi.arity() {
        let t = phi.insert(i, psi)?;
        out = out.try_add(&t.scale(&sign_rat((i * n) % 2 == 1)))?;
    }
    Ok(out)
}

/// `[φ, ψ]_G = φ ∘ ψ − (−1)^{mn} ψ ∘ φ`.
pub fn gerstenhaber_bracket(phi: &MultiDiffOp, psi: &MultiDiffOp) -> Result<MultiDiffOp> {
    let a = compose_gerstenhaber(phi, psi)?;
    let b = compose_gerstenhaber(psi, phi)?;
    let odd = (phi.degree() * psi.degree()) % 2 == 1;
    a.try_sub(&b.scale(&sign_rat(odd)))
}

/// `d_m ψ = [m, ψ]_G`, written out slot by slot:
///
/// `(d_m ψ)(f_0, …, f_{n+1}) = (−1)^n [ f_0 ψ(f_1, …) + Σ_i (−1)^{i+1} ψ(…, f_i f_{i+1}, …)
///  + (−1)^n ψ(f_0, …, f_n) f_{n+1} ]`.
pub fn hochschild_d(psi: &MultiDiffOp) -> Result<MultiDiffOp> {
    let d = psi.dim();
    let n = psi.degree();
    let m = MultiDiffOp::multiplication(d);
    let mut out = m.insert(1, psi)?;
    for i in 0..=n {
        let t = psi.insert(i, &m)?;
        out = out.try_add(&t.scale(&sign_rat(i % 2 == 0)))?;
    }
    out = out.try_add(&m.insert(0, psi)?.scale(&sign_rat(n % 2 == 1)))?;
    Ok(out.scale(&sign_rat(n % 2 == 1)))
}

/// The antisymmetrization map
/// `ξ ↦ (1/k!) Σ_{I increasing} ξ^I Σ_{σ∈S_k} sign(σ) ∏_s ∂_{i_σ(s)} f_s`.
///
/// A function would map to a cochain with no arguments, which
/// [`MultiDiffOp`] does not represent, so degree 0 is rejected.
pub fn hkr(xi: &PolyVector) -> Result<MultiDiffOp> {
    let d = xi.dim();
    let k = xi.degree();
    if k == 0 {
        return Err(Error::Unsupported("hkr of a function is a 0-cochain".into()));
    }
    let norm = Rational::one() / factorial(k as u32);
    let perms = permutations(k);
    let mut out = MultiDiffOp::zero(d, k);
    for (idx, c) in xi.components() {
        for (perm, odd) in &perms {
            let derivs = (0..k)
                .map(|s| {
                    let mut e = vec![0; d];
                    e[idx[perm[s]]] = 1;
                    e
                })
                .collect();
            out.add_term_unchecked(derivs, c.scale(&(&norm * sign_rat(*odd))));
        }
    }
    Ok(out)
}

/// All permutations of `0..k` with their parity (`true` for odd).
pub(crate) fn permutations(k: usize) -> Vec<(Vec<usize>, bool)> {
    if k == 0 {
        return vec![(Vec::new(), false)];
    }
    let mut out = Vec::new();
    for (p, odd) in permutations(k - 1) {
        // insert k-1 at each position; moving it left past j elements adds j inversions
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            let passed = p.len() - pos;
            out.push((q, odd ^ (passed % 2 == 1)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::Polynomial;
    use crate::random::{random_multidiffop, random_polynomial, random_polyvector, Rng};
    use proptest::prelude::*;

    fn p(s: &str, d: usize) -> Polynomial {
        Polynomial::parse(s, d).unwrap()
    }

    fn wedge_op(d: usize, i: usize, j: usize) -> MultiDiffOp {
        // Σ π^{ab} ∂_a f ∂_b g for π = ∂_i ∧ ∂_j
        let mut op = MultiDiffOp::zero(d, 2);
        let e = |k: usize| {
            let mut v = vec![0; d];
            v[k] = 1;
            v
        };
        op.add_term(vec![e(i), e(j)], Polynomial::one(d)).unwrap();
        op.add_term(vec![e(j), e(i)], p("-1", d)).unwrap();
        op
    }

    #[test]
    fn multiplication_is_associative() {
        let m = MultiDiffOp::multiplication(2);
        assert!(m.insert(0, &m).unwrap().try_sub(&m.insert(1, &m).unwrap()).unwrap().is_zero());
        // [m, m] = 2 (m ∘_0 m − m ∘_1 m) = 0
        assert!(gerstenhaber_bracket(&m, &m).unwrap().is_zero());
    }

    #[test]
    fn unary_composition_is_ordinary_composition() {
        let mut a = MultiDiffOp::zero(1, 1);
        a.add_term(vec![vec![1]], p("x1", 1)).unwrap();
        let b = MultiDiffOp::multiply_by(p("x1^2", 1));
        assert_eq!(compose_gerstenhaber(&a, &b).unwrap(), a.then_after(&b).unwrap());
    }

    #[test]
    fn odd_self_bracket_doubles() {
        let phi = wedge_op(2, 0, 1);
        let sq = compose_gerstenhaber(&phi, &phi).unwrap();
        assert_eq!(gerstenhaber_bracket(&phi, &phi).unwrap(), sq.scale(&Rational::from_integer(2.into())));
    }

    #[test]
    fn differential_of_identity_is_multiplication() {
        let d = hochschild_d(&MultiDiffOp::identity(2)).unwrap();
        assert_eq!(d, MultiDiffOp::multiplication(2));
    }

    #[test]
    fn constant_wedge_is_a_cocycle() {
        assert!(hochschild_d(&wedge_op(3, 0, 2)).unwrap().is_zero());
    }

    #[test]
    fn hkr_examples() {
        let xi = PolyVector::basis(2, &[0, 1]).unwrap();
        let h = hkr(&xi).unwrap();
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(h, wedge_op(2, 0, 1).scale(&half));
        // a vector field is its own unary operator
        let x = PolyVector::from_components(2, 1, [(vec![1], p("x1 x2", 2))]).unwrap();
        let mut expected = MultiDiffOp::zero(2, 1);
        expected.add_term(vec![vec![0, 1]], p("x1 x2", 2)).unwrap();
        assert_eq!(hkr(&x).unwrap(), expected);
        let f = PolyVector::function(p("x1", 2));
        assert!(matches!(hkr(&f), Err(Error::Unsupported(_))));
    }

    #[test]
    fn permutation_parities() {
        let ps = permutations(3);
        assert_eq!(ps.len(), 6);
        for (p, odd) in ps {
            let inv = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            assert_eq!(odd, inv % 2 == 1);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn differential_matches_bracket_with_m(seed in any::<u64>()) {
            let mut rng = Rng::new(seed);
            let d = rng.range(1, 3);
            let k_psi = rng.range(1, 3);
            let psi = random_multidiffop(&mut rng, d, k_psi, 2, 2);
            let m = MultiDiffOp::multiplication(d);
            prop_assert_eq!(hochschild_d(&psi).unwrap(), gerstenhaber_bracket(&m, &psi).unwrap());
        }

        #[test]
        fn differential_squares_to_zero(seed in any::<u64>()) {
            let mut rng = Rng::new(seed);
            let d = rng.range(1, 3);
            let k_psi = rng.range(1, 3);
            let psi = random_multidiffop(&mut rng, d, k_psi, 2, 2);
            prop_assert!(hochschild_d(&hochschild_d(&psi).unwrap()).unwrap().is_zero());
        }

        #[test]
        fn explicit_differential_on_arguments(seed in any::<u64>()) {
            // independent evaluation of the slot-by-slot formula
            let mut rng = Rng::new(seed);
            let d = rng.range(1, 2);
            let a = rng.range(1, 2);
            let psi = random_multidiffop(&mut rng, d, a, 1, 2);
            let fs: Vec<Polynomial> = (0..=a).map(|_| random_polynomial(&mut rng, d, 2)).collect();
            let n = a - 1;
            let mut s = &fs[0] * &psi.apply(&fs[1..]).unwrap();
            for i in 0..=n {
                let mut args = fs[..i].to_vec();
                args.push(&fs[i] * &fs[i + 1]);
                args.extend_from_slice(&fs[i + 2..]);
                let t = psi.apply(&args).unwrap();
                s = if i % 2 == 0 { &s - &t } else { &s + &t };
            }
            let last = &psi.apply(&fs[..=n]).unwrap() * &fs[n + 1];
            s = if n % 2 == 0 { &s + &last } else { &s - &last };
            if n % 2 == 1 {
                s = -s;
            }
            prop_assert_eq!(hochschild_d(&psi).unwrap().apply(&fs).unwrap(), s);
        }

        #[test]
        fn bracket_graded_antisymmetry(seed in any::<u64>()) {
            let mut rng = Rng::new(seed);
            let d = rng.range(1, 2);
            let k_phi = rng.range(1, 3);
            let phi = random_multidiffop(&mut rng, d, k_phi, 1, 1);
            let k_psi = rng.range(1, 3);
            let psi = random_multidiffop(&mut rng, d, k_psi, 1, 1);
            let lhs = gerstenhaber_bracket(&phi, &psi).unwrap();
            let rhs = gerstenhaber_bracket(&psi, &phi).unwrap()
                .scale(&-sign_rat((phi.degree() * psi.degree()) % 2 == 1));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn hkr_is_closed(seed in any::<u64>()) {
            let mut rng = Rng::new(seed);
            let d = rng.range(1, 3);
            let k_xi = rng.range(1, 3);
            let xi = random_polyvector(&mut rng, d, k_xi, 2);
            prop_assert!(hochschild_d(&hkr(&xi).unwrap()).unwrap().is_zero());
        }
    }
}
