//! Seeded generators for random test inputs.
//!
//! Used by the property tests, the acceptance suite and the CLI `check`
//! commands, so that every randomized check is reproducible from one seed.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linsymp::{Matrix, Subspace};
use crate::operators::{DerivIndex, MultiDiffOp};
use crate::polyalg::rational::{int, rat};
use crate::polyalg::{ExponentIndex, PolyVector, Polynomial, Rational};

pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.0.random_range(lo..=hi)
    }

    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        self.0.random_range(lo..=hi)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.0.random_bool(p)
    }

    pub fn unit_f64(&mut self) -> f64 {
        self.0.random()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.random()
    }

    /// Small rational `p/q`, `p ∈ [-3, 3]`, `q ∈ {1, 2, 3}`.
    pub fn small_rational(&mut self) -> Rational {
        rat(self.range_i64(-3, 3), self.range_i64(1, 3))
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.small_rational();
            if r != int(0) {
                return r;
            }
        }
    }
}

fn random_exponent(rng: &mut Rng, dim: usize, max_degree: usize) -> ExponentIndex {
    let total = rng.range(0, max_degree);
    let mut e = vec![0u32; dim];
    for _ in 0..total {
        e[rng.range(0, dim - 1)] += 1;
    }
    ExponentIndex(e)
}

/// Up to four terms, total degree at most `max_degree`.
pub fn random_polynomial(rng: &mut Rng, dim: usize, max_degree: usize) -> Polynomial {
    let nterms = rng.range(0, 4);
    let mut p = Polynomial::zero(dim);
    for _ in 0..nterms {
        let e = random_exponent(rng, dim, max_degree);
        let c = rng.small_rational();
        p = &p + &Polynomial::monomial(dim, e, c);
    }
    p
}

pub fn random_nonzero_polynomial(rng: &mut Rng, dim: usize, max_degree: usize) -> Polynomial {
    loop {
        let p = random_polynomial(rng, dim, max_degree);
        if !p.is_zero() {
            return p;
        }
    }
}

/// A polyvector of the given degree (clamped to `dim`) with a few random
/// components whose coefficients have degree at most `coef_degree`.
pub fn random_polyvector(rng: &mut Rng, dim: usize, degree: usize, coef_degree: usize) -> PolyVector {
    let degree = degree.min(dim);
    let mut x = PolyVector::zero(dim, degree);
    if degree == 0 {
        return PolyVector::function(random_polynomial(rng, dim, coef_degree));
    }
    let ncomp = rng.range(1, 3);
    for _ in 0..ncomp {
        let mut idx: Vec<usize> = (0..dim).collect();
        // partial Fisher-Yates for a random degree-subset
        for k in 0..degree {
            let j = rng.range(k, dim - 1);
            idx.swap(k, j);
        }
        idx.truncate(degree);
        let p = random_polynomial(rng, dim, coef_degree);
        x.add_component(idx, p).expect("indices are distinct and in range");
    }
    x
}

/// Bivector with components linear in the coordinates (a random Lie–Poisson
/// candidate; usually not Poisson).
pub fn random_linear_bivector(rng: &mut Rng, dim: usize) -> PolyVector {
    let mut pi = PolyVector::zero(dim, 2);
    for i in 0..dim {
        for j in i + 1..dim {
            if rng.chance(0.5) {
                continue;
            }
            let mut p = Polynomial::zero(dim);
            for k in 0..dim {
                if rng.chance(0.5) {
                    let c = Polynomial::constant(dim, rng.small_rational());
                    p = &p + &(&c * &Polynomial::var(dim, k).unwrap());
                }
            }
            pi.add_component(vec![i, j], p).unwrap();
        }
    }
    pi
}

pub fn random_constant_bivector(rng: &mut Rng, dim: usize) -> PolyVector {
    let mut pi = PolyVector::zero(dim, 2);
    for i in 0..dim {
        for j in i + 1..dim {
            let c = Polynomial::constant(dim, rng.small_rational());
            pi.add_component(vec![i, j], c).unwrap();
        }
    }
    pi
}

pub fn random_vector(rng: &mut Rng, m: usize) -> Vec<Rational> {
    (0..m).map(|_| rng.small_rational()).collect()
}

/// Skew matrix of random rank: a sum of `r` random rank-two blocks
/// `a bᵀ − b aᵀ`, with `r` anywhere from 0 to `m / 2`.
pub fn random_skew_matrix(rng: &mut Rng, m: usize) -> Matrix {
    let blocks = rng.range(0, m / 2);
    let mut om = Matrix::zeros(m, m);
    for _ in 0..blocks {
        let a = random_vector(rng, m);
        let b = random_vector(rng, m);
        for i in 0..m {
            for j in 0..m {
                let v = &a[i] * &b[j] - &b[i] * &a[j];
                let cur = om.get(i, j).clone();
                om.set(i, j, cur + v);
            }
        }
    }
    om
}

/// Nondegenerate skew matrix on `R^m` (`m` even), built as `Pᵀ Ω₀ P` for a
/// random invertible `P`.
pub fn random_symplectic_matrix(rng: &mut Rng, m: usize) -> Matrix {
    assert!(m % 2 == 0, "a symplectic form needs even dimension");
    let p = random_invertible(rng, m);
    p.transpose().mul(&Matrix::standard_symplectic(m / 2)).mul(&p)
}

pub fn random_invertible(rng: &mut Rng, m: usize) -> Matrix {
    loop {
        let rows: Vec<Vec<Rational>> = (0..m).map(|_| random_vector(rng, m)).collect();
        let p = Matrix::from_rows(rows);
        if p.rank() == m {
            return p;
        }
    }
}

/// Random subspace of `R^m` of dimension exactly `k`.
pub fn random_subspace(rng: &mut Rng, m: usize, k: usize) -> Subspace {
    loop {
        let vs: Vec<Vec<Rational>> = (0..k).map(|_| random_vector(rng, m)).collect();
        if let Ok(s) = Subspace::new(m, vs) {
            return s;
        }
    }
}

fn random_deriv(rng: &mut Rng, dim: usize, min_order: usize, max_order: usize) -> DerivIndex {
    let total = rng.range(min_order, max_order);
    let mut e = vec![0u32; dim];
    for _ in 0..total {
        e[rng.range(0, dim - 1)] += 1;
    }
    e
}

/// Operator with one to three terms, each slot differentiated to order at
/// most `max_order`.
pub fn random_multidiffop(
    rng: &mut Rng,
    dim: usize,
    arity: usize,
    coef_degree: usize,
    max_order: usize,
) -> MultiDiffOp {
    let mut op = MultiDiffOp::zero(dim, arity);
    for _ in 0..rng.range(1, 3) {
        let derivs = (0..arity).map(|_| random_deriv(rng, dim, 0, max_order)).collect();
        let c = random_nonzero_polynomial(rng, dim, coef_degree);
        op.add_term(derivs, c).unwrap();
    }
    op
}

/// Unary differential operator of order `1..=max_order` that kills constants.
pub fn random_gauge_component(rng: &mut Rng, dim: usize, coef_degree: usize, max_order: usize) -> MultiDiffOp {
    let mut op = MultiDiffOp::zero(dim, 1);
    for _ in 0..rng.range(1, 3) {
        let k = random_deriv(rng, dim, 1, max_order.max(1));
        let c = random_nonzero_polynomial(rng, dim, coef_degree);
        op.add_term(vec![k], c).unwrap();
    }
    op
}
