use num_traits::Zero;

use super::matrix::{axpy, is_zero_vec, Matrix};
use super::{nullspace, rref, solve, SkewForm, Subspace, Vector};
use crate::error::{Error, Result};
use crate::polyalg::Rational;

/// A linear Dirac structure `L ⊂ V ⊕ V*` with `V = R^n`.
///
/// Basis vectors have length `2n`: the vector part followed by the covector
/// part, both in the standard (dual) basis.
#[derive(Clone, Debug)]
pub struct LinearDirac {
    n: usize,
    basis: Vec<Vector>,
}

impl LinearDirac {
    /// Checks independence, dimension `n` and isotropy.
    pub fn new(n: usize, basis: Vec<Vector>) -> Result<Self> {
        let l = LinearDirac::from_span(n, basis.clone());
        if l.dim() != basis.len() {
            return Err(Error::LinearlyDependent);
        }
        if l.dim() != n {
            return Err(Error::DimensionMismatch(n, l.dim()));
        }
        if !l.is_isotropic() {
            return Err(Error::Unsupported("subspace is not isotropic".into()));
        }
        Ok(l)
    }

    fn from_span(n: usize, vectors: Vec<Vector>) -> Self {
        LinearDirac {
            n,
            basis: rref(&vectors, 2 * n).0,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn as_subspace(&self) -> Subspace {
        Subspace::spanned_by(2 * self.n, self.basis.clone())
    }

    /// `⟨(X, α), (Y, β)⟩₊ = α(Y) + β(X)`.
    pub fn pairing(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let n = self.n;
        super::dot(&a[n..], &b[..n]) + super::dot(&b[n..], &a[..n])
    }

    pub fn is_isotropic(&self) -> bool {
        self.basis
            .iter()
            .enumerate()
            .all(|(i, a)| self.basis[i..].iter().all(|b| self.pairing(a, b).is_zero()))
    }

    pub fn is_maximal_isotropic(&self) -> bool {
        self.dim() == self.n && self.is_isotropic()
    }

    /// Recovers `(W, θ)`: `W` is the projection of `L` to `V`, and
    /// `θ(X, Y) = α(Y)` for any `(X, α) ∈ L`. `θ` is given in the basis of `W`.
    pub fn to_pair(&self) -> (Subspace, SkewForm) {
        let n = self.n;
        let xs: Vec<Vector> = self.basis.iter().map(|v| v[..n].to_vec()).collect();
        let w = Subspace::spanned_by(n, xs.clone());
        let alphas: Vec<Vector> = w.basis().iter().map(|wa| self.covector_over(&xs, wa)).collect();
        let k = w.dim();
        let mut theta = Matrix::zeros(k, k);
        for a in 0..k {
            for b in 0..k {
                theta.set(a, b, super::dot(&alphas[a], &w.basis()[b]));
            }
        }
        (w, SkewForm::new(theta).expect("isotropy makes θ skew"))
    }

    /// Some `α` with `(x, α) ∈ L`; `x` must lie in the projection of `L`.
    fn covector_over(&self, xs: &[Vector], x: &[Rational]) -> Vector {
        let n = self.n;
        let rows: Vec<Vector> = (0..n).map(|i| xs.iter().map(|v| v[i].clone()).collect()).collect();
        let c = solve(&rows, xs.len(), x).expect("vector lies in the projection of L");
        let mut alpha = vec![Rational::zero(); n];
        for (ci, v) in c.iter().zip(&self.basis) {
            alpha = axpy(ci, &v[n..], &alpha);
        }
        alpha
    }
}

impl PartialEq for LinearDirac {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.as_subspace() == other.as_subspace()
    }
}

/// `L = {(X, α) : X ∈ W, α|_W = ι_X θ}` with `ι_X θ = θ(X, ·)`.
///
/// `theta` is the matrix of `θ` in the basis of `w`.
pub fn dirac_from_pair(w: &Subspace, theta: &SkewForm) -> Result<LinearDirac> {
    let n = w.ambient_dim();
    let k = w.dim();
    if theta.dim() != k {
        return Err(Error::DimensionMismatch(k, theta.dim()));
    }
    let mut basis = Vec::with_capacity(n);
    for a in 0..k {
        let rhs: Vector = (0..k).map(|b| theta.matrix().get(a, b).clone()).collect();
        let alpha = solve(w.basis(), n, &rhs).expect("basis vectors are independent");
        let mut v = w.basis()[a].clone();
        v.extend(alpha);
        basis.push(v);
    }
    for beta in w.annihilator().basis() {
        let mut v = vec![Rational::zero(); n];
        v.extend(beta.iter().cloned());
        basis.push(v);
    }
    LinearDirac::new(n, basis)
}

/// The two descriptions of the restriction of `L` to a subspace `U`, both
/// written in `U ⊕ U*` using the basis of `U`.
#[derive(Clone, Debug)]
pub struct RestrictedDirac {
    /// Built from `(W ∩ U, θ|_{W∩U})`.
    pub pair_based: LinearDirac,
    /// The image of `L ∩ (U ⊕ V*)` in `U ⊕ U*`, i.e. the quotient by
    /// `L ∩ Ann(U)`.
    pub quotient_based: LinearDirac,
}

impl RestrictedDirac {
    pub fn agree(&self) -> bool {
        self.pair_based.dim() == self.quotient_based.dim() && self.pair_based == self.quotient_based
    }
}

pub fn restrict_dirac(l: &LinearDirac, u: &Subspace) -> Result<RestrictedDirac> {
    let n = l.ambient_dim();
    if u.ambient_dim() != n {
        return Err(Error::DimensionMismatch(n, u.ambient_dim()));
    }
    let k = u.dim();

    let (w, theta) = l.to_pair();
    let wu = w.intersect(u)?;
    let w_coords: Vec<Vector> = wu
        .basis()
        .iter()
        .map(|x| w.coordinates(x).expect("W ∩ U lies in W"))
        .collect();
    let r = w_coords.len();
    let mut theta_u = Matrix::zeros(r, r);
    for a in 0..r {
        for b in 0..r {
            theta_u.set(a, b, theta.eval(&w_coords[a], &w_coords[b]));
        }
    }
    let wu_in_u = Subspace::new(
        k,
        wu.basis().iter().map(|x| u.coordinates(x).expect("W ∩ U lies in U")).collect(),
    )?;
    let pair_based = dirac_from_pair(&wu_in_u, &SkewForm::new(theta_u)?)?;

    // coefficient vectors c with Σ c_i X_i ∈ U
    let ann_u = u.annihilator();
    let eqs: Vec<Vector> = ann_u
        .basis()
        .iter()
        .map(|beta| l.basis().iter().map(|v| super::dot(beta, &v[..n])).collect())
        .collect();
    let cs = nullspace(&eqs, l.dim());
    let mut images = Vec::with_capacity(cs.len());
    for c in cs {
        let mut v = vec![Rational::zero(); 2 * n];
        for (ci, li) in c.iter().zip(l.basis()) {
            v = axpy(ci, li, &v);
        }
        let mut img = u.coordinates(&v[..n]).expect("constraint puts X in U");
        img.extend(u.basis().iter().map(|ub| super::dot(&v[n..], ub)));
        if !is_zero_vec(&img) {
            images.push(img);
        }
    }
    let quotient_based = LinearDirac::from_span(k, images);
    Ok(RestrictedDirac {
        pair_based,
        quotient_based,
    })
}
