//! Exact linear symplectic and linear Dirac algebra over the rationals.
//!
//! A skew form `Ω` on `R^m` is stored as its matrix; `Ω(v, w) = vᵀ Ω w`.

mod dirac;
mod matrix;

pub use dirac::{dirac_from_pair, restrict_dirac, LinearDirac, RestrictedDirac};
pub use matrix::{dot, nullspace, rref, solve, unit, Matrix, Vector};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::Rational;
use matrix::{axpy, scale};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Matrix", into = "Matrix")]
pub struct SkewForm {
    matrix: Matrix,
}

impl SkewForm {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_skew() {
            return Err(Error::NotSkew);
        }
        Ok(SkewForm { matrix })
    }

    /// The standard form `Ω₀` on `R^{2n}` in the basis `e_1..e_n, f_1..f_n`.
    pub fn standard(n: usize) -> Self {
        SkewForm {
            matrix: Matrix::standard_symplectic(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn eval(&self, v: &[Rational], w: &[Rational]) -> Rational {
        self.matrix.bilinear(v, w)
    }

    pub fn kernel(&self) -> Subspace {
        Subspace::spanned_by(self.dim(), nullspace(&self.matrix.row_vectors(), self.dim()))
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.rank() == self.dim()
    }

    /// Matrix of `Ω` restricted to `W` in the basis of `W`.
    pub fn restrict(&self, w: &Subspace) -> Result<SkewForm> {
        check_ambient(self, w)?;
        let b = w.basis();
        let k = b.len();
        let mut m = Matrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                m.set(i, j, self.eval(&b[i], &b[j]));
            }
        }
        Ok(SkewForm { matrix: m })
    }
}

impl TryFrom<Matrix> for SkewForm {
    type Error = Error;
    fn try_from(m: Matrix) -> Result<Self> {
        SkewForm::new(m)
    }
}

impl From<SkewForm> for Matrix {
    fn from(s: SkewForm) -> Matrix {
        s.matrix
    }
}

/// A subspace of `R^m` given by a linearly independent basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    /// Rejects dependent or wrongly sized vectors.
    pub fn new(ambient: usize, basis: Vec<Vector>) -> Result<Self> {
        if let Some(v) = basis.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch(ambient, v.len()));
        }
        if rref(&basis, ambient).1.len() != basis.len() {
            return Err(Error::LinearlyDependent);
        }
        Ok(Subspace { ambient, basis })
    }

    /// Span of arbitrary vectors; the basis is the reduced row echelon form.
    pub fn spanned_by(ambient: usize, vectors: Vec<Vector>) -> Self {
        let (red, _) = rref(&vectors, ambient);
        Subspace {
            ambient,
            basis: red,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn whole(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: (0..ambient).map(|i| unit(ambient, i)).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coordinates of `v` in this basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vector> {
        if v.len() != self.ambient {
            return None;
        }
        // columns are basis vectors: rows are coordinates of the ambient space
        let rows: Vec<Vector> = (0..self.ambient)
            .map(|i| self.basis.iter().map(|b| b[i].clone()).collect())
            .collect();
        solve(&rows, self.basis.len(), v)
    }

    pub fn from_coordinates(&self, c: &[Rational]) -> Vector {
        let mut v = vec![Rational::zero(); self.ambient];
        for (ci, b) in c.iter().zip(&self.basis) {
            v = axpy(ci, b, &v);
        }
        v
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.ambient == self.ambient && other.basis.iter().all(|v| self.contains(v))
    }

    /// Equality as sets, by mutual containment.
    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }

    /// Vectors annihilating the subspace, as a subspace of the dual.
    pub fn annihilator(&self) -> Subspace {
        Subspace::spanned_by(self.ambient, nullspace(&self.basis, self.ambient))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(self.ambient, other.ambient));
        }
        // W ∩ U = Ann(Ann W + Ann U)
        let mut eqs = self.annihilator().basis;
        eqs.extend(other.annihilator().basis);
        Ok(Subspace::spanned_by(self.ambient, nullspace(&eqs, self.ambient)))
    }
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.same_as(other)
    }
}

fn check_ambient(omega: &SkewForm, w: &Subspace) -> Result<()> {
    if omega.dim() != w.ambient_dim() {
        return Err(Error::DimensionMismatch(omega.dim(), w.ambient_dim()));
    }
    Ok(())
}

/// Result of [`standard_form`]: the columns of `basis_change` are
/// `u_1..u_k, e_1..e_n, f_1..f_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardForm {
    pub basis_change: Matrix,
    pub k: usize,
    pub n: usize,
}

impl StandardForm {
    /// `diag(0_k, [[0, I_n], [-I_n, 0]])`.
    pub fn canonical_block(&self) -> Matrix {
        let m = self.k + 2 * self.n;
        let mut c = Matrix::zeros(m, m);
        for i in 0..self.n {
            c.set(self.k + i, self.k + self.n + i, Rational::one());
            c.set(self.k + self.n + i, self.k + i, -Rational::one());
        }
        c
    }
}

/// Constructs a basis in which `Ω` takes its canonical block form.
///
/// The kernel is split off first. On a complement of it `Ω` is
/// nondegenerate, so for the first remaining vector `e` some other one pairs
/// with it nontrivially; rescaling gives `f` with `Ω(e, f) = 1`, and the
/// rest is projected onto the `Ω`-orthogonal of `span(e, f)` before
/// recursing.
pub fn standard_form(omega: &SkewForm) -> StandardForm {
    let m = omega.dim();
    let kernel = omega.kernel();
    let (_, pivots) = rref(kernel.basis(), m);
    // complement: standard vectors at non-pivot positions of the kernel basis
    let mut rest: Vec<Vector> = (0..m).filter(|c| !pivots.contains(c)).map(|c| unit(m, c)).collect();
    let mut es = Vec::new();
    let mut fs = Vec::new();
    while !rest.is_empty() {
        let e = rest.remove(0);
        let pos = rest
            .iter()
            .position(|w| !omega.eval(&e, w).is_zero())
            .expect("skew form is nondegenerate on a complement of its kernel");
        let w = rest.remove(pos);
        let f = scale(&(Rational::one() / omega.eval(&e, &w)), &w);
        rest = rest
            .into_iter()
            .map(|r| {
                let a = -omega.eval(&r, &f);
                let b = omega.eval(&r, &e);
                axpy(&b, &f, &axpy(&a, &e, &r))
            })
            .collect();
        es.push(e);
        fs.push(f);
    }
    let n = es.len();
    let mut cols: Vec<Vector> = kernel.basis().to_vec();
    cols.extend(es);
    cols.extend(fs);
    StandardForm {
        basis_change: Matrix::from_columns(&cols, m),
        k: m - 2 * n,
        n,
    }
}

/// `W^Ω = {v : Ω(v, u) = 0 for all u ∈ W}`. Degenerate `Ω` is allowed, in
/// which case the result contains `ker Ω`.
pub fn symplectic_orthogonal(omega: &SkewForm, w: &Subspace) -> Result<Subspace> {
    check_ambient(omega, w)?;
    let eqs: Vec<Vector> = w.basis().iter().map(|u| omega.matrix().mul_vec(u)).collect();
    Ok(Subspace::spanned_by(w.ambient_dim(), nullspace(&eqs, omega.dim())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceClass {
    pub isotropic: bool,
    pub coisotropic: bool,
    pub symplectic: bool,
    pub lagrangian: bool,
}

pub fn classify_subspace(omega: &SkewForm, w: &Subspace) -> Result<SubspaceClass> {
    let orth = symplectic_orthogonal(omega, w)?;
    let isotropic = orth.contains_subspace(w);
    let coisotropic = w.contains_subspace(&orth);
    Ok(SubspaceClass {
        isotropic,
        coisotropic,
        symplectic: omega.restrict(w)?.is_nondegenerate(),
        lagrangian: isotropic && coisotropic,
    })
}
