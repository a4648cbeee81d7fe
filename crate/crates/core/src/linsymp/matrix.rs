use std::fmt;

use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::polyalg::rational::{format_rational, parse_rational};
use crate::polyalg::Rational;

pub type Vector = Vec<Rational>;

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// `[[0, I], [-I, 0]]` on `R^{2n}`.
    pub fn standard_symplectic(n: usize) -> Self {
        let mut m = Self::zeros(2 * n, 2 * n);
        for i in 0..n {
            m.set(i, n + i, Rational::one());
            m.set(n + i, i, -Rational::one());
        }
        m
    }

    /// Panics if the rows have unequal lengths.
    pub fn from_rows(rows: Vec<Vector>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_columns(cols: &[Vector], nrows: usize) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows, "column length");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Panics on incompatible shapes.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shapes");
        (0..self.rows)
            .map(|i| dot(&self.data[i * self.cols..(i + 1) * self.cols], v))
            .collect()
    }

    /// `vᵀ M w`.
    pub fn bilinear(&self, v: &[Rational], w: &[Rational]) -> Rational {
        dot(v, &self.mul_vec(w))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_skew(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (i..self.cols).all(|j| *self.get(i, j) == -self.get(j, i).clone())
            })
    }

    pub fn rank(&self) -> usize {
        rref(&self.row_vectors(), self.cols).1.len()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(D::Error::custom("ragged matrix rows"));
        }
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<crate::Result<Vec<_>>>())
            .collect::<crate::Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(Matrix::from_rows(parsed))
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, _)| !x.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn axpy(a: &Rational, x: &[Rational], y: &[Rational]) -> Vector {
    x.iter().zip(y).map(|(xi, yi)| a * xi + yi).collect()
}

pub fn scale(a: &Rational, x: &[Rational]) -> Vector {
    x.iter().map(|xi| a * xi).collect()
}

pub fn unit(m: usize, i: usize) -> Vector {
    let mut v = vec![Rational::zero(); m];
    v[i] = Rational::one();
    v
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Reduced row echelon form of the given rows. Returns the nonzero reduced
/// rows and their pivot columns.
pub fn rref(rows: &[Vector], ncols: usize) -> (Vec<Vector>, Vec<usize>) {
    let mut a: Vec<Vector> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Rational::one() / &a[r][c];
        a[r] = scale(&inv, &a[r]);
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = -a[i][c].clone();
                a[i] = axpy(&f, &a[r], &a[i]);
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    (a, pivots)
}

/// Basis of `{x : row · x = 0 for every row}`.
pub fn nullspace(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let (red, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in red.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Some solution `x` of `A x = b` where `A` is given by rows, or `None`.
pub fn solve(rows: &[Vector], ncols: usize, b: &[Rational]) -> Option<Vector> {
    assert_eq!(rows.len(), b.len(), "right-hand side length");
    let aug: Vec<Vector> = rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(&aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (row, &p) in red.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ns = nullspace(&a.row_vectors(), 3);
        assert_eq!(ns.len(), 1);
        assert!(is_zero_vec(&a.mul_vec(&ns[0])));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[1, 1], &[1, -1]]);
        let x = solve(&a.row_vectors(), 2, &[int(3), int(1)]).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        let s = m(&[&[1, 1], &[2, 2]]);
        assert!(solve(&s.row_vectors(), 2, &[int(1), int(3)]).is_none());
    }

    #[test]
    fn skew_detection_and_serde() {
        let om = Matrix::standard_symplectic(2);
        assert!(om.is_skew());
        assert!(!Matrix::identity(2).is_skew());
        let mut h = Matrix::zeros(2, 2);
        h.set(0, 1, rat(1, 2));
        h.set(1, 0, rat(-1, 2));
        let js = serde_json::to_string(&h).unwrap();
        assert_eq!(js, r#"[["0","1/2"],["-1/2","0"]]"#);
        assert_eq!(serde_json::from_str::<Matrix>(&js).unwrap(), h);
    }
}
