//! Python module `defq`.
//!
//! Polynomials, Poisson structures and star products are wrapped as classes;
//! exact coefficients cross the boundary as `fractions.Fraction`.

use std::path::PathBuf;

use defq::graphs::enumerate;
use defq::polyalg::rational::format_rational;
use defq::polyalg::{jacobiator, poisson_bracket, parse_rational};
use defq::starprod::{associator, kontsevich_series, moyal_series, moyal_via_wick, StarSeries};
use defq::weights::{snap_value, weight_mc, WeightTable};
use defq::{GraphId, PolyVector, Rational};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(defq, DefqError, PyValueError, "Raised when the engine rejects an input.");
create_exception!(defq, MissingWeightError, DefqError, "A graph weight needed for the expansion is unknown.");

fn to_py(e: defq::Error) -> PyErr {
    match e {
        defq::Error::MissingWeight(_) => MissingWeightError::new_err(e.to_string()),
        _ => DefqError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((format_rational(r),))
}

/// Accepts an int, a `Fraction` or a string such as `"3/4"`.
fn rational_arg(x: &Bound<'_, PyAny>) -> PyResult<Rational> {
    parse_rational(&x.str()?.to_cow()?).map_err(to_py)
}

/// Polynomial with rational coefficients, written like `3/2 x1^2 x3 - x2`.
#[pyclass(name = "Polynomial", module = "defq", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPolynomial(defq::Polynomial);

#[pymethods]
impl PyPolynomial {
    /// Without `dim` the dimension is the highest variable index used.
    #[new]
    #[pyo3(signature = (text, dim = None))]
    fn new(text: &str, dim: Option<usize>) -> PyResult<Self> {
        let p = match dim {
            Some(d) => defq::Polynomial::parse(text, d),
            None => defq::Polynomial::parse_infer(text, 1),
        };
        p.map(PyPolynomial).map_err(to_py)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Total degree, or `None` for the zero polynomial.
    #[getter]
    fn degree(&self) -> Option<u32> {
        self.0.total_degree()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Derivative in the variable `x<i>` (1-based).
    fn partial(&self, i: usize) -> PyResult<Self> {
        if i == 0 {
            return Err(DefqError::new_err("variables are numbered from 1"));
        }
        self.0.partial(i - 1).map(PyPolynomial).map_err(to_py)
    }

    fn eval<'py>(&self, py: Python<'py>, point: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
        let pt = point.iter().map(rational_arg).collect::<PyResult<Vec<_>>>()?;
        let v = self.0.eval(&pt).map_err(to_py)?;
        fraction(py, &v)
    }

    /// `(exponents, coefficient)` pairs in a fixed order.
    fn terms<'py>(&self, py: Python<'py>) -> PyResult<Vec<(Vec<u32>, Bound<'py, PyAny>)>> {
        self.0
            .terms()
            .map(|(e, c)| Ok((e.0.clone(), fraction(py, c)?)))
            .collect()
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.0.try_add(&other.0).map(PyPolynomial).map_err(to_py)
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        self.0.try_sub(&other.0).map(PyPolynomial).map_err(to_py)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.0.try_mul(&other.0).map(PyPolynomial).map_err(to_py)
    }

    fn __neg__(&self) -> Self {
        PyPolynomial(-&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial({:?}, dim={})", self.0.to_string(), self.0.dim())
    }
}

/// Bivector `π = Σ_{i<j} π^{ij} ∂_i ∧ ∂_j`.
#[pyclass(name = "PoissonStructure", module = "defq", frozen, from_py_object)]
#[derive(Clone)]
struct PyPoisson(PolyVector);

#[pymethods]
impl PyPoisson {
    /// `components` maps `(i, j)` with `1 ≤ i < j ≤ dim` to a polynomial or
    /// its text.
    #[new]
    #[pyo3(signature = (dim, components = None))]
    fn new(dim: usize, components: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let mut pi = PolyVector::zero(dim, 2);
        if let Some(comps) = components {
            for (k, v) in comps.iter() {
                let (i, j): (usize, usize) = k.extract()?;
                if i == 0 || i >= j || j > dim {
                    return Err(DefqError::new_err(format!("bad index pair ({i}, {j})")));
                }
                let p = match v.extract::<PyPolynomial>() {
                    Ok(p) => p.0,
                    Err(_) => defq::Polynomial::parse(&v.str()?.to_cow()?, dim).map_err(to_py)?,
                };
                pi.add_component(vec![i - 1, j - 1], p).map_err(to_py)?;
            }
        }
        Ok(PyPoisson(pi))
    }

    /// The Lie–Poisson structure of so(3) on `R^3`.
    #[staticmethod]
    fn so3() -> Self {
        let x = |i| defq::Polynomial::var(3, i).expect("index in range");
        let mut pi = PolyVector::zero(3, 2);
        pi.add_component(vec![0, 1], x(2)).expect("valid component");
        pi.add_component(vec![1, 2], x(0)).expect("valid component");
        pi.add_component(vec![0, 2], -&x(1)).expect("valid component");
        PyPoisson(pi)
    }

    /// `∂_1 ∧ ∂_2 + ∂_3 ∧ ∂_4 + …` on `R^{2n}`.
    #[staticmethod]
    fn canonical(n: usize) -> PyResult<Self> {
        let mut pi = PolyVector::zero(2 * n, 2);
        for k in 0..n {
            let one = defq::Polynomial::one(2 * n);
            pi.add_component(vec![2 * k, 2 * k + 1], one).map_err(to_py)?;
        }
        Ok(PyPoisson(pi))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn is_constant(&self) -> bool {
        self.0.is_constant()
    }

    fn component(&self, i: usize, j: usize) -> PyResult<PyPolynomial> {
        if i == 0 || j == 0 || i > self.0.dim() || j > self.0.dim() {
            return Err(DefqError::new_err(format!("bad index pair ({i}, {j})")));
        }
        Ok(PyPolynomial(self.0.component(&[i - 1, j - 1])))
    }

    /// `[π, π]` as text; zero exactly when `π` is Poisson.
    fn jacobiator(&self) -> PyResult<String> {
        jacobiator(&self.0).map(|j| j.to_string()).map_err(to_py)
    }

    fn is_poisson(&self) -> PyResult<bool> {
        jacobiator(&self.0).map(|j| j.is_zero()).map_err(to_py)
    }

    /// `{f, g} = π(df, dg)`.
    fn bracket(&self, f: &PyPolynomial, g: &PyPolynomial) -> PyResult<PyPolynomial> {
        poisson_bracket(&self.0, &f.0, &g.0).map(PyPolynomial).map_err(to_py)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PoissonStructure(dim={}, {})", self.0.dim(), self.0)
    }
}

/// A star product truncated at a fixed order.
#[pyclass(name = "StarProduct", module = "defq", frozen)]
struct PyStar(StarSeries);

fn polys(v: &[defq::Polynomial]) -> Vec<PyPolynomial> {
    v.iter().cloned().map(PyPolynomial).collect()
}

#[pymethods]
impl PyStar {
    /// Graph expansion with the shipped weights, overlaid with the cache
    /// file if one is given.
    #[staticmethod]
    #[pyo3(signature = (pi, order, cache = None))]
    fn kontsevich(pi: &PyPoisson, order: usize, cache: Option<PathBuf>) -> PyResult<Self> {
        let mut table = WeightTable::builtin();
        if let Some(path) = cache {
            table.merge(&WeightTable::load(&path).map_err(to_py)?);
        }
        kontsevich_series(&pi.0, order, &table).map(PyStar).map_err(to_py)
    }

    /// Closed-form Moyal product; `pi` must be constant.
    #[staticmethod]
    fn moyal(pi: &PyPoisson, order: usize) -> PyResult<Self> {
        moyal_series(&pi.0, order).map(PyStar).map_err(to_py)
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Coefficients of `f ⋆ g` in powers of the deformation parameter.
    fn apply(&self, f: &PyPolynomial, g: &PyPolynomial) -> PyResult<Vec<PyPolynomial>> {
        let s = self.0.apply(&f.0, &g.0).map_err(to_py)?;
        Ok(polys(s.coeffs()))
    }

    /// Coefficients of `(f⋆g)⋆h − f⋆(g⋆h)`.
    fn associator(&self, f: &PyPolynomial, g: &PyPolynomial, h: &PyPolynomial) -> PyResult<Vec<PyPolynomial>> {
        let a = associator(&self.0, &f.0, &g.0, &h.0, self.0.order()).map_err(to_py)?;
        Ok(polys(a.coeffs()))
    }

    fn is_strict(&self) -> bool {
        self.0.is_strict()
    }

    fn __repr__(&self) -> String {
        format!("StarProduct(dim={}, order={})", self.0.dim(), self.0.order())
    }
}

/// Ids of all graphs with `n` aerial vertices of out-degree two.
#[pyfunction]
#[pyo3(signature = (n, nbar = 2))]
fn enumerate_graphs(n: usize, nbar: usize) -> PyResult<Vec<String>> {
    enumerate(n, nbar, 2)
        .map_err(to_py)?
        .iter()
        .map(|g| g.id().map(String::from).map_err(to_py))
        .collect()
}

/// Monte Carlo estimate of a graph weight, as a dict.
#[pyfunction]
#[pyo3(signature = (graph_id, samples = 1_000_000, seed = 0))]
fn estimate_weight<'py>(py: Python<'py>, graph_id: &str, samples: u64, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let id = GraphId::parse(graph_id).map_err(to_py)?;
    let est = py.detach(|| weight_mc(&id.graph(), samples, seed)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("graph", est.graph.as_str())?;
    d.set_item("mean", est.mean)?;
    d.set_item("stderr", est.stderr)?;
    d.set_item("samples", est.samples)?;
    d.set_item("seed", est.seed)?;
    Ok(d)
}

/// The unique fraction with denominator at most `max_denominator` within
/// three standard errors of `mean`, if there is exactly one.
#[pyfunction]
#[pyo3(signature = (mean, stderr, max_denominator = 24))]
fn snap<'py>(py: Python<'py>, mean: f64, stderr: f64, max_denominator: u64) -> PyResult<Option<Bound<'py, PyAny>>> {
    snap_value(mean, stderr, max_denominator)
        .map(|r| fraction(py, &r))
        .transpose()
}

/// Moyal coefficients computed by summing Wick pairings.
#[pyfunction]
fn wick_moyal(pi: &PyPoisson, f: &PyPolynomial, g: &PyPolynomial, order: usize) -> PyResult<Vec<PyPolynomial>> {
    let s = moyal_via_wick(&pi.0, &f.0, &g.0, order).map_err(to_py)?;
    Ok(polys(s.coeffs()))
}

#[pymodule]
#[pyo3(name = "defq")]
fn defq_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyPoisson>()?;
    m.add_class::<PyStar>()?;
    m.add_function(wrap_pyfunction!(enumerate_graphs, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_weight, m)?)?;
    m.add_function(wrap_pyfunction!(snap, m)?)?;
    m.add_function(wrap_pyfunction!(wick_moyal, m)?)?;
    m.add("DefqError", py.get_type::<DefqError>())?;
    m.add("MissingWeightError", py.get_type::<MissingWeightError>())?;
    Ok(())
}
