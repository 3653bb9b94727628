//! Python bindings: `import kolchin`.

use std::cmp::Ordering;

use kolchin_core::invariants::{self, InvariantPair};
use kolchin_core::lattice::omega_single_leader;
use kolchin_core::operator::verify_factorization as verify;
use kolchin_core::parse::{parse_coefficient, parse_operator, Definitions};
use kolchin_core::unipotent::{self, Mode};
use kolchin_core::{DiffOperator as CoreOperator, ExponentVector, LeaderSet as CoreLeaderSet};
use kolchin_core::{NumericalPolynomial as CorePoly, UnipotentGroupSpec};
use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

fn err(e: kolchin_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => {
                let big: BigInt = n.to_string().parse().map_err(|_| PyValueError::new_err(format!("bad number {n}")))?;
                big.into_pyobject(py)?.into_any()
            }
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn pair(p: &InvariantPair) -> (i64, BigInt) {
    (p.tau(), p.alpha().clone())
}

fn unpair((tau, alpha): (i64, BigInt)) -> PyResult<InvariantPair> {
    InvariantPair::new(tau, alpha).map_err(err)
}

/// Integer-valued polynomial `sum a_i * C(t+i, i)`.
#[pyclass(module = "kolchin", frozen)]
struct NumericalPolynomial {
    inner: CorePoly,
}

#[pymethods]
impl NumericalPolynomial {
    #[new]
    fn new(binomial_coeffs: Vec<BigInt>) -> Self {
        Self { inner: CorePoly::from_binomial_coeffs(binomial_coeffs) }
    }

    #[getter]
    fn binomial_coeffs(&self) -> Vec<BigInt> {
        self.inner.binomial_coeffs().to_vec()
    }

    fn degree(&self) -> Option<usize> {
        self.inner.degree()
    }

    fn evaluate(&self, t: BigInt) -> BigInt {
        self.inner.evaluate_at(&t)
    }

    /// `(tau, alpha)`; the zero polynomial gives `(-1, 0)`.
    fn invariants(&self) -> (i64, BigInt) {
        pair(&self.inner.invariants())
    }

    /// `(sign, threshold)`: sign of `self - other` for every `t >= threshold`.
    fn compare_eventual(&self, other: &Self) -> (i32, u64) {
        let o = self.inner.compare_eventual(&other.inner);
        let sign = match o.ordering {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        };
        (sign, o.threshold)
    }

    fn __add__(&self, other: &Self) -> Self {
        Self { inner: &self.inner + &other.inner }
    }

    fn __sub__(&self, other: &Self) -> Self {
        Self { inner: &self.inner - &other.inner }
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("NumericalPolynomial({:?})", self.binomial_coeffs().iter().map(ToString::to_string).collect::<Vec<_>>())
    }
}

/// Finite set of leaders in `N^m`.
#[pyclass(module = "kolchin", frozen)]
struct LeaderSet {
    inner: CoreLeaderSet,
}

#[pymethods]
impl LeaderSet {
    #[new]
    fn new(m: usize, points: Vec<Vec<u32>>) -> PyResult<Self> {
        let pts = points.into_iter().map(ExponentVector::new).collect();
        Ok(Self { inner: CoreLeaderSet::new(m, pts).map_err(err)? })
    }

    /// Parses `"(2,0);(1,1)"`.
    #[staticmethod]
    fn parse(m: usize, text: &str) -> PyResult<Self> {
        Ok(Self { inner: CoreLeaderSet::parse(m, text).map_err(err)? })
    }

    #[getter]
    fn points(&self) -> Vec<Vec<u32>> {
        self.inner.points().iter().map(|p| p.entries().to_vec()).collect()
    }

    fn antichain_reduce(&self) -> Self {
        Self { inner: self.inner.antichain_reduce() }
    }

    /// `(polynomial, threshold)`.
    fn omega(&self) -> (NumericalPolynomial, u64) {
        let w = self.inner.omega();
        (NumericalPolynomial { inner: w.polynomial }, w.threshold)
    }

    fn count_direct(&self, s: u64) -> u64 {
        self.inner.count_direct(s)
    }

    fn count_exact(&self, s: u64) -> BigInt {
        self.inner.count_exact(s)
    }

    fn __repr__(&self) -> String {
        format!("LeaderSet({}, {})", self.inner.m(), self.inner.to_json())
    }
}

/// Linear differential operator with rational-function coefficients in `x1..xm`.
#[pyclass(module = "kolchin", frozen)]
struct DiffOperator {
    inner: CoreOperator,
    defs: Vec<String>,
}

impl DiffOperator {
    fn wrap(&self, inner: CoreOperator) -> Self {
        Self { inner, defs: self.defs.clone() }
    }
}

#[pymethods]
impl DiffOperator {
    #[staticmethod]
    #[pyo3(signature = (m, text, defines = Vec::new()))]
    fn parse(m: usize, text: &str, defines: Vec<String>) -> PyResult<Self> {
        let defs = Definitions::from_list(m, &defines).map_err(err)?;
        Ok(Self { inner: parse_operator(m, text, &defs).map_err(err)?, defs: defines })
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn compose(&self, other: &Self) -> PyResult<Self> {
        Ok(self.wrap(self.inner.compose(&other.inner).map_err(err)?))
    }

    /// Applies the operator to a rational function given as text.
    fn apply(&self, function: &str) -> PyResult<String> {
        let defs = Definitions::from_list(self.inner.m(), &self.defs).map_err(err)?;
        let f = parse_coefficient(self.inner.m(), function, &defs).map_err(err)?;
        Ok(self.inner.apply(&f).map_err(err)?.to_string())
    }

    fn leader(&self) -> PyResult<Vec<u32>> {
        Ok(self.inner.leader().map_err(err)?.entries().to_vec())
    }

    fn order(&self) -> u64 {
        self.inner.order()
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.to_json())
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.compose(other)
    }

    fn __add__(&self, other: &Self) -> Self {
        self.wrap(&self.inner + &other.inner)
    }

    fn __sub__(&self, other: &Self) -> Self {
        self.wrap(&self.inner - &other.inner)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("DiffOperator({:?})", self.inner.to_string())
    }
}

/// Upper-unitriangular group with coordinate constraints.
#[pyclass(module = "kolchin", frozen)]
struct UnipotentGroup {
    inner: UnipotentGroupSpec,
}

#[pymethods]
impl UnipotentGroup {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: UnipotentGroupSpec::from_json_str(text).map_err(err)? })
    }

    /// The 4x4 example group over three derivations.
    #[staticmethod]
    #[pyo3(signature = (mode = "componentwise"))]
    fn four_by_four(mode: &str) -> PyResult<Self> {
        let mode: Mode = mode.parse().map_err(err)?;
        Ok(Self { inner: unipotent::example_four_by_four(mode) })
    }

    #[staticmethod]
    fn heisenberg() -> Self {
        Self { inner: unipotent::example_heisenberg() }
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn omega(&self) -> NumericalPolynomial {
        NumericalPolynomial { inner: self.inner.group_omega() }
    }

    fn check_closure<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.check_closure().to_json())
    }

    /// Rows of the product of two generic elements; the second has primed names.
    fn product(&self) -> Vec<Vec<String>> {
        let a = self.inner.generic_element(str::to_string);
        let b = self.inner.generic_element(|n| format!("{n}'"));
        rows(&unipotent::multiply(&a, &b))
    }

    /// Commutator `a b a^-1 b^-1`; `rename` maps a name prefix for `b`, e.g. `("u", "v")`.
    #[pyo3(signature = (rename = None))]
    fn commutator(&self, rename: Option<(String, String)>) -> Vec<Vec<String>> {
        let a = self.inner.generic_element(str::to_string);
        let b = self.inner.generic_element(|n| match &rename {
            Some((from, to)) => match n.strip_prefix(from.as_str()) {
                Some(rest) => format!("{to}{rest}"),
                None => format!("{n}'"),
            },
            None => format!("{n}'"),
        });
        rows(&unipotent::commutator(&a, &b))
    }

    fn kill<'py>(&self, py: Python<'py>, names: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        to_py(py, &self.inner.subgroup_from_kill(&refs).map_err(err)?.to_json())
    }

    fn n_connected_component<'py>(&self, py: Python<'py>, n: i64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.n_connected_component(n).map_err(err)?.to_json())
    }
}

fn rows(m: &unipotent::SymMatrix) -> Vec<Vec<String>> {
    (1..=m.size()).map(|i| (1..=m.size()).map(|j| m.entry(i, j).to_string()).collect()).collect()
}

/// Invariants of a pair from those of `a` and of `b` over `a`.
#[pyfunction]
fn pair_combine(a: (i64, BigInt), b: (i64, BigInt)) -> PyResult<(i64, BigInt)> {
    Ok(pair(&invariants::pair_combine(&unpair(a)?, &unpair(b)?)))
}

/// `(holds, witness)` for a family of labelled quotient invariants.
#[pyfunction]
fn is_n_indecomposable(quotients: Vec<(String, (i64, BigInt))>, n: i64) -> PyResult<(bool, Option<String>)> {
    let qs = quotients
        .into_iter()
        .map(|(label, p)| Ok((label, unpair(p)?)))
        .collect::<PyResult<Vec<_>>>()?;
    let r = invariants::is_n_indecomposable(&qs, n);
    Ok((r.holds, r.witness))
}

#[pyfunction]
#[pyo3(name = "omega_single_leader")]
fn single_leader(leader: Vec<u32>) -> NumericalPolynomial {
    NumericalPolynomial { inner: omega_single_leader(&ExponentVector::new(leader)) }
}

/// Checks `target` against the product of `factors` in both composition orders.
#[pyfunction]
fn verify_factorization<'py>(
    py: Python<'py>,
    target: &DiffOperator,
    factors: Vec<PyRef<'py, DiffOperator>>,
) -> PyResult<Bound<'py, PyAny>> {
    let fs: Vec<CoreOperator> = factors.iter().map(|f| f.inner.clone()).collect();
    to_py(py, &verify(&target.inner, &fs).map_err(err)?.to_json())
}

#[pymodule]
fn kolchin(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<NumericalPolynomial>()?;
    m.add_class::<LeaderSet>()?;
    m.add_class::<DiffOperator>()?;
    m.add_class::<UnipotentGroup>()?;
    m.add_function(wrap_pyfunction!(pair_combine, m)?)?;
    m.add_function(wrap_pyfunction!(is_n_indecomposable, m)?)?;
    m.add_function(wrap_pyfunction!(single_leader, m)?)?;
    m.add_function(wrap_pyfunction!(verify_factorization, m)?)?;
    Ok(())
}
