//! Python bindings. Exact scalars cross the boundary as strings such as
//! `"-3/4"` or `"1+2i"`; integers are accepted too.

use paracanonical::cup_model::{build_ample_divisor_canonical, build_koszul, serre_pairing, CupModule};
use paracanonical::exact::{pfaffian, ExactMatrix, GaussianRational as Q};
use paracanonical::ledger::{self, HodgeVector, HypothesisFlags};
use paracanonical::lift::{self, fixtures, SectionAlgebraModel};
use paracanonical::strata::{sigma_polynomial, SkewFamily};
use paracanonical::transversality;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyAny;

create_exception!(pyparacanonical, ParacanonicalError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    ParacanonicalError::new_err(e.to_string())
}

fn scalar(x: &Bound<'_, PyAny>) -> PyResult<Q> {
    if let Ok(n) = x.extract::<i64>() {
        return Ok(Q::from_integer(n));
    }
    let s: String = x.extract()?;
    s.parse().map_err(err)
}

fn vector(xs: &Bound<'_, PyAny>) -> PyResult<Vec<Q>> {
    xs.try_iter()?.map(|x| scalar(&x?)).collect()
}

fn strings(v: &[Q]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn to_python(py: Python<'_>, value: &serde_json::Value) -> PyResult<Py<PyAny>> {
    let json = py.import("json")?;
    Ok(json.call_method1("loads", (value.to_string(),))?.unbind())
}

/// Dense matrix over ℚ(i).
#[pyclass(name = "Matrix", module = "pyparacanonical", frozen)]
struct PyMatrix(ExactMatrix);

#[pymethods]
impl PyMatrix {
    #[new]
    fn new(rows: &Bound<'_, PyAny>) -> PyResult<Self> {
        let rows: Vec<Vec<Q>> = rows.try_iter()?.map(|r| vector(&r?)).collect::<PyResult<_>>()?;
        ExactMatrix::from_rows(rows).map(Self).map_err(err)
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.0.rows(), self.0.cols())
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.0.to_rows().iter().map(|r| strings(r)).collect()
    }

    fn rank(&self) -> usize {
        self.0.rank()
    }

    fn kernel(&self) -> Vec<Vec<String>> {
        self.0.kernel_basis().iter().map(|k| strings(k)).collect()
    }

    fn image(&self) -> Vec<Vec<String>> {
        self.0.image_basis().iter().map(|k| strings(k)).collect()
    }

    /// One solution with free variables set to zero, or `None`.
    fn solve(&self, b: &Bound<'_, PyAny>) -> PyResult<Option<Vec<String>>> {
        let b = vector(b)?;
        if b.len() != self.0.rows() {
            return Err(err(format!("right-hand side needs {} entries", self.0.rows())));
        }
        Ok(self.0.solve(&b).map(|x| strings(&x)))
    }

    fn det(&self) -> PyResult<String> {
        if !self.0.is_square() {
            return Err(err("determinant of a non-square matrix"));
        }
        Ok(self.0.det().to_string())
    }

    fn pfaffian(&self) -> PyResult<String> {
        pfaffian(&self.0).map(|p| p.to_string()).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Matrix({:?})", self.rows())
    }
}

/// Graded module over `Λ*V` with its cup action.
#[pyclass(name = "CupModel", module = "pyparacanonical", frozen)]
struct PyCupModel(CupModule);

#[pymethods]
impl PyCupModel {
    #[staticmethod]
    #[pyo3(signature = (q, shift = 0))]
    fn koszul(q: usize, shift: usize) -> PyResult<Self> {
        build_koszul(q, shift).map(Self).map_err(err)
    }

    #[staticmethod]
    fn ample_divisor(q: usize, chi: usize) -> PyResult<Self> {
        build_ample_divisor_canonical(q, chi).map(Self).map_err(err)
    }

    #[getter]
    fn graded_dims(&self) -> Vec<usize> {
        self.0.graded_dims().to_vec()
    }

    fn cohomology(&self, v: &Bound<'_, PyAny>) -> PyResult<Vec<usize>> {
        let c = transversality::derivative_complex(&self.0, &vector(v)?).map_err(err)?;
        Ok(c.cohomology_dims)
    }

    fn is_k_transversal(&self, v: &Bound<'_, PyAny>, k: usize) -> PyResult<bool> {
        transversality::is_k_transversal(&self.0, &vector(v)?, k).map_err(err)
    }

    #[pyo3(signature = (samples = 64, seed = 0))]
    fn isolated(&self, samples: usize, seed: u64) -> PyResult<bool> {
        transversality::isolated_point_test(&self.0, samples, seed).map_err(err)
    }

    #[pyo3(signature = (samples = 64, seed = 0))]
    fn incidence(&self, py: Python<'_>, samples: usize, seed: u64) -> PyResult<Py<PyAny>> {
        let r = transversality::incidence_report(&self.0, samples, seed).map_err(err)?;
        to_python(py, &serde_json::to_value(&r).map_err(err)?)
    }

    fn serre_pairing(&self, s: &Bound<'_, PyAny>) -> PyResult<PyMatrix> {
        serre_pairing(&self.0, &vector(s)?).map(PyMatrix).map_err(err)
    }

    /// Pfaffian polynomial of `s ↦ ∪s` on the degree-one piece, as text.
    #[pyo3(signature = (samples = 16, seed = 0))]
    fn sigma(&self, samples: usize, seed: u64) -> PyResult<String> {
        let f = SkewFamily::from_cup_module(&self.0).map_err(err)?;
        Ok(sigma_polynomial(&f, samples, seed).pf_poly.to_string())
    }

    fn __repr__(&self) -> String {
        format!("CupModel(dims={:?})", self.0.graded_dims())
    }
}

/// Pfaffian of `Σ s_i A_i` for skew generators `A_i`.
#[pyfunction]
#[pyo3(signature = (generators, samples = 16, seed = 0))]
fn sigma_polynomial_of(generators: Vec<PyRef<'_, PyMatrix>>, samples: usize, seed: u64) -> PyResult<String> {
    let q = generators.first().map_or(0, |g| g.0.rows());
    let f = SkewFamily::new(q, generators.iter().map(|g| g.0.clone()).collect()).map_err(err)?;
    Ok(sigma_polynomial(&f, samples, seed).pf_poly.to_string())
}

#[pyfunction]
fn chi_and_gap(h: Vec<u64>) -> PyResult<(i64, i64)> {
    Ok(ledger::chi_and_gap(&HodgeVector::new(h).map_err(err)?))
}

#[pyfunction]
fn s_n(h: Vec<u64>) -> PyResult<String> {
    Ok(ledger::s_n_coefficient(&HodgeVector::new(h).map_err(err)?).to_string())
}

#[pyfunction]
fn binomial_is_odd(a: u64, b: u64) -> bool {
    ledger::binomial_is_odd(a, b)
}

/// Full ledger for `(h^{0,0}, …, h^{0,n})` as a dict.
#[pyfunction]
#[pyo3(signature = (h, no_agt_fibration = false, isolated_zero = false))]
fn ledger_verdict(py: Python<'_>, h: Vec<u64>, no_agt_fibration: bool, isolated_zero: bool) -> PyResult<Py<PyAny>> {
    let hv = HodgeVector::new(h).map_err(err)?;
    let flags = HypothesisFlags {
        no_agt_fibration,
        isolated_zero,
    };
    to_python(py, &serde_json::to_value(ledger::ledger_verdict(&hv, flags)).map_err(err)?)
}

/// Truncated section-algebra model for order-by-order lifting.
#[pyclass(name = "LiftModel", module = "pyparacanonical", frozen)]
struct PyLiftModel(SectionAlgebraModel);

#[pymethods]
impl PyLiftModel {
    #[staticmethod]
    #[pyo3(signature = (name, n_max = 6))]
    fn builtin(name: &str, n_max: usize) -> PyResult<Self> {
        fixtures::by_name(name, n_max)
            .map(Self)
            .ok_or_else(|| err(format!("unknown model {name:?}; try one of {:?}", fixtures::NAMES)))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        SectionAlgebraModel::from_json(text).map(Self).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn n_max(&self) -> usize {
        self.0.n_max
    }

    /// Raises on the first violated axiom.
    fn validate(&self) -> PyResult<()> {
        lift::validate_model(&self.0).map_err(err)
    }

    /// Lifts to `order` (default `n_max`) and returns the result as a dict.
    #[pyo3(signature = (order = None))]
    fn lift(&self, py: Python<'_>, order: Option<usize>) -> PyResult<Py<PyAny>> {
        let res = lift::lift_full(&self.0, order.unwrap_or(self.0.n_max)).map_err(err)?;
        if lift::verify_lift(&self.0, &res) != lift::LiftCheck::Pass {
            return Err(err("lift failed its own verification"));
        }
        to_python(py, &serde_json::to_value(&res).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("LiftModel(n_max={})", self.0.n_max)
    }
}

#[pymodule]
fn pyparacanonical(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ParacanonicalError", m.py().get_type::<ParacanonicalError>())?;
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyCupModel>()?;
    m.add_class::<PyLiftModel>()?;
    m.add_function(wrap_pyfunction!(sigma_polynomial_of, m)?)?;
    m.add_function(wrap_pyfunction!(chi_and_gap, m)?)?;
    m.add_function(wrap_pyfunction!(s_n, m)?)?;
    m.add_function(wrap_pyfunction!(binomial_is_odd, m)?)?;
    m.add_function(wrap_pyfunction!(ledger_verdict, m)?)?;
    Ok(())
}
