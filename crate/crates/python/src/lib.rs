//! Python bindings: kernels, point sets and diversity tables as classes, and
//! the main operations as module functions. Structured results come back as
//! plain dicts and lists.

use circumdiv::{diversity, embed, geomkit, AffineMap, Error};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyList, PyString};
use serde::Serialize;
use serde_json::Value;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(format!("[{}] {}", e.code(), e))
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => PyString::new(py, s).into_any(),
        Value::Array(items) => {
            let items = items.iter().map(|x| to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any()
        }
        Value::Object(map) => {
            let d = PyDict::new(py);
            for (k, x) in map {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn dump<'py, T: Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(x).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &v)
}

fn map_from(matrix: Vec<Vec<f64>>, offset: Vec<f64>) -> PyResult<AffineMap> {
    AffineMap::from_rows(&matrix, offset).map_err(err)
}

/// A convex body used as the scaling shape.
#[pyclass(name = "Kernel", module = "circumdiv", frozen)]
pub struct PyKernel {
    inner: geomkit::Kernel,
}

#[pymethods]
impl PyKernel {
    #[staticmethod]
    fn ball(dim: usize) -> Self {
        Self { inner: geomkit::Kernel::ball(dim) }
    }

    #[staticmethod]
    fn simplex_pos(dim: usize) -> Self {
        Self { inner: geomkit::Kernel::simplex_pos(dim) }
    }

    #[staticmethod]
    fn simplex_neg(dim: usize) -> Self {
        Self { inner: geomkit::Kernel::simplex_neg(dim) }
    }

    #[staticmethod]
    fn unit_cube(dim: usize) -> Self {
        Self { inner: geomkit::Kernel::unit_cube(dim) }
    }

    #[staticmethod]
    fn hpolytope(normals: Vec<Vec<f64>>, offsets: Vec<f64>) -> PyResult<Self> {
        let inner = geomkit::Kernel::hpolytope(normals, offsets).map_err(err)?;
        Ok(Self { inner })
    }

    /// Image of the unit cube under `x ↦ matrix·x + offset`.
    #[staticmethod]
    fn parallelotope(matrix: Vec<Vec<f64>>, offset: Vec<f64>) -> PyResult<Self> {
        let inner = geomkit::Kernel::parallelotope(map_from(matrix, offset)?).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn product(left: PyRef<'_, PyKernel>, right: PyRef<'_, PyKernel>) -> Self {
        Self {
            inner: geomkit::Kernel::product(left.inner.clone(), right.inner.clone()),
        }
    }

    #[staticmethod]
    fn affine_image(matrix: Vec<Vec<f64>>, offset: Vec<f64>, base: PyRef<'_, PyKernel>) -> PyResult<Self> {
        let inner = geomkit::Kernel::affine_image(map_from(matrix, offset)?, base.inner.clone()).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner: geomkit::Kernel =
            serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        inner.validate().map_err(err)?;
        Ok(Self { inner })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("kernels serialize")
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.type_name()
    }

    fn __repr__(&self) -> String {
        format!("Kernel({}, dim={})", self.inner.type_name(), self.inner.dim())
    }
}

/// A finite point set with optional labels.
#[pyclass(name = "PointSet", module = "circumdiv", frozen)]
pub struct PyPointSet {
    inner: geomkit::PointSet,
}

#[pymethods]
impl PyPointSet {
    #[new]
    #[pyo3(signature = (points, labels=None))]
    fn new(points: Vec<Vec<f64>>, labels: Option<Vec<String>>) -> PyResult<Self> {
        let mut inner = geomkit::PointSet::from_coords(points).map_err(err)?;
        if let Some(labels) = labels {
            inner = inner.with_labels(labels).map_err(err)?;
        }
        Ok(Self { inner })
    }

    fn points(&self) -> Vec<Vec<f64>> {
        self.inner.points().iter().map(|p| p.coords().to_vec()).collect()
    }

    fn labels(&self) -> Vec<String> {
        self.inner.all_labels()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("PointSet(len={}, dim={})", self.inner.len(), self.inner.dim())
    }
}

/// A diversity table over at most 16 labels.
#[pyclass(name = "Diversity", module = "circumdiv", frozen)]
pub struct PyDiversity {
    inner: diversity::FiniteDiversity,
}

#[pymethods]
impl PyDiversity {
    /// `values[mask]` is the value on the subset whose bits select labels.
    #[new]
    fn new(labels: Vec<String>, values: Vec<f64>) -> PyResult<Self> {
        let inner = diversity::FiniteDiversity::new(labels, values).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_profile(labels: Vec<String>, profile: Vec<f64>) -> PyResult<Self> {
        let inner = diversity::FiniteDiversity::from_profile(labels, &profile).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = diversity::FiniteDiversity::from_json_str(text).map_err(err)?;
        Ok(Self { inner })
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn values(&self) -> Vec<f64> {
        self.inner.values().to_vec()
    }

    fn value(&self, subset: Vec<String>) -> PyResult<f64> {
        self.inner.value_of(&subset).map_err(err)
    }

    #[pyo3(signature = (full=false))]
    fn check_axioms<'py>(&self, py: Python<'py>, full: bool) -> PyResult<Bound<'py, PyAny>> {
        let mode = if full {
            diversity::CheckMode::FullReport
        } else {
            diversity::CheckMode::FirstViolation
        };
        dump(py, &diversity::check_axioms_with(&self.inner, mode))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Diversity(labels={:?})", self.inner.labels())
    }
}

/// `(radius, center)` of the smallest covering translate of `λK`.
#[pyfunction]
fn circumradius(points: PyRef<'_, PyPointSet>, kernel: PyRef<'_, PyKernel>) -> PyResult<(f64, Vec<f64>)> {
    let s = circumdiv::circumradius(&points.inner, &kernel.inner).map_err(err)?;
    Ok((s.radius, s.center.coords().to_vec()))
}

#[pyfunction]
fn core_set<'py>(
    py: Python<'py>,
    points: PyRef<'_, PyPointSet>,
    kernel: PyRef<'_, PyKernel>,
    epsilon: f64,
) -> PyResult<Bound<'py, PyAny>> {
    dump(py, &circumdiv::core_set(&points.inner, &kernel.inner, epsilon).map_err(err)?)
}

#[pyfunction]
fn ball_core_set<'py>(py: Python<'py>, points: PyRef<'_, PyPointSet>, epsilon: f64) -> PyResult<Bound<'py, PyAny>> {
    dump(py, &circumdiv::ball_core_set(&points.inner, epsilon).map_err(err)?)
}

#[pyfunction]
fn kernel_diversity(points: PyRef<'_, PyPointSet>, kernel: PyRef<'_, PyKernel>) -> PyResult<PyDiversity> {
    let inner = diversity::kernel_diversity(&points.inner, &kernel.inner).map_err(err)?;
    Ok(PyDiversity { inner })
}

#[pyfunction]
fn l1_diversity(points: PyRef<'_, PyPointSet>) -> PyResult<PyDiversity> {
    let inner = diversity::l1_diversity(&points.inner).map_err(err)?;
    Ok(PyDiversity { inner })
}

#[pyfunction]
fn symmetric_embeddable<'py>(py: Python<'py>, delta: PyRef<'_, PyDiversity>) -> PyResult<Bound<'py, PyAny>> {
    dump(py, &embed::symmetric_embeddable(&delta.inner).map_err(err)?)
}

#[pyfunction]
fn symmetric_embed<'py>(py: Python<'py>, delta: PyRef<'_, PyDiversity>) -> PyResult<Bound<'py, PyAny>> {
    dump(py, &embed::symmetric_embed(&delta.inner).map_err(err)?)
}

#[pyfunction]
fn diameter_embed<'py>(py: Python<'py>, delta: PyRef<'_, PyDiversity>) -> PyResult<Bound<'py, PyAny>> {
    dump(py, &embed::diameter_embed(&delta.inner).map_err(err)?)
}

#[pyfunction]
fn ball_embed_decide<'py>(py: Python<'py>, delta: PyRef<'_, PyDiversity>, dim: usize) -> PyResult<Bound<'py, PyAny>> {
    dump(py, &embed::ball_embed_decide(&delta.inner, dim).map_err(err)?)
}

#[pyfunction]
fn negative_type_check<'py>(py: Python<'py>, delta: PyRef<'_, PyDiversity>) -> PyResult<Bound<'py, PyAny>> {
    dump(py, &embed::negative_type_check(&delta.inner).map_err(err)?)
}

#[pymodule]
#[pyo3(name = "circumdiv")]
fn circumdiv_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyKernel>()?;
    m.add_class::<PyPointSet>()?;
    m.add_class::<PyDiversity>()?;
    m.add_function(wrap_pyfunction!(circumradius, m)?)?;
    m.add_function(wrap_pyfunction!(core_set, m)?)?;
    m.add_function(wrap_pyfunction!(ball_core_set, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_diversity, m)?)?;
    m.add_function(wrap_pyfunction!(l1_diversity, m)?)?;
    m.add_function(wrap_pyfunction!(symmetric_embeddable, m)?)?;
    m.add_function(wrap_pyfunction!(symmetric_embed, m)?)?;
    m.add_function(wrap_pyfunction!(diameter_embed, m)?)?;
    m.add_function(wrap_pyfunction!(ball_embed_decide, m)?)?;
    m.add_function(wrap_pyfunction!(negative_type_check, m)?)?;
    Ok(())
}
