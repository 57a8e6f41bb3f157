//! Python bindings: `import mebval`.

use mebval::geometry::{self, Ball};
use mebval::scenarios::{self, Instance, ScenarioSpec, Strategy};
use mebval::validity::{self, Certificate, Condition};
use mebval::{aggregate as agg, oracle, AggregateOptions, Label, PointSet, Rule};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(mebval, MebvalError, PyValueError);

fn err(e: mebval::Error) -> PyErr {
    MebvalError::new_err(e.to_string())
}

fn rule(name: &str) -> PyResult<Rule> {
    name.parse().map_err(err)
}

#[pyclass(name = "Ball", module = "mebval", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyBall {
    inner: Ball,
}

#[pymethods]
impl PyBall {
    #[new]
    fn new(center: Vec<f64>, radius: f64) -> PyResult<Self> {
        Ok(Self {
            inner: Ball::new(center, radius).map_err(err)?,
        })
    }

    #[getter]
    fn center(&self) -> Vec<f64> {
        self.inner.center.clone()
    }

    #[getter]
    fn radius(&self) -> f64 {
        self.inner.radius
    }

    fn contains(&self, point: Vec<f64>) -> bool {
        self.inner.contains(&point)
    }

    fn __repr__(&self) -> String {
        format!("Ball(center={:?}, radius={})", self.inner.center, self.inner.radius)
    }
}

#[pyclass(name = "PointSet", module = "mebval", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPointSet {
    inner: PointSet,
}

#[pymethods]
impl PyPointSet {
    /// `labels` entries are "honest" or "byz".
    #[new]
    #[pyo3(signature = (points, labels = None))]
    fn new(points: Vec<Vec<f64>>, labels: Option<Vec<String>>) -> PyResult<Self> {
        let inner = match labels {
            None => PointSet::new(points),
            Some(labels) => {
                let parsed = labels
                    .iter()
                    .map(|l| Label::parse(l).ok_or_else(|| MebvalError::new_err(format!("unknown label {l:?}"))))
                    .collect::<PyResult<Vec<_>>>()?;
                PointSet::with_labels(points, parsed)
            }
        }
        .map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_csv(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: mebval::io::parse_csv(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn read(path: std::path::PathBuf) -> PyResult<Self> {
        Ok(Self {
            inner: mebval::io::read_points(&path).map_err(err)?,
        })
    }

    fn to_csv(&self) -> String {
        mebval::io::write_csv(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn points(&self) -> Vec<Vec<f64>> {
        self.inner.points().to_vec()
    }

    #[getter]
    fn labels(&self) -> Option<Vec<&'static str>> {
        self.inner.labels().map(|ls| ls.iter().map(|l| l.as_str()).collect())
    }

    fn honest(&self) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.honest().map_err(err)?,
        })
    }

    fn mean(&self) -> Vec<f64> {
        self.inner.mean()
    }

    fn __repr__(&self) -> String {
        format!("PointSet(n={}, d={}, labelled={})", self.inner.len(), self.inner.dim(), self.inner.labels().is_some())
    }
}

#[pyclass(name = "AggregateResult", module = "mebval", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyAggregateResult {
    rule: String,
    output: Vec<f64>,
    achieved_value: Option<f64>,
    chosen_subset: Option<Vec<usize>>,
    chosen_index: Option<usize>,
}

#[pymethods]
impl PyAggregateResult {
    fn __repr__(&self) -> String {
        format!("AggregateResult(rule={:?}, output={:?})", self.rule, self.output)
    }
}

#[pyclass(name = "Certificate", module = "mebval", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyCertificate {
    /// Condition kind, e.g. "c-meb" or "convex".
    condition: String,
    /// `c` or `delta` of the condition when it has one.
    parameter: Option<f64>,
    achieved: f64,
    bound: f64,
    passed: bool,
}

#[pymethods]
impl PyCertificate {
    fn __repr__(&self) -> String {
        format!(
            "Certificate({}, achieved={}, bound={}, passed={})",
            self.condition, self.achieved, self.bound, self.passed
        )
    }

    fn __bool__(&self) -> bool {
        self.passed
    }
}

impl From<Certificate> for PyCertificate {
    fn from(c: Certificate) -> Self {
        let (condition, parameter) = match c.condition {
            Condition::Meb => ("meb", None),
            Condition::CMeb { c } => ("c-meb", Some(c)),
            Condition::SafeMeb => ("safe-meb", None),
            Condition::Convex => ("convex", None),
            Condition::Box => ("box", None),
            Condition::RelaxedConvex { delta, .. } => ("relaxed-convex", Some(delta)),
            Condition::NearHull { delta } => ("near-hull", Some(delta)),
            Condition::BiasBound { c } => ("bias-bound", Some(c)),
        };
        Self {
            condition: condition.to_string(),
            parameter,
            achieved: c.achieved,
            bound: c.bound,
            passed: c.pass,
        }
    }
}

#[pyfunction]
fn meb(points: &PyPointSet) -> PyResult<PyBall> {
    Ok(PyBall {
        inner: geometry::meb(&points.inner).map_err(err)?,
    })
}

#[pyfunction]
fn dist_to_hull(y: Vec<f64>, points: &PyPointSet) -> PyResult<f64> {
    geometry::dist_to_hull(&y, &points.inner).map_err(err)
}

#[pyfunction]
fn soddy_inner_bend(bends: Vec<f64>, k: usize) -> PyResult<f64> {
    geometry::soddy_inner_bend(&bends, k).map_err(err)
}

/// Runs `rule` ("mda", "medoid", "geomedian", "coordmedian", "minmax-meb", "mean").
#[pyfunction]
#[pyo3(signature = (rule_name, points, t, max_subsets = None))]
fn aggregate(rule_name: &str, points: &PyPointSet, t: usize, max_subsets: Option<u128>) -> PyResult<PyAggregateResult> {
    let mut opts = AggregateOptions::default();
    if let Some(cap) = max_subsets {
        opts.max_subsets = cap;
    }
    let r = agg::aggregate_with(rule(rule_name)?, &points.inner, t, &opts).map_err(err)?;
    Ok(PyAggregateResult {
        rule: r.rule.name().to_string(),
        output: r.output,
        achieved_value: r.achieved_value,
        chosen_subset: r.chosen_subset,
        chosen_index: r.chosen_index,
    })
}

/// Min-max point and unclamped value for explicit balls.
#[pyfunction]
fn solve_minmax(balls: Vec<PyRef<'_, PyBall>>) -> PyResult<(Vec<f64>, f64)> {
    let balls = agg::CandidateBalls::from_balls(balls.iter().map(|b| b.inner.clone()).collect()).map_err(err)?;
    agg::solve_minmax(&balls).map_err(err)
}

#[pyfunction]
fn safe_meb_empty(points: &PyPointSet, t: usize) -> PyResult<(bool, f64)> {
    let balls = agg::candidate_balls(&points.inner, t).map_err(err)?;
    validity::safe_meb_empty(&balls).map_err(err)
}

#[pyfunction]
fn theoretical_bound(rule_name: &str, n: usize, t: usize, d: usize) -> PyResult<f64> {
    validity::theoretical_bound(rule(rule_name)?, n, t, d).map_err(err)
}

/// `|y - C*| / r*` against the MEB of `honest`.
#[pyfunction]
fn relaxation_factor(y: Vec<f64>, honest: &PyPointSet) -> PyResult<f64> {
    honest.inner.ensure_dim(&y).map_err(err)?;
    let ball = geometry::meb(&honest.inner).map_err(err)?;
    Ok(validity::relaxation_factor(&y, &ball))
}

#[pyfunction]
fn exhaustive_factor(points: &PyPointSet, t: usize, y: Vec<f64>) -> PyResult<f64> {
    oracle::exhaustive_factor(&points.inner, t, &y).map_err(err)
}

#[pyfunction]
fn check_c_meb(y: Vec<f64>, honest: &PyPointSet, c: f64) -> PyResult<PyCertificate> {
    validity::check_c_meb(&y, &honest.inner, c).map(Into::into).map_err(err)
}

#[pyfunction]
fn check_convex(y: Vec<f64>, honest: &PyPointSet) -> PyResult<PyCertificate> {
    validity::check_convex(&y, &honest.inner).map(Into::into).map_err(err)
}

#[pyfunction]
fn check_box(y: Vec<f64>, honest: &PyPointSet) -> PyResult<PyCertificate> {
    validity::check_box(&y, &honest.inner).map(Into::into).map_err(err)
}

#[pyfunction]
fn check_relaxed_convex(y: Vec<f64>, honest: &PyPointSet, delta: f64) -> PyResult<PyCertificate> {
    validity::check_relaxed_convex(&y, &honest.inner, delta).map(Into::into).map_err(err)
}

#[pyfunction]
fn check_bias_bound(y: Vec<f64>, honest: &PyPointSet, c: f64) -> PyResult<PyCertificate> {
    validity::check_bias_bound(&y, &honest.inner, c).map(Into::into).map_err(err)
}

/// Seeded instance with `t` Byzantine points placed by `strategy`
/// ("uniform-far", "cluster-collusion" or "search").
#[pyfunction]
#[pyo3(signature = (n, t, d, spread = 1.0, seed = 0, strategy = "uniform-far", search_rule = "medoid", starts = 8))]
#[allow(clippy::too_many_arguments)]
fn random_instance(
    n: usize,
    t: usize,
    d: usize,
    spread: f64,
    seed: u64,
    strategy: &str,
    search_rule: &str,
    starts: usize,
) -> PyResult<PyPointSet> {
    let strategy = match strategy {
        "uniform-far" => Strategy::UniformFar,
        "cluster-collusion" => Strategy::ClusterCollusion,
        "search" => Strategy::Search {
            rule: rule(search_rule)?,
            starts,
        },
        other => return Err(MebvalError::new_err(format!("unknown strategy {other:?}"))),
    };
    Ok(PyPointSet {
        inner: scenarios::random_instance(n, t, d, spread, seed, strategy).map_err(err)?,
    })
}

/// Generates a scenario from its JSON description. Point constructions give
/// `(PointSet, t)`; tangent balls give a list of `Ball`.
#[pyfunction]
fn scenario(py: Python<'_>, spec_json: &str) -> PyResult<Py<PyAny>> {
    let spec: ScenarioSpec = serde_json::from_str(spec_json).map_err(|e| MebvalError::new_err(e.to_string()))?;
    match spec.generate().map_err(err)? {
        Instance::Points(c) => Ok((PyPointSet { inner: c.points }, c.t).into_pyobject(py)?.into_any().unbind()),
        Instance::Balls(b) => {
            let balls: Vec<PyBall> = b.balls().map(|inner| PyBall { inner: inner.clone() }).collect();
            Ok(balls.into_pyobject(py)?.into_any().unbind())
        }
    }
}

#[pymodule]
#[pyo3(name = "mebval")]
fn mebval_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("MebvalError", m.py().get_type::<MebvalError>())?;
    m.add_class::<PyBall>()?;
    m.add_class::<PyPointSet>()?;
    m.add_class::<PyAggregateResult>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(meb, m)?)?;
    m.add_function(wrap_pyfunction!(dist_to_hull, m)?)?;
    m.add_function(wrap_pyfunction!(soddy_inner_bend, m)?)?;
    m.add_function(wrap_pyfunction!(aggregate, m)?)?;
    m.add_function(wrap_pyfunction!(solve_minmax, m)?)?;
    m.add_function(wrap_pyfunction!(safe_meb_empty, m)?)?;
    m.add_function(wrap_pyfunction!(theoretical_bound, m)?)?;
    m.add_function(wrap_pyfunction!(relaxation_factor, m)?)?;
    m.add_function(wrap_pyfunction!(exhaustive_factor, m)?)?;
    m.add_function(wrap_pyfunction!(check_c_meb, m)?)?;
    m.add_function(wrap_pyfunction!(check_convex, m)?)?;
    m.add_function(wrap_pyfunction!(check_box, m)?)?;
    m.add_function(wrap_pyfunction!(check_relaxed_convex, m)?)?;
    m.add_function(wrap_pyfunction!(check_bias_bound, m)?)?;
    m.add_function(wrap_pyfunction!(random_instance, m)?)?;
    m.add_function(wrap_pyfunction!(scenario, m)?)?;
    Ok(())
}
