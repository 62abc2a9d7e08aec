//! Python bindings for `poisson-maxima`.
//!
//! Probabilities that the Rust API returns as `LogProb` come back as plain
//! floats holding the natural log. Library errors raise
//! `poisson_maxima_py.PoissonMaximaError`, a `ValueError` subclass.

use poisson_maxima::sweep::{self, Cell, Format, GridPoint, SweepTable};
use poisson_maxima::{asymptotics, maxdist, specfun, Accuracy, Error};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(poisson_maxima_py, PoissonMaximaError, PyValueError);

fn py_err(e: Error) -> PyErr {
    PoissonMaximaError::new_err(e.to_string())
}

fn accuracy(rel_tol: f64, max_iter: usize) -> PyResult<Accuracy> {
    Accuracy::new(rel_tol, max_iter).map_err(py_err)
}

/// `(λ, ln n)`; `n` is carried as its natural log so it can reach 1e40.
#[pyclass(frozen, skip_from_py_object, module = "poisson_maxima_py")]
#[derive(Clone, Copy)]
struct ProblemInstance(poisson_maxima::ProblemInstance);

#[pymethods]
impl ProblemInstance {
    #[new]
    fn new(lambda: f64, ln_n: f64) -> PyResult<Self> {
        poisson_maxima::ProblemInstance::new(lambda, ln_n).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn from_log10_n(lambda: f64, log10_n: f64) -> PyResult<Self> {
        poisson_maxima::ProblemInstance::from_log10_n(lambda, log10_n).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn from_count(lambda: f64, n: u64) -> PyResult<Self> {
        poisson_maxima::ProblemInstance::from_count(lambda, n).map(Self).map_err(py_err)
    }

    #[getter]
    fn lambda(&self) -> f64 {
        self.0.lambda()
    }

    #[getter]
    fn ln_n(&self) -> f64 {
        self.0.ln_n()
    }

    #[getter]
    fn log10_n(&self) -> f64 {
        self.0.log10_n()
    }

    fn __repr__(&self) -> String {
        format!("ProblemInstance(lambda={}, ln_n={})", self.0.lambda(), self.0.ln_n())
    }
}

/// Exact modal value and the pmf slice it came from.
#[pyclass(frozen, get_all, module = "poisson_maxima_py")]
struct ModeReport {
    i_n: u64,
    p_mode: f64,
    p_two_point: f64,
    pmf_argmax: u64,
    p_max: f64,
    scan_lo: u64,
    scan_hi: u64,
    /// `(k, ln Pr[M_n = k])` pairs.
    pmf_slice: Vec<(u64, f64)>,
}

#[pymethods]
impl ModeReport {
    fn window_mass(&self) -> f64 {
        self.pmf_slice.iter().map(|(_, l)| l.exp()).sum()
    }

    fn __repr__(&self) -> String {
        format!(
            "ModeReport(i_n={}, p_two_point={}, pmf_argmax={}, scan=[{}, {}])",
            self.i_n, self.p_two_point, self.pmf_argmax, self.scan_lo, self.scan_hi
        )
    }
}

impl From<maxdist::ModeReport> for ModeReport {
    fn from(r: maxdist::ModeReport) -> Self {
        Self {
            i_n: r.i_n,
            p_mode: r.p_mode,
            p_two_point: r.p_two_point,
            pmf_argmax: r.pmf_argmax,
            p_max: r.p_max,
            scan_lo: r.scan_lo,
            scan_hi: r.scan_hi,
            pmf_slice: r.pmf_slice.into_iter().map(|(k, p)| (k, p.ln())).collect(),
        }
    }
}

/// Asymptotic estimates; a field is `None` where the formula does not apply,
/// with the reason in `errors`.
#[pyclass(frozen, get_all, module = "poisson_maxima_py")]
struct AsymptoticReport {
    x0: Option<f64>,
    x1: Option<f64>,
    x_newton: Option<Vec<f64>>,
    kimber: Option<f64>,
    beta_n: Option<f64>,
    continuous_root: Option<f64>,
    errors: Vec<(String, String)>,
}

#[pymethods]
impl AsymptoticReport {
    fn __repr__(&self) -> String {
        format!(
            "AsymptoticReport(x0={:?}, x1={:?}, kimber={:?}, beta_n={:?}, continuous_root={:?})",
            self.x0, self.x1, self.kimber, self.beta_n, self.continuous_root
        )
    }
}

impl From<asymptotics::AsymptoticReport> for AsymptoticReport {
    fn from(r: asymptotics::AsymptoticReport) -> Self {
        let mut errors = Vec::new();
        let mut take = |name: &str, v: Result<f64, Error>| match v {
            Ok(x) => Some(x),
            Err(e) => {
                errors.push((name.to_string(), e.to_string()));
                None
            }
        };
        let x0 = take("x0", r.x0);
        let x1 = take("x1", r.x1);
        let kimber = take("kimber", r.kimber);
        let beta_n = take("beta_n", r.beta_n);
        let continuous_root = take("continuous_root", r.continuous_root);
        let x_newton = match r.x_newton {
            Ok(v) => Some(v),
            Err(e) => {
                errors.push(("x_newton".to_string(), e.to_string()));
                None
            }
        };
        Self { x0, x1, x_newton, kimber, beta_n, continuous_root, errors }
    }
}

#[pyfunction]
fn log_gamma(x: f64) -> PyResult<f64> {
    specfun::log_gamma(x).map_err(py_err)
}

#[pyfunction]
fn digamma(x: f64) -> PyResult<f64> {
    specfun::digamma(x).map_err(py_err)
}

#[pyfunction]
fn lambert_w0(z: f64) -> PyResult<f64> {
    specfun::lambert_w0(z).map_err(py_err)
}

#[pyfunction]
fn log_poisson_pmf(k: u64, lambda: f64) -> PyResult<f64> {
    specfun::log_poisson_pmf(k, lambda).map(|p| p.ln()).map_err(py_err)
}

#[pyfunction]
fn poisson_cdf_log(k: u64, lambda: f64) -> PyResult<f64> {
    specfun::poisson_cdf_log(k, lambda).map(|p| p.ln()).map_err(py_err)
}

#[pyfunction]
fn poisson_sf_log(k: u64, lambda: f64) -> PyResult<f64> {
    specfun::poisson_sf_log(k, lambda).map(|p| p.ln()).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (a, x, rel_tol = 1e-13, max_iter = 500))]
fn reg_gamma_q(a: f64, x: f64, rel_tol: f64, max_iter: usize) -> PyResult<f64> {
    specfun::reg_gamma_q(a, x, accuracy(rel_tol, max_iter)?).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (a, x, rel_tol = 1e-13, max_iter = 500))]
fn reg_gamma_p(a: f64, x: f64, rel_tol: f64, max_iter: usize) -> PyResult<f64> {
    specfun::reg_gamma_p(a, x, accuracy(rel_tol, max_iter)?).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (x, lambda, rel_tol = 1e-13, max_iter = 500))]
fn log_g(x: f64, lambda: f64, rel_tol: f64, max_iter: usize) -> PyResult<f64> {
    specfun::log_g(x, lambda, accuracy(rel_tol, max_iter)?).map_err(py_err)
}

#[pyfunction]
fn max_cdf_log(inst: &ProblemInstance, k: u64) -> PyResult<f64> {
    maxdist::max_cdf_log(&inst.0, k).map(|p| p.ln()).map_err(py_err)
}

#[pyfunction]
fn max_pmf_log(inst: &ProblemInstance, k: u64) -> PyResult<f64> {
    maxdist::max_pmf_log(&inst.0, k).map(|p| p.ln()).map_err(py_err)
}

#[pyfunction]
fn mode(inst: &ProblemInstance) -> PyResult<ModeReport> {
    maxdist::mode(&inst.0).map(ModeReport::from).map_err(py_err)
}

#[pyfunction]
fn two_point_best(inst: &ProblemInstance) -> PyResult<(u64, f64)> {
    maxdist::two_point_best(&inst.0).map_err(py_err)
}

#[pyfunction]
fn log_g_expansion(x: f64, lambda: f64) -> f64 {
    asymptotics::log_g_expansion(x, lambda)
}

#[pyfunction]
fn x0(inst: &ProblemInstance) -> PyResult<f64> {
    asymptotics::x0(&inst.0).map_err(py_err)
}

#[pyfunction]
fn x1(inst: &ProblemInstance) -> PyResult<f64> {
    asymptotics::x1(&inst.0).map_err(py_err)
}

#[pyfunction]
fn newton_refine(inst: &ProblemInstance, x_start: f64, steps: usize) -> PyResult<Vec<f64>> {
    asymptotics::newton_refine(&inst.0, x_start, steps).map_err(py_err)
}

#[pyfunction]
fn kimber_estimate(inst: &ProblemInstance) -> PyResult<f64> {
    asymptotics::kimber_estimate(&inst.0).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (inst, rel_tol = 1e-13, max_iter = 500))]
fn anderson_beta(inst: &ProblemInstance, rel_tol: f64, max_iter: usize) -> PyResult<f64> {
    asymptotics::anderson_beta(&inst.0, accuracy(rel_tol, max_iter)?).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (inst, rel_tol = 1e-13, max_iter = 500))]
fn continuous_root(inst: &ProblemInstance, rel_tol: f64, max_iter: usize) -> PyResult<f64> {
    asymptotics::continuous_root(&inst.0, accuracy(rel_tol, max_iter)?).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (inst, newton_steps = 1, rel_tol = 1e-13, max_iter = 500))]
fn asymptotic_report(
    inst: &ProblemInstance,
    newton_steps: usize,
    rel_tol: f64,
    max_iter: usize,
) -> PyResult<AsymptoticReport> {
    Ok(asymptotics::report(&inst.0, newton_steps, accuracy(rel_tol, max_iter)?).into())
}

fn build_table(
    command: &str,
    lambdas: &[f64],
    log10_n: &[f64],
    k_max: Option<u64>,
) -> PyResult<(SweepTable, Vec<String>)> {
    let points: Vec<GridPoint> = log10_n.iter().copied().map(GridPoint::from_log10).collect();
    match command {
        "dist" => Ok(sweep::dist_table(lambdas, &points, k_max)),
        "prob" => Ok(sweep::prob_table(lambdas, &points)),
        "modes" => Ok(sweep::modes_table(lambdas, &points)),
        "point" => match (lambdas, points.as_slice()) {
            ([l], [p]) => Ok(sweep::point_table(*l, *p)),
            _ => Err(PyValueError::new_err("point takes exactly one lambda and one log10_n")),
        },
        other => Err(PyValueError::new_err(format!("unknown command `{other}`"))),
    }
}

fn cell_to_py(py: Python<'_>, cell: &Cell) -> PyResult<Py<PyAny>> {
    Ok(match cell {
        Cell::Int(v) => v.into_pyobject(py)?.into_any().unbind(),
        Cell::Real(v) if v.is_finite() => v.into_pyobject(py)?.into_any().unbind(),
        _ => py.None(),
    })
}

/// Rows of a sweep (`dist`, `prob`, `modes` or `point`) as a list of dicts;
/// failed cells are `None`. Also returns the warnings.
#[pyfunction]
#[pyo3(signature = (command, lambdas, log10_n, k_max = None))]
fn sweep_rows(
    py: Python<'_>,
    command: &str,
    lambdas: Vec<f64>,
    log10_n: Vec<f64>,
    k_max: Option<u64>,
) -> PyResult<(Vec<Py<PyDict>>, Vec<String>)> {
    let (table, warnings) = py.detach(|| build_table(command, &lambdas, &log10_n, k_max))?;
    let mut rows = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        let d = PyDict::new(py);
        for (name, cell) in table.columns.iter().zip(row) {
            d.set_item(*name, cell_to_py(py, cell)?)?;
        }
        rows.push(d.unbind());
    }
    Ok((rows, warnings))
}

/// The same table rendered exactly as the command-line tool writes it.
#[pyfunction]
#[pyo3(signature = (command, lambdas, log10_n, k_max = None, format = "csv"))]
fn sweep_text(
    py: Python<'_>,
    command: &str,
    lambdas: Vec<f64>,
    log10_n: Vec<f64>,
    k_max: Option<u64>,
    format: &str,
) -> PyResult<String> {
    let format = match format {
        "csv" => Format::Csv,
        "json" => Format::Json,
        other => return Err(PyValueError::new_err(format!("unknown format `{other}`"))),
    };
    let (table, _) = py.detach(|| build_table(command, &lambdas, &log10_n, k_max))?;
    Ok(table.render(format))
}

#[pymodule]
fn poisson_maxima_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PoissonMaximaError", m.py().get_type::<PoissonMaximaError>())?;
    m.add_class::<ProblemInstance>()?;
    m.add_class::<ModeReport>()?;
    m.add_class::<AsymptoticReport>()?;
    m.add_function(wrap_pyfunction!(log_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(digamma, m)?)?;
    m.add_function(wrap_pyfunction!(lambert_w0, m)?)?;
    m.add_function(wrap_pyfunction!(log_poisson_pmf, m)?)?;
    m.add_function(wrap_pyfunction!(poisson_cdf_log, m)?)?;
    m.add_function(wrap_pyfunction!(poisson_sf_log, m)?)?;
    m.add_function(wrap_pyfunction!(reg_gamma_q, m)?)?;
    m.add_function(wrap_pyfunction!(reg_gamma_p, m)?)?;
    m.add_function(wrap_pyfunction!(log_g, m)?)?;
    m.add_function(wrap_pyfunction!(max_cdf_log, m)?)?;
    m.add_function(wrap_pyfunction!(max_pmf_log, m)?)?;
    m.add_function(wrap_pyfunction!(mode, m)?)?;
    m.add_function(wrap_pyfunction!(two_point_best, m)?)?;
    m.add_function(wrap_pyfunction!(log_g_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(x0, m)?)?;
    m.add_function(wrap_pyfunction!(x1, m)?)?;
    m.add_function(wrap_pyfunction!(newton_refine, m)?)?;
    m.add_function(wrap_pyfunction!(kimber_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(anderson_beta, m)?)?;
    m.add_function(wrap_pyfunction!(continuous_root, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_report, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_rows, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_text, m)?)?;
    Ok(())
}
