//! Python bindings: parameters, spectrum, propagation, effective
//! Hamiltonians, residues and the convergence reports.

use lambda_elim::analysis::{self, Method, OrderCheck, TimeWindow};
use lambda_elim::{elim, exact, resolvent, trajectory, Error, C64};
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

/// Row-major 2x2 matrix, returned to Python as nested lists.
type Mat2 = [[C64; 2]; 2];

/// `(roots, A, B, C)`.
type Modes = ([f64; 3], [C64; 3], [C64; 3], [C64; 3]);

/// `(quantity, expected_order, predicted, computed, residual)`.
type ExpansionRow = (&'static str, u32, C64, C64, f64);

fn mat2<M: std::ops::Index<(usize, usize), Output = C64>>(m: &M) -> Mat2 {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

fn py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidRegime(_) | Error::SingularPicture(_) | Error::InvalidState(_) | Error::InvalidParameter(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyArithmeticError::new_err(e.to_string()),
    }
}

/// Rotating-frame parameters: `LambdaParams(delta, big_delta, omega_a, omega_b)`.
#[pyclass(name = "LambdaParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyParams(lambda_elim::LambdaParams);

#[pymethods]
impl PyParams {
    #[new]
    fn new(delta: f64, big_delta: f64, omega_a: C64, omega_b: C64) -> PyResult<Self> {
        lambda_elim::LambdaParams::new(delta, big_delta, omega_a, omega_b).map(Self).map_err(py_err)
    }

    /// Parameters of the reference Raman scenario (`eps = 0.05`).
    #[staticmethod]
    fn reference() -> Self {
        let p = std::f64::consts::PI;
        Self(
            lambda_elim::LambdaParams::new(0.1, 1.0, C64::from_polar(0.1, -p / 3.0), C64::from_polar(0.1, -p / 2.0))
                .unwrap(),
        )
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.0.delta()
    }

    #[getter]
    fn big_delta(&self) -> f64 {
        self.0.big_delta()
    }

    #[getter]
    fn omega_a(&self) -> C64 {
        self.0.omega_a()
    }

    #[getter]
    fn omega_b(&self) -> C64 {
        self.0.omega_b()
    }

    /// `delta`, `omega_a`, `omega_b` scaled by `factor`, `big_delta` kept.
    fn with_scaled_couplings(&self, factor: f64) -> PyResult<Self> {
        self.0.with_scaled_couplings(factor).map(Self).map_err(py_err)
    }

    fn reduce(&self) -> PyResult<PyReduced> {
        lambda_elim::reduce(&self.0).map(PyReduced).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "LambdaParams(delta={}, big_delta={}, omega_a={}, omega_b={})",
            self.0.delta(),
            self.0.big_delta(),
            self.0.omega_a(),
            self.0.omega_b()
        )
    }
}

#[pyclass(name = "ReducedParams", frozen)]
struct PyReduced(lambda_elim::ReducedParams);

#[pymethods]
impl PyReduced {
    #[getter]
    fn epsilon(&self) -> f64 {
        self.0.epsilon
    }

    #[getter]
    fn lambda_(&self) -> f64 {
        self.0.lambda
    }

    #[getter]
    fn lambda_a(&self) -> C64 {
        self.0.lambda_a
    }

    #[getter]
    fn lambda_b(&self) -> C64 {
        self.0.lambda_b
    }

    #[getter]
    fn lambda_sign(&self) -> f64 {
        self.0.lambda_sign
    }

    fn is_dark_branch(&self) -> bool {
        self.0.is_dark_branch()
    }

    fn __repr__(&self) -> String {
        format!(
            "ReducedParams(epsilon={}, lambda={}, lambda_a={}, lambda_b={}, lambda_sign={})",
            self.0.epsilon, self.0.lambda, self.0.lambda_a, self.0.lambda_b, self.0.lambda_sign
        )
    }
}

fn method(name: &str, eta: f64, e0: f64) -> PyResult<Method> {
    Ok(match name {
        "rough" => Method::Rough,
        "shifted" => Method::Shifted { eta },
        "green" => Method::Green { e0 },
        other => return Err(PyValueError::new_err(format!("unknown effective method {other:?}"))),
    })
}

/// Dimensionless roots `(x1, x2, x3)`, `x3` nearest 1.
#[pyfunction]
fn characteristic_roots(params: PyParams) -> PyResult<[f64; 3]> {
    exact::roots_for(&params.0).map_err(py_err)
}

/// Mode decomposition: `(roots, A, B, C)`.
#[pyfunction]
#[pyo3(signature = (params, alpha0, beta0, gamma0 = C64::new(0.0, 0.0)))]
fn decompose(params: PyParams, alpha0: C64, beta0: C64, gamma0: C64) -> PyResult<Modes> {
    let s = lambda_elim::State3::new(alpha0, beta0, gamma0).map_err(py_err)?;
    let d = exact::decompose(&params.0, &s);
    Ok((d.roots, d.a, d.b, d.c))
}

/// `[(alpha, beta, gamma), ...]` at each time.
#[pyfunction]
#[pyo3(signature = (params, times, alpha0, beta0, gamma0 = C64::new(0.0, 0.0)))]
fn propagate_exact(params: PyParams, times: Vec<f64>, alpha0: C64, beta0: C64, gamma0: C64) -> PyResult<Vec<[C64; 3]>> {
    let s = lambda_elim::State3::new(alpha0, beta0, gamma0).map_err(py_err)?;
    Ok(exact::propagate_exact(&exact::decompose(&params.0, &s), &times).amplitudes().to_vec())
}

/// 2x2 effective Hamiltonian; `method` is `rough`, `shifted` or `green`.
#[pyfunction]
#[pyo3(signature = (params, method = "rough", eta = 0.0, e0 = 0.0))]
fn effective_hamiltonian(params: PyParams, method: &str, eta: f64, e0: f64) -> PyResult<Mat2> {
    let h = analysis::effective_hamiltonian(&params.0, self::method(method, eta, e0)?).map_err(py_err)?;
    Ok(mat2(h.matrix()))
}

/// `[(alpha, beta), ...]` under an effective Hamiltonian.
#[pyfunction]
#[pyo3(signature = (params, times, alpha0, beta0, method = "rough", eta = 0.0, e0 = 0.0))]
fn propagate_effective(
    params: PyParams,
    times: Vec<f64>,
    alpha0: C64,
    beta0: C64,
    method: &str,
    eta: f64,
    e0: f64,
) -> PyResult<Vec<[C64; 2]>> {
    let h = analysis::effective_hamiltonian(&params.0, self::method(method, eta, e0)?).map_err(py_err)?;
    let s = lambda_elim::State2::new(alpha0, beta0).map_err(py_err)?;
    Ok(elim::propagate_effective(&h, &s, &times).amplitudes().to_vec())
}

/// `(poles, [R1, R2, R3])` of the projected resolvent at time `t`.
#[pyfunction]
fn residues(params: PyParams, t: f64) -> PyResult<([f64; 3], [Mat2; 3])> {
    let r = resolvent::residues(&params.0, t).map_err(py_err)?;
    Ok((r.poles, r.residues.each_ref().map(mat2)))
}

/// Ground-manifold block of `exp(-i H t)`.
#[pyfunction]
fn projected_propagator(params: PyParams, t: f64) -> PyResult<Mat2> {
    resolvent::projected_propagator(&params.0, t).map(|m| mat2(&m)).map_err(py_err)
}

/// Rows `(quantity, expected_order, predicted, computed, residual)`;
/// `expected_order` is 0 for exact predictions.
#[pyfunction]
fn expansion_check(params: PyParams, alpha0: C64, beta0: C64) -> PyResult<Vec<ExpansionRow>> {
    let s = lambda_elim::State2::new(alpha0, beta0).map_err(py_err)?;
    let table = analysis::expansion_check(&params.0, &s).map_err(py_err)?;
    Ok(table
        .rows
        .iter()
        .map(|r| {
            let order = match r.expected {
                analysis::ExpectedOrder::Exact => 0,
                analysis::ExpectedOrder::Eps(n) => n,
            };
            (r.quantity, order, r.predicted, r.computed, r.residual)
        })
        .collect())
}

/// Max amplitude error of an effective method against the exact solution
/// over `t_max_delta / |Delta|`.
#[pyfunction]
#[pyo3(signature = (params, alpha0, beta0, method = "rough", eta = 0.0, e0 = 0.0, t_max_delta = 200.0, n_samples = 2001))]
#[allow(clippy::too_many_arguments)]
fn effective_error(
    params: PyParams,
    alpha0: C64,
    beta0: C64,
    method: &str,
    eta: f64,
    e0: f64,
    t_max_delta: f64,
    n_samples: usize,
) -> PyResult<f64> {
    let s = lambda_elim::State2::new(alpha0, beta0).map_err(py_err)?;
    let w = TimeWindow { t_max_delta, n_samples };
    analysis::effective_error(&params.0, self::method(method, eta, e0)?, &s, &w)
        .map(|r| r.max_amplitude_error)
        .map_err(py_err)
}

/// `(points, slope)` of the error power law over coupling scale factors.
#[pyfunction]
#[pyo3(signature = (params, alpha0, beta0, factors = vec![1.0, 0.5, 0.25], method = "rough", eta = 0.0, e0 = 0.0))]
#[allow(clippy::too_many_arguments)]
fn scaling_study(
    params: PyParams,
    alpha0: C64,
    beta0: C64,
    factors: Vec<f64>,
    method: &str,
    eta: f64,
    e0: f64,
) -> PyResult<(Vec<(f64, f64)>, f64)> {
    let s = lambda_elim::State2::new(alpha0, beta0).map_err(py_err)?;
    let fit = analysis::scaling_study(&params.0, &factors, self::method(method, eta, e0)?, &s, &TimeWindow::default())
        .map_err(py_err)?;
    Ok((fit.points, fit.slope))
}

/// `(ratios, passed)` for residuals expected to shrink like `eps^order`.
#[pyfunction]
#[pyo3(signature = (epsilons, residuals, order, at_least = false))]
fn ratio_test(epsilons: Vec<f64>, residuals: Vec<f64>, order: u32, at_least: bool) -> PyResult<(Vec<f64>, bool)> {
    let check = if at_least { OrderCheck::AtLeast } else { OrderCheck::Exact };
    let t = analysis::ratio_test(&epsilons, &residuals, order, check).map_err(py_err)?;
    Ok((t.ratios, t.passed))
}

#[pyfunction]
fn uniform_grid(t_max: f64, n: usize) -> Vec<f64> {
    trajectory::uniform_grid(t_max, n)
}

#[pymodule]
fn lambda_elim_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_class::<PyReduced>()?;
    m.add_function(wrap_pyfunction!(characteristic_roots, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(propagate_exact, m)?)?;
    m.add_function(wrap_pyfunction!(effective_hamiltonian, m)?)?;
    m.add_function(wrap_pyfunction!(propagate_effective, m)?)?;
    m.add_function(wrap_pyfunction!(residues, m)?)?;
    m.add_function(wrap_pyfunction!(projected_propagator, m)?)?;
    m.add_function(wrap_pyfunction!(expansion_check, m)?)?;
    m.add_function(wrap_pyfunction!(effective_error, m)?)?;
    m.add_function(wrap_pyfunction!(scaling_study, m)?)?;
    m.add_function(wrap_pyfunction!(ratio_test, m)?)?;
    m.add_function(wrap_pyfunction!(uniform_grid, m)?)?;
    Ok(())
}
