//! Python module `mslab` over the core numerics.

use pyo3::exceptions::{PyArithmeticError, PyOSError, PyRuntimeError, PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

use mslab_core::arith::{self, SumKind};
use mslab_core::constants::{self, Series};
use mslab_core::estermann as est;
use mslab_core::zeta;
use mslab_core::{Complex128, Error};

fn py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::InvalidInput(_) | Error::Range(_) | Error::Domain(_) | Error::Unsupported(_) => {
            PyValueError::new_err(msg)
        }
        Error::Pole(_) => PyZeroDivisionError::new_err(msg),
        Error::Overflow(_) | Error::Precision { .. } => PyArithmeticError::new_err(msg),
        Error::Io(_) | Error::Integrity(_) => PyOSError::new_err(msg),
        Error::Resource(_) => PyRuntimeError::new_err(msg),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for mslab_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn sum_kind(kind: &str) -> PyResult<SumKind> {
    match kind {
        "d2" => Ok(SumKind::D2),
        "d4" => Ok(SumKind::D4),
        "dcube" => Ok(SumKind::DCube),
        _ => Err(PyValueError::new_err(format!("kind must be d2, d4 or dcube, got {kind}"))),
    }
}

fn series(name: &str) -> PyResult<Series> {
    match name {
        "d2" => Ok(Series::D2),
        "dcube" => Ok(Series::DCube),
        _ => Err(PyValueError::new_err(format!("series must be d2 or dcube, got {name}"))),
    }
}

/// Exact Σ_{n≤x} f(n).
#[pyfunction]
#[pyo3(signature = (kind, x, method = "sublinear"))]
fn summatory(kind: &str, x: u64, method: &str) -> PyResult<u128> {
    let kind = sum_kind(kind)?;
    match method {
        "sublinear" => arith::summatory(x, kind).py(),
        "direct" => arith::summatory_direct(x, kind).py(),
        _ => Err(PyValueError::new_err(format!("method must be direct or sublinear, got {method}"))),
    }
}

/// Exact Σ_{x<n≤x+y} f(n).
#[pyfunction]
fn short_interval_sum(kind: &str, x: u64, y: u64) -> PyResult<u128> {
    arith::short_interval_sum(x, y, sum_kind(kind)?).py()
}

#[pyfunction]
fn gcd_identity_check(m1: u64, n1: u64, m2: u64, n2: u64) -> PyResult<bool> {
    arith::gcd_identity_check(m1, n1, m2, n2).py()
}

/// (Σ_{M<m≤M1} gcd(m, a), ratio to M·d(a))
#[pyfunction]
fn gcd_range_sum(m: u64, m1: u64, a: u64) -> PyResult<(u128, f64)> {
    let r = arith::gcd_range_sum(m, m1, a).py()?;
    Ok((r.sum, r.bound_ratio))
}

#[pyclass(module = "mslab", frozen, get_all)]
struct ScanRow {
    x: u64,
    sum: u128,
    main_term: f64,
    error_term: f64,
    ratio: f64,
}

impl From<constants::ScanRow> for ScanRow {
    fn from(r: constants::ScanRow) -> Self {
        ScanRow {
            x: r.x,
            sum: r.sum,
            main_term: r.main_term,
            error_term: r.error_term,
            ratio: r.ratio,
        }
    }
}

#[pymethods]
impl ScanRow {
    fn __repr__(&self) -> String {
        format!("ScanRow(x={}, sum={}, error_term={}, ratio={})", self.x, self.sum, self.error_term, self.ratio)
    }
}

#[pyclass(module = "mslab", frozen)]
struct MainTermPoly {
    inner: constants::MainTermPoly,
}

#[pymethods]
impl MainTermPoly {
    /// (A, B, C, D)
    #[getter]
    fn coeffs(&self) -> (f64, f64, f64, f64) {
        let [a, b, c, d] = self.inner.coeffs;
        (a, b, c, d)
    }

    #[getter]
    fn digits_valid(&self) -> u32 {
        self.inner.digits_valid
    }

    fn eval(&self, y: f64) -> f64 {
        self.inner.eval(y)
    }

    fn main_term(&self, x: f64) -> f64 {
        self.inner.main_term(x)
    }

    fn __repr__(&self) -> String {
        let [a, b, c, d] = self.inner.coeffs;
        format!("MainTermPoly({}, A={a}, B={b}, C={c}, D={d})", self.inner.series.name())
    }
}

#[pyfunction]
fn main_term_coefficients(name: &str) -> PyResult<MainTermPoly> {
    Ok(MainTermPoly {
        inner: constants::main_term_coefficients(series(name)?).py()?,
    })
}

#[pyfunction]
fn residue_main_term(x: f64, name: &str) -> PyResult<f64> {
    constants::residue_main_term(x, series(name)?).py()
}

#[pyfunction]
fn error_term(x: u64, name: &str) -> PyResult<ScanRow> {
    Ok(constants::error_term(x, series(name)?).py()?.into())
}

#[pyfunction]
fn scan_error_term(x_from: u64, x_to: u64, points: usize, name: &str) -> PyResult<Vec<ScanRow>> {
    let rows = constants::scan_error_term(x_from, x_to, points, series(name)?).py()?;
    Ok(rows.into_iter().map(Into::into).collect())
}

#[pyfunction]
fn stieltjes(k: u32) -> PyResult<f64> {
    constants::stieltjes(k).py()
}

#[pyfunction]
fn zeta_em(s: Complex128) -> PyResult<Complex128> {
    zeta::zeta_em(s).py()
}

#[pyfunction]
fn hurwitz(s: Complex128, a: f64) -> PyResult<Complex128> {
    zeta::hurwitz(s, a).py()
}

#[pyfunction]
fn complex_gamma(s: Complex128) -> PyResult<Complex128> {
    zeta::complex_gamma(s).py()
}

#[pyfunction]
fn zeta_half_line(t: f64) -> PyResult<Complex128> {
    zeta::zeta_half_line(t).py()
}

#[pyclass(module = "mslab", frozen, get_all)]
struct IntegralEstimate {
    value: f64,
    abs_err: f64,
    panels: usize,
}

#[pymethods]
impl IntegralEstimate {
    fn __repr__(&self) -> String {
        format!("IntegralEstimate(value={}, abs_err={}, panels={})", self.value, self.abs_err, self.panels)
    }
}

impl From<zeta::IntegralEstimate> for IntegralEstimate {
    fn from(e: zeta::IntegralEstimate) -> Self {
        IntegralEstimate {
            value: e.value,
            abs_err: e.abs_err,
            panels: e.panels,
        }
    }
}

/// ∫_1^T |ζ(1/2+it)|⁴ dt
#[pyfunction]
fn fourth_moment(t_max: f64) -> PyResult<IntegralEstimate> {
    Ok(zeta::fourth_moment(t_max).py()?.into())
}

/// ∫_1^T |ζ(1/2+it)|⁴ / |ζ(1+2it)|^k dt
#[pyfunction]
fn ratio_moment(t_max: f64, k: f64) -> PyResult<IntegralEstimate> {
    Ok(zeta::ratio_moment(t_max, k).py()?.into())
}

/// Truncated mollifier approximation to 1/ζ(1+it).
#[pyfunction]
#[pyo3(signature = (t, cutoff, height, epsilon = zeta::EPSILON))]
fn inv_zeta_mollified(t: f64, cutoff: f64, height: f64, epsilon: f64) -> PyResult<Complex128> {
    let params = zeta::MollifierParams::new(cutoff, height, epsilon).py()?;
    zeta::inv_zeta_mollified(t, params).py()
}

#[pyclass(module = "mslab", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct FareyArg {
    inner: est::FareyArg,
}

#[pymethods]
impl FareyArg {
    #[new]
    fn new(h: i64, k: u64) -> PyResult<Self> {
        Ok(FareyArg {
            inner: est::FareyArg::new(h, k).py()?,
        })
    }

    #[getter]
    fn h(&self) -> i64 {
        self.inner.h
    }

    #[getter]
    fn k(&self) -> u64 {
        self.inner.k
    }

    #[getter]
    fn h_bar(&self) -> u64 {
        self.inner.h_bar
    }

    fn __repr__(&self) -> String {
        format!("FareyArg({}/{})", self.inner.h, self.inner.k)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// D(s; h/k) on the whole plane minus s = 1.
#[pyfunction]
fn estermann(s: Complex128, arg: FareyArg) -> PyResult<Complex128> {
    est::estermann_hurwitz(s, arg.inner).py()
}

/// (value, tail_bound) from the truncated Dirichlet series, Re s ≥ 1.25.
#[pyfunction]
fn estermann_dirichlet(s: Complex128, arg: FareyArg, l_cut: u64) -> PyResult<(Complex128, f64)> {
    let d = est::estermann_dirichlet(s, arg.inner, l_cut).py()?;
    Ok((d.value, d.tail_bound))
}

/// (c_{-2}, c_{-1}) at s = 1.
#[pyfunction]
fn laurent_at_one(arg: FareyArg) -> PyResult<(f64, f64)> {
    let c = est::laurent_at_one(arg.inner).py()?;
    Ok((c.c_m2, c.c_m1))
}

#[pyfunction]
fn functional_equation_residual(s: Complex128, arg: FareyArg) -> PyResult<f64> {
    est::functional_equation_residual(s, arg.inner).py()
}

/// (sum, bound_ratio)
#[pyfunction]
fn incomplete_kloosterman(a_lo: f64, a_hi: f64, q: u64, b: u64, l: i64) -> PyResult<(Complex128, f64)> {
    let k = est::incomplete_kloosterman(a_lo, a_hi, q, b, l).py()?;
    Ok((k.sum, k.bound_ratio))
}

#[pyfunction]
fn ramanujan_sum(q: u64, l: i64) -> i64 {
    est::ramanujan_sum(q, l)
}

#[pymodule]
fn mslab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<ScanRow>()?;
    m.add_class::<MainTermPoly>()?;
    m.add_class::<IntegralEstimate>()?;
    m.add_class::<FareyArg>()?;
    m.add_function(wrap_pyfunction!(summatory, m)?)?;
    m.add_function(wrap_pyfunction!(short_interval_sum, m)?)?;
    m.add_function(wrap_pyfunction!(gcd_identity_check, m)?)?;
    m.add_function(wrap_pyfunction!(gcd_range_sum, m)?)?;
    m.add_function(wrap_pyfunction!(main_term_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(residue_main_term, m)?)?;
    m.add_function(wrap_pyfunction!(error_term, m)?)?;
    m.add_function(wrap_pyfunction!(scan_error_term, m)?)?;
    m.add_function(wrap_pyfunction!(stieltjes, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_em, m)?)?;
    m.add_function(wrap_pyfunction!(hurwitz, m)?)?;
    m.add_function(wrap_pyfunction!(complex_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_half_line, m)?)?;
    m.add_function(wrap_pyfunction!(fourth_moment, m)?)?;
    m.add_function(wrap_pyfunction!(ratio_moment, m)?)?;
    m.add_function(wrap_pyfunction!(inv_zeta_mollified, m)?)?;
    m.add_function(wrap_pyfunction!(estermann, m)?)?;
    m.add_function(wrap_pyfunction!(estermann_dirichlet, m)?)?;
    m.add_function(wrap_pyfunction!(laurent_at_one, m)?)?;
    m.add_function(wrap_pyfunction!(functional_equation_residual, m)?)?;
    m.add_function(wrap_pyfunction!(incomplete_kloosterman, m)?)?;
    m.add_function(wrap_pyfunction!(ramanujan_sum, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
