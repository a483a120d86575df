//! Python bindings: sieving, correlation sums, ζ and zero-table sums.

use std::collections::HashMap;

use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use zetacorr::corr::{self, CorrKindPair, ShiftedCorrParams, WeightedSumParams};
use zetacorr::sieve::{self, ArithmeticFunctionKind};
use zetacorr::zeros;
use zetacorr::zeta::{self, EulerMaclaurinParams};
use zetacorr::Error;

fn err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn kind(name: &str) -> PyResult<ArithmeticFunctionKind> {
    match name {
        "mobius" => Ok(ArithmeticFunctionKind::Mobius),
        "liouville" => Ok(ArithmeticFunctionKind::Liouville),
        "mobius_squared" => Ok(ArithmeticFunctionKind::MobiusSquared),
        "one" => Ok(ArithmeticFunctionKind::One),
        _ => Err(PyValueError::new_err(format!("unknown kind {name:?}"))),
    }
}

fn pair(name: &str) -> PyResult<CorrKindPair> {
    match name {
        "mobius" | "mobius_mertens" => Ok(CorrKindPair::MobiusMertens),
        "liouville" | "liouville_summatory" => Ok(CorrKindPair::LiouvilleSummatory),
        _ => Err(PyValueError::new_err(format!("unknown pair {name:?}"))),
    }
}

/// Values f(lo..=hi) of an arithmetic function.
#[pyfunction]
fn sieve_segment(kind_name: &str, lo: u64, hi: u64) -> PyResult<Vec<i8>> {
    let seg = sieve::sieve_segment(lo, hi, kind(kind_name)?).map_err(err)?;
    Ok(seg.values().to_vec())
}

/// f(n) by trial division.
#[pyfunction]
fn naive_value(kind_name: &str, n: u64) -> PyResult<i8> {
    sieve::naive_value(n, kind(kind_name)?).map_err(err)
}

/// F(n) = f(1) + … + f(n).
#[pyfunction]
fn summatory(kind_name: &str, n: u64) -> PyResult<i64> {
    let mut last = 0;
    for item in sieve::summatory_stream(kind(kind_name)?, n, n).map_err(err)? {
        last = item.map_err(err)?.value;
    }
    Ok(last)
}

#[pyclass(name = "CorrAccumulator", frozen)]
struct PyCorrAccumulator {
    inner: corr::CorrAccumulator,
}

#[pymethods]
impl PyCorrAccumulator {
    #[getter]
    fn n(&self) -> u64 {
        self.inner.n()
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.inner.delta()
    }

    #[getter]
    fn s_plain(&self) -> f64 {
        self.inner.s_plain()
    }

    #[getter]
    fn s_weighted(&self) -> f64 {
        self.inner.s_weighted()
    }

    fn normalized(&self) -> PyResult<f64> {
        self.inner.normalized().map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "CorrAccumulator(n={}, s_plain={}, s_weighted={}, delta={})",
            self.inner.n(),
            self.inner.s_plain(),
            self.inner.s_weighted(),
            self.inner.delta()
        )
    }
}

/// Plain and δ-weighted correlation sums through n_max.
#[pyfunction]
#[pyo3(signature = (pair_name, n_max, delta = 0.0))]
fn correlate(pair_name: &str, n_max: u64, delta: f64) -> PyResult<PyCorrAccumulator> {
    Ok(PyCorrAccumulator { inner: corr::correlate(pair(pair_name)?, n_max, delta).map_err(err)? })
}

/// Normalized correlation sum at every multiple of `stride` up to n_max.
#[pyfunction]
fn correlate_rows(pair_name: &str, n_max: u64, stride: u64) -> PyResult<Vec<(u64, f64, f64)>> {
    let mut state = corr::CorrRunState::new(pair(pair_name)?, 0.0).map_err(err)?;
    let mut rows = Vec::new();
    state
        .advance_to(
            n_max,
            stride,
            sieve::DEFAULT_SEGMENT_CAPACITY,
            |acc| {
                if acc.n() >= 2 {
                    rows.push((acc.n(), acc.s_plain(), acc.normalized()?));
                }
                Ok(())
            },
            |_| Ok(()),
        )
        .map_err(err)?;
    Ok(rows)
}

#[pyfunction]
fn shifted_autocorr(kind_name: &str, k: u64, n_max: u64) -> PyResult<f64> {
    corr::shifted_autocorr(kind(kind_name)?, ShiftedCorrParams { k, n_max }).map_err(err)
}

/// Weighted sum divided by ζ(1+δ); give either (delta, n_max) or (c, t_height).
#[pyfunction]
#[pyo3(signature = (pair_name, delta = None, n_max = None, c = None, t_height = None))]
fn weighted_theorem_sum(
    pair_name: &str,
    delta: Option<f64>,
    n_max: Option<u64>,
    c: Option<f64>,
    t_height: Option<f64>,
) -> PyResult<f64> {
    let params = match (c, t_height, delta, n_max) {
        (Some(c), Some(t), d, None) => WeightedSumParams::from_height(c, t, d),
        (None, None, Some(d), Some(n)) => WeightedSumParams::new(d, n),
        _ => return Err(PyValueError::new_err("give (delta, n_max) or (c, t_height[, delta])")),
    }
    .map_err(err)?;
    corr::weighted_theorem_sum_auto(pair(pair_name)?, &params).map_err(err)
}

/// ζ(s) by Euler–Maclaurin.
#[pyfunction]
#[pyo3(signature = (s, n_terms = None, k_bernoulli = 12, target_abs_err = 1e-12))]
fn zeta_value(s: Complex64, n_terms: Option<u64>, k_bernoulli: usize, target_abs_err: f64) -> PyResult<Complex64> {
    let params = EulerMaclaurinParams { n_terms, k_bernoulli, target_abs_err };
    zeta::zeta(s, &params).map_err(err)
}

#[pyfunction]
fn remainder_bound(s: Complex64, n_terms: u64, k_bernoulli: usize) -> f64 {
    zeta::remainder_bound(s, n_terms, k_bernoulli)
}

#[pyfunction]
fn k_series(n: u64) -> PyResult<f64> {
    if n == 0 {
        return Err(PyValueError::new_err("n must be at least 1"));
    }
    Ok(zeta::k_series(n))
}

#[pyfunction]
fn constants() -> HashMap<&'static str, f64> {
    let k = zeta::constants();
    HashMap::from([
        ("minus_three_over_pi_sq", k.minus_three_over_pi_sq),
        ("zeta_half", k.zeta_half),
        ("liouville_bias_const", k.liouville_bias_const),
        ("k_series_1", k.k_series),
    ])
}

#[pyclass(name = "ZeroTable", frozen)]
struct PyZeroTable {
    inner: zeros::ZeroTable,
}

#[pymethods]
impl PyZeroTable {
    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        Ok(Self { inner: zeros::load_zeros(path).map_err(err)? })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self { inner: zeros::parse_zero_table(text.as_bytes()).map_err(err)? })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn max_gamma(&self) -> Option<f64> {
        self.inner.max_gamma()
    }

    /// (index, gamma, zeta'(rho)) for zeros with gamma < t_height.
    fn below(&self, t_height: f64) -> Vec<(u64, f64, Complex64)> {
        self.inner.below(t_height).iter().map(|r| (r.index, r.gamma, r.zeta_prime)).collect()
    }

    fn count_below(&self, t_height: f64) -> usize {
        self.inner.count_below(t_height)
    }

    fn sum_a(&self, t_height: f64) -> f64 {
        zeros::sum_a(&self.inner, t_height)
    }

    fn sum_b(&self, t_height: f64) -> PyResult<f64> {
        zeros::sum_b(&self.inner, t_height, &EulerMaclaurinParams::default()).map_err(err)
    }

    fn sum_c(&self, t_height: f64) -> f64 {
        zeros::sum_c(&self.inner, t_height)
    }

    fn moment_j(&self, k: f64, t_height: f64) -> PyResult<f64> {
        zeros::moment_j(&self.inner, k, t_height).map_err(err)
    }

    fn reconstruct_m(&self, n: u64, t_height: f64) -> PyResult<f64> {
        zeros::reconstruct_m(n, &self.inner, t_height).map_err(err)
    }

    fn reconstruct_l(&self, n: u64, t_height: f64) -> PyResult<f64> {
        zeros::reconstruct_l(n, &self.inner, t_height, &EulerMaclaurinParams::default()).map_err(err)
    }

    /// One dict per height with t, count, sum_A, sum_B (None when skipped),
    /// sum_C and J_minus_1.
    #[pyo3(signature = (heights, with_sum_b = false))]
    fn reports(&self, heights: Vec<f64>, with_sum_b: bool) -> PyResult<Vec<HashMap<&'static str, Option<f64>>>> {
        let params = EulerMaclaurinParams::default();
        let reports = zeros::zero_sum_reports(&self.inner, &heights, &[1.0], with_sum_b.then_some(&params)).map_err(err)?;
        Ok(reports
            .iter()
            .map(|r| {
                HashMap::from([
                    ("t", Some(r.t_height)),
                    ("count", Some(r.count as f64)),
                    ("sum_A", Some(r.sum_a)),
                    ("sum_B", r.sum_b),
                    ("sum_C", Some(r.sum_c)),
                    ("J_minus_1", r.moment(1.0)),
                ])
            })
            .collect())
    }
}

#[pymodule]
fn zetacorr_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCorrAccumulator>()?;
    m.add_class::<PyZeroTable>()?;
    m.add_function(wrap_pyfunction!(sieve_segment, m)?)?;
    m.add_function(wrap_pyfunction!(naive_value, m)?)?;
    m.add_function(wrap_pyfunction!(summatory, m)?)?;
    m.add_function(wrap_pyfunction!(correlate, m)?)?;
    m.add_function(wrap_pyfunction!(correlate_rows, m)?)?;
    m.add_function(wrap_pyfunction!(shifted_autocorr, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_theorem_sum, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_value, m)?)?;
    m.add_function(wrap_pyfunction!(remainder_bound, m)?)?;
    m.add_function(wrap_pyfunction!(k_series, m)?)?;
    m.add_function(wrap_pyfunction!(constants, m)?)?;
    Ok(())
}
