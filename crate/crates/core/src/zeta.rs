//! Riemann zeta function by Euler–Maclaurin summation, plus the constants
//! the correlation sums are compared against.
//!
//! ζ(s) = ∑_{m<N} m^{−s} + N^{1−s}/(s−1) + N^{−s}/2
//!        + ∑_{j=1}^{k} B_{2j}/(2j)! · s(s+1)⋯(s+2j−2) · N^{−s−2j+1} + R_{N,k}(s)
//!
//! with |R_{N,k}(s)| bounded by |s+2k+1|/(σ+2k+1) times the first omitted
//! correction term. Every evaluation checks that bound against the requested
//! accuracy.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

pub type ComplexValue = Complex64;

/// Highest Bernoulli correction order supported (B₆₀).
pub const MAX_BERNOULLI_TERMS: usize = 30;

/// |Im s| above which evaluation is refused.
pub const HEIGHT_LIMIT: f64 = 5.0e6;

const MAX_DIRECT_TERMS: u64 = 200_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerMaclaurinParams {
    /// Direct-sum cutoff N; `None` sizes it from s and the target accuracy.
    pub n_terms: Option<u64>,
    /// Number of Bernoulli correction terms k (at most 30).
    pub k_bernoulli: usize,
    /// Bound the truncation remainder must satisfy.
    pub target_abs_err: f64,
}

impl Default for EulerMaclaurinParams {
    fn default() -> Self {
        Self {
            n_terms: None,
            k_bernoulli: 12,
            target_abs_err: 1e-12,
        }
    }
}

impl EulerMaclaurinParams {
    pub fn auto(target_abs_err: f64) -> Self {
        Self {
            target_abs_err,
            ..Self::default()
        }
    }

    pub fn fixed(n_terms: u64, k_bernoulli: usize, target_abs_err: f64) -> Self {
        Self {
            n_terms: Some(n_terms),
            k_bernoulli,
            target_abs_err,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.k_bernoulli == 0 || self.k_bernoulli > MAX_BERNOULLI_TERMS {
            return Err(Error::InvalidParameter(format!(
                "k_bernoulli must be in 1..={MAX_BERNOULLI_TERMS}, got {}",
                self.k_bernoulli
            )));
        }
        if self.n_terms == Some(0) {
            return Err(Error::InvalidParameter("n_terms must be positive".into()));
        }
        if !(self.target_abs_err > 0.0) {
            return Err(Error::InvalidParameter("target_abs_err must be positive".into()));
        }
        Ok(())
    }

    pub(crate) fn cache_key(&self) -> (u64, usize, u64) {
        (self.n_terms.unwrap_or(0), self.k_bernoulli, self.target_abs_err.to_bits())
    }
}

fn bernoulli_table() -> &'static Vec<BigRational> {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // Akiyama–Tanigawa; yields B₁ = +1/2, irrelevant since only even
        // indices are used.
        let top = 2 * MAX_BERNOULLI_TERMS + 2;
        let mut a: Vec<BigRational> = Vec::with_capacity(top + 1);
        let mut out = Vec::with_capacity(top + 1);
        for m in 0..=top {
            a.push(BigRational::new(BigInt::from(1), BigInt::from(m + 1)));
            for j in (1..=m).rev() {
                let diff = &a[j - 1] - &a[j];
                a[j - 1] = diff * BigRational::from_integer(BigInt::from(j));
            }
            out.push(a[0].clone());
        }
        out
    })
}

/// Exact Bernoulli number Bₙ for n ≤ 62.
pub fn bernoulli(n: usize) -> Option<BigRational> {
    bernoulli_table().get(n).cloned()
}

/// B_{2j}/(2j)! for j = 0..=31 as reals; index 0 is unused.
fn correction_coefficients() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let table = bernoulli_table();
        let mut factorial = BigInt::from(1);
        let mut out = vec![0.0];
        for j in 1..=MAX_BERNOULLI_TERMS + 1 {
            factorial *= BigInt::from((2 * j - 1) * (2 * j));
            let c = &table[2 * j] / BigRational::from_integer(factorial.clone());
            debug_assert!(!c.is_zero());
            out.push(c.to_f64().expect("finite Bernoulli coefficient"));
        }
        out
    })
}

fn check_domain(s: Complex64) -> Result<()> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::ZetaDomain { re: s.re, im: s.im });
    }
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::Pole);
    }
    if s.re <= -1.0 {
        return Err(Error::ZetaDomain { re: s.re, im: s.im });
    }
    if s.im.abs() > HEIGHT_LIMIT {
        return Err(Error::HeightRefused(s.im.abs()));
    }
    Ok(())
}

/// s(s+1)⋯(s+m−1)
fn pochhammer(s: Complex64, m: usize) -> Complex64 {
    (0..m).fold(Complex64::new(1.0, 0.0), |acc, i| acc * (s + i as f64))
}

/// Bound on |R_{N,k}(s)|.
pub fn remainder_bound(s: Complex64, n_terms: u64, k: usize) -> f64 {
    let c = correction_coefficients()[k + 1].abs();
    let n = n_terms as f64;
    let first_omitted = c * pochhammer(s, 2 * k + 1).norm() * n.powf(-s.re - 2.0 * k as f64 - 1.0);
    first_omitted * (s + (2 * k + 1) as f64).norm() / (s.re + (2 * k + 1) as f64)
}

/// Smallest auto-sized N: covers the height and keeps the correction
/// series in its decreasing regime for all k terms.
fn auto_floor(s: Complex64, k: usize) -> u64 {
    let by_height = (1.3 * s.im.abs() / (2.0 * PI)).ceil();
    let by_series = ((s.norm() + (2 * k + 2) as f64) / (2.0 * PI)).ceil();
    (20.0f64).max(by_height).max(by_series) as u64
}

fn resolve_terms(s: Complex64, params: &EulerMaclaurinParams) -> Result<u64> {
    let k = params.k_bernoulli;
    let target = params.target_abs_err;
    if let Some(n) = params.n_terms {
        let bound = remainder_bound(s, n, k);
        if bound > target {
            return Err(Error::InsufficientAccuracy { bound, target });
        }
        return Ok(n);
    }
    let mut n = auto_floor(s, k);
    let bound = remainder_bound(s, n, k);
    if bound > target {
        // the bound scales exactly as N^{−σ−2k−1}
        let exponent = s.re + (2 * k + 1) as f64;
        let scale = (bound / target).powf(1.0 / exponent);
        n = ((n as f64) * scale).ceil() as u64 + 1;
    }
    while remainder_bound(s, n, k) > target {
        n += n / 16 + 1;
        if n > MAX_DIRECT_TERMS {
            break;
        }
    }
    if n > MAX_DIRECT_TERMS {
        return Err(Error::InsufficientAccuracy {
            bound: remainder_bound(s, MAX_DIRECT_TERMS, k),
            target,
        });
    }
    Ok(n)
}

/// ζ(s) for s ≠ 1, Re(s) > −1, |Im s| ≤ 5·10⁶.
///
/// The returned value is within `params.target_abs_err` of ζ(s) up to
/// floating-point rounding in the direct sum.
pub fn zeta(s: Complex64, params: &EulerMaclaurinParams) -> Result<Complex64> {
    check_domain(s)?;
    params.validate()?;
    let n_terms = resolve_terms(s, params)?;
    let mut value = euler_maclaurin(s, n_terms, params.k_bernoulli);
    if s.im == 0.0 {
        value.im = 0.0;
    }
    Ok(value)
}

/// ζ(x) on the real axis with default parameters.
pub fn zeta_real(x: f64) -> Result<f64> {
    zeta(Complex64::new(x, 0.0), &EulerMaclaurinParams::default()).map(|z| z.re)
}

fn euler_maclaurin(s: Complex64, n_terms: u64, k: usize) -> Complex64 {
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for m in 1..n_terms {
        let term = (-s * (m as f64).ln()).exp();
        re.add(term.re);
        im.add(term.im);
    }
    let n = n_terms as f64;
    let ln_n = n.ln();
    let n_pow_minus_s = (-s * ln_n).exp();
    let tail = n_pow_minus_s * n / (s - 1.0) + n_pow_minus_s * 0.5;
    re.add(tail.re);
    im.add(tail.im);

    let coeffs = correction_coefficients();
    // (s)_{2j−1} · N^{−s−2j+1}, starting at j = 1
    let mut poch = s;
    let mut power = n_pow_minus_s / n;
    let inv_n2 = 1.0 / (n * n);
    for j in 1..=k {
        let term = poch * power * coeffs[j];
        re.add(term.re);
        im.add(term.im);
        let a = (2 * j - 1) as f64;
        poch = poch * (s + a) * (s + a + 1.0);
        power *= inv_n2;
    }
    Complex64::new(re.value(), im.value())
}

/// The series ∑_{k≥1} (2πi/n)^{2k} / ((2k)!·k·ζ(2k+1)) from the explicit formula
/// for M(n). Real, since (2πi)^{2k} = (−1)^k (2π)^{2k}.
///
/// # Panics
/// If `n == 0`.
pub fn k_series(n: u64) -> f64 {
    assert!(n >= 1, "k_series is defined for n >= 1");
    let x = (2.0 * PI / n as f64).powi(2);
    let turning = x.sqrt() / 2.0 + 1.0;
    let mut ratio = 1.0; // x^k / (2k)!
    let mut total = CompensatedSum::new();
    for k in 1u32.. {
        let kf = f64::from(k);
        ratio *= x / ((2.0 * kf - 1.0) * (2.0 * kf));
        let zeta_odd = zeta_real(2.0 * kf + 1.0).expect("zeta(2k+1) is in the domain");
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * ratio / (kf * zeta_odd);
        total.add(term);
        if term.abs() < 1e-15 && kf > turning {
            break;
        }
    }
    total.value()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReferenceConstants {
    /// −3/π²
    pub minus_three_over_pi_sq: f64,
    /// ζ(1/2)
    pub zeta_half: f64,
    /// ½(1/ζ²(½) − 1)
    pub liouville_bias_const: f64,
    /// k_series(1); 5/2 + K is the symmetric limit of ∑ 1/(ρζ′(ρ)).
    pub k_series: f64,
}

pub fn constants() -> ReferenceConstants {
    static CONSTANTS: OnceLock<ReferenceConstants> = OnceLock::new();
    *CONSTANTS.get_or_init(|| {
        let zeta_half = zeta_real(0.5).expect("zeta(1/2)");
        ReferenceConstants {
            minus_three_over_pi_sq: -3.0 / (PI * PI),
            zeta_half,
            liouville_bias_const: 0.5 * (1.0 / (zeta_half * zeta_half) - 1.0),
            k_series: k_series(1),
        }
    })
}

/// Memoized ζ evaluations at fixed parameters. Inserts are idempotent, so
/// concurrent callers racing on the same s store the same value.
#[derive(Debug)]
pub struct ZetaMemo {
    params: EulerMaclaurinParams,
    values: RwLock<HashMap<(u64, u64), Complex64>>,
}

impl ZetaMemo {
    pub fn new(params: EulerMaclaurinParams) -> Self {
        Self {
            params,
            values: RwLock::new(HashMap::new()),
        }
    }

    pub fn params(&self) -> &EulerMaclaurinParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.values.read().expect("memo lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, s: Complex64) -> Result<Complex64> {
        let key = (s.re.to_bits(), s.im.to_bits());
        if let Some(v) = self.values.read().expect("memo lock").get(&key) {
            return Ok(*v);
        }
        let v = zeta(s, &self.params)?;
        self.values.write().expect("memo lock").insert(key, v);
        Ok(v)
    }
}
