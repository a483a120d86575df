//! Built-in invariant suites run by `zetacorr selftest`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::corr::{correlate, shifted_autocorr, CorrKindPair, ShiftedCorrParams};
use crate::sieve::{naive_value, sieve_segment, ArithmeticFunctionKind};
use crate::zeta::{zeta, EulerMaclaurinParams};

pub const HEADER: &str = "suite,passed,failed";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub suite: &'static str,
    pub passed: u64,
    pub failed: u64,
    pub first_failure: Option<String>,
}

impl Outcome {
    fn new(suite: &'static str) -> Self {
        Self { suite, passed: 0, failed: 0, first_failure: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

pub fn run_all() -> Vec<Outcome> {
    vec![
        oracle_equivalence(100_000),
        divisor_sums(10_000),
        decomposition(&[10, 100, 500, 2000]),
        summatory_values(),
        zeta_values(),
    ]
}

/// Sieved values against trial division for all n ≤ n_max and every kind.
pub fn oracle_equivalence(n_max: u64) -> Outcome {
    let mut out = Outcome::new("oracle_equivalence");
    for kind in ArithmeticFunctionKind::ALL {
        let seg = match sieve_segment(1, n_max, kind) {
            Ok(s) => s,
            Err(e) => {
                out.check(false, || format!("{kind}: {e}"));
                continue;
            }
        };
        let mut mismatches = 0u64;
        let mut first = None;
        for (n, v) in seg.iter() {
            let expected = naive_value(n, kind).ok();
            if expected != Some(v) {
                mismatches += 1;
                first.get_or_insert(n);
            }
        }
        out.check(mismatches == 0, || format!("{kind}: {mismatches} mismatches, first at n = {first:?}"));
    }
    out
}

/// ∑_{d|n} μ(d) = [n = 1], ∑_{d|n} λ(d) = [n is a square], μ² = |μ|.
pub fn divisor_sums(n_max: u64) -> Outcome {
    let mut out = Outcome::new("divisor_sums");
    let (Ok(mu), Ok(la), Ok(mu2)) = (
        sieve_segment(1, n_max, ArithmeticFunctionKind::Mobius),
        sieve_segment(1, n_max, ArithmeticFunctionKind::Liouville),
        sieve_segment(1, n_max, ArithmeticFunctionKind::MobiusSquared),
    ) else {
        out.check(false, || "sieve failed".into());
        return out;
    };
    let (mu, la, mu2) = (mu.values(), la.values(), mu2.values());
    let n_max = n_max as usize;
    let mut mu_sum = vec![0i64; n_max + 1];
    let mut la_sum = vec![0i64; n_max + 1];
    for d in 1..=n_max {
        for m in (d..=n_max).step_by(d) {
            mu_sum[m] += i64::from(mu[d - 1]);
            la_sum[m] += i64::from(la[d - 1]);
        }
    }
    for n in 1..=n_max {
        let r = (n as f64).sqrt().round() as usize;
        let square = r * r == n;
        out.check(mu_sum[n] == i64::from(n == 1), || format!("sum of mu over divisors of {n} is {}", mu_sum[n]));
        out.check(la_sum[n] == i64::from(square), || format!("sum of lambda over divisors of {n} is {}", la_sum[n]));
        out.check(mu2[n - 1] == mu[n - 1].abs(), || format!("mu^2 != |mu| at {n}"));
    }
    out
}

/// The plain correlation sum equals the sum of the shifted sums over k < N.
pub fn decomposition(sizes: &[u64]) -> Outcome {
    let mut out = Outcome::new("decomposition");
    for &n in sizes {
        for pair in [CorrKindPair::MobiusMertens, CorrKindPair::LiouvilleSummatory] {
            let plain = match correlate(pair, n, 0.0) {
                Ok(acc) => acc.s_plain(),
                Err(e) => {
                    out.check(false, || format!("{pair:?} at {n}: {e}"));
                    continue;
                }
            };
            let shifted: Result<f64, _> = (1..n)
                .map(|k| shifted_autocorr(pair.function_kind(), ShiftedCorrParams { k, n_max: n }))
                .sum();
            match shifted {
                Ok(s) => out.check((s - plain).abs() <= 1e-10, || {
                    format!("{pair:?} at N = {n}: shifted total {s} vs plain {plain}")
                }),
                Err(e) => out.check(false, || format!("{pair:?} at {n}: {e}")),
            }
        }
    }
    out
}

/// Tabulated M(x) and L(x).
pub fn summatory_values() -> Outcome {
    let mut out = Outcome::new("summatory_values");
    for (kind, x, expected) in [
        (ArithmeticFunctionKind::Mobius, 10u64, -1i64),
        (ArithmeticFunctionKind::Mobius, 100, 1),
        (ArithmeticFunctionKind::Mobius, 1_000, 2),
        (ArithmeticFunctionKind::Mobius, 10_000, -23),
        (ArithmeticFunctionKind::Mobius, 100_000, -48),
        (ArithmeticFunctionKind::Mobius, 1_000_000, 212),
        (ArithmeticFunctionKind::Liouville, 10, 0),
        (ArithmeticFunctionKind::Liouville, 100, -2),
        (ArithmeticFunctionKind::Liouville, 1_000, -14),
        (ArithmeticFunctionKind::Liouville, 10_000, -94),
        (ArithmeticFunctionKind::Liouville, 100_000, -288),
        (ArithmeticFunctionKind::Liouville, 1_000_000, -530),
    ] {
        let got = sieve_segment(1, x, kind).map(|s| s.values().iter().map(|&v| i64::from(v)).sum::<i64>());
        out.check(got.as_ref().ok() == Some(&expected), || format!("{kind} summatory at {x}: {got:?}, expected {expected}"));
    }
    out
}

/// ζ(s) from η(s) with Borwein's acceleration; independent of Euler–Maclaurin.
pub fn zeta_alternating(s: Complex64) -> Complex64 {
    let n = 60usize;
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0 / n as f64;
    let mut acc = term;
    d.push(acc);
    for i in 1..=n {
        term *= 4.0 * (n + i - 1) as f64 * (n - i + 1) as f64 / ((2 * i) as f64 * (2 * i - 1) as f64);
        acc += term;
        d.push(acc);
    }
    let dn = d[n];
    let mut eta = Complex64::new(0.0, 0.0);
    for (k, dk) in d.iter().take(n).enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        eta += (-s * ((k + 1) as f64).ln()).exp() * (sign * (dk - dn) / dn);
    }
    -eta / (1.0 - (Complex64::new(1.0, 0.0) - s).scale(std::f64::consts::LN_2).exp())
}

pub fn zeta_values() -> Outcome {
    let mut out = Outcome::new("zeta_values");
    let params = EulerMaclaurinParams::default();
    let at = |s: Complex64| zeta(s, &params);
    match at(Complex64::new(2.0, 0.0)) {
        Ok(z) => out.check((z.re - PI * PI / 6.0).abs() <= 1e-12 && z.im == 0.0, || format!("zeta(2) = {z}")),
        Err(e) => out.check(false, || format!("zeta(2): {e}")),
    }
    let half = Complex64::new(0.5, 0.0);
    match at(half) {
        Ok(z) => {
            let oracle = zeta_alternating(half);
            out.check((z - oracle).norm() <= 1e-10, || format!("zeta(1/2) = {z}, alternating series {oracle}"))
        }
        Err(e) => out.check(false, || format!("zeta(1/2): {e}")),
    }
    // deterministic low-discrepancy points over −0.9 < σ < 5, |t| < 60
    let phi = 0.618_033_988_749_894_9;
    let psi = 0.754_877_666_246_692_7;
    for i in 1..=100 {
        let u = (i as f64 * phi).fract();
        let v = (i as f64 * psi).fract();
        let s = Complex64::new(-0.9 + 5.9 * u, 120.0 * (v - 0.5));
        match (at(s), at(s.conj())) {
            (Ok(a), Ok(b)) => {
                out.check((a.conj() - b).norm() <= 1e-12 * a.norm().max(1.0), || format!("conjugate symmetry at {s}"))
            }
            _ => out.check(false, || format!("zeta failed near {s}")),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_oracle_matches_known_values() {
        let z = zeta_alternating(Complex64::new(0.5, 0.0));
        assert!((z.re + 1.460_354_508_809_586_8).abs() < 1e-14);
        let z = zeta_alternating(Complex64::new(2.0, 0.0));
        assert!((z.re - PI * PI / 6.0).abs() < 1e-14);
    }

    #[test]
    fn suites_pass() {
        for o in [divisor_sums(2000), decomposition(&[50, 300]), summatory_values(), zeta_values()] {
            assert!(o.ok(), "{}: {:?}", o.suite, o.first_failure);
        }
    }
}
