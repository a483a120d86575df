use std::f64::consts::PI;

use num_complex::Complex64;

use crate::theta::{theta, theta_prime};

// Chebyshev fit interval for the correction functions C_k(p). Slightly wider
// than [0, 1) so derivative stencils at fixed N may step past the ends.
const FIT_LO: f64 = -0.05;
const FIT_HI: f64 = 1.05;
const FIT_NODES: usize = 48;
const CAUCHY_RADIUS: f64 = 0.2;
const CAUCHY_POINTS: usize = 96;
const TABLE_TERMS: usize = 4096;

/// Ψ(z) = cos(2π(z² − z − 1/16)) / cos(2πz)
fn psi(z: Complex64) -> Complex64 {
    ((z * z - z - 1.0 / 16.0) * (2.0 * PI)).cos() / (z * (2.0 * PI)).cos()
}

/// Ψ^{(m)}(p) for m = 0..=12 by the Cauchy integral on a circle around p.
fn psi_derivatives(p: f64) -> [f64; 13] {
    let mut acc = [Complex64::new(0.0, 0.0); 13];
    for j in 0..CAUCHY_POINTS {
        // half-step offset keeps nodes off the real axis
        let phi = 2.0 * PI * (j as f64 + 0.5) / CAUCHY_POINTS as f64;
        let w = Complex64::from_polar(1.0, phi);
        let f = psi(Complex64::new(p, 0.0) + w * CAUCHY_RADIUS);
        for (m, slot) in acc.iter_mut().enumerate() {
            *slot += f * Complex64::from_polar(1.0, -(m as f64) * phi);
        }
    }
    let mut out = [0.0; 13];
    let mut factorial = 1.0;
    for m in 0..13 {
        if m > 0 {
            factorial *= m as f64;
        }
        out[m] = acc[m].re * factorial / (CAUCHY_POINTS as f64 * CAUCHY_RADIUS.powi(m as i32));
    }
    out
}

fn corrections_direct(p: f64) -> [f64; 5] {
    let d = psi_derivatives(p);
    let pi2 = PI * PI;
    let pi4 = pi2 * pi2;
    let pi6 = pi4 * pi2;
    let pi8 = pi4 * pi4;
    [
        d[0],
        -d[3] / (96.0 * pi2),
        d[2] / (64.0 * pi2) + d[6] / (18432.0 * pi4),
        -d[1] / (64.0 * pi2) - d[5] / (3840.0 * pi4) - d[9] / (5_308_416.0 * pi6),
        d[0] / (128.0 * pi2)
            + 19.0 * d[4] / (24576.0 * pi4)
            + 11.0 * d[8] / (5_898_240.0 * pi6)
            + d[12] / (2_038_431_744.0 * pi8),
    ]
}

fn clenshaw(coeffs: &[f64], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + 0.5 * coeffs[0]
}

/// Hardy's Z(t) by the Riemann–Siegel formula with corrections C₀…C₄.
#[derive(Clone, Debug)]
pub struct RiemannSiegel {
    chebyshev: [Vec<f64>; 5],
    ln: Vec<f64>,
    rsqrt: Vec<f64>,
}

impl Default for RiemannSiegel {
    fn default() -> Self {
        Self::new()
    }
}

impl RiemannSiegel {
    pub fn new() -> Self {
        let half = 0.5 * (FIT_HI - FIT_LO);
        let mid = 0.5 * (FIT_HI + FIT_LO);
        let values: Vec<[f64; 5]> = (0..FIT_NODES)
            .map(|j| {
                let x = (PI * (j as f64 + 0.5) / FIT_NODES as f64).cos();
                corrections_direct(mid + half * x)
            })
            .collect();
        let chebyshev = std::array::from_fn(|k| {
            (0..FIT_NODES)
                .map(|i| {
                    let s: f64 = values
                        .iter()
                        .enumerate()
                        .map(|(j, v)| v[k] * (PI * i as f64 * (j as f64 + 0.5) / FIT_NODES as f64).cos())
                        .sum();
                    2.0 * s / FIT_NODES as f64
                })
                .collect()
        });
        let ln = (0..=TABLE_TERMS).map(|n| if n == 0 { 0.0 } else { (n as f64).ln() }).collect();
        let rsqrt = (0..=TABLE_TERMS).map(|n| if n == 0 { 0.0 } else { 1.0 / (n as f64).sqrt() }).collect();
        Self { chebyshev, ln, rsqrt }
    }

    /// C_k(p) for k = 0..=4.
    pub fn corrections(&self, p: f64) -> [f64; 5] {
        let x = (2.0 * p - (FIT_HI + FIT_LO)) / (FIT_HI - FIT_LO);
        std::array::from_fn(|k| clenshaw(&self.chebyshev[k], x))
    }

    fn terms(&self, t: f64) -> usize {
        let n = (t / (2.0 * PI)).sqrt().floor() as usize;
        assert!(n < TABLE_TERMS, "height {t} beyond the Riemann-Siegel tables");
        n.max(1)
    }

    /// Remainder term with the main-sum length held at `n`.
    fn remainder(&self, t: f64, n: usize) -> f64 {
        let a = (t / (2.0 * PI)).sqrt();
        let c = self.corrections(a - n as f64);
        let inv_a = 1.0 / a;
        let series = c[0] + inv_a * (c[1] + inv_a * (c[2] + inv_a * (c[3] + inv_a * c[4])));
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        sign * series / a.sqrt()
    }

    pub fn z(&self, t: f64) -> f64 {
        let n = self.terms(t);
        let th = theta(t);
        let mut main = 0.0;
        for k in 1..=n {
            main += self.rsqrt[k] * (th - t * self.ln[k]).cos();
        }
        2.0 * main + self.remainder(t, n)
    }

    /// (Z(t), Z′(t)); the main sum is differentiated exactly, the remainder
    /// by a five-point stencil at fixed N.
    pub fn z_with_derivative(&self, t: f64) -> (f64, f64) {
        let n = self.terms(t);
        let th = theta(t);
        let thp = theta_prime(t);
        let (mut main, mut dmain) = (0.0, 0.0);
        for k in 1..=n {
            let (s, c) = (th - t * self.ln[k]).sin_cos();
            main += self.rsqrt[k] * c;
            dmain -= self.rsqrt[k] * s * (thp - self.ln[k]);
        }
        let h = 1e-2;
        let dr = (8.0 * (self.remainder(t + h, n) - self.remainder(t - h, n))
            - (self.remainder(t + 2.0 * h, n) - self.remainder(t - 2.0 * h, n)))
            / (12.0 * h);
        (2.0 * main + self.remainder(t, n), 2.0 * dmain + dr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_fit_matches_direct_corrections() {
        let rs = RiemannSiegel::new();
        for i in 0..=40 {
            let p = i as f64 / 40.0;
            let fit = rs.corrections(p);
            let direct = corrections_direct(p);
            for k in 0..5 {
                assert!((fit[k] - direct[k]).abs() < 1e-12, "C{k}({p})");
            }
        }
        // C₀(½) = −cos(5π/8)
        assert!((rs.corrections(0.5)[0] - 0.382_683_432_365_089_77).abs() < 1e-13);
    }

    #[test]
    fn z_reference_values() {
        let rs = RiemannSiegel::new();
        // mpmath siegelz
        for (t, expected, tol) in [
            (150.0, -0.091_010_923_267_403_593, 1e-7),
            (1000.5, 2.549_261_135_555_555_6, 1e-9),
            (50_000.25, 1.768_735_946_922_301_7, 1e-9),
            (600_000.75, 1.502_153_512_361_946_2, 1e-8),
        ] {
            let z = rs.z(t);
            assert!((z - expected).abs() < tol, "Z({t}) = {z}, expected {expected}");
        }
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let rs = RiemannSiegel::new();
        for t in [400.3, 7000.1, 123_456.7] {
            let (_, dz) = rs.z_with_derivative(t);
            let h = 1e-4;
            let fd = (rs.z(t + h) - rs.z(t - h)) / (2.0 * h);
            assert!((dz - fd).abs() < 1e-5 * dz.abs().max(1.0), "t = {t}: {dz} vs {fd}");
        }
    }
}
