use std::f64::consts::PI;

use anyhow::{bail, Result};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::eta::zeta_borwein;
use crate::rs::RiemannSiegel;
use crate::theta::{gram_point, theta, theta_prime};
use crate::Zero;

/// Below this height Z and ζ′ come from the alternating series.
pub const LOW_HEIGHT: f64 = 300.0;

const START: f64 = 10.0;
const MAX_HALVINGS: u32 = 10;
const ROOT_TOL: f64 = 2e-11;

struct Hardy {
    rs: RiemannSiegel,
}

impl Hardy {
    fn z(&self, t: f64) -> f64 {
        if t < LOW_HEIGHT {
            (Complex64::from_polar(1.0, theta(t)) * zeta_borwein(Complex64::new(0.5, t))).re
        } else {
            self.rs.z(t)
        }
    }

    fn zeta_prime_on_line(&self, gamma: f64) -> Complex64 {
        if gamma < LOW_HEIGHT {
            let s = Complex64::new(0.5, gamma);
            let h = 1e-3;
            let f = |d: f64| zeta_borwein(s + Complex64::new(d, 0.0));
            (((f(h) - f(-h)) * 8.0) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h)
        } else {
            // ζ(½+it) = e^{−iθ} Z(t), so at a zero ζ′ = −i e^{−iθ} Z′
            let (_, dz) = self.rs.z_with_derivative(gamma);
            Complex64::new(0.0, -1.0) * Complex64::from_polar(1.0, -theta(gamma)) * dz
        }
    }

    /// Illinois regula falsi on a bracket with za·zb < 0.
    fn refine(&self, mut a: f64, mut b: f64, mut za: f64, mut zb: f64) -> f64 {
        let mut side = 0i8;
        // never ask for less than a few ulps of t
        let tol = ROOT_TOL.max(4.0 * f64::EPSILON * b);
        for _ in 0..200 {
            if b - a < tol {
                break;
            }
            let mut c = (a * zb - b * za) / (zb - za);
            if !(c > a && c < b) {
                c = 0.5 * (a + b);
            }
            let zc = self.z(c);
            if zc == 0.0 {
                return c;
            }
            if (zc < 0.0) == (zb < 0.0) {
                b = c;
                zb = zc;
                if side == -1 {
                    za *= 0.5;
                }
                side = -1;
            } else {
                a = c;
                za = zc;
                if side == 1 {
                    zb *= 0.5;
                }
                side = 1;
            }
        }
        0.5 * (a + b)
    }
}

fn sign_changes(samples: &[(f64, f64)]) -> usize {
    samples.windows(2).filter(|w| (w[0].1 < 0.0) != (w[1].1 < 0.0)).count()
}

/// Samples of Z on a block between good Gram points, refined by halving
/// until it shows `expected` sign changes.
fn isolate(hardy: &Hardy, mut samples: Vec<(f64, f64)>, expected: usize) -> Result<Vec<(f64, f64)>> {
    let mut halvings = 0;
    while sign_changes(&samples) < expected {
        if halvings == MAX_HALVINGS {
            let (lo, hi) = (samples[0].0, samples[samples.len() - 1].0);
            bail!(
                "block [{lo}, {hi}] shows {} sign changes after {MAX_HALVINGS} halvings, expected {expected}",
                sign_changes(&samples)
            );
        }
        let mut finer = Vec::with_capacity(2 * samples.len());
        for w in samples.windows(2) {
            finer.push(w[0]);
            let m = 0.5 * (w[0].0 + w[1].0);
            finer.push((m, hardy.z(m)));
        }
        finer.push(*samples.last().unwrap());
        samples = finer;
        halvings += 1;
    }
    if sign_changes(&samples) > expected {
        bail!(
            "block [{}, {}] shows more sign changes than the zero count allows",
            samples[0].0,
            samples[samples.len() - 1].0
        );
    }
    Ok(samples)
}

/// The first `count` zeros on the critical line, in ascending order.
///
/// Each Gram block is closed at a good Gram point g_n (where (−1)ⁿ Z(g_n) > 0)
/// and must then contain exactly the number of zeros that makes the running
/// total n + 1, which rules out missed zeros.
pub fn generate(count: usize) -> Result<Vec<Zero>> {
    let hardy = Hardy { rs: RiemannSiegel::new() };
    let mut brackets: Vec<(f64, f64, f64, f64)> = Vec::with_capacity(count + 16);
    let mut block = vec![(START, hardy.z(START))];
    let mut g = gram_point(0, 17.8);
    let mut n: i64 = 0;
    while brackets.len() < count {
        let zg = hardy.z(g);
        block.push((g, zg));
        let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
        if parity * zg > 0.0 {
            let expected = (n + 1) as usize - brackets.len();
            let samples = isolate(&hardy, std::mem::take(&mut block), expected)?;
            for w in samples.windows(2) {
                if (w[0].1 < 0.0) != (w[1].1 < 0.0) {
                    brackets.push((w[0].0, w[1].0, w[0].1, w[1].1));
                }
            }
            block.push((g, zg));
        }
        n += 1;
        g = gram_point(n, g + PI / theta_prime(g));
    }
    brackets.truncate(count);
    let zeros = brackets
        .par_iter()
        .enumerate()
        .map(|(i, &(a, b, za, zb))| {
            let gamma = hardy.refine(a, b, za, zb);
            Zero { index: i as u64 + 1, gamma, zeta_prime: hardy.zeta_prime_on_line(gamma) }
        })
        .collect();
    Ok(zeros)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(z: &Zero, gamma: f64, re: f64, im: f64, gamma_tol: f64, rel: f64) {
        assert!((z.gamma - gamma).abs() < gamma_tol, "zero {}: γ = {} vs {gamma}", z.index, z.gamma);
        let err = (z.zeta_prime - Complex64::new(re, im)).norm() / Complex64::new(re, im).norm();
        assert!(err < rel, "zero {}: ζ′ = {} (rel err {err:e})", z.index, z.zeta_prime);
    }

    #[test]
    fn first_ten_thousand_against_reference() {
        let zeros = generate(10_000).unwrap();
        assert_eq!(zeros.len(), 10_000);
        assert!(zeros.windows(2).all(|w| w[0].gamma < w[1].gamma));
        // mpmath zetazero / zeta(ρ, derivative=1)
        check(&zeros[0], 14.134_725_141_734_694, 0.783_296_511_867_030_9, 0.124_699_829_748_171_09, 1e-10, 1e-9);
        check(&zeros[1], 21.022_039_638_771_555, 1.109_295_563_462_671_6, -0.248_729_788_516_497_46, 1e-10, 1e-9);
        check(&zeros[2], 25.010_857_580_145_689, 1.295_795_605_008_835_2, 0.450_036_709_437_867_14, 1e-10, 1e-9);
        check(&zeros[9], 49.773_832_477_672_302, 1.260_893_646_784_243_4, 0.650_781_025_236_231_34, 1e-10, 1e-9);
        check(&zeros[99], 236.524_229_665_816_21, 2.245_584_896_535_494_3, -3.304_174_629_263_105_6, 1e-10, 1e-9);
        check(&zeros[999], 1419.422_480_945_995_7, 2.692_098_120_712_181_3, 0.711_003_452_636_533_61, 1e-9, 1e-7);
        check(&zeros[9999], 9877.782_654_005_501, 7.347_044_159_736_838_7, -4.638_964_323_389_136_7, 1e-9, 1e-7);
    }
}
