use num_complex::Complex64;

/// ζ(s) from the alternating series η(s) = (1 − 2^{1−s}) ζ(s), accelerated by
/// Borwein's Chebyshev-weighted partial sums. Intended for |Im s| ≲ 300.
pub fn zeta_borwein(s: Complex64) -> Complex64 {
    let t = s.im.abs();
    let n = ((std::f64::consts::PI * t + (1.0 + 2.0 * t).ln() + 45.0) / 1.7627).ceil() as usize;
    // u_i = (n+i−1)! 4^i / ((n−i)! (2i)!), in log space
    let mut log_u = Vec::with_capacity(n + 1);
    log_u.push(-(n as f64).ln());
    for i in 1..=n {
        let r = 4.0 * (n + i - 1) as f64 * (n - i + 1) as f64 / ((2 * i) as f64 * (2 * i - 1) as f64);
        log_u.push(log_u[i - 1] + r.ln());
    }
    let top = log_u.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut d = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    for lu in &log_u {
        acc += (lu - top).exp();
        d.push(acc);
    }
    let dn = d[n];
    let mut eta = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let w = (d[k] - dn) / dn;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        eta += (-s * ((k + 1) as f64).ln()).exp() * (sign * w);
    }
    eta = -eta;
    let factor = Complex64::new(1.0, 0.0) - (Complex64::new(1.0, 0.0) - s).scale(std::f64::consts::LN_2).exp();
    eta / factor
}
