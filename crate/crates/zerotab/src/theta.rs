use std::f64::consts::PI;

/// Riemann–Siegel theta function, asymptotic series (accurate for t ≥ 10).
pub fn theta(t: f64) -> f64 {
    let t2 = t * t;
    let series = 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t * t2)
        + 31.0 / (80640.0 * t * t2 * t2)
        + 127.0 / (430080.0 * t * t2 * t2 * t2)
        + 511.0 / (1216512.0 * t * t2 * t2 * t2 * t2);
    0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0 + series
}

pub fn theta_prime(t: f64) -> f64 {
    let t2 = t * t;
    0.5 * (t / (2.0 * PI)).ln()
        - 1.0 / (48.0 * t2)
        - 7.0 / (1920.0 * t2 * t2)
        - 31.0 / (16128.0 * t2 * t2 * t2)
        - 127.0 / (61440.0 * t2 * t2 * t2 * t2)
}

/// g with θ(g) = nπ, for n ≥ −1, refined by Newton from `guess`.
pub fn gram_point(n: i64, guess: f64) -> f64 {
    let target = n as f64 * PI;
    let mut g = guess.max(10.0);
    for _ in 0..50 {
        let step = (theta(g) - target) / theta_prime(g);
        g -= step;
        if step.abs() < 1e-13 * g {
            break;
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_reference_values() {
        // mpmath siegeltheta
        for (t, expected) in [
            (20.0, 1.186_894_808_444_484),
            (150.0, 162.564_306_884_068_52),
            (1000.5, 2035.813_960_070_349_3),
            (600_000.75, 3_140_046.267_690_819_2),
        ] {
            assert!((theta(t) - expected).abs() < 1e-12 * expected.abs().max(1.0), "t = {t}");
        }
    }

    #[test]
    fn gram_zero() {
        // g₀ = 17.8455995404…
        let g0 = gram_point(0, 18.0);
        assert!((g0 - 17.845_599_540_4).abs() < 1e-9);
        assert!((theta(g0)).abs() < 1e-12);
    }
}
