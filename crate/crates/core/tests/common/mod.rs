#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Mutex;

use num_complex::Complex64;

/// f(n) by trial division: (μ, λ, μ²).
pub fn factor_values(n: u64) -> (i8, i8, i8) {
    let mut rest = n;
    let mut omega = 0u32;
    let mut big_omega = 0u32;
    let mut square_free = true;
    let mut p = 2;
    while p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            omega += 1;
            big_omega += e;
            square_free &= e == 1;
        }
        p += 1;
    }
    if rest > 1 {
        omega += 1;
        big_omega += 1;
    }
    let sign = |k: u32| if k % 2 == 0 { 1 } else { -1 };
    let mu = if square_free { sign(omega) } else { 0 };
    (mu, sign(big_omega), i8::from(square_free))
}

/// ζ(s) from an oracle that does not share code with the library.
pub fn zeta_oracle(s: Complex64) -> Complex64 {
    zerotab::zeta_borwein(s)
}

static FIXTURE_LOCK: Mutex<()> = Mutex::new(());

/// Path to a CSV of the first `count` zeros, generated on first use under
/// `$ZETACORR_DATA_DIR` or the target's scratch directory.
pub fn zero_fixture(count: usize) -> PathBuf {
    let dir = std::env::var_os("ZETACORR_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("zeros"));
    let path = dir.join(format!("zeros_{count}.csv"));
    let _guard = FIXTURE_LOCK.lock().unwrap_or_else(|e| e.into_inner());
    zerotab::ensure_table(&path, count).expect("generating zero fixture");
    path
}
