//! Reference tables of nontrivial zeta zeros ρ = ½ + iγ together with ζ′(ρ).
//!
//! Zeros are isolated on the critical line by sign changes of Hardy's Z
//! function between Gram points, with every block closed at a good Gram point
//! g_n checked against the count n + 1. Z is evaluated by the Riemann–Siegel
//! formula with corrections C₀…C₄ above [`LOW_HEIGHT`] and from an
//! accelerated alternating series below it.
//!
//! The output feeds test fixtures; it is double precision throughout
//! (ordinates to roughly 1e-9, derivatives to roughly 1e-8 relative).

mod eta;
mod finder;
mod rs;
mod theta;

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use num_complex::Complex64;

pub use eta::zeta_borwein;
pub use finder::{generate, LOW_HEIGHT};
pub use rs::RiemannSiegel;
pub use theta::{gram_point, theta, theta_prime};

pub const CSV_HEADER: &str = "index,gamma,zeta_prime_re,zeta_prime_im";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Zero {
    pub index: u64,
    pub gamma: f64,
    pub zeta_prime: Complex64,
}

pub fn write_csv<W: Write>(mut out: W, zeros: &[Zero]) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for z in zeros {
        writeln!(
            out,
            "{},{:.12},{:.17},{:.17}",
            z.index, z.gamma, z.zeta_prime.re, z.zeta_prime.im
        )?;
    }
    out.flush()
}

fn data_lines(path: &Path) -> Option<usize> {
    let file = fs::File::open(path).ok()?;
    let mut lines = BufReader::new(file).lines();
    if lines.next()?.ok()? != CSV_HEADER {
        return None;
    }
    Some(lines.count())
}

/// Writes the first `count` zeros to `path` unless a table of that length
/// is already there. The file appears atomically.
pub fn ensure_table(path: &Path, count: usize) -> Result<()> {
    if data_lines(path) == Some(count) {
        return Ok(());
    }
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let zeros = generate(count)?;
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    {
        let file = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        write_csv(BufWriter::new(file), &zeros)?;
    }
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}
