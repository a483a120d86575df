//! Tables of nontrivial zeros ρ = ½ + iγ with ζ′(ρ), and the zero-side sums
//! built from them.
//!
//! Only ordinates γ > 0 are stored. Sums over |γ| < T fold each conjugate
//! pair into 2·Re(·) of the γ > 0 term, so every result is real by
//! construction. All cutoffs are strict: a zero contributes iff γ < T.
//!
//! Zero table CSV: UTF-8, LF line endings, header
//! `index,gamma,zeta_prime_re,zeta_prime_im`, one record per line, indices
//! 1, 2, 3, … and strictly increasing ordinates. Blank lines and comments are
//! rejected. The source digest is 64-bit FNV-1a over the raw file bytes.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::RwLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sieve::{naive_value, ArithmeticFunctionKind};
use crate::sum::CompensatedSum;
use crate::zeta::{self, EulerMaclaurinParams};

pub const CSV_HEADER: &str = "index,gamma,zeta_prime_re,zeta_prime_im";

const FIRST_ORDINATE_WINDOW: (f64, f64) = (14.0, 14.2);
const REDUCE_CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZeroRecord {
    pub index: u64,
    pub gamma: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub zeta_prime: Complex64,
}

fn serialize_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    (z.re, z.im).serialize(s)
}

impl ZeroRecord {
    pub fn new(index: u64, gamma: f64, zeta_prime: Complex64) -> Self {
        Self { index, gamma, zeta_prime }
    }

    pub fn rho(&self) -> Complex64 {
        Complex64::new(0.5, self.gamma)
    }

    /// |ρ|² = ¼ + γ²
    pub fn rho_norm_sqr(&self) -> f64 {
        0.25 + self.gamma * self.gamma
    }

    /// 1/(ρ ζ′(ρ))
    pub fn inverse_rho_zeta_prime(&self) -> Complex64 {
        (self.rho() * self.zeta_prime).inv()
    }
}

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    bytes.iter().fold(OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(PRIME))
}

/// Validated, immutable zero table.
#[derive(Debug)]
pub struct ZeroTable {
    records: Vec<ZeroRecord>,
    source_digest: u64,
    // ζ(1+2iγ) keyed by (γ bits, parameter key)
    zeta_cache: RwLock<HashMap<(u64, (u64, usize, u64)), Complex64>>,
}

impl Clone for ZeroTable {
    fn clone(&self) -> Self {
        Self {
            records: self.records.clone(),
            source_digest: self.source_digest,
            zeta_cache: RwLock::new(HashMap::new()),
        }
    }
}

impl PartialEq for ZeroTable {
    fn eq(&self, other: &Self) -> bool {
        self.source_digest == other.source_digest && self.records == other.records
    }
}

impl ZeroTable {
    /// Validates ordering, positivity, index continuity and ζ′(ρ) ≠ 0.
    pub fn new(records: Vec<ZeroRecord>, source_digest: u64) -> Result<Self> {
        for (i, r) in records.iter().enumerate() {
            let row = i + 1;
            let line = row + 1;
            if r.index != row as u64 {
                return Err(Error::IndexGap {
                    row,
                    line,
                    expected: row as u64,
                    found: r.index,
                });
            }
            if !(r.gamma > 0.0) || !r.gamma.is_finite() {
                return Err(Error::NonPositiveGamma { row, line });
            }
            if i > 0 && r.gamma <= records[i - 1].gamma {
                return Err(Error::NonMonotone { row, line });
            }
            if !r.zeta_prime.is_finite() || r.zeta_prime.norm_sqr() == 0.0 {
                return Err(Error::SimpleZeroViolation { row, line });
            }
        }
        Ok(Self {
            records,
            source_digest,
            zeta_cache: RwLock::new(HashMap::new()),
        })
    }

    /// Table whose digest is that of its canonical CSV rendering.
    pub fn from_records(records: Vec<ZeroRecord>) -> Result<Self> {
        let mut table = Self::new(records, 0)?;
        table.source_digest = fnv1a64(table.to_csv().as_bytes());
        Ok(table)
    }

    pub fn records(&self) -> &[ZeroRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn source_digest(&self) -> u64 {
        self.source_digest
    }

    pub fn max_gamma(&self) -> Option<f64> {
        self.records.last().map(|r| r.gamma)
    }

    /// Records with γ < T.
    pub fn below(&self, t_height: f64) -> &[ZeroRecord] {
        let end = self.records.partition_point(|r| r.gamma < t_height);
        &self.records[..end]
    }

    pub fn count_below(&self, t_height: f64) -> usize {
        self.below(t_height).len()
    }

    /// Canonical CSV rendering (17 significant digits).
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.records.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{:.16e},{:.16e},{:.16e}",
                r.index, r.gamma, r.zeta_prime.re, r.zeta_prime.im
            );
        }
        out
    }

    /// ζ(1 + 2iγ) = ζ(2ρ) under RH, memoized per record and parameter set.
    pub fn zeta_two_rho(&self, record: &ZeroRecord, params: &EulerMaclaurinParams) -> Result<Complex64> {
        let key = (record.gamma.to_bits(), params.cache_key());
        if let Some(v) = self.zeta_cache.read().expect("zeta cache lock").get(&key) {
            return Ok(*v);
        }
        let v = zeta::zeta(Complex64::new(1.0, 2.0 * record.gamma), params)?;
        self.zeta_cache.write().expect("zeta cache lock").insert(key, v);
        Ok(v)
    }

    /// Fills the ζ(2ρ) cache for every record below T in parallel.
    pub fn prefetch_zeta_two_rho(&self, t_height: f64, params: &EulerMaclaurinParams) -> Result<()> {
        self.below(t_height)
            .par_iter()
            .try_for_each(|r| self.zeta_two_rho(r, params).map(|_| ()))
    }
}

fn parse_field<T: std::str::FromStr>(field: &str, line: usize, column: usize, what: &str) -> Result<T> {
    field.parse().map_err(|_| Error::Parse {
        line,
        column,
        message: format!("invalid {what} {field:?}"),
    })
}

/// Parses and validates a zero table from raw CSV bytes.
pub fn parse_zero_table(bytes: &[u8]) -> Result<ZeroTable> {
    let digest = fnv1a64(bytes);
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = 1 + bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count();
        Error::Parse {
            line,
            column: 1,
            message: "input is not valid UTF-8".into(),
        }
    })?;
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = body.split('\n');
    match lines.next() {
        Some(CSV_HEADER) => {}
        Some(other) => {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: format!("expected header {CSV_HEADER:?}, found {other:?}"),
            })
        }
        None => unreachable!("split yields at least one item"),
    }
    let mut records = Vec::new();
    for (i, raw) in lines.enumerate() {
        let line = i + 2;
        if raw.ends_with('\r') {
            return Err(Error::Parse {
                line,
                column: raw.len(),
                message: "CR line endings are not accepted".into(),
            });
        }
        if raw.trim().is_empty() {
            return Err(Error::Parse {
                line,
                column: 1,
                message: "blank line".into(),
            });
        }
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line,
                column: 1,
                message: format!("expected 4 fields, found {}", fields.len()),
            });
        }
        // column numbers are 1-based byte offsets of each field
        let mut col = 1;
        let mut cols = [0usize; 4];
        for (j, f) in fields.iter().enumerate() {
            cols[j] = col;
            col += f.len() + 1;
        }
        let index: u64 = parse_field(fields[0], line, cols[0], "index")?;
        let gamma: f64 = parse_field(fields[1], line, cols[1], "gamma")?;
        let re: f64 = parse_field(fields[2], line, cols[2], "zeta_prime_re")?;
        let im: f64 = parse_field(fields[3], line, cols[3], "zeta_prime_im")?;
        for (v, c) in [(gamma, cols[1]), (re, cols[2]), (im, cols[3])] {
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    column: c,
                    message: "non-finite value".into(),
                });
            }
        }
        records.push(ZeroRecord::new(index, gamma, Complex64::new(re, im)));
    }
    if let Some(first) = records.first() {
        let (lo, hi) = FIRST_ORDINATE_WINDOW;
        if first.gamma > 0.0 && !(lo..=hi).contains(&first.gamma) {
            return Err(Error::FirstOrdinate(first.gamma));
        }
    }
    ZeroTable::new(records, digest)
}

/// Reads and validates a zero table; rejects rather than repairs.
pub fn load_zeros(path: impl AsRef<Path>) -> Result<ZeroTable> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_zero_table(&bytes)
}

/// Deterministic parallel sum over records: fixed chunks, merged in order.
fn reduce<F>(records: &[ZeroRecord], term: F) -> Result<f64>
where
    F: Fn(&ZeroRecord) -> Result<f64> + Sync,
{
    let partials: Result<Vec<CompensatedSum>> = records
        .par_chunks(REDUCE_CHUNK)
        .map(|chunk| {
            let mut s = CompensatedSum::new();
            for r in chunk {
                s.add(term(r)?);
            }
            Ok(s)
        })
        .collect();
    let mut total = CompensatedSum::new();
    for p in partials? {
        total.merge(&p);
    }
    Ok(total.value())
}

fn term_a(r: &ZeroRecord) -> f64 {
    1.0 / (r.rho_norm_sqr() * r.zeta_prime.norm_sqr())
}

fn term_c(r: &ZeroRecord) -> f64 {
    2.0 * r.inverse_rho_zeta_prime().re
}

/// A(T) = ∑_{0<γ<T} 1/|ρ ζ′(ρ)|²
pub fn sum_a(table: &ZeroTable, t_height: f64) -> f64 {
    reduce(table.below(t_height), |r| Ok(term_a(r))).expect("infallible")
}

/// B(T) = ∑_{0<γ<T} |ζ(2ρ)|² / |ρ ζ′(ρ)|²
pub fn sum_b(table: &ZeroTable, t_height: f64, params: &EulerMaclaurinParams) -> Result<f64> {
    table.prefetch_zeta_two_rho(t_height, params)?;
    reduce(table.below(t_height), |r| {
        let z = table.zeta_two_rho(r, params)?;
        Ok(z.norm_sqr() * term_a(r))
    })
}

/// C(T) = ∑_{|γ|<T} 1/(ρ ζ′(ρ)) = 2 ∑_{0<γ<T} Re 1/(ρ ζ′(ρ))
pub fn sum_c(table: &ZeroTable, t_height: f64) -> f64 {
    reduce(table.below(t_height), |r| Ok(term_c(r))).expect("infallible")
}

/// J₋ₖ(T) = ∑_{|γ|<T} |ζ′(ρ)|^{−2k} for real k > 0.
pub fn moment_j(table: &ZeroTable, k: f64, t_height: f64) -> Result<f64> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidParameter(format!("moment order k must be positive, got {k}")));
    }
    reduce(table.below(t_height), |r| Ok(2.0 * r.zeta_prime.norm_sqr().powf(-k)))
}

/// n^ρ = √n · e^{iγ ln n}
fn n_pow_rho(n: u64, gamma: f64) -> Complex64 {
    let ln_n = (n as f64).ln();
    Complex64::from_polar((n as f64).sqrt(), gamma * ln_n)
}

/// Truncated explicit formula for M(n−1):
/// 2∑_{0<γ<T} Re(n^ρ/(ρζ′(ρ))) − 2 − k_series(n) − μ(n)/2.
pub fn reconstruct_m(n: u64, table: &ZeroTable, t_height: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain { lo: 0, hi: 0 });
    }
    let mu = f64::from(naive_value(n, ArithmeticFunctionKind::Mobius)?);
    let zero_side = reduce(table.below(t_height), |r| {
        Ok(2.0 * (n_pow_rho(n, r.gamma) * r.inverse_rho_zeta_prime()).re)
    })?;
    Ok(zero_side - 2.0 - zeta::k_series(n) - mu / 2.0)
}

/// Truncated explicit formula for L(n−1):
/// √n/ζ(½) + 2∑_{0<γ<T} Re(ζ(2ρ) n^ρ/(ρζ′(ρ))) − λ(n)/2 + 1,
/// leaving out an O(1) + O(n^{−1/2}) term with no explicit constant.
pub fn reconstruct_l(n: u64, table: &ZeroTable, t_height: f64, params: &EulerMaclaurinParams) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain { lo: 0, hi: 0 });
    }
    let lambda = f64::from(naive_value(n, ArithmeticFunctionKind::Liouville)?);
    table.prefetch_zeta_two_rho(t_height, params)?;
    let zero_side = reduce(table.below(t_height), |r| {
        let z = table.zeta_two_rho(r, params)?;
        Ok(2.0 * (z * n_pow_rho(n, r.gamma) * r.inverse_rho_zeta_prime()).re)
    })?;
    let bias = (n as f64).sqrt() / zeta::constants().zeta_half;
    Ok(bias + zero_side - lambda / 2.0 + 1.0)
}

/// Zero-side quantities at one truncation height.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroSumReport {
    pub t_height: f64,
    pub count: usize,
    pub sum_a: f64,
    pub sum_b: Option<f64>,
    pub sum_c: f64,
    /// (k, J₋ₖ(T)) pairs in the order requested.
    pub moments: Vec<(f64, f64)>,
    pub source_digest: u64,
}

impl ZeroSumReport {
    pub fn moment(&self, k: f64) -> Option<f64> {
        self.moments.iter().find(|(kk, _)| *kk == k).map(|(_, v)| *v)
    }
}

/// Reports at ascending heights from one pass over the table.
///
/// `zeta_params = None` skips B(T), whose ζ(2ρ) evaluations dominate the cost
/// on large tables.
pub fn zero_sum_reports(
    table: &ZeroTable,
    heights: &[f64],
    moment_orders: &[f64],
    zeta_params: Option<&EulerMaclaurinParams>,
) -> Result<Vec<ZeroSumReport>> {
    if heights.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidParameter("heights must be ascending".into()));
    }
    if let Some(k) = moment_orders.iter().find(|k| !(**k > 0.0) || !k.is_finite()) {
        return Err(Error::InvalidParameter(format!("moment order k must be positive, got {k}")));
    }
    let t_max = heights.last().copied().unwrap_or(0.0);
    let mut zeta_two_rho = Vec::new();
    if let Some(params) = zeta_params {
        table.prefetch_zeta_two_rho(t_max, params)?;
        zeta_two_rho = table
            .below(t_max)
            .iter()
            .map(|r| table.zeta_two_rho(r, params))
            .collect::<Result<Vec<_>>>()?;
    }

    let mut a = CompensatedSum::new();
    let mut b = CompensatedSum::new();
    let mut c = CompensatedSum::new();
    let mut m = vec![CompensatedSum::new(); moment_orders.len()];
    let mut next = 0usize;
    let records = table.records();
    let mut out = Vec::with_capacity(heights.len());
    for &t in heights {
        while next < records.len() && records[next].gamma < t {
            let r = &records[next];
            let ta = term_a(r);
            a.add(ta);
            if zeta_params.is_some() {
                b.add(zeta_two_rho[next].norm_sqr() * ta);
            }
            c.add(term_c(r));
            let abs2 = r.zeta_prime.norm_sqr();
            for (acc, &k) in m.iter_mut().zip(moment_orders) {
                acc.add(2.0 * abs2.powf(-k));
            }
            next += 1;
        }
        out.push(ZeroSumReport {
            t_height: t,
            count: next,
            sum_a: a.value(),
            sum_b: zeta_params.map(|_| b.value()),
            sum_c: c.value(),
            moments: moment_orders.iter().copied().zip(m.iter().map(|s| s.value())).collect(),
            source_digest: table.source_digest(),
        });
    }
    Ok(out)
}
