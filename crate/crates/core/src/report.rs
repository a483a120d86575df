//! Run orchestration behind the `zetacorr` binary: validated configuration,
//! report rows, CSV/JSON emission, corr checkpoints and exit statuses.

use std::fmt;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::corr::{CorrAccumulator, CorrKindPair, CorrRunState, WeightedSumParams};
use crate::error::Error;
use crate::sieve::{ArithmeticFunctionKind, SegmentStream, DEFAULT_SEGMENT_CAPACITY};
use crate::zeros::{self, fnv1a64, ZeroTable};
use crate::zeta::{self, EulerMaclaurinParams};
use crate::{selftest, zeros::ZeroSumReport};

pub const CORR_HEADER: &str = "n,raw_sum,normalized,reference_line";
pub const ZEROSUMS_HEADER: &str = "t,count,sum_A,sum_B,sum_C,J_minus_1";
pub const SIEVE_HEADER: &str = "n,value,summatory";
pub const RECONSTRUCT_HEADER: &str = "n,mertens,reconstruct_m,liouville,reconstruct_l";
pub const CONSTANTS_HEADER: &str = "name,value";

/// Default row stride.
pub const DEFAULT_STRIDE: u64 = 10_000;
/// Zero-table file looked up under `ZETACORR_DATA_DIR` when `--zeros` is absent.
pub const DATA_DIR_VAR: &str = "ZETACORR_DATA_DIR";
pub const DEFAULT_ZEROS_FILE: &str = "zeros.csv";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Sieve,
    Corr,
    Zerosums,
    Reconstruct,
    Constants,
    Selftest,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub n_max: Option<u64>,
    pub kind_pair: CorrKindPair,
    /// Function sieved by the `sieve` command.
    pub sieve_kind: ArithmeticFunctionKind,
    pub delta: Option<f64>,
    pub c: Option<f64>,
    pub zeros_path: Option<PathBuf>,
    pub t_height: Option<f64>,
    pub stride: u64,
    pub format: Format,
    pub out_path: Option<PathBuf>,
    pub threads: Option<usize>,
    pub checkpoint: Option<PathBuf>,
    pub resume: bool,
    /// Skip B(T) in zerosums; it needs ζ(2ρ) for every zero.
    pub skip_sum_b: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            n_max: None,
            kind_pair: CorrKindPair::MobiusMertens,
            sieve_kind: ArithmeticFunctionKind::Mobius,
            delta: None,
            c: None,
            zeros_path: None,
            t_height: None,
            stride: DEFAULT_STRIDE,
            format: Format::Csv,
            out_path: None,
            threads: None,
            checkpoint: None,
            resume: false,
            skip_sum_b: false,
        }
    }

    pub fn validate(&self) -> Result<(), RunError> {
        if self.stride == 0 {
            return Err(RunError::usage("--stride must be positive"));
        }
        if self.threads == Some(0) {
            return Err(RunError::usage("--threads must be positive"));
        }
        if let Some(d) = self.delta {
            if !(d > 0.0) || !d.is_finite() {
                return Err(RunError::usage(format!("--delta must be positive, got {d}")));
            }
        }
        if let Some(c) = self.c {
            if !(c > 0.0 && c < 1.0) {
                return Err(RunError::usage(format!("--c must lie in (0, 1), got {c}")));
            }
        }
        if let Some(t) = self.t_height {
            if !(t > 0.0) || !t.is_finite() {
                return Err(RunError::usage(format!("--t-height must be positive, got {t}")));
            }
        }
        if self.resume && self.checkpoint.is_none() {
            return Err(RunError::usage("--resume needs --checkpoint"));
        }
        match self.command {
            Command::Sieve => {
                if self.n_max.unwrap_or(0) == 0 {
                    return Err(RunError::usage("sieve requires --n-max >= 1"));
                }
            }
            Command::Corr => match self.n_max {
                None => return Err(RunError::usage("corr requires --n-max")),
                Some(n) if n < 2 => {
                    return Err(RunError::usage(
                        "corr requires --n-max >= 2 (the normalization by ln n vanishes at n = 1)",
                    ))
                }
                _ => {
                    if self.c.is_some() && self.t_height.is_none() {
                        return Err(RunError::usage("--c needs --t-height"));
                    }
                }
            },
            Command::Reconstruct => {
                if self.n_max.is_some_and(|n| n < 2) {
                    return Err(RunError::usage("reconstruct requires --n-max >= 2"));
                }
            }
            Command::Zerosums | Command::Constants | Command::Selftest => {}
        }
        if self.command != Command::Corr && (self.checkpoint.is_some() || self.c.is_some()) {
            return Err(RunError::usage("--checkpoint, --resume and --c apply to corr only"));
        }
        Ok(())
    }
}

/// Failure of a run, carrying its process exit status.
#[derive(Debug)]
pub struct RunError {
    pub status: u8,
    pub message: String,
}

impl RunError {
    pub const IO: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const INVARIANT: u8 = 3;

    pub fn usage(message: impl Into<String>) -> Self {
        Self { status: Self::USAGE, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { status: Self::IO, message: message.into() }
    }

    pub fn invariant(message: impl Into<String>) -> Self {
        Self { status: Self::INVARIANT, message: message.into() }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for RunError {}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Io { .. }
            | Error::Parse { .. }
            | Error::NonMonotone { .. }
            | Error::NonPositiveGamma { .. }
            | Error::SimpleZeroViolation { .. }
            | Error::IndexGap { .. }
            | Error::FirstOrdinate(_) => Self::IO,
            Error::Invariant(_) | Error::Overflow(_) | Error::InsufficientAccuracy { .. } => Self::INVARIANT,
            _ => Self::USAGE,
        };
        Self { status, message: e.to_string() }
    }
}

impl From<io::Error> for RunError {
    fn from(e: io::Error) -> Self {
        Self::io(e.to_string())
    }
}

/// One corr checkpoint row.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub n_or_t: f64,
    pub raw_sum: f64,
    pub normalized: f64,
    pub reference_line: Option<f64>,
}

impl ReportRow {
    pub fn from_accumulator(acc: &CorrAccumulator, reference_line: Option<f64>) -> crate::Result<Self> {
        Ok(Self {
            n_or_t: acc.n() as f64,
            raw_sum: acc.s_plain(),
            normalized: acc.normalized()?,
            reference_line,
        })
    }
}

/// 17 significant digits; parses back to the identical f64.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_default()
}

/// Ordered row emitter for CSV (header + lines) or JSON lines.
struct Emitter<W: Write> {
    out: W,
    format: Format,
    fields: Vec<&'static str>,
}

enum Cell {
    Int(i64),
    Real(f64),
    Opt(Option<f64>),
    Text(String),
}

impl<W: Write> Emitter<W> {
    fn new(mut out: W, format: Format, header: &'static str) -> io::Result<Self> {
        if format == Format::Csv {
            writeln!(out, "{header}")?;
        }
        Ok(Self { out, format, fields: header.split(',').collect() })
    }

    fn row(&mut self, cells: &[Cell]) -> io::Result<()> {
        debug_assert_eq!(cells.len(), self.fields.len());
        match self.format {
            Format::Csv => {
                let line: Vec<String> = cells
                    .iter()
                    .map(|c| match c {
                        Cell::Int(i) => i.to_string(),
                        Cell::Real(x) => fmt_real(*x),
                        Cell::Opt(x) => fmt_opt(*x),
                        Cell::Text(s) => s.clone(),
                    })
                    .collect();
                writeln!(self.out, "{}", line.join(","))
            }
            Format::Json => {
                let mut obj = serde_json::Map::new();
                for (name, c) in self.fields.iter().zip(cells) {
                    let v = match c {
                        Cell::Int(i) => serde_json::Value::from(*i),
                        Cell::Real(x) => serde_json::Value::from(*x),
                        Cell::Opt(x) => x.map(serde_json::Value::from).unwrap_or(serde_json::Value::Null),
                        Cell::Text(s) => serde_json::Value::from(s.as_str()),
                    };
                    obj.insert((*name).to_string(), v);
                }
                serde_json::to_writer(&mut self.out, &obj)?;
                writeln!(self.out)
            }
        }
    }

    fn finish(mut self) -> io::Result<()> {
        self.out.flush()
    }
}

fn corr_cells(r: &ReportRow) -> [Cell; 4] {
    [Cell::Int(r.n_or_t as i64), Cell::Real(r.raw_sum), Cell::Real(r.normalized), Cell::Opt(r.reference_line)]
}

/// Writes corr rows as CSV.
pub fn write_corr_csv<W: Write>(out: W, rows: &[ReportRow]) -> io::Result<()> {
    let mut e = Emitter::new(out, Format::Csv, CORR_HEADER)?;
    for r in rows {
        e.row(&corr_cells(r))?;
    }
    e.finish()
}

/// Parses the output of [`write_corr_csv`].
pub fn parse_corr_csv(text: &str) -> crate::Result<Vec<ReportRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(CORR_HEADER) {
        return Err(Error::Parse { line: 1, column: 1, message: format!("expected header `{CORR_HEADER}`") });
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let line_no = i + 2;
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(Error::Parse { line: line_no, column: 1, message: "expected 4 fields".into() });
            }
            let real = |j: usize| {
                fields[j].parse::<f64>().map_err(|e| Error::Parse {
                    line: line_no,
                    column: j + 1,
                    message: e.to_string(),
                })
            };
            Ok(ReportRow {
                n_or_t: real(0)?,
                raw_sum: real(1)?,
                normalized: real(2)?,
                reference_line: if fields[3].is_empty() { None } else { Some(real(3)?) },
            })
        })
        .collect()
}

/// State saved between segments of a corr run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrCheckpoint {
    pub n: u64,
    pub summatory: i64,
    pub state: CorrRunState,
    pub config_digest: u64,
    pub rows: Vec<ReportRow>,
}

impl CorrCheckpoint {
    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text = fs::read_to_string(path).map_err(|e| RunError::io(format!("{}: {e}", path.display())))?;
        let cp: Self = serde_json::from_str(&text)
            .map_err(|e| RunError::io(format!("{}: malformed checkpoint: {e}", path.display())))?;
        if cp.n != cp.state.acc.n() || cp.summatory != cp.state.summatory {
            return Err(RunError::invariant(format!(
                "checkpoint {} is inconsistent: header n = {} but state n = {}",
                path.display(),
                cp.n,
                cp.state.acc.n()
            )));
        }
        Ok(cp)
    }

    pub fn store(&self, path: &Path) -> Result<(), RunError> {
        let tmp = path.with_extension("tmp");
        let text = serde_json::to_string(self).map_err(|e| RunError::invariant(e.to_string()))?;
        fs::write(&tmp, text)
            .and_then(|_| fs::rename(&tmp, path))
            .map_err(|e| RunError::io(format!("{}: {e}", path.display())))
    }
}

/// Zero table named by `--zeros`, else `$ZETACORR_DATA_DIR/zeros.csv`.
pub fn resolve_zeros_path(explicit: Option<&Path>) -> Option<PathBuf> {
    if let Some(p) = explicit {
        return Some(p.to_path_buf());
    }
    let dir = std::env::var_os(DATA_DIR_VAR)?;
    let p = Path::new(&dir).join(DEFAULT_ZEROS_FILE);
    p.exists().then_some(p)
}

fn load_table(config: &RunConfig, required: bool) -> Result<Option<ZeroTable>, RunError> {
    match resolve_zeros_path(config.zeros_path.as_deref()) {
        Some(p) => Ok(Some(zeros::load_zeros(p)?)),
        None if required => Err(RunError::usage(format!(
            "{:?} requires --zeros or {DATA_DIR_VAR} containing {DEFAULT_ZEROS_FILE}",
            config.command
        ))),
        None => Ok(None),
    }
}

/// Smallest height with every zero of the table strictly below it.
fn height_above(table: &ZeroTable) -> f64 {
    table.max_gamma().map(|g| g + g * f64::EPSILON).unwrap_or(0.0)
}

/// Dot-dashed reference level for a corr run.
pub fn reference_line(pair: CorrKindPair, table: Option<&ZeroTable>) -> f64 {
    let k = zeta::constants();
    match pair {
        CorrKindPair::MobiusMertens => {
            k.minus_three_over_pi_sq + table.map(|t| zeros::sum_a(t, height_above(t))).unwrap_or(0.0)
        }
        CorrKindPair::LiouvilleSummatory => k.liouville_bias_const,
    }
}

fn corr_digest(config: &RunConfig, delta: f64, reference: f64) -> u64 {
    let key = format!(
        "corr|{:?}|{:016x}|{}|{:016x}",
        config.kind_pair,
        delta.to_bits(),
        config.stride,
        reference.to_bits()
    );
    fnv1a64(key.as_bytes())
}

/// Runs `config` with output to its `out_path` or stdout, inside a thread pool
/// of the requested size.
pub fn execute(config: &RunConfig) -> Result<(), RunError> {
    config.validate()?;
    let go = || -> Result<(), RunError> {
        match &config.out_path {
            Some(p) => {
                let f = fs::File::create(p).map_err(|e| RunError::io(format!("{}: {e}", p.display())))?;
                run(config, BufWriter::new(f))
            }
            None => run(config, BufWriter::new(io::stdout().lock())),
        }
    };
    match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| RunError::invariant(format!("thread pool: {e}")))?
            .install(go),
        None => go(),
    }
}

/// Runs `config`, writing the report to `out`. Summary lines go to stderr.
pub fn run<W: Write>(config: &RunConfig, out: W) -> Result<(), RunError> {
    config.validate()?;
    match config.command {
        Command::Sieve => run_sieve(config, out),
        Command::Corr => run_corr(config, out).map(|_| ()),
        Command::Zerosums => run_zerosums(config, out),
        Command::Reconstruct => run_reconstruct(config, out),
        Command::Constants => run_constants(config, out),
        Command::Selftest => run_selftest(config, out),
    }
}

fn run_sieve<W: Write>(config: &RunConfig, out: W) -> Result<(), RunError> {
    let n_max = config.n_max.unwrap_or(1);
    let mut e = Emitter::new(out, config.format, SIEVE_HEADER)?;
    let mut total: i64 = 0;
    for segment in SegmentStream::new(1, n_max, config.sieve_kind, DEFAULT_SEGMENT_CAPACITY)? {
        for (n, f) in segment?.iter() {
            total += i64::from(f);
            if n % config.stride == 0 || n == n_max {
                e.row(&[Cell::Int(n as i64), Cell::Int(f.into()), Cell::Int(total)])?;
            }
        }
    }
    e.finish()?;
    Ok(())
}

/// The corr command; returns the final accumulator.
pub fn run_corr<W: Write>(config: &RunConfig, out: W) -> Result<CorrAccumulator, RunError> {
    let n_max = config.n_max.ok_or_else(|| RunError::usage("corr requires --n-max"))?;
    let table = load_table(config, false)?;
    let reference = reference_line(config.kind_pair, table.as_ref());

    let weighted = match (config.c, config.t_height, config.delta) {
        (Some(c), Some(t), delta) => Some(WeightedSumParams::from_height(c, t, delta)?),
        (None, _, Some(delta)) => Some(WeightedSumParams::new(delta, n_max)?),
        _ => None,
    };
    let delta = weighted.map(|w| w.delta).unwrap_or(0.0);
    let digest = corr_digest(config, delta, reference);

    let (mut state, mut rows) = match (&config.checkpoint, config.resume) {
        (Some(path), true) if path.exists() => {
            let cp = CorrCheckpoint::load(path)?;
            if cp.config_digest != digest {
                return Err(RunError::usage(format!(
                    "checkpoint {} was written by a different configuration",
                    path.display()
                )));
            }
            (cp.state, cp.rows)
        }
        _ => (CorrRunState::new(config.kind_pair, delta)?, Vec::new()),
    };
    if state.acc.n() > n_max {
        return Err(RunError::usage(format!(
            "checkpoint is at n = {}, beyond --n-max {n_max}",
            state.acc.n()
        )));
    }

    let checkpoint = config.checkpoint.clone();
    let rows_cell = std::cell::RefCell::new(std::mem::take(&mut rows));
    let mut failure: Option<RunError> = None;
    state.advance_to(
        n_max,
        config.stride,
        DEFAULT_SEGMENT_CAPACITY,
        |acc| {
            if acc.n() >= 2 {
                rows_cell.borrow_mut().push(ReportRow::from_accumulator(acc, Some(reference))?);
            }
            Ok(())
        },
        |st| {
            if let Some(path) = &checkpoint {
                let cp = CorrCheckpoint {
                    n: st.acc.n(),
                    summatory: st.summatory,
                    state: st.clone(),
                    config_digest: digest,
                    rows: rows_cell.borrow().clone(),
                };
                if let Err(e) = cp.store(path) {
                    failure = Some(e);
                    return Err(Error::Invariant("checkpoint write failed".into()));
                }
            }
            Ok(())
        },
    )
    .map_err(|e| failure.take().unwrap_or_else(|| e.into()))?;
    let rows = rows_cell.into_inner();

    let mut e = Emitter::new(out, config.format, CORR_HEADER)?;
    for r in &rows {
        e.row(&corr_cells(r))?;
    }
    e.finish()?;

    if let Some(w) = weighted {
        // the weighted sum must stop at its own N
        let acc = if w.n_max == n_max {
            state.acc.clone()
        } else {
            crate::corr::correlate(config.kind_pair, w.n_max, w.delta)?
        };
        let z = zeta::zeta(Complex64::new(1.0 + w.delta, 0.0), &EulerMaclaurinParams::default())?.re;
        eprintln!(
            "weighted: N = {}, delta = {}, sum = {}, divided by zeta(1+delta) = {}",
            w.n_max,
            fmt_real(w.delta),
            fmt_real(acc.s_weighted()),
            fmt_real(acc.s_weighted() / z)
        );
    }
    Ok(state.acc)
}

/// Heights after every `stride` zeros (midway to the next zero), capped by
/// `t_height` when given, which is then the last checkpoint.
pub fn zero_checkpoints(table: &ZeroTable, stride: u64, t_height: Option<f64>) -> Vec<f64> {
    let rec = table.records();
    let stride = stride.max(1) as usize;
    let mut heights: Vec<f64> = (1..)
        .map(|k| k * stride)
        .take_while(|&i| i < rec.len())
        .map(|i| 0.5 * (rec[i - 1].gamma + rec[i].gamma))
        .filter(|&t| t_height.is_none_or(|cap| t < cap))
        .collect();
    match t_height {
        Some(t) => heights.push(t),
        None => heights.push(height_above(table)),
    }
    heights
}

fn run_zerosums<W: Write>(config: &RunConfig, out: W) -> Result<(), RunError> {
    let table = load_table(config, true)?.expect("required");
    if let (Some(t), Some(g)) = (config.t_height, table.max_gamma()) {
        if t > g {
            eprintln!("warning: --t-height {t} exceeds the table's largest ordinate {g}");
        }
    }
    let heights = zero_checkpoints(&table, config.stride, config.t_height);
    let params = EulerMaclaurinParams::default();
    let reports = zeros::zero_sum_reports(&table, &heights, &[1.0], (!config.skip_sum_b).then_some(&params))?;
    write_zero_sum_reports(out, config.format, &reports)?;
    Ok(())
}

pub fn write_zero_sum_reports<W: Write>(out: W, format: Format, reports: &[ZeroSumReport]) -> io::Result<()> {
    let mut e = Emitter::new(out, format, ZEROSUMS_HEADER)?;
    for r in reports {
        e.row(&[
            Cell::Real(r.t_height),
            Cell::Int(r.count as i64),
            Cell::Real(r.sum_a),
            Cell::Opt(r.sum_b),
            Cell::Real(r.sum_c),
            Cell::Opt(r.moment(1.0)),
        ])?;
    }
    e.finish()
}

fn run_reconstruct<W: Write>(config: &RunConfig, out: W) -> Result<(), RunError> {
    let table = load_table(config, true)?.expect("required");
    let n_max = config.n_max.unwrap_or(50);
    let t = config.t_height.unwrap_or_else(|| height_above(&table));
    let params = EulerMaclaurinParams::default();
    table.prefetch_zeta_two_rho(t, &params)?;
    let mu = SegmentStream::new(1, n_max, ArithmeticFunctionKind::Mobius, DEFAULT_SEGMENT_CAPACITY)?
        .collect::<crate::Result<Vec<_>>>()?;
    let la = SegmentStream::new(1, n_max, ArithmeticFunctionKind::Liouville, DEFAULT_SEGMENT_CAPACITY)?
        .collect::<crate::Result<Vec<_>>>()?;
    let mu: Vec<i8> = mu.iter().flat_map(|s| s.values().iter().copied()).collect();
    let la: Vec<i8> = la.iter().flat_map(|s| s.values().iter().copied()).collect();
    let mut e = Emitter::new(out, config.format, RECONSTRUCT_HEADER)?;
    let (mut m, mut l) = (i64::from(mu[0]), i64::from(la[0]));
    for n in 2..=n_max {
        e.row(&[
            Cell::Int(n as i64),
            Cell::Int(m),
            Cell::Real(zeros::reconstruct_m(n, &table, t)?),
            Cell::Int(l),
            Cell::Real(zeros::reconstruct_l(n, &table, t, &params)?),
        ])?;
        m += i64::from(mu[n as usize - 1]);
        l += i64::from(la[n as usize - 1]);
    }
    e.finish()?;
    Ok(())
}

fn run_constants<W: Write>(config: &RunConfig, out: W) -> Result<(), RunError> {
    let k = zeta::constants();
    let mut e = Emitter::new(out, config.format, CONSTANTS_HEADER)?;
    for (name, v) in [
        ("minus_three_over_pi_sq", k.minus_three_over_pi_sq),
        ("zeta_half", k.zeta_half),
        ("liouville_bias_const", k.liouville_bias_const),
        ("k_series_1", k.k_series),
    ] {
        e.row(&[Cell::Text(name.into()), Cell::Real(v)])?;
    }
    e.finish()?;
    Ok(())
}

fn run_selftest<W: Write>(config: &RunConfig, out: W) -> Result<(), RunError> {
    let outcomes = selftest::run_all();
    let mut e = Emitter::new(out, config.format, selftest::HEADER)?;
    let mut failed = Vec::new();
    for o in &outcomes {
        e.row(&[Cell::Text(o.suite.into()), Cell::Int(o.passed as i64), Cell::Int(o.failed as i64)])?;
        if o.failed > 0 {
            failed.push(format!("{} ({})", o.suite, o.first_failure.as_deref().unwrap_or("?")));
        }
    }
    e.finish()?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(RunError::invariant(format!("selftest failed: {}", failed.join("; "))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corr_config(n_max: u64, stride: u64) -> RunConfig {
        let mut c = RunConfig::new(Command::Corr);
        c.n_max = Some(n_max);
        c.stride = stride;
        c
    }

    #[test]
    fn corr_thousand_by_hundred() {
        let mut buf = Vec::new();
        run(&corr_config(1000, 100), &mut buf).unwrap();
        let rows = parse_corr_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(rows.len(), 10);
        assert!(rows.iter().all(|r| r.raw_sum < 0.0));
        for r in &rows {
            assert_eq!(r.normalized, r.raw_sum / r.n_or_t.ln());
        }
    }

    #[test]
    fn corr_n_max_one_is_usage_error() {
        let err = run(&corr_config(1, 1), Vec::new()).unwrap_err();
        assert_eq!(err.status, RunError::USAGE);
    }

    #[test]
    fn constants_rows() {
        let mut buf = Vec::new();
        run(&RunConfig::new(Command::Constants), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.contains("minus_three_over_pi_sq,-3.0396355092701333e-1"));
        assert!(text.contains("liouville_bias_const,-2.65548285721346"));
    }

    #[test]
    fn json_mirrors_csv() {
        let mut c = corr_config(500, 250);
        c.format = Format::Json;
        let mut buf = Vec::new();
        run(&c, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let objs: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(objs.len(), 2);
        assert_eq!(objs[1]["n"], 500.0);
        assert!(objs[1]["raw_sum"].as_f64().unwrap() < 0.0);
        assert!(objs[1]["reference_line"].is_number());
    }

    #[test]
    fn zerosums_without_table_is_usage_error() {
        let mut c = RunConfig::new(Command::Zerosums);
        c.zeros_path = None;
        if std::env::var_os(DATA_DIR_VAR).is_none() {
            assert_eq!(run(&c, Vec::new()).unwrap_err().status, RunError::USAGE);
        }
    }
}
