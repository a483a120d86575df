//! Logarithmically averaged correlation sums between an arithmetic function
//! and its own summatory function one step back:
//!
//! * plain:      ∑_{n≤N} f(n)F(n−1)/n
//! * normalized: the plain sum divided by ln N
//! * weighted:   ∑_{n≤N} f(n)F(n−1)/n^{1+δ}, and the theorem-side quantity
//!   obtained by dividing it by ζ(1+δ)
//! * shifted:    ∑_{k<n≤N} f(n)f(n−k)/n, whose sum over k = 1..N−1 is the plain sum

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sieve::{ArithmeticFunctionKind, ArithmeticSegment, SegmentStream, DEFAULT_SEGMENT_CAPACITY};
use crate::sum::CompensatedSum;
use crate::zeta::{self, EulerMaclaurinParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrKindPair {
    /// μ(n) against M(n−1)
    MobiusMertens,
    /// λ(n) against L(n−1)
    LiouvilleSummatory,
}

impl CorrKindPair {
    pub fn function_kind(self) -> ArithmeticFunctionKind {
        match self {
            CorrKindPair::MobiusMertens => ArithmeticFunctionKind::Mobius,
            CorrKindPair::LiouvilleSummatory => ArithmeticFunctionKind::Liouville,
        }
    }
}

#[inline]
fn weight(n: u64, delta: f64, product: f64, plain: f64) -> f64 {
    if delta == 0.0 {
        plain
    } else {
        product * (-(1.0 + delta) * (n as f64).ln()).exp()
    }
}

/// Running plain and δ-weighted correlation sums through `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrAccumulator {
    pair: CorrKindPair,
    n: u64,
    s_plain: CompensatedSum,
    s_weighted: CompensatedSum,
    delta: f64,
}

impl CorrAccumulator {
    /// Empty accumulator (n = 0); `delta = 0` makes the weighted sum track the plain one.
    pub fn new(pair: CorrKindPair, delta: f64) -> Result<Self> {
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "delta must be finite and non-negative, got {delta}"
            )));
        }
        Ok(Self {
            pair,
            n: 0,
            s_plain: CompensatedSum::new(),
            s_weighted: CompensatedSum::new(),
            delta,
        })
    }

    pub fn pair(&self) -> CorrKindPair {
        self.pair
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn s_plain(&self) -> f64 {
        self.s_plain.value()
    }

    pub fn s_weighted(&self) -> f64 {
        self.s_weighted.value()
    }

    /// Adds the term for n = self.n() + 1, given f(n) and F(n−1).
    #[inline]
    pub fn accumulate(&mut self, f_n: i8, f_prev: i64) {
        let n = self.n + 1;
        let product = (i64::from(f_n) * f_prev) as f64;
        let plain = product / n as f64;
        self.s_plain.add(plain);
        self.s_weighted.add(weight(n, self.delta, product, plain));
        self.n = n;
    }

    /// s_plain / ln n.
    pub fn normalized(&self) -> Result<f64> {
        if self.n < 2 {
            return Err(Error::Degenerate(format!(
                "normalized sum needs n >= 2 (ln {} = 0 or undefined)",
                self.n
            )));
        }
        Ok(self.s_plain() / (self.n as f64).ln())
    }

    /// Appends a segment partial that starts at n + 1, where `offset` = F(n).
    pub fn absorb(&mut self, partial: &SegmentPartial, offset: i64) -> Result<()> {
        if partial.lo != self.n + 1 {
            return Err(Error::InvalidParameter(format!(
                "partial starts at {} but accumulator is at n = {}",
                partial.lo, self.n
            )));
        }
        if partial.delta.to_bits() != self.delta.to_bits() {
            return Err(Error::InvalidParameter("partial computed with a different delta".into()));
        }
        let off = offset as f64;
        self.s_plain.merge(&partial.plain_local);
        self.s_plain.add(off * partial.plain_unit.value());
        self.s_weighted.merge(&partial.weighted_local);
        self.s_weighted.add(off * partial.weighted_unit.value());
        self.n = partial.hi;
        Ok(())
    }
}

/// Offset-free contribution of one segment [lo, hi].
///
/// With G the segment-local prefix sum (G(lo−1) = 0) and F(lo−1) = offset,
/// the segment adds `local + offset · unit` where
/// local = ∑ f(n)G(n−1)/n^w and unit = ∑ f(n)/n^w.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentPartial {
    pub lo: u64,
    pub hi: u64,
    pub delta: f64,
    pub total: i64,
    plain_local: CompensatedSum,
    plain_unit: CompensatedSum,
    weighted_local: CompensatedSum,
    weighted_unit: CompensatedSum,
}

impl SegmentPartial {
    pub fn compute(segment: &ArithmeticSegment, delta: f64) -> Self {
        let mut local = 0i64;
        let mut out = SegmentPartial {
            lo: segment.lo(),
            hi: segment.hi(),
            delta,
            total: 0,
            plain_local: CompensatedSum::new(),
            plain_unit: CompensatedSum::new(),
            weighted_local: CompensatedSum::new(),
            weighted_unit: CompensatedSum::new(),
        };
        for (n, f) in segment.iter() {
            let nf = n as f64;
            let fv = f64::from(f);
            let product = (i64::from(f) * local) as f64;
            let plain = product / nf;
            let unit = fv / nf;
            out.plain_local.add(plain);
            out.plain_unit.add(unit);
            out.weighted_local.add(weight(n, delta, product, plain));
            out.weighted_unit.add(weight(n, delta, fv, unit));
            local += i64::from(f);
        }
        out.total = local;
        out
    }
}

/// Correlation sums through `n_max` by parallel segment partials merged in
/// ascending order. Bitwise reproducible for any thread count.
pub fn correlate_parallel(pair: CorrKindPair, n_max: u64, delta: f64, capacity: u64) -> Result<CorrAccumulator> {
    let mut acc = CorrAccumulator::new(pair, delta)?;
    if n_max == 0 {
        return Ok(acc);
    }
    let kind = pair.function_kind();
    let sieve = crate::sieve::SegmentSieve::for_limit(n_max, capacity);
    let cap = sieve.capacity();
    let ranges: Vec<(u64, u64)> = (0..n_max.div_ceil(cap))
        .map(|i| (i * cap + 1, ((i + 1) * cap).min(n_max)))
        .collect();
    let partials: Result<Vec<SegmentPartial>> = ranges
        .par_iter()
        .map(|&(lo, hi)| sieve.sieve(lo, hi, kind).map(|seg| SegmentPartial::compute(&seg, delta)))
        .collect();
    let mut offset = 0i64;
    for p in partials? {
        acc.absorb(&p, offset)?;
        offset = offset.checked_add(p.total).ok_or(Error::Overflow(p.hi))?;
    }
    Ok(acc)
}

/// Sequential streaming state: the accumulator plus F(acc.n()).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrRunState {
    pub acc: CorrAccumulator,
    pub summatory: i64,
}

impl CorrRunState {
    pub fn new(pair: CorrKindPair, delta: f64) -> Result<Self> {
        Ok(Self {
            acc: CorrAccumulator::new(pair, delta)?,
            summatory: 0,
        })
    }

    /// Advances through every n up to `n_max`.
    ///
    /// `on_row` sees the accumulator at each n ≡ 0 (mod stride) and at n_max;
    /// `on_segment` sees the whole state after each sieved segment.
    pub fn advance_to<R, S>(
        &mut self,
        n_max: u64,
        stride: u64,
        capacity: u64,
        mut on_row: R,
        mut on_segment: S,
    ) -> Result<()>
    where
        R: FnMut(&CorrAccumulator) -> Result<()>,
        S: FnMut(&CorrRunState) -> Result<()>,
    {
        if stride == 0 {
            return Err(Error::InvalidParameter("stride must be positive".into()));
        }
        if n_max <= self.acc.n() {
            return Ok(());
        }
        let kind = self.acc.pair().function_kind();
        for segment in SegmentStream::new(self.acc.n() + 1, n_max, kind, capacity)? {
            let segment = segment?;
            for (n, f) in segment.iter() {
                self.acc.accumulate(f, self.summatory);
                self.summatory += i64::from(f);
                if n % stride == 0 || n == n_max {
                    on_row(&self.acc)?;
                }
            }
            on_segment(self)?;
        }
        Ok(())
    }
}

/// Plain/weighted sums through `n_max` by the sequential stream.
pub fn correlate(pair: CorrKindPair, n_max: u64, delta: f64) -> Result<CorrAccumulator> {
    let mut state = CorrRunState::new(pair, delta)?;
    state.advance_to(n_max, n_max.max(1), DEFAULT_SEGMENT_CAPACITY, |_| Ok(()), |_| Ok(()))?;
    Ok(state.acc)
}

/// Parameters of the δ-weighted theorem-side sum over n ≤ N.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedSumParams {
    pub delta: f64,
    pub c: Option<f64>,
    pub t_height: Option<f64>,
    pub n_max: u64,
}

impl WeightedSumParams {
    pub fn new(delta: f64, n_max: u64) -> Result<Self> {
        let params = Self {
            delta,
            c: None,
            t_height: None,
            n_max,
        };
        params.validate()?;
        Ok(params)
    }

    /// N = ⌊T^{1−c}⌋ and, unless given, δ = 1/N.
    pub fn from_height(c: f64, t_height: f64, delta: Option<f64>) -> Result<Self> {
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::InvalidParameter(format!("c must lie in (0, 1), got {c}")));
        }
        if !(t_height > 0.0) || !t_height.is_finite() {
            return Err(Error::InvalidParameter(format!("T must be positive, got {t_height}")));
        }
        let n_max = t_height.powf(1.0 - c).floor();
        if n_max < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "T^(1-c) = {} gives an empty sum",
                t_height.powf(1.0 - c)
            )));
        }
        let n_max = n_max as u64;
        let delta = delta.unwrap_or(1.0 / n_max as f64);
        if delta > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "delta = {delta} is outside the delta <= 1 regime"
            )));
        }
        let params = Self {
            delta,
            c: Some(c),
            t_height: Some(t_height),
            n_max,
        };
        params.validate()?;
        Ok(params)
    }

    fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0) || !self.delta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "delta must be positive (zeta(1) is a pole), got {}",
                self.delta
            )));
        }
        if self.n_max == 0 {
            return Err(Error::InvalidParameter("n_max must be positive".into()));
        }
        Ok(())
    }
}

/// (1/ζ(1+δ)) ∑_{n≤N} f(n)F(n−1)/n^{1+δ}, with ζ(1+δ) supplied by the caller.
pub fn weighted_theorem_sum(pair: CorrKindPair, params: &WeightedSumParams, zeta_one_plus_delta: f64) -> Result<f64> {
    params.validate()?;
    if !zeta_one_plus_delta.is_finite() || zeta_one_plus_delta == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "zeta(1+delta) = {zeta_one_plus_delta} is not usable"
        )));
    }
    let acc = correlate(pair, params.n_max, params.delta)?;
    Ok(acc.s_weighted() / zeta_one_plus_delta)
}

/// As [`weighted_theorem_sum`], evaluating ζ(1+δ) itself.
pub fn weighted_theorem_sum_auto(pair: CorrKindPair, params: &WeightedSumParams) -> Result<f64> {
    params.validate()?;
    let z = zeta::zeta(
        num_complex::Complex64::new(1.0 + params.delta, 0.0),
        &EulerMaclaurinParams::default(),
    )?;
    weighted_theorem_sum(pair, params, z.re)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftedCorrParams {
    pub k: u64,
    pub n_max: u64,
}

/// ∑_{n=k+1}^{N} f(n)f(n−k)/n for f ∈ {μ, λ}.
pub fn shifted_autocorr(kind: ArithmeticFunctionKind, params: ShiftedCorrParams) -> Result<f64> {
    if !matches!(kind, ArithmeticFunctionKind::Mobius | ArithmeticFunctionKind::Liouville) {
        return Err(Error::InvalidParameter(format!(
            "shifted autocorrelation is defined for mobius and liouville, not {kind}"
        )));
    }
    let ShiftedCorrParams { k, n_max } = params;
    if k == 0 {
        return Err(Error::InvalidParameter("shift k must be at least 1".into()));
    }
    if k >= n_max {
        return Ok(0.0);
    }
    // ring[m % k] holds f(m) for the last k values of m
    let mut ring = vec![0i8; k as usize];
    let mut total = CompensatedSum::new();
    for segment in SegmentStream::new(1, n_max, kind, DEFAULT_SEGMENT_CAPACITY)? {
        for (n, f) in segment?.iter() {
            let slot = (n % k) as usize;
            if n > k {
                total.add(f64::from(f * ring[slot]) / n as f64);
            }
            ring[slot] = f;
        }
    }
    Ok(total.value())
}

#[cfg(test)]
mod tests {
    use super::CorrKindPair::*;
    use super::*;
    use crate::sieve::naive_value;

    /// Plain sum by brute force over naive_value, independent of the sieve.
    fn brute_plain(kind: ArithmeticFunctionKind, n_max: u64) -> f64 {
        let mut prefix = 0i64;
        let mut s = 0.0;
        for n in 1..=n_max {
            let f = naive_value(n, kind).unwrap();
            s += (i64::from(f) * prefix) as f64 / n as f64;
            prefix += i64::from(f);
        }
        s
    }

    #[test]
    fn first_terms() {
        let mut acc = CorrAccumulator::new(MobiusMertens, 0.0).unwrap();
        acc.accumulate(1, 0);
        assert_eq!(acc.s_plain(), 0.0);
        let through3 = correlate(MobiusMertens, 3, 0.0).unwrap();
        assert!((through3.s_plain() + 0.5).abs() < 1e-15);
        assert!((brute_plain(ArithmeticFunctionKind::Mobius, 3) + 0.5).abs() < 1e-15);
        let l3 = correlate(LiouvilleSummatory, 3, 0.0).unwrap();
        assert!((l3.s_plain() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn normalized_values() {
        let acc = correlate(MobiusMertens, 3, 0.0).unwrap();
        assert!((acc.normalized().unwrap() + 0.455_119_613_313_418_7).abs() < 1e-12);
        let one = correlate(MobiusMertens, 1, 0.0).unwrap();
        assert!(matches!(one.normalized(), Err(Error::Degenerate(_))));
    }

    #[test]
    fn matches_brute_force() {
        for pair in [MobiusMertens, LiouvilleSummatory] {
            let acc = correlate(pair, 3000, 0.0).unwrap();
            let brute = brute_plain(pair.function_kind(), 3000);
            assert!((acc.s_plain() - brute).abs() < 1e-11);
        }
    }

    #[test]
    fn zero_delta_weighted_is_plain_bitwise() {
        let acc = correlate(LiouvilleSummatory, 20_000, 0.0).unwrap();
        assert_eq!(acc.s_plain().to_bits(), acc.s_weighted().to_bits());
    }

    #[test]
    fn weighted_theorem_examples() {
        let p = WeightedSumParams::new(0.3, 1).unwrap();
        assert_eq!(weighted_theorem_sum(MobiusMertens, &p, 2.0).unwrap(), 0.0);

        let p = WeightedSumParams::new(1.0, 3).unwrap();
        let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
        let v = weighted_theorem_sum(MobiusMertens, &p, zeta2).unwrap();
        // (6/π²)(−1/4 + 0/9)
        assert!((v + 0.151_981_775_463_506_6).abs() < 1e-12);
        let auto = weighted_theorem_sum_auto(MobiusMertens, &p).unwrap();
        assert!((auto - v).abs() < 1e-12);
    }

    #[test]
    fn weighted_sum_vanishes_as_delta_shrinks() {
        let plain = correlate(MobiusMertens, 500, 0.0).unwrap().s_plain();
        for delta in [1e-3, 1e-5, 1e-7] {
            let p = WeightedSumParams::new(delta, 500).unwrap();
            let v = weighted_theorem_sum_auto(MobiusMertens, &p).unwrap();
            // 1/ζ(1+δ) = δ + O(δ²)
            assert!((v / (delta * plain) - 1.0).abs() < 20.0 * delta);
        }
    }

    #[test]
    fn rejects_nonpositive_delta() {
        assert!(WeightedSumParams::new(0.0, 10).is_err());
        assert!(WeightedSumParams::new(-1.0, 10).is_err());
        assert!(CorrAccumulator::new(MobiusMertens, -0.1).is_err());
    }

    #[test]
    fn from_height_defaults() {
        let p = WeightedSumParams::from_height(0.5, 1.0e6, None).unwrap();
        assert_eq!(p.n_max, 1000);
        assert!((p.delta - 1e-3).abs() < 1e-18);
        assert!(WeightedSumParams::from_height(1.0, 1e6, None).is_err());
        assert!(WeightedSumParams::from_height(0.5, 0.5, None).is_err());
        assert!(WeightedSumParams::from_height(0.5, 100.0, Some(2.0)).is_err());
    }

    #[test]
    fn shifted_examples() {
        let p = ShiftedCorrParams { k: 1, n_max: 3 };
        let m = shifted_autocorr(ArithmeticFunctionKind::Mobius, p).unwrap();
        let l = shifted_autocorr(ArithmeticFunctionKind::Liouville, p).unwrap();
        assert!((m + 1.0 / 6.0).abs() < 1e-15);
        assert!((l + 1.0 / 6.0).abs() < 1e-15);
        let empty = ShiftedCorrParams { k: 3, n_max: 3 };
        assert_eq!(shifted_autocorr(ArithmeticFunctionKind::Mobius, empty).unwrap(), 0.0);
        assert!(shifted_autocorr(ArithmeticFunctionKind::One, p).is_err());
        assert!(shifted_autocorr(ArithmeticFunctionKind::Mobius, ShiftedCorrParams { k: 0, n_max: 3 }).is_err());
    }

    #[test]
    fn shifted_sums_decompose_plain_sum() {
        let n_max = 300;
        for pair in [MobiusMertens, LiouvilleSummatory] {
            let total: f64 = (1..n_max)
                .map(|k| shifted_autocorr(pair.function_kind(), ShiftedCorrParams { k, n_max }).unwrap())
                .sum();
            let plain = correlate(pair, n_max, 0.0).unwrap().s_plain();
            assert!((total - plain).abs() < 1e-10);
        }
    }

    #[test]
    fn parallel_partials_agree_with_stream() {
        for pair in [MobiusMertens, LiouvilleSummatory] {
            let seq = correlate(pair, 100_000, 0.01).unwrap();
            let par = correlate_parallel(pair, 100_000, 0.01, 4096).unwrap();
            assert_eq!(par.n(), seq.n());
            assert!((par.s_plain() - seq.s_plain()).abs() < 1e-11);
            assert!((par.s_weighted() - seq.s_weighted()).abs() < 1e-11);
        }
    }

    #[test]
    fn stream_resume_is_bitwise() {
        let mut whole = CorrRunState::new(MobiusMertens, 0.001).unwrap();
        whole.advance_to(50_000, 1000, 4096, |_| Ok(()), |_| Ok(())).unwrap();

        let mut first = CorrRunState::new(MobiusMertens, 0.001).unwrap();
        first.advance_to(17_321, 1000, 4096, |_| Ok(()), |_| Ok(())).unwrap();
        let json = serde_json::to_string(&first).unwrap();
        let mut resumed: CorrRunState = serde_json::from_str(&json).unwrap();
        resumed.advance_to(50_000, 1000, 777, |_| Ok(()), |_| Ok(())).unwrap();
        assert_eq!(resumed, whole);
    }
}
