//! Segmented generation of μ(n), λ(n), μ²(n) and streaming of the exact
//! summatory functions M(n) = ∑_{m≤n} μ(m) and L(n) = ∑_{m≤n} λ(m).
//!
//! A segment [lo, hi] is sieved against the base primes up to √hi. Each prime
//! power divisor flips a sign and multiplies a running "found part" of n;
//! whatever cofactor is left after all base primes is a single large prime.
//! Segments are independent, so ranges are sieved in parallel batches and
//! consumed in ascending order.

use std::collections::VecDeque;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of values per segment (2^22).
pub const DEFAULT_SEGMENT_CAPACITY: u64 = 1 << 22;

/// Largest argument accepted by [`naive_value`].
pub const NAIVE_LIMIT: u64 = 1_000_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArithmeticFunctionKind {
    Mobius,
    Liouville,
    MobiusSquared,
    One,
}

impl ArithmeticFunctionKind {
    pub const ALL: [ArithmeticFunctionKind; 4] = [
        ArithmeticFunctionKind::Mobius,
        ArithmeticFunctionKind::Liouville,
        ArithmeticFunctionKind::MobiusSquared,
        ArithmeticFunctionKind::One,
    ];

    /// Smallest and largest value the function can take.
    pub fn value_bounds(self) -> (i8, i8) {
        match self {
            ArithmeticFunctionKind::Mobius => (-1, 1),
            ArithmeticFunctionKind::Liouville => (-1, 1),
            ArithmeticFunctionKind::MobiusSquared => (0, 1),
            ArithmeticFunctionKind::One => (1, 1),
        }
    }

    pub fn admits(self, value: i8) -> bool {
        let (lo, hi) = self.value_bounds();
        match self {
            // λ never vanishes
            ArithmeticFunctionKind::Liouville => value == -1 || value == 1,
            _ => (lo..=hi).contains(&value),
        }
    }
}

impl fmt::Display for ArithmeticFunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ArithmeticFunctionKind::Mobius => "mobius",
            ArithmeticFunctionKind::Liouville => "liouville",
            ArithmeticFunctionKind::MobiusSquared => "mobius_squared",
            ArithmeticFunctionKind::One => "one",
        };
        f.write_str(name)
    }
}

/// Values of one arithmetic function over the contiguous block [lo, hi].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArithmeticSegment {
    lo: u64,
    hi: u64,
    kind: ArithmeticFunctionKind,
    values: Vec<i8>,
}

impl ArithmeticSegment {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn kind(&self) -> ArithmeticFunctionKind {
        self.kind
    }

    /// `values()[i]` is the function at `lo + i`.
    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: u64) -> Option<i8> {
        if n < self.lo || n > self.hi {
            return None;
        }
        Some(self.values[(n - self.lo) as usize])
    }

    /// `(n, f(n))` pairs in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, i8)> + '_ {
        (self.lo..=self.hi).zip(self.values.iter().copied())
    }
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Primes up to and including `limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Segment sieve with a fixed capacity and a cached base-prime table.
#[derive(Clone, Debug)]
pub struct SegmentSieve {
    capacity: u64,
    prime_limit: u64,
    primes: Vec<u64>,
}

impl Default for SegmentSieve {
    fn default() -> Self {
        Self::new(DEFAULT_SEGMENT_CAPACITY)
    }
}

impl SegmentSieve {
    pub fn new(capacity: u64) -> Self {
        Self {
            capacity: capacity.max(1),
            prime_limit: 1,
            primes: Vec::new(),
        }
    }

    /// Sieve whose base-prime table already covers every segment up to `n_max`.
    pub fn for_limit(n_max: u64, capacity: u64) -> Self {
        let mut sieve = Self::new(capacity);
        sieve.reserve_primes(n_max);
        sieve
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    fn reserve_primes(&mut self, hi: u64) {
        let need = isqrt(hi);
        if need > self.prime_limit {
            self.primes = primes_up_to(need);
            self.prime_limit = need;
        }
    }

    /// Values of `kind` on [lo, hi].
    pub fn sieve(&self, lo: u64, hi: u64, kind: ArithmeticFunctionKind) -> Result<ArithmeticSegment> {
        if lo == 0 || hi < lo {
            return Err(Error::Domain { lo, hi });
        }
        let len = hi - lo + 1;
        if len > self.capacity {
            return Err(Error::SegmentTooLarge {
                len,
                capacity: self.capacity,
            });
        }
        let values = match kind {
            ArithmeticFunctionKind::One => vec![1; len as usize],
            _ => {
                let local;
                let primes = if isqrt(hi) <= self.prime_limit {
                    &self.primes[..]
                } else {
                    local = primes_up_to(isqrt(hi));
                    &local[..]
                };
                sieve_signs(lo, hi, kind, primes)
            }
        };
        Ok(ArithmeticSegment { lo, hi, kind, values })
    }
}

fn first_multiple_at_least(d: u64, lo: u64) -> u64 {
    lo.div_ceil(d) * d
}

fn sieve_signs(lo: u64, hi: u64, kind: ArithmeticFunctionKind, primes: &[u64]) -> Vec<i8> {
    let len = (hi - lo + 1) as usize;
    let mut sign = vec![1i8; len];
    // product of the base-prime part of n found so far
    let mut found = vec![1u64; len];
    let squarefree_only = kind != ArithmeticFunctionKind::Liouville;

    for &p in primes {
        if p * p > hi {
            break;
        }
        let mut m = first_multiple_at_least(p, lo);
        while m <= hi {
            let i = (m - lo) as usize;
            sign[i] = -sign[i];
            found[i] *= p;
            m += p;
        }
        let mut pk = p * p;
        loop {
            let mut m = first_multiple_at_least(pk, lo);
            while m <= hi {
                let i = (m - lo) as usize;
                if squarefree_only {
                    sign[i] = 0;
                } else {
                    sign[i] = -sign[i];
                    found[i] *= p;
                }
                m += pk;
            }
            if squarefree_only {
                break;
            }
            match pk.checked_mul(p) {
                Some(next) if next <= hi => pk = next,
                _ => break,
            }
        }
    }

    for (i, s) in sign.iter_mut().enumerate() {
        if found[i] != lo + i as u64 {
            *s = -*s;
        }
    }
    if kind == ArithmeticFunctionKind::MobiusSquared {
        for s in &mut sign {
            *s = s.abs();
        }
    }
    sign
}

/// Values of `kind` on [lo, hi] with the default segment capacity.
pub fn sieve_segment(lo: u64, hi: u64, kind: ArithmeticFunctionKind) -> Result<ArithmeticSegment> {
    SegmentSieve::default().sieve(lo, hi, kind)
}

/// f(n) by trial-division factorization; an oracle independent of the sieve.
pub fn naive_value(n: u64, kind: ArithmeticFunctionKind) -> Result<i8> {
    if n == 0 || n > NAIVE_LIMIT {
        return Err(Error::Domain { lo: n, hi: n });
    }
    if kind == ArithmeticFunctionKind::One {
        return Ok(1);
    }
    let mut rest = n;
    let mut distinct = 0u32;
    let mut total = 0u32;
    let mut squarefree = true;
    let mut d = 2u64;
    while d * d <= rest {
        if rest % d == 0 {
            let mut e = 0;
            while rest % d == 0 {
                rest /= d;
                e += 1;
            }
            distinct += 1;
            total += e;
            squarefree &= e == 1;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        distinct += 1;
        total += 1;
    }
    let parity = |k: u32| if k % 2 == 0 { 1 } else { -1 };
    Ok(match kind {
        ArithmeticFunctionKind::Mobius if squarefree => parity(distinct),
        ArithmeticFunctionKind::Mobius => 0,
        ArithmeticFunctionKind::MobiusSquared => i8::from(squarefree),
        ArithmeticFunctionKind::Liouville => parity(total),
        ArithmeticFunctionKind::One => unreachable!(),
    })
}

/// Ascending stream of segments covering [lo, hi], sieved in parallel batches.
///
/// Segment boundaries depend only on `lo` and the sieve capacity, never on the
/// thread count, so consumers see the same segmentation on every run.
pub struct SegmentStream {
    sieve: SegmentSieve,
    kind: ArithmeticFunctionKind,
    next_lo: u64,
    hi: u64,
    batch: usize,
    ready: VecDeque<ArithmeticSegment>,
}

impl SegmentStream {
    pub fn new(lo: u64, hi: u64, kind: ArithmeticFunctionKind, capacity: u64) -> Result<Self> {
        if lo == 0 {
            return Err(Error::Domain { lo, hi });
        }
        Ok(Self {
            sieve: SegmentSieve::for_limit(hi, capacity),
            kind,
            next_lo: lo,
            hi,
            batch: rayon::current_num_threads().max(1),
            ready: VecDeque::new(),
        })
    }

    fn refill(&mut self) -> Result<()> {
        let cap = self.sieve.capacity();
        let mut ranges = Vec::with_capacity(self.batch);
        while ranges.len() < self.batch && self.next_lo <= self.hi {
            let seg_hi = (self.next_lo + cap - 1).min(self.hi);
            ranges.push((self.next_lo, seg_hi));
            self.next_lo = seg_hi + 1;
        }
        let kind = self.kind;
        let sieve = &self.sieve;
        let segments: Result<Vec<_>> = ranges
            .into_par_iter()
            .map(|(lo, hi)| sieve.sieve(lo, hi, kind))
            .collect();
        self.ready.extend(segments?);
        Ok(())
    }
}

impl Iterator for SegmentStream {
    type Item = Result<ArithmeticSegment>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.ready.is_empty() && self.next_lo <= self.hi {
            if let Err(e) = self.refill() {
                self.next_lo = self.hi + 1;
                return Some(Err(e));
            }
        }
        self.ready.pop_front().map(Ok)
    }
}

/// Exact prefix state (n, F(n)) of a summatory function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummatoryState {
    pub n: u64,
    pub value: i64,
    pub kind: ArithmeticFunctionKind,
}

impl SummatoryState {
    /// F(0) = 0.
    pub fn origin(kind: ArithmeticFunctionKind) -> Self {
        Self { n: 0, value: 0, kind }
    }

    /// Moves from F(n−1) to F(n) given f(n).
    #[inline]
    pub fn advance(&mut self, f_n: i8) -> Result<()> {
        self.n += 1;
        self.value = self
            .value
            .checked_add(i64::from(f_n))
            .ok_or(Error::Overflow(self.n))?;
        Ok(())
    }
}

/// Iterator over exact summatory values, emitting every `emit_stride`-th n and n_max.
pub struct SummatoryStream {
    segments: SegmentStream,
    current: Option<ArithmeticSegment>,
    state: SummatoryState,
    n_max: u64,
    stride: u64,
}

/// Streams (n, F(n)) for every n ≡ 0 (mod emit_stride) and for n = n_max.
pub fn summatory_stream(
    kind: ArithmeticFunctionKind,
    n_max: u64,
    emit_stride: u64,
) -> Result<SummatoryStream> {
    if n_max == 0 {
        return Err(Error::Domain { lo: 0, hi: 0 });
    }
    if emit_stride == 0 {
        return Err(Error::InvalidParameter("emit_stride must be positive".into()));
    }
    Ok(SummatoryStream {
        segments: SegmentStream::new(1, n_max, kind, DEFAULT_SEGMENT_CAPACITY)?,
        current: None,
        state: SummatoryState::origin(kind),
        n_max,
        stride: emit_stride,
    })
}

impl Iterator for SummatoryStream {
    type Item = Result<SummatoryState>;

    fn next(&mut self) -> Option<Self::Item> {
        while self.state.n < self.n_max {
            let n = self.state.n + 1;
            let need_segment = self.current.as_ref().map_or(true, |s| n > s.hi());
            if need_segment {
                match self.segments.next() {
                    Some(Ok(seg)) => self.current = Some(seg),
                    Some(Err(e)) => return Some(Err(e)),
                    None => return None,
                }
            }
            let seg = self.current.as_ref().expect("segment loaded");
            let f = seg.values()[(n - seg.lo()) as usize];
            if let Err(e) = self.state.advance(f) {
                return Some(Err(e));
            }
            if n % self.stride == 0 || n == self.n_max {
                return Some(Ok(self.state));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::ArithmeticFunctionKind::*;
    use super::*;

    #[test]
    fn small_tables() {
        assert_eq!(sieve_segment(1, 10, Mobius).unwrap().values(), &[1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
        assert_eq!(sieve_segment(1, 8, Liouville).unwrap().values(), &[1, -1, -1, 1, -1, 1, -1, -1]);
        assert_eq!(sieve_segment(1, 8, MobiusSquared).unwrap().values(), &[1, 1, 1, 0, 1, 1, 1, 0]);
        assert!(sieve_segment(5, 9, One).unwrap().values().iter().all(|&v| v == 1));
    }

    #[test]
    fn naive_examples() {
        assert_eq!(naive_value(12, Mobius).unwrap(), 0);
        assert_eq!(naive_value(30, Mobius).unwrap(), -1);
        assert_eq!(naive_value(12, Liouville).unwrap(), -1);
        assert_eq!(naive_value(1, Liouville).unwrap(), 1);
        // 999983 is prime, 10^12 = 2^12 5^12
        assert_eq!(naive_value(999_983, Mobius).unwrap(), -1);
        assert_eq!(naive_value(NAIVE_LIMIT, Liouville).unwrap(), 1);
        assert!(naive_value(0, Mobius).is_err());
        assert!(naive_value(NAIVE_LIMIT + 1, Mobius).is_err());
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(matches!(sieve_segment(0, 10, Mobius), Err(Error::Domain { .. })));
        assert!(matches!(sieve_segment(10, 9, Mobius), Err(Error::Domain { .. })));
        let small = SegmentSieve::new(16);
        assert!(matches!(
            small.sieve(1, 17, Mobius),
            Err(Error::SegmentTooLarge { len: 17, capacity: 16 })
        ));
        assert!(small.sieve(1, 16, Mobius).is_ok());
    }

    #[test]
    fn offset_segments_match_naive() {
        let sieve = SegmentSieve::new(1 << 12);
        for &lo in &[1u64, 2, 97, 1_000_000, 999_999_000_000] {
            for kind in ArithmeticFunctionKind::ALL {
                let seg = sieve.sieve(lo, lo + 999, kind).unwrap();
                for (n, v) in seg.iter() {
                    assert_eq!(v, naive_value(n, kind).unwrap(), "n = {n}, {kind}");
                }
            }
        }
    }

    #[test]
    fn mobius_squared_is_abs_mobius() {
        let mu = sieve_segment(1, 50_000, Mobius).unwrap();
        let mu2 = sieve_segment(1, 50_000, MobiusSquared).unwrap();
        for (a, b) in mu.values().iter().zip(mu2.values()) {
            assert_eq!(a.abs(), *b);
        }
    }

    #[test]
    fn summatory_examples() {
        let f: Vec<i64> = summatory_stream(Mobius, 5, 1)
            .unwrap()
            .map(|s| s.unwrap().value)
            .collect();
        assert_eq!(f, vec![1, 0, -1, -1, -2]);

        let last: Vec<_> = summatory_stream(Mobius, 10, 10).unwrap().map(|s| s.unwrap()).collect();
        assert_eq!(last, vec![SummatoryState { n: 10, value: -1, kind: Mobius }]);

        let last: Vec<_> = summatory_stream(Liouville, 10, 10).unwrap().map(|s| s.unwrap()).collect();
        assert_eq!(last[0].value, 0);

        // n_max not a multiple of the stride is still emitted
        let ns: Vec<u64> = summatory_stream(Mobius, 25, 10).unwrap().map(|s| s.unwrap().n).collect();
        assert_eq!(ns, vec![10, 20, 25]);
    }

    #[test]
    fn segment_stream_covers_range_in_order() {
        let segs: Vec<_> = SegmentStream::new(3, 1000, Liouville, 64)
            .unwrap()
            .map(|s| s.unwrap())
            .collect();
        assert_eq!(segs.first().unwrap().lo(), 3);
        assert_eq!(segs.last().unwrap().hi(), 1000);
        for w in segs.windows(2) {
            assert_eq!(w[0].hi() + 1, w[1].lo());
        }
    }

    #[test]
    fn summatory_crosses_segment_boundaries() {
        // 3 segments of the default capacity would be slow in debug; use the
        // stream machinery with a tiny capacity directly.
        let mut state = SummatoryState::origin(Mobius);
        for seg in SegmentStream::new(1, 10_000, Mobius, 333).unwrap() {
            for (_, v) in seg.unwrap().iter() {
                state.advance(v).unwrap();
            }
        }
        // M(10^4) = -23
        assert_eq!(state.value, -23);
    }

    #[test]
    fn isqrt_exact() {
        for n in [0u64, 1, 3, 4, 15, 16, 17, 1 << 40, u64::MAX] {
            let r = isqrt(n);
            assert!(r * r <= n);
            assert!((r + 1).checked_mul(r + 1).map_or(true, |sq| sq > n));
        }
    }
}
