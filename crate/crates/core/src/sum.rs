use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

/// Neumaier-compensated running sum.
///
/// `compensation` carries the low-order bits lost by each addition; the
/// represented value is `sum + compensation`. Both fields serialize exactly so
/// a checkpointed sum resumes bitwise.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub const fn new() -> Self {
        Self {
            sum: 0.0,
            compensation: 0.0,
        }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another compensated sum in, keeping both error terms.
    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.compensation += other.compensation;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl AddAssign<f64> for CompensatedSum {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_bits() {
        let mut s = CompensatedSum::new();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s += x;
        }
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn harmonic_number() {
        // H_{10^6} = 14.392726722865723631381127…
        let comp: CompensatedSum = (1..=1_000_000u32).map(|k| 1.0 / k as f64).collect();
        assert!((comp.value() - 14.392_726_722_865_724).abs() < 4e-15);
    }

    #[test]
    fn merge_matches_sequential() {
        let xs: Vec<f64> = (1..2000).map(|k| ((k * 7919) % 113) as f64 / k as f64 - 0.3).collect();
        let whole: CompensatedSum = xs.iter().copied().collect();
        let mut left: CompensatedSum = xs[..700].iter().copied().collect();
        let right: CompensatedSum = xs[700..].iter().copied().collect();
        left.merge(&right);
        assert!((left.value() - whole.value()).abs() < 1e-13);
    }
}
