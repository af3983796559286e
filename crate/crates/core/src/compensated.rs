//! Neumaier (improved Kahan) summation.

use std::iter::Sum;
use std::ops::AddAssign;

/// Running sum with a separate compensation term.
///
/// The represented value is `sum + comp`. Merging two accumulators is
/// associative up to the compensation precision, which is what the block
/// reductions rely on.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub const ZERO: NeumaierSum = NeumaierSum { sum: 0.0, comp: 0.0 };

    pub fn new(value: f64) -> Self {
        NeumaierSum { sum: value, comp: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Adds another accumulator, keeping both of its components.
    #[inline]
    pub fn merge(&mut self, other: NeumaierSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// The (high, low) pair. `high + low` is the value, `low` is what a
    /// plain sum would have lost.
    pub fn parts(&self) -> (f64, f64) {
        (self.sum, self.comp)
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl Sum<f64> for NeumaierSum {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::ZERO;
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

impl Sum<NeumaierSum> for NeumaierSum {
    fn sum<I: Iterator<Item = NeumaierSum>>(iter: I) -> Self {
        let mut acc = NeumaierSum::ZERO;
        for v in iter {
            acc.merge(v);
        }
        acc
    }
}

/// Compensated sum of a slice.
pub fn sum(values: &[f64]) -> f64 {
    values.iter().copied().sum::<NeumaierSum>().value()
}
