//! Compensated (Neumaier) summation for accumulations whose terms partially
//! cancel.

/// Neumaier's variant of Kahan summation. The compensation term is folded in
/// only when the sum is read, which keeps `add` branch-light.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancellation_that_plain_sum_loses() {
        // 1 + 1e100 + 1 - 1e100 = 2, but plain f64 summation gives 0.
        let terms = [1.0, 1e100, 1.0, -1e100];
        let plain: f64 = terms.iter().sum();
        let compensated: NeumaierSum = terms.iter().copied().collect();
        assert_eq!(plain, 0.0);
        assert_eq!(compensated.value(), 2.0);
    }

    #[test]
    fn harmonic_partial_sum_matches_reverse_order() {
        let mut fwd = NeumaierSum::new();
        for n in 1..=100_000u64 {
            fwd.add(1.0 / n as f64);
        }
        let mut rev = NeumaierSum::new();
        for n in (1..=100_000u64).rev() {
            rev.add(1.0 / n as f64);
        }
        assert!((fwd.value() - rev.value()).abs() < 1e-12);
    }

    #[test]
    fn empty_sum_is_zero() {
        assert_eq!(NeumaierSum::new().value(), 0.0);
    }
}
