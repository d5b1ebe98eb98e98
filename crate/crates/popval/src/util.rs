//! Small numeric utilities shared across modules.

/// Compensated (Kahan) summation accumulator.
///
/// Used wherever many same-sign probabilities are added (binomial tails,
/// quadrature sums, Monte Carlo summaries) so accumulated rounding stays at
/// a few ulp instead of growing with the term count.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add(&mut self, value: f64) {
        let y = value - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum
    }
}
