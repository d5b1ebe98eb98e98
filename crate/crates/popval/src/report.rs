//! The paired frequentist/Bayesian result record shared by every test
//! family in this crate.

use crate::error::{Error, Result};

/// Side-by-side results of one frequentist test and its Bayesian
/// counterpart on a single dataset.
///
/// `statistic` is the Z or T value when the test has one (absent for exact
/// tests). `p_one`/`p_two` are the one- and two-sided p-values;
/// `pop_one`/`pop_two` the corresponding posterior probabilities of the null
/// hypothesis. `degenerate` marks data from which no evidence can be
/// extracted (e.g. both arms all-responders), reported with the neutral
/// convention statistic = 0, p₁ = ½ rather than as an error so that grid
/// enumerations stay total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestReport {
    pub statistic: Option<f64>,
    pub p_one: f64,
    pub p_two: f64,
    pub pop_one: f64,
    pub pop_two: f64,
    pub degenerate: bool,
}

impl TestReport {
    /// Check the structural invariants: every probability lies in [0, 1]
    /// and the statistic, when present, is not NaN (signed infinity is
    /// legitimate for boundary data such as y_E = n, y_S = 0).
    pub fn validate(&self) -> Result<()> {
        let probs = [
            ("p_one", self.p_one),
            ("p_two", self.p_two),
            ("pop_one", self.pop_one),
            ("pop_two", self.pop_two),
        ];
        for (name, v) in probs {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Invariant(format!(
                    "{name} = {v} is outside [0,1]"
                )));
            }
        }
        if let Some(s) = self.statistic {
            if s.is_nan() {
                return Err(Error::Invariant("statistic is NaN".into()));
            }
        }
        Ok(())
    }
}

/// Two-sided fold of a one-sided probability: 2·min(q, 1−q).
///
/// Applies identically to p-values (p₂ from p₁) and posterior probabilities
/// (PoP₂ from PoP₁), which is the algebraic heart of the p ↔ PoP
/// correspondence this crate demonstrates.
pub fn two_sided_from_one_sided(q: f64) -> f64 {
    2.0 * q.min(1.0 - q)
}
