//! Exact operating characteristics for two-arm binomial designs.
//!
//! For a design with per-arm size `n`, both the frequentist rule
//! (reject when the one-sided p-value falls below `alpha`, i.e. `Z > z_alpha`)
//! and the Bayesian rule (reject when `Pr(p_E > p_S | y_E, y_S) > eta`) are
//! deterministic functions of the outcome pair `(y_E, y_S)`.  Type I error
//! and power therefore have exact finite expressions: double sums of binomial
//! probabilities over the rejection region,
//!
//! ```text
//! type1 = sum_{y_E} sum_{y_S} P(y_E | p_S) P(y_S | p_S) I(reject),
//! power = sum_{y_E} sum_{y_S} P(y_E | p_E) P(y_S | p_S) I(reject).
//! ```
//!
//! This module enumerates those sums, computes the classical sample-size
//! formula, sweeps exact power curves over a grid of alternatives, and
//! calibrates the posterior threshold `eta` so the exact Bayesian type I
//! error stays at or below a target.
//!
//! The expensive part is the posterior probability at each of the
//! `(n+1)^2` outcome pairs; these are cached in an [`OutcomeGrid`] that both
//! error sums, every point of a power sweep, and every trial threshold of a
//! calibration reuse.  Grid construction parallelizes over `y_E` stripes and
//! every reduction runs in a fixed serial order, so results are bit-identical
//! regardless of how many worker threads run.

use rayon::prelude::*;

use crate::binary::{beta_posterior, p_one_sided, two_sample_z, BetaParams, TwoArmBinomialData};
use crate::dist::{beta_cdf, beta_quantile, binomial_pmf_all, std_normal_quantile};
use crate::error::{domain, invariant, non_convergence, Error, Result};
use crate::quad::{gauss_legendre, QuadratureRule, DEFAULT_QUAD_ORDER};
use crate::util::KahanSum;

/// Which decision rule an operating-characteristic evaluation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionRule {
    /// Reject when the one-sided p-value is below `alpha`.
    Frequentist,
    /// Reject when the posterior probability of superiority exceeds `eta`.
    Bayesian,
}

impl std::fmt::Display for DecisionRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecisionRule::Frequentist => write!(f, "frequentist"),
            DecisionRule::Bayesian => write!(f, "bayesian"),
        }
    }
}

impl std::str::FromStr for DecisionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "frequentist" | "freq" => Ok(DecisionRule::Frequentist),
            "bayesian" | "bayes" => Ok(DecisionRule::Bayesian),
            other => Err(domain(format!(
                "unknown decision rule '{other}' (expected 'frequentist' or 'bayesian')"
            ))),
        }
    }
}

/// A two-arm superiority design: error levels, hypothesised response rates,
/// optional per-arm size, analysis priors, and the posterior threshold.
#[derive(Debug, Clone)]
pub struct DesignSpec {
    /// One-sided significance level of the frequentist rule.
    pub alpha: f64,
    /// Desired power at the design alternative.
    pub target_power: f64,
    /// Standard-of-care response rate.
    pub p_s: f64,
    /// Experimental response rate under the design alternative.
    pub p_e_alt: f64,
    /// Treatment difference `p_e_alt - p_s`.
    pub delta: f64,
    /// Per-arm sample size; `None` means "compute from the formula".
    pub n: Option<u64>,
    /// Analysis prior for the experimental arm.
    pub prior_e: BetaParams,
    /// Analysis prior for the standard arm.
    pub prior_s: BetaParams,
    /// Posterior-probability threshold of the Bayesian rule.
    pub eta: f64,
}

impl DesignSpec {
    /// Builds a design with default priors (Beta(0.2, 0.8) on both arms) and
    /// the default threshold `eta = 1 - alpha`, which makes the Bayesian rule
    /// the posterior mirror of the level-`alpha` test.
    pub fn new(alpha: f64, target_power: f64, p_s: f64, p_e_alt: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(domain(format!("alpha must be in (0, 1), got {alpha}")));
        }
        if !(target_power > 0.0 && target_power < 1.0) {
            return Err(domain(format!(
                "target power must be in (0, 1), got {target_power}"
            )));
        }
        if !(p_s > 0.0 && p_e_alt > p_s && p_e_alt < 1.0) {
            return Err(domain(format!(
                "response rates must satisfy 0 < p_S < p_E < 1, got p_S={p_s}, p_E={p_e_alt}"
            )));
        }
        Ok(Self {
            alpha,
            target_power,
            p_s,
            p_e_alt,
            delta: p_e_alt - p_s,
            n: None,
            prior_e: BetaParams::default_two_sample(),
            prior_s: BetaParams::default_two_sample(),
            eta: 1.0 - alpha,
        })
    }

    /// Fixes the per-arm sample size instead of computing it.
    pub fn with_n(mut self, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(domain("per-arm sample size must be at least 1"));
        }
        self.n = Some(n);
        Ok(self)
    }

    /// Overrides the posterior threshold of the Bayesian rule.
    pub fn with_eta(mut self, eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta < 1.0) {
            return Err(domain(format!("eta must be in (0, 1), got {eta}")));
        }
        self.eta = eta;
        Ok(self)
    }

    /// Overrides the analysis priors.
    pub fn with_priors(mut self, prior_e: BetaParams, prior_s: BetaParams) -> Self {
        self.prior_e = prior_e;
        self.prior_s = prior_s;
        self
    }

    /// The per-arm sample size: the fixed value if one was given, otherwise
    /// the formula value for (`alpha`, `target_power`, `p_s`, `p_e_alt`).
    pub fn resolve_n(&self) -> Result<u64> {
        match self.n {
            Some(n) => Ok(n),
            None => sample_size(self.alpha, self.target_power, self.p_s, self.p_e_alt),
        }
    }
}

/// Exact error probabilities of a decision rule under a design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRates {
    /// Probability of rejecting when `p_E = p_S` (false positive).
    pub type1: f64,
    /// Probability of *not* rejecting at the design alternative.
    pub type2: f64,
}

impl ErrorRates {
    /// Power at the design alternative, `1 - type2`.
    pub fn power(&self) -> f64 {
        1.0 - self.type2
    }
}

fn check_rate(value: f64, what: &str) -> Result<f64> {
    if !(0.0..=1.0).contains(&value) {
        return Err(invariant(format!("{what} = {value} lies outside [0, 1]")));
    }
    Ok(value)
}

/// `(z_alpha + z_beta)^2 / delta^2 * variance_term`, the normal-approximation
/// sample-size formula before rounding.
fn sample_size_raw(z_alpha: f64, z_beta: f64, delta: f64, variance_term: f64) -> f64 {
    let z_sum = z_alpha + z_beta;
    z_sum * z_sum / (delta * delta) * variance_term
}

/// Per-arm sample size for a one-sided level-`alpha` comparison of two
/// proportions with the given target power:
///
/// ```text
/// n = ceil( (z_alpha + z_beta)^2 / delta^2 * [p_E(1-p_E) + p_S(1-p_S)] )
/// ```
///
/// Rounding is upward, the conservative choice.  For example, a design with
/// `alpha = 0.10`, 80% power, `p_S = 0.2`, and `p_E = 0.3` needs 167 patients
/// per arm.
pub fn sample_size(alpha: f64, target_power: f64, p_s: f64, p_e_alt: f64) -> Result<u64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain(format!("alpha must be in (0, 1), got {alpha}")));
    }
    if !(target_power > 0.0 && target_power < 1.0) {
        return Err(domain(format!(
            "target power must be in (0, 1), got {target_power}"
        )));
    }
    if !(p_s > 0.0 && p_e_alt > p_s && p_e_alt < 1.0) {
        return Err(domain(format!(
            "response rates must satisfy 0 < p_S < p_E < 1, got p_S={p_s}, p_E={p_e_alt}"
        )));
    }
    let z_alpha = std_normal_quantile(1.0 - alpha)?;
    let z_beta = std_normal_quantile(target_power)?;
    let variance_term = p_e_alt * (1.0 - p_e_alt) + p_s * (1.0 - p_s);
    let raw = sample_size_raw(z_alpha, z_beta, p_e_alt - p_s, variance_term);
    Ok(raw.ceil() as u64)
}

/// Cached per-outcome statistics for every `(y_E, y_S)` pair of a design
/// with per-arm size `n`.
///
/// `p_one` holds the frequentist one-sided p-value and `pop_superiority` the
/// posterior probability `Pr(p_E > p_S | y_E, y_S)`, both stored row-major
/// with `y_E` as the row index.  Building the grid costs `(n+1)^2` quadrature
/// evaluations; every error-rate sum, power-curve point, and threshold trial
/// afterwards is a cheap weighted scan.
#[derive(Debug, Clone)]
pub struct OutcomeGrid {
    /// Per-arm sample size the grid was built for.
    pub n: u64,
    /// One-sided p-values, indexed by `y_e * (n + 1) + y_s`.
    pub p_one: Vec<f64>,
    /// `Pr(p_E > p_S | data)`, same indexing.
    pub pop_superiority: Vec<f64>,
}

impl OutcomeGrid {
    /// Enumerates all `(n+1)^2` outcome pairs under the given analysis
    /// priors.
    ///
    /// The standard-arm quantiles at the quadrature nodes depend only on
    /// `y_S`, so they are tabulated once; each `y_E` stripe then reuses the
    /// table.  Stripes are computed in parallel and written in index order,
    /// making the grid bit-identical for any worker count.
    pub fn build(
        n: u64,
        prior_e: &BetaParams,
        prior_s: &BetaParams,
        rule: &QuadratureRule,
    ) -> Result<Self> {
        if n == 0 {
            return Err(domain("per-arm sample size must be at least 1"));
        }
        let len = (n + 1) as usize;
        let nodes = rule.mapped(0.0, 1.0);

        // Standard-arm quantile table: Q_S(v_j) for each y_s and node j.
        let quantiles: Vec<Vec<f64>> = (0..len)
            .into_par_iter()
            .map(|y_s| -> Result<Vec<f64>> {
                let post_s = beta_posterior(prior_s, y_s as u64, n)?;
                nodes
                    .iter()
                    .map(|&(v, _)| beta_quantile(v, post_s.a, post_s.b))
                    .collect()
            })
            .collect::<Result<_>>()?;

        // y_E stripes: p-value and posterior superiority against every y_s.
        let stripes: Vec<(Vec<f64>, Vec<f64>)> = (0..len)
            .into_par_iter()
            .map(|y_e| -> Result<(Vec<f64>, Vec<f64>)> {
                let post_e = beta_posterior(prior_e, y_e as u64, n)?;
                let mut p_row = Vec::with_capacity(len);
                let mut pop_row = Vec::with_capacity(len);
                for y_s in 0..len {
                    let data = TwoArmBinomialData::new(n, y_e as u64, y_s as u64)?;
                    p_row.push(one_sided_p(&data)?);
                    // Same accumulation as `prob_pe_greater_ps`, with the
                    // quantile table shared across the stripe.
                    let mut acc = KahanSum::new();
                    for (&(_, w), &q) in nodes.iter().zip(&quantiles[y_s]) {
                        acc.add(w * beta_cdf(q, post_e.a, post_e.b)?);
                    }
                    pop_row.push((1.0 - acc.value()).clamp(0.0, 1.0));
                }
                Ok((p_row, pop_row))
            })
            .collect::<Result<_>>()?;

        let mut p_one = Vec::with_capacity(len * len);
        let mut pop_superiority = Vec::with_capacity(len * len);
        for (p_row, pop_row) in stripes {
            p_one.extend(p_row);
            pop_superiority.extend(pop_row);
        }
        Ok(Self {
            n,
            p_one,
            pop_superiority,
        })
    }

    fn side(&self) -> usize {
        (self.n + 1) as usize
    }

    /// Flat index of the outcome pair `(y_e, y_s)`.
    pub fn idx(&self, y_e: u64, y_s: u64) -> usize {
        y_e as usize * self.side() + y_s as usize
    }

    /// The rejection indicator for every outcome pair under one rule,
    /// row-major with `y_E` as the row index.
    pub fn rejection_region(&self, design: &DesignSpec, rule: DecisionRule) -> Vec<bool> {
        match rule {
            DecisionRule::Frequentist => self.p_one.iter().map(|&p| p < design.alpha).collect(),
            DecisionRule::Bayesian => self
                .pop_superiority
                .iter()
                .map(|&pop| pop > design.eta)
                .collect(),
        }
    }
}

/// One-sided p-value with the corner conventions of the two-sample report:
/// equal degenerate outcomes carry no evidence (p = 1/2) and divergent
/// statistics give the limiting values 0 and 1.
fn one_sided_p(data: &TwoArmBinomialData) -> Result<f64> {
    match two_sample_z(data) {
        Ok(z) if z == f64::INFINITY => Ok(0.0),
        Ok(z) if z == f64::NEG_INFINITY => Ok(1.0),
        Ok(z) => p_one_sided(z),
        Err(Error::Degenerate(_)) => Ok(0.5),
        Err(e) => Err(e),
    }
}

/// Sums `w_e[y_e] * w_s[y_s]` over the region, stripe by stripe in `y_E`
/// order with compensated accumulation, so the result does not depend on
/// thread scheduling.
fn weighted_region_sum(region: &[bool], w_e: &[f64], w_s: &[f64]) -> f64 {
    let side = w_s.len();
    let mut outer = KahanSum::new();
    for (y_e, &we) in w_e.iter().enumerate() {
        let mut inner = KahanSum::new();
        for (y_s, &ws) in w_s.iter().enumerate() {
            if region[y_e * side + y_s] {
                inner.add(ws);
            }
        }
        outer.add(we * inner.value());
    }
    outer.value()
}

/// Total joint mass `sum_e sum_s w_e[y_e] w_s[y_s]`, accumulated in the same
/// order as the region sums.
fn total_joint_mass(w_e: &[f64], w_s: &[f64]) -> f64 {
    let mut outer = KahanSum::new();
    for &we in w_e {
        let mut inner = KahanSum::new();
        for &ws in w_s {
            inner.add(ws);
        }
        outer.add(we * inner.value());
    }
    outer.value()
}

/// Exact error rates reusing a prebuilt outcome grid.
///
/// `grid` must have been built with the design's priors and per-arm size;
/// the sums are then exact enumerations, not simulations.  The joint null
/// pmf is verified to total 1 within 1e-10 as a guard on the binomial
/// weights.
pub fn exact_error_rates_with_grid(
    design: &DesignSpec,
    rule: DecisionRule,
    grid: &OutcomeGrid,
) -> Result<ErrorRates> {
    let n = grid.n;
    if design.n.is_some_and(|dn| dn != n) {
        return Err(domain(format!(
            "grid was built for n={n} but the design fixes n={}",
            design.n.unwrap()
        )));
    }
    let w_null = binomial_pmf_all(n, design.p_s)?;
    let w_alt = binomial_pmf_all(n, design.p_e_alt)?;
    let total = total_joint_mass(&w_null, &w_null);
    if (total - 1.0).abs() > 1e-10 {
        return Err(invariant(format!(
            "joint null pmf sums to {total}, off unity by more than 1e-10"
        )));
    }
    let region = grid.rejection_region(design, rule);
    let type1 = check_rate(weighted_region_sum(&region, &w_null, &w_null), "type1")?;
    let power = check_rate(weighted_region_sum(&region, &w_alt, &w_null), "power")?;
    Ok(ErrorRates {
        type1,
        type2: 1.0 - power,
    })
}

/// Exact type I error and power of one decision rule under a design,
/// enumerating all `(n+1)^2` outcome pairs.
///
/// Builds a fresh outcome grid with the default quadrature order; when
/// evaluating several rules, thresholds, or alternatives for one design,
/// build the grid once and use [`exact_error_rates_with_grid`] and friends.
pub fn exact_error_rates(design: &DesignSpec, rule: DecisionRule) -> Result<ErrorRates> {
    let n = design.resolve_n()?;
    let quad = gauss_legendre(DEFAULT_QUAD_ORDER)?;
    let grid = OutcomeGrid::build(n, &design.prior_e, &design.prior_s, &quad)?;
    exact_error_rates_with_grid(design, rule, &grid)
}

/// The default alternative grid for power curves:
/// `p_S, p_S + 0.01, ..., p_S + 2 delta`, truncated below 1.
pub fn default_pe_grid(design: &DesignSpec) -> Vec<f64> {
    let mut grid = Vec::new();
    let mut k = 0u32;
    loop {
        let p_e = design.p_s + 0.01 * k as f64;
        if p_e > design.p_s + 2.0 * design.delta + 1e-12 || p_e >= 1.0 {
            break;
        }
        grid.push(p_e);
        k += 1;
    }
    grid
}

/// Exact power at each alternative in `pe_grid`, reusing a prebuilt grid.
///
/// The rejection region does not depend on the alternative, so each point
/// costs one weighted scan.  The first element of each pair is the
/// alternative response rate; at `p_E = p_S` the value *is* the type I
/// error.
pub fn power_curve_with_grid(
    design: &DesignSpec,
    rule: DecisionRule,
    pe_grid: &[f64],
    grid: &OutcomeGrid,
) -> Result<Vec<(f64, f64)>> {
    let n = grid.n;
    if design.n.is_some_and(|dn| dn != n) {
        return Err(domain(format!(
            "grid was built for n={n} but the design fixes n={}",
            design.n.unwrap()
        )));
    }
    let w_null = binomial_pmf_all(n, design.p_s)?;
    let region = grid.rejection_region(design, rule);
    let mut curve = Vec::with_capacity(pe_grid.len());
    for &p_e in pe_grid {
        if !(p_e > 0.0 && p_e < 1.0) {
            return Err(domain(format!(
                "power-curve alternative p_E={p_e} must lie in (0, 1)"
            )));
        }
        let w_e = binomial_pmf_all(n, p_e)?;
        let power = check_rate(weighted_region_sum(&region, &w_e, &w_null), "power")?;
        curve.push((p_e, power));
    }
    Ok(curve)
}

/// Exact power curve over `pe_grid` (builds the outcome grid internally).
pub fn power_curve(
    design: &DesignSpec,
    rule: DecisionRule,
    pe_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let n = design.resolve_n()?;
    let quad = gauss_legendre(DEFAULT_QUAD_ORDER)?;
    let grid = OutcomeGrid::build(n, &design.prior_e, &design.prior_s, &quad)?;
    power_curve_with_grid(design, rule, pe_grid, &grid)
}

/// Result of calibrating the posterior threshold `eta`.
#[derive(Debug, Clone, Copy)]
pub struct EtaCalibration {
    /// The calibrated threshold.
    pub eta: f64,
    /// Exact Bayesian type I error at that threshold (at most the target).
    pub achieved_type1: f64,
    /// Spacing of the threshold grid that was searched.
    pub grid_step: f64,
}

/// Calibrates `eta` on a uniform grid, reusing a prebuilt outcome grid.
///
/// Because the posterior threshold acts on a finite set of outcomes, the
/// exact type I error is a step function of `eta` and cannot in general hit
/// the target exactly; the calibration returns the *smallest* grid threshold
/// whose exact type I error does not exceed the target — the least
/// conservative calibrated rule — together with the achieved level.
pub fn calibrate_eta_with_grid(
    design: &DesignSpec,
    target_type1: f64,
    grid_step: Option<f64>,
    grid: &OutcomeGrid,
) -> Result<EtaCalibration> {
    if !(target_type1 > 0.0 && target_type1 < 1.0) {
        return Err(domain(format!(
            "target type I error must be in (0, 1), got {target_type1}"
        )));
    }
    let step = grid_step.unwrap_or(1e-4);
    if !(step > 0.0 && step < 0.5) {
        return Err(domain(format!(
            "calibration grid step must be in (0, 0.5), got {step}"
        )));
    }
    let n = grid.n;
    if design.n.is_some_and(|dn| dn != n) {
        return Err(domain(format!(
            "grid was built for n={n} but the design fixes n={}",
            design.n.unwrap()
        )));
    }
    let w_null = binomial_pmf_all(n, design.p_s)?;
    let side = w_null.len();

    // Joint null weight of each outcome pair, keyed by its posterior
    // superiority, sorted descending.  The exact type I error at threshold
    // eta is then the prefix mass of entries with superiority > eta.
    let mut mass: Vec<(f64, f64)> = Vec::with_capacity(side * side);
    for y_e in 0..side {
        for y_s in 0..side {
            mass.push((
                grid.pop_superiority[y_e * side + y_s],
                w_null[y_e] * w_null[y_s],
            ));
        }
    }
    mass.sort_unstable_by(|a, b| b.0.partial_cmp(&a.0).expect("superiority is never NaN"));
    let mut prefix = Vec::with_capacity(mass.len() + 1);
    let mut acc = KahanSum::new();
    prefix.push(0.0);
    for &(_, w) in &mass {
        acc.add(w);
        prefix.push(acc.value());
    }
    let type1_at = |eta: f64| -> f64 {
        // Number of outcomes with superiority strictly above eta.
        let count = mass.partition_point(|&(pop, _)| pop > eta);
        prefix[count]
    };

    // Grid thresholds k*step for k = 1 .. ceil(1/step)-1; the exact type I
    // error is nonincreasing in eta, so binary-search the first admissible k.
    let k_max = (1.0 / step).ceil() as u64 - 1;
    let (mut lo, mut hi) = (1u64, k_max);
    if type1_at(k_max as f64 * step) > target_type1 {
        return Err(non_convergence(format!(
            "no threshold on the step-{step} grid achieves type I error <= {target_type1}"
        )));
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if type1_at(mid as f64 * step) <= target_type1 {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let eta = lo as f64 * step;
    Ok(EtaCalibration {
        eta,
        achieved_type1: check_rate(type1_at(eta), "achieved type1")?,
        grid_step: step,
    })
}

/// Calibrates the Bayesian threshold for a design (builds the outcome grid
/// internally; default threshold grid step 1e-4).
pub fn calibrate_eta(
    design: &DesignSpec,
    target_type1: f64,
    grid_step: Option<f64>,
) -> Result<EtaCalibration> {
    let n = design.resolve_n()?;
    let quad = gauss_legendre(DEFAULT_QUAD_ORDER)?;
    let grid = OutcomeGrid::build(n, &design.prior_e, &design.prior_s, &quad)?;
    calibrate_eta_with_grid(design, target_type1, grid_step, &grid)
}

/// Renders power curves as CSV with columns `p_e,rule,type1_or_power`.
///
/// The value column holds the exact rejection probability at each
/// alternative; the row at `p_E = p_S` (when present) is the type I error.
/// Values are written with full round-trip precision.
pub fn power_curve_csv(curves: &[(DecisionRule, Vec<(f64, f64)>)]) -> String {
    let mut out = String::from("p_e,rule,type1_or_power\n");
    for (rule, curve) in curves {
        for &(p_e, value) in curve {
            out.push_str(&format!("{:.16e},{},{:.16e}\n", p_e, rule, value));
        }
    }
    out
}
