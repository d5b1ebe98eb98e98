//! Frequentist and Bayesian tests for one- and two-sample binomial data.
//!
//! The two-sample problem compares responder counts y_E (experimental) and
//! y_S (standard) out of n per arm: the frequentist side is the pooled-free
//! Z statistic with its normal p-values, the Bayesian side the posterior
//! probability Pr(p_E ≤ p_S | data) under independent Beta priors. The
//! one-sample problem tests a response rate against a fixed reference p₀
//! with the exact binomial tail and the Beta posterior CDF.

use crate::dist::{
    beta_cdf, beta_quantile, binomial_lower_tail, binomial_pmf, binomial_upper_tail,
    std_normal_cdf,
};
use crate::error::{degenerate, domain, Result};
use crate::quad::QuadratureRule;
use crate::report::{two_sided_from_one_sided, TestReport};
use crate::util::KahanSum;

/// Observed two-arm binomial data: `n` subjects per arm, `y_e` responders in
/// the experimental arm, `y_s` in the standard arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoArmBinomialData {
    pub n: u64,
    pub y_e: u64,
    pub y_s: u64,
}

impl TwoArmBinomialData {
    pub fn new(n: u64, y_e: u64, y_s: u64) -> Result<Self> {
        if n < 1 {
            return Err(domain("two-arm data requires n >= 1"));
        }
        if y_e > n || y_s > n {
            return Err(domain(format!(
                "responder counts must be <= n: y_E={y_e}, y_S={y_s}, n={n}"
            )));
        }
        Ok(Self { n, y_e, y_s })
    }

    pub fn p_hat_e(&self) -> f64 {
        self.y_e as f64 / self.n as f64
    }

    pub fn p_hat_s(&self) -> f64 {
        self.y_s as f64 / self.n as f64
    }
}

/// Observed one-arm binomial data with reference rate `p0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneArmBinomialData {
    pub n: u64,
    pub y_e: u64,
    pub p0: f64,
}

impl OneArmBinomialData {
    pub fn new(n: u64, y_e: u64, p0: f64) -> Result<Self> {
        if y_e > n {
            return Err(domain(format!("y_E={y_e} exceeds n={n}")));
        }
        if !(p0 > 0.0 && p0 < 1.0) {
            return Err(domain(format!("reference rate must satisfy 0 < p0 < 1, got {p0}")));
        }
        Ok(Self { n, y_e, p0 })
    }
}

/// Beta(a, b) parameters, used for both priors and posteriors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    pub a: f64,
    pub b: f64,
}

impl BetaParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(domain(format!("Beta parameters must be positive, got ({a}, {b})")));
        }
        Ok(Self { a, b })
    }

    /// Default noninformative prior for two-sample comparisons.
    pub fn default_two_sample() -> Self {
        Self { a: 0.2, b: 0.8 }
    }

    /// Default noninformative prior for the one-sample test.
    pub fn default_one_sample() -> Self {
        Self { a: 1.0, b: 1.0 }
    }
}

/// Two-sample Z statistic
/// Z = (p̂_E − p̂_S) / √{[p̂_E(1−p̂_E) + p̂_S(1−p̂_S)]/n}.
///
/// Boundary behaviour: when both sample proportions sit in {0, 1} the
/// variance estimate vanishes. If the proportions are *equal* there is no
/// evidence in either direction and the data are reported as degenerate
/// (callers use the Z = 0 convention). If they differ (one arm all
/// responders, the other none) the statistic diverges and the limit
/// ±∞ is returned, giving the correct limiting p-values 0/1.
pub fn two_sample_z(data: &TwoArmBinomialData) -> Result<f64> {
    let pe = data.p_hat_e();
    let ps = data.p_hat_s();
    let var = (pe * (1.0 - pe) + ps * (1.0 - ps)) / data.n as f64;
    if var == 0.0 {
        if pe == ps {
            return Err(degenerate(format!(
                "both arms observed proportion {pe} with zero variance; \
                 no evidence either way"
            )));
        }
        return Ok(if pe > ps { f64::INFINITY } else { f64::NEG_INFINITY });
    }
    Ok((pe - ps) / var.sqrt())
}

/// One-sided p-value p₁ = 1 − Φ(z) for H₁ in the positive direction.
pub fn p_one_sided(z: f64) -> Result<f64> {
    // Computed as Φ(−z), which equals 1 − Φ(z) exactly in real arithmetic
    // and avoids the cancellation of literally subtracting from 1.
    std_normal_cdf(-z)
}

/// Two-sided p-value p₂ = 2[1 − Φ(|z|)] = 2·min(p₁, 1 − p₁).
pub fn p_two_sided(z: f64) -> Result<f64> {
    Ok(2.0 * std_normal_cdf(-z.abs())?)
}

/// Conjugate Beta update: prior Beta(a, b) with y responders of n becomes
/// Beta(a + y, b + n − y).
pub fn beta_posterior(prior: &BetaParams, y: u64, n: u64) -> Result<BetaParams> {
    if y > n {
        return Err(domain(format!("y={y} exceeds n={n} in beta_posterior")));
    }
    BetaParams::new(prior.a + y as f64, prior.b + (n - y) as f64)
}

/// Pr(p_E > p_S) for independent p_E ~ `post_e`, p_S ~ `post_s`.
///
/// The double integral ∫₀¹ f_S(p_S) [1 − F_E(p_S)] dp_S is evaluated after
/// the substitution v = F_S(p_S), giving ∫₀¹ [1 − F_E(Q_S(v))] dv. The
/// substitution folds the (possibly endpoint-singular) standard-arm density
/// into the quantile function, so the integrand is smooth and bounded in
/// [0, 1] and Gauss–Legendre converges fast regardless of how small the
/// Beta shape parameters are. Identical posteriors integrate 1 − v exactly.
pub fn prob_pe_greater_ps(
    post_e: &BetaParams,
    post_s: &BetaParams,
    rule: &QuadratureRule,
) -> Result<f64> {
    let mut acc = KahanSum::new();
    for (v, w) in rule.mapped(0.0, 1.0) {
        let ps = beta_quantile(v, post_s.a, post_s.b)?;
        acc.add(w * beta_cdf(ps, post_e.a, post_e.b)?);
    }
    // Accumulate Pr(p_E ≤ p_S) = ∫ F_E(Q_S(v)) dv and complement once at
    // the end: the summands are all positive, so no cancellation occurs on
    // either side of the subtraction.
    Ok((1.0 - acc.value()).clamp(0.0, 1.0))
}

/// PoP₁ = Pr(p_E ≤ p_S | y_E, y_S) under independent Beta priors.
pub fn pop_one_two_sample(
    data: &TwoArmBinomialData,
    prior_e: &BetaParams,
    prior_s: &BetaParams,
    rule: &QuadratureRule,
) -> Result<f64> {
    let post_e = beta_posterior(prior_e, data.y_e, data.n)?;
    let post_s = beta_posterior(prior_s, data.y_s, data.n)?;
    // Ties carry zero posterior mass for continuous Betas, so
    // Pr(p_E ≤ p_S) = 1 − Pr(p_E > p_S). Summing F_E(Q_S(v)) directly (the
    // complement-of-complement) keeps everything one positive sum.
    let mut acc = KahanSum::new();
    for (v, w) in rule.mapped(0.0, 1.0) {
        let ps = beta_quantile(v, post_s.a, post_s.b)?;
        acc.add(w * beta_cdf(ps, post_e.a, post_e.b)?);
    }
    Ok(acc.value().clamp(0.0, 1.0))
}

/// PoP₂ = 2[1 − max{Pr(p_E > p_S), Pr(p_E < p_S)}] = 2·min(PoP₁, 1 − PoP₁).
pub fn pop_two_two_sample(
    data: &TwoArmBinomialData,
    prior_e: &BetaParams,
    prior_s: &BetaParams,
    rule: &QuadratureRule,
) -> Result<f64> {
    Ok(two_sided_from_one_sided(pop_one_two_sample(
        data, prior_e, prior_s, rule,
    )?))
}

/// Exact one-sided binomial p-value Pr(Y ≥ y_E | p₀) for H₁: p_E > p₀.
pub fn exact_binomial_p_one(data: &OneArmBinomialData) -> Result<f64> {
    binomial_upper_tail(data.y_e, data.n, data.p0)
}

/// Convention for the two-sided exact binomial p-value. The doubled-tail
/// form mirrors the two-one-sided-tests construction used everywhere else
/// in this crate and is the default; the minimum-likelihood form sums the
/// probability of all outcomes no more likely than the observed one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TwoSidedBinomial {
    #[default]
    DoubledTail,
    MinimumLikelihood,
}

/// Two-sided exact binomial p-value under the default doubled-tail
/// convention: min{1, 2·min[Pr(Y ≥ y_E), Pr(Y ≤ y_E)]}.
pub fn exact_binomial_p_two(data: &OneArmBinomialData) -> Result<f64> {
    exact_binomial_p_two_with(data, TwoSidedBinomial::DoubledTail)
}

/// Two-sided exact binomial p-value under an explicit convention.
pub fn exact_binomial_p_two_with(
    data: &OneArmBinomialData,
    convention: TwoSidedBinomial,
) -> Result<f64> {
    match convention {
        TwoSidedBinomial::DoubledTail => {
            let upper = binomial_upper_tail(data.y_e, data.n, data.p0)?;
            let lower = binomial_lower_tail(data.y_e, data.n, data.p0)?;
            Ok((2.0 * upper.min(lower)).min(1.0))
        }
        TwoSidedBinomial::MinimumLikelihood => {
            let observed = binomial_pmf(data.y_e, data.n, data.p0)?;
            // Sum of Pr(Y = k) over all k whose probability does not exceed
            // the observed outcome's (with a sliver of tolerance so exact
            // ties are included despite rounding).
            let tol = 1.0 + 1e-12;
            let mut acc = KahanSum::new();
            for k in 0..=data.n {
                let pk = binomial_pmf(k, data.n, data.p0)?;
                if pk <= observed * tol {
                    acc.add(pk);
                }
            }
            Ok(acc.value().min(1.0))
        }
    }
}

/// One-sample posterior probabilities:
/// PoP₁ = Pr(p_E ≤ p₀ | y_E) = I_{p₀}(a + y_E, b + n − y_E) and
/// PoP₂ = 2·min(PoP₁, 1 − PoP₁).
pub fn pop_one_sample(data: &OneArmBinomialData, prior: &BetaParams) -> Result<(f64, f64)> {
    let post = beta_posterior(prior, data.y_e, data.n)?;
    let pop_one = beta_cdf(data.p0, post.a, post.b)?;
    Ok((pop_one, two_sided_from_one_sided(pop_one)))
}

/// Full side-by-side report for the two-sample comparison.
///
/// Degenerate data (equal all-or-nothing arms) are folded in with the
/// neutral convention Z = 0, p₁ = ½ and flagged, so that exhaustive grids
/// over (y_E, y_S) remain total.
pub fn two_sample_report(
    data: &TwoArmBinomialData,
    prior_e: &BetaParams,
    prior_s: &BetaParams,
    rule: &QuadratureRule,
) -> Result<TestReport> {
    let (z, degenerate) = match two_sample_z(data) {
        Ok(z) => (z, false),
        Err(crate::error::Error::Degenerate(_)) => (0.0, true),
        Err(e) => return Err(e),
    };
    let (p_one, p_two) = if z.is_finite() {
        (p_one_sided(z)?, p_two_sided(z)?)
    } else {
        // Limiting values for the divergent-statistic corner.
        (if z > 0.0 { 0.0 } else { 1.0 }, 0.0)
    };
    let pop_one = pop_one_two_sample(data, prior_e, prior_s, rule)?;
    let report = TestReport {
        statistic: Some(z),
        p_one,
        p_two,
        pop_one,
        pop_two: two_sided_from_one_sided(pop_one),
        degenerate,
    };
    report.validate()?;
    Ok(report)
}

/// Full side-by-side report for the one-sample exact test. The exact test
/// has no test statistic, so `statistic` is absent.
pub fn one_sample_report(
    data: &OneArmBinomialData,
    prior: &BetaParams,
    convention: TwoSidedBinomial,
) -> Result<TestReport> {
    let p_one = exact_binomial_p_one(data)?;
    let p_two = exact_binomial_p_two_with(data, convention)?;
    let (pop_one, pop_two) = pop_one_sample(data, prior)?;
    let report = TestReport {
        statistic: None,
        p_one,
        p_two,
        pop_one,
        pop_two,
        degenerate: false,
    };
    report.validate()?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::quad::{gauss_legendre, DEFAULT_QUAD_ORDER};
    use crate::sample::{RngSeed, Sampler};

    fn rule() -> QuadratureRule {
        gauss_legendre(DEFAULT_QUAD_ORDER).unwrap()
    }

    #[test]
    fn z_statistic_spot_values() {
        let d = TwoArmBinomialData::new(20, 10, 5).unwrap();
        let z = two_sample_z(&d).unwrap();
        assert!((z - 1.6903).abs() <= 1e-4, "Z = {z}");
        // Equal counts give exactly zero.
        let d0 = TwoArmBinomialData::new(20, 7, 7).unwrap();
        assert_eq!(two_sample_z(&d0).unwrap(), 0.0);
        // Swapping arms negates the statistic.
        let a = TwoArmBinomialData::new(50, 30, 20).unwrap();
        let b = TwoArmBinomialData::new(50, 20, 30).unwrap();
        let za = two_sample_z(&a).unwrap();
        let zb = two_sample_z(&b).unwrap();
        assert_eq!(za.to_bits(), (-zb).to_bits());
    }

    #[test]
    fn z_statistic_boundary_cases() {
        // Equal all-or-nothing arms: degenerate.
        for &(ye, ys) in &[(0u64, 0u64), (20, 20)] {
            let d = TwoArmBinomialData::new(20, ye, ys).unwrap();
            match two_sample_z(&d) {
                Err(Error::Degenerate(_)) => {}
                other => panic!("expected degenerate signal, got {other:?}"),
            }
        }
        // Opposite all-or-nothing corners: divergent limit.
        let hi = TwoArmBinomialData::new(20, 20, 0).unwrap();
        assert_eq!(two_sample_z(&hi).unwrap(), f64::INFINITY);
        let lo = TwoArmBinomialData::new(20, 0, 20).unwrap();
        assert_eq!(two_sample_z(&lo).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn p_values_from_z() {
        assert_eq!(p_one_sided(0.0).unwrap(), 0.5);
        assert_eq!(p_two_sided(0.0).unwrap(), 1.0);
        assert!((p_one_sided(1.6449).unwrap() - 0.05).abs() <= 1e-4);
        // Symmetry of the two-sided value.
        let a = p_two_sided(0.7).unwrap();
        let b = p_two_sided(-0.7).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        // Identity p₂ = 2·min(p₁, 1 − p₁).
        for &z in &[-2.3, -0.4, 0.0, 1.1, 3.7] {
            let p1 = p_one_sided(z).unwrap();
            let p2 = p_two_sided(z).unwrap();
            assert!((p2 - two_sided_from_one_sided(p1)).abs() <= 1e-15);
        }
        assert!(p_one_sided(f64::NAN).is_err());
        assert!(p_two_sided(f64::INFINITY).is_err());
    }

    #[test]
    fn beta_posterior_updates() {
        let flat = BetaParams::new(1.0, 1.0).unwrap();
        let none = beta_posterior(&flat, 0, 0).unwrap();
        assert_eq!((none.a, none.b), (1.0, 1.0));
        let skeptical = BetaParams::new(0.2, 0.8).unwrap();
        let post = beta_posterior(&skeptical, 10, 50).unwrap();
        assert!((post.a - 10.2).abs() <= 1e-15);
        assert!((post.b - 40.8).abs() <= 1e-15);
        let all = beta_posterior(&flat, 12, 12).unwrap();
        assert_eq!((all.a, all.b), (13.0, 1.0));
        assert!(beta_posterior(&flat, 5, 4).is_err());
    }

    #[test]
    fn prob_pe_greater_ps_symmetry() {
        let r = rule();
        let p = BetaParams::new(10.2, 40.8).unwrap();
        let v = prob_pe_greater_ps(&p, &p, &r).unwrap();
        assert!((v - 0.5).abs() <= 1e-12, "identical posteriors: {v}");
        let q = BetaParams::new(3.0, 3.0).unwrap();
        let v2 = prob_pe_greater_ps(&q, &q, &r).unwrap();
        assert!((v2 - 0.5).abs() <= 1e-12);
        // Exchanging the arms complements the probability. The two
        // directions integrate different fractional-power integrands, each
        // carrying its own ~1e−6 fixed-order quadrature error (far inside
        // every statistical tolerance downstream), so the identity holds to
        // that scale rather than machine precision.
        let a = BetaParams::new(11.0, 11.0).unwrap();
        let b = BetaParams::new(5.0, 17.0).unwrap();
        let ab = prob_pe_greater_ps(&a, &b, &r).unwrap();
        let ba = prob_pe_greater_ps(&b, &a, &r).unwrap();
        assert!((ab + ba - 1.0).abs() <= 1e-5, "{ab} + {ba}");
    }

    #[test]
    fn prob_pe_greater_ps_matches_monte_carlo() {
        let r = rule();
        let post_e = BetaParams::new(11.0, 11.0).unwrap();
        let post_s = BetaParams::new(5.0, 17.0).unwrap();
        let got = prob_pe_greater_ps(&post_e, &post_s, &r).unwrap();
        let mut s = Sampler::from_seed(RngSeed::new(2024));
        let n = 1_000_000usize;
        let mut hits = 0u64;
        for _ in 0..n {
            let pe = s.beta(post_e.a, post_e.b).unwrap();
            let ps = s.beta(post_s.a, post_s.b).unwrap();
            if pe > ps {
                hits += 1;
            }
        }
        let mc = hits as f64 / n as f64;
        let se = (mc * (1.0 - mc) / n as f64).sqrt();
        assert!(
            (got - mc).abs() <= (3.29 * se).max(2e-3),
            "quadrature {got} vs Monte Carlo {mc} (se {se})"
        );
    }

    #[test]
    fn prob_pe_greater_ps_handles_singular_posteriors() {
        // Shape parameters < 1 make the densities blow up at the endpoints;
        // the quantile-substituted integral must still agree with Monte
        // Carlo. Posterior of (y_E=0, y_S=n) under Beta(0.2, 0.8) priors.
        let r = rule();
        let post_e = BetaParams::new(0.2, 20.8).unwrap();
        let post_s = BetaParams::new(20.2, 0.8).unwrap();
        let got = prob_pe_greater_ps(&post_e, &post_s, &r).unwrap();
        let mut s = Sampler::from_seed(RngSeed::new(99));
        let n = 1_000_000usize;
        let mut hits = 0u64;
        for _ in 0..n {
            if s.beta(post_e.a, post_e.b).unwrap() > s.beta(post_s.a, post_s.b).unwrap() {
                hits += 1;
            }
        }
        let mc = hits as f64 / n as f64;
        let se = (mc * (1.0 - mc) / n as f64).sqrt().max(1e-6);
        assert!(
            (got - mc).abs() <= (3.29 * se).max(2e-3),
            "singular case: quadrature {got} vs MC {mc}"
        );
    }

    #[test]
    fn pop_one_two_sample_values() {
        let r = rule();
        // Equal data, equal priors: exactly 1/2 by symmetry.
        let tie = TwoArmBinomialData::new(30, 9, 9).unwrap();
        let flat = BetaParams::new(1.0, 1.0).unwrap();
        let v = pop_one_two_sample(&tie, &flat, &flat, &r).unwrap();
        assert!((v - 0.5).abs() <= 1e-12);
        // Agreement with the definitional complement.
        let d = TwoArmBinomialData::new(50, 25, 15).unwrap();
        let prior = BetaParams::new(0.2, 0.8).unwrap();
        let pop1 = pop_one_two_sample(&d, &prior, &prior, &r).unwrap();
        let pe = beta_posterior(&prior, 25, 50).unwrap();
        let ps = beta_posterior(&prior, 15, 50).unwrap();
        let comp = 1.0 - prob_pe_greater_ps(&pe, &ps, &r).unwrap();
        assert!((pop1 - comp).abs() <= 1e-12);
        assert!((pe.a - 25.2).abs() < 1e-12 && (ps.b - 35.8).abs() < 1e-12);
    }

    #[test]
    fn pop_one_two_sample_monotone_in_ye() {
        let r = rule();
        let prior = BetaParams::new(0.2, 0.8).unwrap();
        let mut prev = f64::INFINITY;
        for ye in 0..=20u64 {
            let d = TwoArmBinomialData::new(20, ye, 8).unwrap();
            let v = pop_one_two_sample(&d, &prior, &prior, &r).unwrap();
            assert!(
                v < prev,
                "PoP₁ must strictly decrease in y_E: y_E={ye}, {v} vs {prev}"
            );
            prev = v;
        }
    }

    #[test]
    fn pop_two_two_sample_values() {
        let r = rule();
        let flat = BetaParams::new(1.0, 1.0).unwrap();
        let tie = TwoArmBinomialData::new(40, 13, 13).unwrap();
        let v = pop_two_two_sample(&tie, &flat, &flat, &r).unwrap();
        assert!((v - 1.0).abs() <= 1e-12);
        let d = TwoArmBinomialData::new(100, 60, 45).unwrap();
        let pop1 = pop_one_two_sample(&d, &flat, &flat, &r).unwrap();
        let pop2 = pop_two_two_sample(&d, &flat, &flat, &r).unwrap();
        assert!((pop2 - two_sided_from_one_sided(pop1)).abs() <= 1e-15);
    }

    #[test]
    fn pop_two_near_z_test_at_large_n() {
        let r = rule();
        let flat = BetaParams::new(1.0, 1.0).unwrap();
        let d = TwoArmBinomialData::new(500, 120, 90).unwrap();
        let pop2 = pop_two_two_sample(&d, &flat, &flat, &r).unwrap();
        let p2 = p_two_sided(two_sample_z(&d).unwrap()).unwrap();
        assert!((pop2 - p2).abs() <= 0.01, "PoP₂ {pop2} vs p₂ {p2}");
    }

    #[test]
    fn exact_binomial_one_sided() {
        let all = OneArmBinomialData::new(20, 0, 0.3).unwrap();
        assert_eq!(exact_binomial_p_one(&all).unwrap(), 1.0);
        let d = OneArmBinomialData::new(20, 4, 0.2).unwrap();
        assert!((exact_binomial_p_one(&d).unwrap() - 0.5886).abs() <= 1e-4);
        let top = OneArmBinomialData::new(20, 20, 0.2).unwrap();
        let got = exact_binomial_p_one(&top).unwrap();
        assert!((got - 0.2f64.powi(20)).abs() <= 1e-12 * 0.2f64.powi(20));
    }

    #[test]
    fn exact_binomial_two_sided_conventions() {
        let d = OneArmBinomialData::new(20, 4, 0.2).unwrap();
        // Both tails exceed 1/2 at the mode, so the doubled value caps at 1.
        assert_eq!(exact_binomial_p_two(&d).unwrap(), 1.0);
        let far = OneArmBinomialData::new(100, 35, 0.2).unwrap();
        let upper = binomial_upper_tail(35, 100, 0.2).unwrap();
        let got = exact_binomial_p_two(&far).unwrap();
        assert!((got - 2.0 * upper).abs() <= 1e-15);
        // Minimum-likelihood convention: sums pmf over outcomes no more
        // probable than observed; at the mode it must be 1.
        let mode = OneArmBinomialData::new(20, 4, 0.2).unwrap();
        let ml = exact_binomial_p_two_with(&mode, TwoSidedBinomial::MinimumLikelihood).unwrap();
        assert!((ml - 1.0).abs() <= 1e-12);
        // And it is never larger than 1 nor smaller than the pmf itself.
        for ye in 0..=20u64 {
            let d = OneArmBinomialData::new(20, ye, 0.2).unwrap();
            let v = exact_binomial_p_two_with(&d, TwoSidedBinomial::MinimumLikelihood).unwrap();
            let pmf = binomial_pmf(ye, 20, 0.2).unwrap();
            assert!(v <= 1.0 && v >= pmf - 1e-15);
        }
    }

    #[test]
    fn pop_one_sample_values() {
        // No data with a flat prior: posterior is uniform, PoP₁ = p₀.
        let empty = OneArmBinomialData::new(0, 0, 0.35).unwrap();
        let flat = BetaParams::new(1.0, 1.0).unwrap();
        let (p1, _) = pop_one_sample(&empty, &flat).unwrap();
        assert!((p1 - 0.35).abs() <= 1e-14);
        // Closed-form posterior CDF against a Monte Carlo oracle.
        let d = OneArmBinomialData::new(20, 4, 0.2).unwrap();
        let (pop1, pop2) = pop_one_sample(&d, &flat).unwrap();
        let mut s = Sampler::from_seed(RngSeed::new(7));
        let n = 1_000_000usize;
        let mut hits = 0u64;
        for _ in 0..n {
            if s.beta(5.0, 17.0).unwrap() <= 0.2 {
                hits += 1;
            }
        }
        let mc = hits as f64 / n as f64;
        assert!((pop1 - mc).abs() <= 2e-3, "PoP₁ {pop1} vs MC {mc}");
        assert!((pop2 - two_sided_from_one_sided(pop1)).abs() <= 1e-15);
    }

    #[test]
    fn pop_one_sample_monotone_in_ye() {
        let flat = BetaParams::new(1.0, 1.0).unwrap();
        let mut prev = f64::INFINITY;
        for ye in 0..=50u64 {
            let d = OneArmBinomialData::new(50, ye, 0.2).unwrap();
            let (p1, _) = pop_one_sample(&d, &flat).unwrap();
            assert!(p1 < prev, "PoP₁ must decrease in y_E");
            prev = p1;
        }
    }

    #[test]
    fn two_sample_report_shapes() {
        let r = rule();
        let prior = BetaParams::default_two_sample();
        let d = TwoArmBinomialData::new(20, 10, 5).unwrap();
        let rep = two_sample_report(&d, &prior, &prior, &r).unwrap();
        assert!(!rep.degenerate);
        assert!((rep.statistic.unwrap() - 1.6903).abs() <= 1e-4);
        assert!((rep.p_two - two_sided_from_one_sided(rep.p_one)).abs() <= 1e-15);
        // Degenerate corner folds to the neutral convention.
        let corner = TwoArmBinomialData::new(20, 20, 20).unwrap();
        let rep = two_sample_report(&corner, &prior, &prior, &r).unwrap();
        assert!(rep.degenerate);
        assert_eq!(rep.statistic, Some(0.0));
        assert_eq!(rep.p_one, 0.5);
        // Divergent corner keeps the limiting p-values.
        let div = TwoArmBinomialData::new(20, 20, 0).unwrap();
        let rep = two_sample_report(&div, &prior, &prior, &r).unwrap();
        assert!(!rep.degenerate);
        assert_eq!(rep.statistic, Some(f64::INFINITY));
        assert_eq!(rep.p_one, 0.0);
        assert_eq!(rep.p_two, 0.0);
        assert!(rep.validate().is_ok());
    }

    #[test]
    fn symmetric_data_gives_unit_two_sided_values() {
        let r = rule();
        let flat = BetaParams::new(1.0, 1.0).unwrap();
        let d = TwoArmBinomialData::new(60, 21, 21).unwrap();
        let rep = two_sample_report(&d, &flat, &flat, &r).unwrap();
        assert_eq!(rep.p_two, 1.0);
        assert!((rep.pop_two - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn bayesian_clt_agreement_at_n_500() {
        // Normal approximation Φ(−Z) tracks the quadrature PoP₁ within 0.02
        // for interior data at n = 500. A deterministic sweep of (y_E, y_S)
        // pairs spanning [0.1n, 0.9n] stands in for random replications.
        let r = rule();
        let prior = BetaParams::new(0.2, 0.8).unwrap();
        let n = 500u64;
        let mut worst = 0.0f64;
        let mut k = 0u64;
        for ye in (50..=450).step_by(57) {
            for ys in (50..=450).step_by(43) {
                let d = TwoArmBinomialData::new(n, ye, ys).unwrap();
                let z = two_sample_z(&d).unwrap();
                let approx = std_normal_cdf(-z).unwrap();
                let pop1 = pop_one_two_sample(&d, &prior, &prior, &r).unwrap();
                worst = worst.max((approx - pop1).abs());
                k += 1;
            }
        }
        assert!(k >= 50);
        assert!(worst <= 0.02, "max |Φ(−Z) − PoP₁| = {worst}");
    }
}
