//! Tests and posteriors for paired normal data.
//!
//! The data are paired differences x_i = y_Ei − y_Si ~ N(θ, ν) and the null
//! hypothesis is θ ≤ 0. Two variance regimes:
//!
//! * **Known variance** (ν = 2σ² known, σ² = 1 by convention): Z test on
//!   one side, flat-prior normal posterior on the other — the p-value and
//!   the posterior probability coincide *exactly*, which this module
//!   preserves bit-for-bit by computing both through the same expression.
//! * **Unknown variance**: Student-t test versus the conjugate posteriors —
//!   Jeffreys' prior p(θ, ν) ∝ ν^(−3/2) giving a normal–inverse-χ²
//!   posterior, or a proper normal–inverse-gamma (NIG) prior. Posterior
//!   probabilities for θ evaluate analytically through the marginal
//!   location-scale Student-t.

use crate::dist::{std_normal_cdf, student_t_cdf};
use crate::error::{degenerate, domain, Result};
use crate::report::{two_sided_from_one_sided, TestReport};
use crate::util::KahanSum;

/// Paired differences with their sufficient statistics: sample size `n`,
/// mean `theta_hat`, and centered sum of squares `ssd` = Σ(x_i − θ̂)².
///
/// `x` retains the raw differences when the value was built from them
/// (`from_differences`) and is empty when built from summary statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedNormalData {
    pub x: Vec<f64>,
    pub n: u64,
    pub theta_hat: f64,
    pub ssd: f64,
}

impl PairedNormalData {
    /// Build from raw differences. The mean uses compensated summation and
    /// the sum of squared deviations a second compensated pass, so the
    /// statistics stay accurate for n up to 10⁵ and beyond.
    pub fn from_differences(x: &[f64]) -> Result<Self> {
        if x.is_empty() {
            return Err(domain("paired data requires at least one difference"));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(domain("paired data contains a non-finite difference"));
        }
        let n = x.len() as u64;
        let mut acc = KahanSum::new();
        for &v in x {
            acc.add(v);
        }
        let theta_hat = acc.value() / n as f64;
        let mut sq = KahanSum::new();
        for &v in x {
            let d = v - theta_hat;
            sq.add(d * d);
        }
        Ok(Self {
            x: x.to_vec(),
            n,
            theta_hat,
            ssd: sq.value(),
        })
    }

    /// Build from summary statistics alone.
    pub fn from_summary(n: u64, theta_hat: f64, ssd: f64) -> Result<Self> {
        if !theta_hat.is_finite() {
            return Err(domain(format!("theta_hat must be finite, got {theta_hat}")));
        }
        if !(ssd >= 0.0) || !ssd.is_finite() {
            return Err(domain(format!("ssd must be finite and >= 0, got {ssd}")));
        }
        Ok(Self {
            x: Vec::new(),
            n,
            theta_hat,
            ssd,
        })
    }
}

/// Normal–inverse-χ² posterior parameters: θ | ν ~ N(location, ν/kappa),
/// ν ~ scaled-Inv-χ²(df, scale2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalInvChiSqParams {
    pub location: f64,
    pub kappa: f64,
    pub df: f64,
    pub scale2: f64,
}

impl NormalInvChiSqParams {
    pub fn new(location: f64, kappa: f64, df: f64, scale2: f64) -> Result<Self> {
        if !location.is_finite() {
            return Err(domain(format!("location must be finite, got {location}")));
        }
        if !(kappa > 0.0 && df > 0.0 && scale2 > 0.0) {
            return Err(domain(format!(
                "normal-inverse-chi-square requires kappa, df, scale2 > 0, \
                 got ({kappa}, {df}, {scale2})"
            )));
        }
        Ok(Self {
            location,
            kappa,
            df,
            scale2,
        })
    }
}

/// Normal–inverse-gamma parameters: θ | ν ~ N(theta0, ν/nu0),
/// ν ~ Inv-Gamma(alpha, beta).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NigParams {
    pub theta0: f64,
    pub nu0: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl NigParams {
    pub fn new(theta0: f64, nu0: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !theta0.is_finite() {
            return Err(domain(format!("theta0 must be finite, got {theta0}")));
        }
        if !(nu0 > 0.0 && alpha > 0.0 && beta > 0.0) {
            return Err(domain(format!(
                "normal-inverse-gamma requires nu0, alpha, beta > 0, \
                 got ({nu0}, {alpha}, {beta})"
            )));
        }
        Ok(Self {
            theta0,
            nu0,
            alpha,
            beta,
        })
    }

    /// The vague default prior: θ₀ = 0, ν₀ = 100, α = β = 0.01.
    pub fn default_vague() -> Self {
        Self {
            theta0: 0.0,
            nu0: 100.0,
            alpha: 0.01,
            beta: 0.01,
        }
    }
}

/// The marginal distribution of θ under either conjugate posterior: a
/// location-scale Student-t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudentTMarginal {
    pub location: f64,
    pub scale: f64,
    pub df: f64,
}

/// Posteriors whose θ-marginal is a location-scale Student-t.
pub trait ThetaMarginal {
    fn theta_marginal(&self) -> Result<StudentTMarginal>;
}

impl ThetaMarginal for NormalInvChiSqParams {
    /// N–Inv-χ²(loc, κ, df, s²) ⇒ θ ~ t_df(loc, √(s²/κ)).
    fn theta_marginal(&self) -> Result<StudentTMarginal> {
        Ok(StudentTMarginal {
            location: self.location,
            scale: (self.scale2 / self.kappa).sqrt(),
            df: self.df,
        })
    }
}

impl ThetaMarginal for NigParams {
    /// NIG(θ₀, ν₀, α, β) ⇒ θ ~ t_{2α}(θ₀, √(β/(α·ν₀))).
    fn theta_marginal(&self) -> Result<StudentTMarginal> {
        Ok(StudentTMarginal {
            location: self.theta0,
            scale: (self.beta / (self.alpha * self.nu0)).sqrt(),
            df: 2.0 * self.alpha,
        })
    }
}

/// Known-variance Z statistic: θ̂ / √(2/n) with the differences' variance
/// fixed at ν = 2σ² = 2.
pub fn z_known_var(theta_hat: f64, n: u64) -> Result<f64> {
    if !theta_hat.is_finite() {
        return Err(domain(format!("theta_hat must be finite, got {theta_hat}")));
    }
    if n < 1 {
        return Err(domain("z_known_var requires n >= 1"));
    }
    Ok(theta_hat * (n as f64 / 2.0).sqrt())
}

/// Flat-prior posterior probabilities under known variance:
/// θ | D ~ N(θ̂, 2/n), so PoP₁ = Φ(−θ̂√(n/2)) and PoP₂ = 2Φ(−|θ̂|√(n/2)).
///
/// These equal the one- and two-sided p-values *exactly* — the same
/// expressions evaluate both — which is the cleanest instance of the
/// p ↔ PoP correspondence.
pub fn pop_known_var_flat_prior(theta_hat: f64, n: u64) -> Result<(f64, f64)> {
    let z = z_known_var(theta_hat, n)?;
    let pop_one = std_normal_cdf(-z)?;
    let pop_two = 2.0 * std_normal_cdf(-z.abs())?;
    Ok((pop_one, pop_two))
}

/// Student-t statistic T = θ̂ / √{ssd / [(n−1)·n]}.
pub fn t_statistic(data: &PairedNormalData) -> Result<f64> {
    if data.n < 2 {
        return Err(domain(format!(
            "t test requires n >= 2, got n = {}",
            data.n
        )));
    }
    if data.ssd == 0.0 {
        return Err(degenerate(
            "all differences are identical (ssd = 0); the t statistic is undefined",
        ));
    }
    let n = data.n as f64;
    Ok(data.theta_hat / (data.ssd / ((n - 1.0) * n)).sqrt())
}

/// One- and two-sided p-values of a t statistic with n−1 degrees of
/// freedom: p₁ = 1 − F(T), p₂ = 2[1 − F(|T|)], both via the exact symmetry
/// F(−t) = 1 − F(t) so no cancellation occurs.
pub fn t_p_values(t: f64, n: u64) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(domain("t p-values require n >= 2"));
    }
    let df = (n - 1) as f64;
    let p_one = student_t_cdf(-t, df)?;
    let p_two = 2.0 * student_t_cdf(-t.abs(), df)?;
    Ok((p_one, p_two))
}

/// Jeffreys-prior posterior p(θ, ν) ∝ ν^(−3/2) × likelihood:
/// N–Inv-χ²(θ̂, n, n, ssd/n). Note df = n (not n − 1): the extra half power
/// of ν in the prior shifts the marginal's degrees of freedom.
pub fn jeffreys_posterior(data: &PairedNormalData) -> Result<NormalInvChiSqParams> {
    if data.n < 2 {
        return Err(domain("Jeffreys posterior requires n >= 2"));
    }
    if data.ssd == 0.0 {
        return Err(degenerate(
            "all differences are identical (ssd = 0); the posterior scale is zero",
        ));
    }
    let n = data.n as f64;
    NormalInvChiSqParams::new(data.theta_hat, n, n, data.ssd / n)
}

/// Conjugate NIG update:
/// θₙ = (θ₀ν₀ + nθ̂)/(ν₀ + n), νₙ = ν₀ + n, αₙ = α + n/2,
/// βₙ = β + ssd/2 + [nν₀/(ν₀ + n)]·(θ̂ − θ₀)²/2.
pub fn nig_posterior(prior: &NigParams, data: &PairedNormalData) -> Result<NigParams> {
    let n = data.n as f64;
    let theta_n = (prior.theta0 * prior.nu0 + n * data.theta_hat) / (prior.nu0 + n);
    let shrink = n * prior.nu0 / (prior.nu0 + n);
    let d = data.theta_hat - prior.theta0;
    NigParams::new(
        theta_n,
        prior.nu0 + n,
        prior.alpha + 0.5 * n,
        prior.beta + 0.5 * data.ssd + 0.5 * shrink * d * d,
    )
}

/// PoP₁ = Pr(θ ≤ 0 | D), evaluated analytically through the posterior's
/// Student-t marginal.
pub fn pop_theta_leq_zero<M: ThetaMarginal>(posterior: &M) -> Result<f64> {
    let m = posterior.theta_marginal()?;
    student_t_cdf(-m.location / m.scale, m.df)
}

/// (PoP₁, PoP₂) with PoP₂ = 2·min(PoP₁, 1 − PoP₁) (θ has zero point mass
/// at 0 under a continuous posterior).
pub fn pop_theta_two_sided<M: ThetaMarginal>(posterior: &M) -> Result<(f64, f64)> {
    let pop_one = pop_theta_leq_zero(posterior)?;
    Ok((pop_one, two_sided_from_one_sided(pop_one)))
}

/// Side-by-side report for the known-variance Z test: the p-values and
/// flat-prior posterior probabilities are computed through the same
/// expressions, so the pairs are identical to the last bit.
pub fn known_var_report(theta_hat: f64, n: u64) -> Result<TestReport> {
    let z = z_known_var(theta_hat, n)?;
    let p_one = std_normal_cdf(-z)?;
    let p_two = 2.0 * std_normal_cdf(-z.abs())?;
    let (pop_one, pop_two) = pop_known_var_flat_prior(theta_hat, n)?;
    let report = TestReport {
        statistic: Some(z),
        p_one,
        p_two,
        pop_one,
        pop_two,
        degenerate: false,
    };
    report.validate()?;
    Ok(report)
}

/// Side-by-side report for the unknown-variance t test. `prior` selects the
/// Bayesian side: `None` uses Jeffreys' prior, `Some(nig)` the given proper
/// NIG prior.
pub fn t_report(data: &PairedNormalData, prior: Option<&NigParams>) -> Result<TestReport> {
    let t = t_statistic(data)?;
    let (p_one, p_two) = t_p_values(t, data.n)?;
    let (pop_one, pop_two) = match prior {
        None => pop_theta_two_sided(&jeffreys_posterior(data)?)?,
        Some(nig) => pop_theta_two_sided(&nig_posterior(nig, data)?)?,
    };
    let report = TestReport {
        statistic: Some(t),
        p_one,
        p_two,
        pop_one,
        pop_two,
        degenerate: false,
    };
    report.validate()?;
    Ok(report)
}
