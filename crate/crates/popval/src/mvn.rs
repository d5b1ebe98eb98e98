//! Multivariate-normal inference: Sasabuchi contrast tests with
//! intersection–union decisions, and the conjugate Gaussian posterior with
//! contrast-wise posterior probabilities.
//!
//! Data are summarised by the sample mean of `n` draws from `N_p(mu, Sigma)`
//! with `Sigma` known.  For each contrast vector `c` the frequentist side
//! tests `H0: c'mu <= 0` with the statistic
//! `Z = c'xbar / sqrt(c'Sigma c / n)`, and a conjunction of one-sided
//! hypotheses is decided by the intersection–union rule (reject the union
//! null only if every component test rejects).  The Bayesian side places a
//! `N_p(mu0, Sigma0)` prior on `mu`; the posterior is Gaussian and every
//! contrast `c'mu` has a univariate normal marginal, so the posterior
//! probability of each one-sided hypothesis is a single normal CDF
//! evaluation.  With a vague prior the two sides agree to within Monte Carlo
//! noise, which is the equivalence this crate demonstrates.
//!
//! All linear algebra goes through Cholesky factorisations; no matrix is
//! inverted explicitly.

use nalgebra::{DMatrix, DVector};

use crate::dist::std_normal_cdf;
use crate::error::{domain, Result};
use crate::report::{two_sided_from_one_sided, TestReport};

/// Relative tolerance for declaring a covariance matrix symmetric.
const SYMMETRY_RTOL: f64 = 1e-12;

/// Summary of an i.i.d. multivariate-normal sample with known covariance.
#[derive(Debug, Clone)]
pub struct MvnSample {
    /// Number of observations the mean was computed from.
    pub n: u64,
    /// Dimension `p` of each observation.
    pub dim: usize,
    /// Sample mean vector (length `p`).
    pub xbar: DVector<f64>,
    /// Known per-observation covariance (p x p, symmetric positive definite).
    pub sigma: DMatrix<f64>,
}

impl MvnSample {
    /// Validates dimensions, symmetry, and positive definiteness.
    pub fn new(n: u64, xbar: DVector<f64>, sigma: DMatrix<f64>) -> Result<Self> {
        if n == 0 {
            return Err(domain("sample size must be at least 1"));
        }
        let dim = xbar.len();
        if dim == 0 {
            return Err(domain("mean vector must be non-empty"));
        }
        if !xbar.iter().all(|v| v.is_finite()) {
            return Err(domain("mean vector entries must be finite"));
        }
        check_spd(&sigma, dim, "covariance")?;
        Ok(Self { n, dim, xbar, sigma })
    }
}

/// A collection of `K >= 1` contrast vectors, all of the same length.
#[derive(Debug, Clone)]
pub struct ContrastSet {
    /// The contrast vectors (each length `p`, none identically zero).
    pub contrasts: Vec<DVector<f64>>,
}

impl ContrastSet {
    /// Validates that at least one contrast is supplied, lengths agree, and
    /// no contrast is the zero vector.
    pub fn new(contrasts: Vec<DVector<f64>>) -> Result<Self> {
        if contrasts.is_empty() {
            return Err(domain("at least one contrast vector is required"));
        }
        let dim = contrasts[0].len();
        for (k, c) in contrasts.iter().enumerate() {
            if c.len() != dim {
                return Err(domain(format!(
                    "contrast {} has length {} but contrast 0 has length {}",
                    k,
                    c.len(),
                    dim
                )));
            }
            if !c.iter().all(|v| v.is_finite()) {
                return Err(domain(format!("contrast {} has non-finite entries", k)));
            }
            if c.iter().all(|v| *v == 0.0) {
                return Err(domain(format!("contrast {} is the zero vector", k)));
            }
        }
        Ok(Self { contrasts })
    }

    /// The common length of the contrast vectors.
    pub fn dim(&self) -> usize {
        self.contrasts[0].len()
    }

    /// Default two-component comparison: the unit contrasts `e_1` and `e_2`,
    /// testing each coordinate of the mean against zero.
    pub fn default_bivariate() -> Self {
        Self {
            contrasts: vec![
                DVector::from_vec(vec![1.0, 0.0]),
                DVector::from_vec(vec![0.0, 1.0]),
            ],
        }
    }
}

/// Gaussian prior `N_p(mu0, Sigma0)` on the mean vector.
#[derive(Debug, Clone)]
pub struct MvnPrior {
    /// Prior mean (length `p`).
    pub mu0: DVector<f64>,
    /// Prior covariance (p x p, symmetric positive definite).
    pub sigma0: DMatrix<f64>,
}

impl MvnPrior {
    /// Validates dimensions and positive definiteness.
    pub fn new(mu0: DVector<f64>, sigma0: DMatrix<f64>) -> Result<Self> {
        let dim = mu0.len();
        if dim == 0 {
            return Err(domain("prior mean must be non-empty"));
        }
        if !mu0.iter().all(|v| v.is_finite()) {
            return Err(domain("prior mean entries must be finite"));
        }
        check_spd(&sigma0, dim, "prior covariance")?;
        Ok(Self { mu0, sigma0 })
    }

    /// Vague default: zero mean and covariance `1000 I`, diffuse enough that
    /// the posterior tracks the data at the sample sizes used here.
    pub fn vague(dim: usize) -> Self {
        Self {
            mu0: DVector::zeros(dim),
            sigma0: DMatrix::identity(dim, dim) * 1000.0,
        }
    }
}

/// Gaussian posterior `N_p(mu_n, Sigma_n)` for the mean vector.
#[derive(Debug, Clone)]
pub struct MvnPosterior {
    /// Posterior mean (length `p`).
    pub mu_n: DVector<f64>,
    /// Posterior covariance (p x p, symmetric positive definite).
    pub sigma_n: DMatrix<f64>,
}

fn check_spd(m: &DMatrix<f64>, dim: usize, what: &str) -> Result<()> {
    if m.nrows() != dim || m.ncols() != dim {
        return Err(domain(format!(
            "{} must be {dim} x {dim}, got {} x {}",
            what,
            m.nrows(),
            m.ncols()
        )));
    }
    if !m.iter().all(|v| v.is_finite()) {
        return Err(domain(format!("{} entries must be finite", what)));
    }
    let scale = m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs())).max(1.0);
    for i in 0..dim {
        for j in (i + 1)..dim {
            if (m[(i, j)] - m[(j, i)]).abs() > SYMMETRY_RTOL * scale {
                return Err(domain(format!("{} is not symmetric", what)));
            }
        }
    }
    if m.clone().cholesky().is_none() {
        return Err(domain(format!("{} is not positive definite", what)));
    }
    Ok(())
}

/// One-sided contrast statistic `Z = c'xbar / sqrt(c'Sigma c / n)`.
///
/// Large positive values favour `c'mu > 0`.  Errors if the contrast length
/// does not match the sample dimension or the contrast is zero.
pub fn sasabuchi_z(sample: &MvnSample, contrast: &DVector<f64>) -> Result<f64> {
    if contrast.len() != sample.dim {
        return Err(domain(format!(
            "contrast length {} does not match sample dimension {}",
            contrast.len(),
            sample.dim
        )));
    }
    if contrast.iter().all(|v| *v == 0.0) {
        return Err(domain("contrast is the zero vector"));
    }
    let quad = contrast.dot(&(&sample.sigma * contrast));
    if !(quad > 0.0) {
        return Err(domain(
            "contrast variance c'Sigma c must be positive; covariance may be degenerate",
        ));
    }
    Ok(contrast.dot(&sample.xbar) / (quad / sample.n as f64).sqrt())
}

/// Intersection–union decision: reject the union null at level `alpha` only
/// if **every** component p-value is below `alpha`.
pub fn iut_decision(p_values: &[f64], alpha: f64) -> Result<bool> {
    if p_values.is_empty() {
        return Err(domain("at least one p-value is required"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain("alpha must lie strictly between 0 and 1"));
    }
    for (k, p) in p_values.iter().enumerate() {
        if !(*p >= 0.0 && *p <= 1.0) {
            return Err(domain(format!("p-value {} is {}, outside [0, 1]", k, p)));
        }
    }
    Ok(p_values.iter().all(|p| *p < alpha))
}

/// Conjugate posterior for the mean of a multivariate normal with known
/// covariance.
///
/// With prior `N_p(mu0, Sigma0)` and sample mean `xbar` of `n` observations,
///
/// ```text
/// mu_n    = Sigma0 M^{-1} xbar + (1/n) Sigma M^{-1} mu0,
/// Sigma_n = (1/n) Sigma M^{-1} Sigma0,          M = Sigma0 + Sigma / n,
/// ```
///
/// where `Sigma_n` equals `(Sigma0^{-1} + n Sigma^{-1})^{-1}` — the standard
/// precision-weighted form — but is computed through a single Cholesky
/// factorisation of `M` rather than any explicit inverse.  The product is
/// symmetrised to remove round-off asymmetry before the posterior is
/// validated as positive definite.
pub fn mvn_posterior(prior: &MvnPrior, sample: &MvnSample) -> Result<MvnPosterior> {
    if prior.mu0.len() != sample.dim {
        return Err(domain(format!(
            "prior dimension {} does not match sample dimension {}",
            prior.mu0.len(),
            sample.dim
        )));
    }
    let n = sample.n as f64;
    let m = &prior.sigma0 + &sample.sigma / n;
    let chol = m
        .cholesky()
        .ok_or_else(|| domain("Sigma0 + Sigma/n is not positive definite"))?;

    let m_inv_xbar = chol.solve(&sample.xbar);
    let m_inv_mu0 = chol.solve(&prior.mu0);
    let mu_n = &prior.sigma0 * m_inv_xbar + (&sample.sigma * m_inv_mu0) / n;

    let m_inv_sigma0 = chol.solve(&prior.sigma0);
    let raw = (&sample.sigma * m_inv_sigma0) / n;
    let sigma_n = (&raw + raw.transpose()) * 0.5;
    if sigma_n.clone().cholesky().is_none() {
        return Err(domain("posterior covariance is not positive definite"));
    }
    Ok(MvnPosterior { mu_n, sigma_n })
}

/// Posterior probabilities for one contrast.
///
/// Under the Gaussian posterior, `c'mu | data ~ N(c'mu_n, c'Sigma_n c)`, so
/// the posterior probability of `c'mu <= 0` is
/// `Phi(-c'mu_n / sqrt(c'Sigma_n c))`.  Returns the pair
/// `(PoP_1, PoP_2) = (Pr(c'mu <= 0 | data), 2 min(PoP_1, 1 - PoP_1))`.
pub fn pop_contrast(posterior: &MvnPosterior, contrast: &DVector<f64>) -> Result<(f64, f64)> {
    if contrast.len() != posterior.mu_n.len() {
        return Err(domain(format!(
            "contrast length {} does not match posterior dimension {}",
            contrast.len(),
            posterior.mu_n.len()
        )));
    }
    if contrast.iter().all(|v| *v == 0.0) {
        return Err(domain("contrast is the zero vector"));
    }
    let mean = contrast.dot(&posterior.mu_n);
    let var = contrast.dot(&(&posterior.sigma_n * contrast));
    if !(var > 0.0) {
        return Err(domain("contrast posterior variance must be positive"));
    }
    let z = mean / var.sqrt();
    let pop_one = std_normal_cdf(-z)?;
    Ok((pop_one, two_sided_from_one_sided(pop_one)))
}

/// Frequentist and Bayesian results for every contrast in a set.
///
/// Each report carries the Sasabuchi statistic, its one- and two-sided
/// p-values, and the matching posterior probabilities from `prior`.  The
/// reports are ordered as the contrasts are.
pub fn mvn_reports(
    sample: &MvnSample,
    contrasts: &ContrastSet,
    prior: &MvnPrior,
) -> Result<Vec<TestReport>> {
    if contrasts.dim() != sample.dim {
        return Err(domain(format!(
            "contrast length {} does not match sample dimension {}",
            contrasts.dim(),
            sample.dim
        )));
    }
    let posterior = mvn_posterior(prior, sample)?;
    let mut reports = Vec::with_capacity(contrasts.contrasts.len());
    for c in &contrasts.contrasts {
        let z = sasabuchi_z(sample, c)?;
        let p_one = std_normal_cdf(-z)?;
        let p_two = two_sided_from_one_sided(p_one);
        let (pop_one, pop_two) = pop_contrast(&posterior, c)?;
        let report = TestReport {
            statistic: Some(z),
            p_one,
            p_two,
            pop_one,
            pop_two,
            degenerate: false,
        };
        report.validate()?;
        reports.push(report);
    }
    Ok(reports)
}
