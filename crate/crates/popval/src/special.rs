//! Special functions: error function, log-gamma, and the regularized
//! incomplete beta function.
//!
//! These are the accuracy-critical kernels everything else stands on, so each
//! is a careful port of a classic, well-characterized approximation:
//!
//! * `erf`/`erfc` — W. J. Cody's rational Chebyshev approximations
//!   (Math. Comp. 23, 1969; SPECFUN `CALERF` coefficients), relative error
//!   within a few ulp across the whole double range.
//! * `ln_gamma` — the 14-term Lanczos expansion with g = 671/128, accurate to
//!   about 1e-15 relative for positive arguments.
//! * `regularized_incomplete_beta` — modified Lentz evaluation of the
//!   standard continued fraction, switching to the symmetric tail at
//!   x = a/(a+b) so the fraction is always evaluated on its fast side.
//!
//! Accuracy was cross-checked against a 50-digit reference implementation
//! before the coefficients were committed here; the unit tests pin spot
//! values and identities at tolerances well inside the advertised error.

use crate::error::{domain, non_convergence, Result};

// ──────────────────────────────────────────────────────────────────────────
// Error function (Cody)
// ──────────────────────────────────────────────────────────────────────────

const ERF_A: [f64; 5] = [
    3.16112374387056560e0,
    1.13864154151050156e2,
    3.77485237685302021e2,
    3.20937758913846947e3,
    1.85777706184603153e-1,
];
const ERF_B: [f64; 4] = [
    2.36012909523441209e1,
    2.44024637934444173e2,
    1.28261652607737228e3,
    2.84423683343917062e3,
];
const ERF_C: [f64; 9] = [
    5.64188496988670089e-1,
    8.88314979438837594e0,
    6.61191906371416295e1,
    2.98635138197400131e2,
    8.81952221241769090e2,
    1.71204761263407058e3,
    2.05107837782607147e3,
    1.23033935479799725e3,
    2.15311535474403846e-8,
];
const ERF_D: [f64; 8] = [
    1.57449261107098347e1,
    1.17693950891312499e2,
    5.37181101862009858e2,
    1.62138957456669019e3,
    3.29079923573345963e3,
    4.36261909014324716e3,
    3.43936767414372164e3,
    1.23033935480374942e3,
];
const ERF_P: [f64; 6] = [
    3.05326634961232344e-1,
    3.60344899949804439e-1,
    1.25781726111229246e-1,
    1.60837851487422766e-2,
    6.58749161529837803e-4,
    1.63153871373020978e-2,
];
const ERF_Q: [f64; 5] = [
    2.56852019228982242e0,
    1.87295284992346047e0,
    5.27905102951428412e-1,
    6.05183413124413191e-2,
    2.33520497626869185e-3,
];

/// 1/sqrt(pi).
const FRAC_1_SQRT_PI: f64 = 5.641_895_835_477_562_9e-1;
/// Crossover between the central erf expansion and the erfc expansions.
const ERF_THRESH: f64 = 0.46875;

/// Error function, |erf(x) − exact| within a few ulp.
pub fn erf(x: f64) -> f64 {
    let y = x.abs();
    if y <= ERF_THRESH {
        // Central region: erf(x) = x · P(x²)/Q(x²).
        let z = if y > 1.18e-16 { y * y } else { 0.0 };
        let mut num = ERF_A[4] * z;
        let mut den = z;
        for i in 0..3 {
            num = (num + ERF_A[i]) * z;
            den = (den + ERF_B[i]) * z;
        }
        x * (num + ERF_A[3]) / (den + ERF_B[3])
    } else {
        let tail = 1.0 - erfc_positive(y);
        if x < 0.0 {
            -tail
        } else {
            tail
        }
    }
}

/// Complementary error function; keeps full relative accuracy in the far
/// tail where `1 - erf(x)` would cancel to nothing.
pub fn erfc(x: f64) -> f64 {
    if x.abs() <= ERF_THRESH {
        return 1.0 - erf(x);
    }
    let v = erfc_positive(x.abs());
    if x < 0.0 {
        2.0 - v
    } else {
        v
    }
}

/// erfc on [ERF_THRESH, ∞). Splits exp(−y²) as exp(−q²)·exp(−(y−q)(y+q))
/// with q = trunc(16y)/16 so the argument reduction does not lose digits.
fn erfc_positive(y: f64) -> f64 {
    debug_assert!(y >= ERF_THRESH);
    if y >= 26.5 {
        // erfc underflows to zero in double precision past ~26.6.
        return 0.0;
    }
    let r = if y <= 4.0 {
        let mut num = ERF_C[8] * y;
        let mut den = y;
        for i in 0..7 {
            num = (num + ERF_C[i]) * y;
            den = (den + ERF_D[i]) * y;
        }
        (num + ERF_C[7]) / (den + ERF_D[7])
    } else {
        let z = 1.0 / (y * y);
        let mut num = ERF_P[5] * z;
        let mut den = z;
        for i in 0..4 {
            num = (num + ERF_P[i]) * z;
            den = (den + ERF_Q[i]) * z;
        }
        let frac = z * (num + ERF_P[4]) / (den + ERF_Q[4]);
        (FRAC_1_SQRT_PI - frac) / y
    };
    let q = (y * 16.0).floor() / 16.0;
    let delta = (y - q) * (y + q);
    r * (-q * q).exp() * (-delta).exp()
}

// ──────────────────────────────────────────────────────────────────────────
// Log-gamma (Lanczos)
// ──────────────────────────────────────────────────────────────────────────

const LANCZOS_G: f64 = 5.242_187_5; // 671/128
const LANCZOS_COEF: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

/// Natural log of the gamma function for x > 0, about 1e-15 relative error.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    let mut tmp = x + LANCZOS_G;
    tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = 0.999_999_999_999_997_092;
    let mut y = x;
    for c in LANCZOS_COEF {
        y += 1.0;
        ser += c / y;
    }
    Ok(tmp + (2.506_628_274_631_000_5 * ser / x).ln())
}

/// ln B(a, b) = ln Γ(a) + ln Γ(b) − ln Γ(a+b).
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    Ok(ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?)
}

// ──────────────────────────────────────────────────────────────────────────
// Regularized incomplete beta
// ──────────────────────────────────────────────────────────────────────────

/// Iteration cap for the continued fraction. Empirically the worst case in
/// this crate's parameter range (Student-t CDFs up to df = 1e5, beta
/// posteriors up to n = 500+) needs fewer than 150 iterations, so 300 is a
/// true failure signal rather than a tight budget.
const BETA_CF_MAX_ITER: usize = 300;
/// Convergence threshold on the per-step multiplier of the Lentz product.
const BETA_CF_EPS: f64 = 1e-14;

/// Regularized incomplete beta function I_x(a, b), relative error ≤ 1e-12
/// over moderate (a, b).
///
/// Evaluated by the continued fraction on whichever side of the symmetry
/// point x = a/(a+b) converges quickly: the direct fraction for
/// x ≤ a/(a+b), and 1 − I_{1−x}(b, a) otherwise. Non-convergence within the
/// iteration cap is a reported error, never a silently wrong value.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(domain(format!(
            "incomplete beta requires a, b > 0, got a={a}, b={b}"
        )));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("incomplete beta requires 0 <= x <= 1, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    // Shared prefactor x^a (1−x)^b / B(a,b); invariant under the symmetry
    // swap (a, b, x) -> (b, a, 1−x).
    let front = (a * x.ln() + b * (-x).ln_1p() - ln_beta(a, b)?).exp();
    if x <= a / (a + b) {
        Ok(front * beta_cf(a, b, x)? / a)
    } else {
        Ok(1.0 - front * beta_cf(b, a, 1.0 - x)? / b)
    }
}

/// Modified Lentz evaluation of the incomplete-beta continued fraction.
fn beta_cf(a: f64, b: f64, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=BETA_CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        // Even step.
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        // Odd step.
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < BETA_CF_EPS {
            return Ok(h);
        }
    }
    Err(non_convergence(format!(
        "incomplete beta continued fraction did not converge within \
         {BETA_CF_MAX_ITER} iterations (a={a}, b={b}, x={x})"
    )))
}
