//! Chi-square distribution utilities used by the training stop rule.
//!
//! Only the lower regularized incomplete gamma function, the chi-square CDF
//! built on it, and a bisection quantile are provided.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("domain error: {0}")]
    Domain(String),
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

const GAMMA_EPS: f64 = 1e-16;
const GAMMA_MAX_ITER: usize = 10_000;
const TINY: f64 = 1e-300;

/// Regularized lower incomplete gamma function `P(a, x)`.
///
/// Uses the power series below `x < a + 1` and a modified-Lentz continued
/// fraction for `Q(a, x)` above it.
pub fn regularized_gamma_lower(a: f64, x: f64) -> Result<f64, StatsError> {
    if !a.is_finite() || !x.is_finite() || a <= 0.0 || x < 0.0 {
        return Err(StatsError::Domain(format!(
            "regularized_gamma_lower requires a > 0 and x >= 0 (finite), got a={a}, x={x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let log_prefactor = a * x.ln() - x - ln_gamma(a);
    if x < a + 1.0 {
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut denom = a;
        for _ in 0..GAMMA_MAX_ITER {
            denom += 1.0;
            term *= x / denom;
            sum += term;
            if term.abs() < sum.abs() * GAMMA_EPS {
                break;
            }
        }
        Ok((sum * log_prefactor.exp()).clamp(0.0, 1.0))
    } else {
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..GAMMA_MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < GAMMA_EPS {
                break;
            }
        }
        let upper = log_prefactor.exp() * h;
        Ok((1.0 - upper).clamp(0.0, 1.0))
    }
}

/// Chi-square CDF with `df` degrees of freedom evaluated at `t`.
pub fn chi2_cdf(t: f64, df: u32) -> Result<f64, StatsError> {
    if df == 0 {
        return Err(StatsError::Domain("chi-square df must be >= 1".into()));
    }
    if t.is_nan() {
        return Err(StatsError::Domain("chi-square CDF at NaN".into()));
    }
    if t <= 0.0 {
        return Ok(0.0);
    }
    if t.is_infinite() {
        return Ok(1.0);
    }
    regularized_gamma_lower(df as f64 / 2.0, t / 2.0)
}

/// Upper-tail quantile: returns `t` with `CDF(t; df) = 1 - alpha`.
///
/// Bisection on the CDF over `[0, df + 20·sqrt(2·df) + 50]`, widened if the
/// bracket does not reach the target probability.
pub fn chi2_quantile(df: u32, alpha: f64) -> Result<f64, StatsError> {
    if df == 0 {
        return Err(StatsError::Domain("chi-square df must be >= 1".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(StatsError::Domain(format!(
            "significance alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let target = 1.0 - alpha;
    let k = df as f64;
    let mut lo = 0.0_f64;
    let mut hi = k + 20.0 * (2.0 * k).sqrt() + 50.0;
    while chi2_cdf(hi, df)? < target {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if chi2_cdf(mid, df)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// How the stopping threshold ε is derived from the effective degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum EpsilonMode {
    /// Upper-tail chi-square quantile at the given significance.
    Quantile { significance_alpha: f64 },
    /// ε equals the degrees of freedom (the mean of the distribution).
    DfMean,
}

impl Default for EpsilonMode {
    fn default() -> Self {
        EpsilonMode::Quantile {
            significance_alpha: 0.05,
        }
    }
}

/// A resolved stopping threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareCritical {
    pub df: u32,
    /// `None` under [`EpsilonMode::DfMean`].
    pub alpha: Option<f64>,
    pub value: f64,
}

impl ChiSquareCritical {
    pub fn resolve(df: u32, mode: EpsilonMode) -> Result<Self, StatsError> {
        match mode {
            EpsilonMode::Quantile { significance_alpha } => Ok(Self {
                df,
                alpha: Some(significance_alpha),
                value: chi2_quantile(df, significance_alpha)?,
            }),
            EpsilonMode::DfMean => {
                if df == 0 {
                    return Err(StatsError::Domain("chi-square df must be >= 1".into()));
                }
                Ok(Self {
                    df,
                    alpha: None,
                    value: df as f64,
                })
            }
        }
    }
}
