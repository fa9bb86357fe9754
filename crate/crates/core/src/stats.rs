//! Standard normal quantiles and a one-sample Kolmogorov–Smirnov test.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{invalid, Result};

fn standard_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal is valid")
}

/// Inverse standard normal CDF.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return invalid(format!("quantile level must lie in (0, 1), got {p}"));
    }
    Ok(standard_normal().inverse_cdf(p))
}

pub fn normal_cdf(x: f64) -> f64 {
    standard_normal().cdf(x)
}

/// Result of a one-sample KS test against N(0, 1).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct KsOutcome {
    pub statistic: f64,
    pub p_value: f64,
    pub n: usize,
}

impl KsOutcome {
    /// Fails to reject normality at `level`.
    pub fn passes(&self, level: f64) -> bool {
        self.p_value >= level
    }
}

/// Kolmogorov distribution survival function `P(K > λ)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 0.2 {
        // series below converges slowly; the tail mass is 1 to double precision
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample KS test of `sample` against the standard normal, with the
/// asymptotic p-value (Stephens' small-sample correction on `λ`).
pub fn ks_test_standard_normal(sample: &[f64]) -> Result<KsOutcome> {
    if sample.is_empty() {
        return invalid("KS test needs a nonempty sample");
    }
    if sample.iter().any(|v| !v.is_finite()) {
        return invalid("KS test sample contains non-finite values");
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let statistic = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = normal_cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max);
    let sqrt_n = n.sqrt();
    let lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * statistic;
    Ok(KsOutcome { statistic, p_value: kolmogorov_sf(lambda), n: sorted.len() })
}
