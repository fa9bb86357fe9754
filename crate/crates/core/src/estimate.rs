//! Characteristic-function estimators of mixed norms and block sparsity,
//! with plug-in asymptotic variances and delta-method confidence intervals.
//!
//! For measurements `y` with cf `Ψ(t) = exp(−γ^α ‖x̃‖_{2,α}^α |t|^α) φ₀(σt)`
//! the norm power is recovered as
//! `−ln|Re(Ψ̂(t)/φ₀(σt))| / (γ^α |t|^α)`, with `Ψ̂` the empirical cf and `t`
//! the pilot `min{1/median|y|, ω₀/σ}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, numerical, Result};
use crate::numeric::{median, pairwise_sum};
use crate::sketch::{NoiseModel, SketchMeasurements};
use crate::stable::check_alpha_gamma;
use crate::stats::normal_quantile;

/// Version tag written into every JSON record.
pub const SCHEMA_VERSION: &str = "1.0";

/// Smallest α accepted by [`estimate_block_sparsity`]. Below this the
/// `γ^α|t|^α` scaling loses too much precision to be useful.
pub const MIN_ESTIMATION_ALPHA: f64 = 0.01;

/// `(1/m) Σ exp(i t y_k)`.
pub fn empirical_cf(y: &[f64], t: f64) -> Result<Complex64> {
    if y.is_empty() {
        return invalid("empirical characteristic function needs at least one value");
    }
    let (sin, cos): (Vec<f64>, Vec<f64>) = y.iter().map(|&v| (t * v).sin_cos()).unzip();
    let m = y.len() as f64;
    Ok(Complex64::new(pairwise_sum(&cos) / m, pairwise_sum(&sin) / m))
}

/// Pilot evaluation point `min{1/median|y|, ω₀/σ}`.
pub fn pilot_t(y: &[f64], noise: &NoiseModel) -> Result<f64> {
    let abs: Vec<f64> = y.iter().map(|v| v.abs()).collect();
    let mad = median(&abs).ok_or_else(|| crate::Error::InvalidInput("pilot t needs data".into()))?;
    if !(mad > 0.0) {
        return invalid("median of |y| is zero; pilot t is undefined");
    }
    Ok((1.0 / mad).min(noise.t_cap()))
}

/// Estimate of `‖x̃‖_{2,α}^α` from one batch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub alpha: f64,
    /// Estimate of the α-th power of the mixed norm.
    pub value: f64,
    pub t_used: f64,
    pub m: usize,
    /// `Re(Ψ̂/φ₀) ≥ 1` forced the estimate to zero.
    pub clipped: bool,
}

impl NormEstimate {
    /// Estimate of the mixed norm itself, `value^{1/α}`.
    pub fn norm(&self) -> f64 {
        self.value.powf(1.0 / self.alpha)
    }
}

pub fn estimate_norm(
    y: &[f64],
    alpha: f64,
    gamma: f64,
    noise: &NoiseModel,
    t: f64,
) -> Result<NormEstimate> {
    check_alpha_gamma(alpha, gamma)?;
    if t == 0.0 || !t.is_finite() {
        return invalid(format!("cf evaluation point must be finite and nonzero, got {t}"));
    }
    let phi = noise.cf_at(t);
    if phi == 0.0 {
        return invalid("noise characteristic function vanishes at σt");
    }
    let ratio = empirical_cf(y, t)?.re / phi;
    if ratio == 0.0 {
        return numerical("Re(Ψ̂/φ₀) is exactly zero; t is too large for this data");
    }
    let scale = (gamma * t.abs()).powf(alpha);
    let raw = -ratio.abs().ln() / scale;
    let clipped = ratio.abs() >= 1.0;
    Ok(NormEstimate {
        alpha,
        value: if clipped { 0.0 } else { raw },
        t_used: t,
        m: y.len(),
        clipped,
    })
}

/// Limiting variance `θ_α(c, ρ)` of the normalized norm estimator.
///
/// Returned as computed, sign included; gating on it is the caller's job.
pub fn theta_variance(alpha: f64, c: f64, rho: f64, noise: &NoiseModel) -> Result<f64> {
    if c == 0.0 || !c.is_finite() {
        return invalid(format!("theta needs a finite nonzero c, got {c}"));
    }
    let phi0 = |t: f64| noise.family.cf(t);
    let ca = c.abs();
    let c_pow = ca.powf(alpha);
    let phi_1 = phi0(rho * ca);
    if phi_1 == 0.0 {
        return invalid("noise characteristic function vanishes at ρ|c|");
    }
    let denom = 2.0 * phi_1 * phi_1;
    let inner = (2.0 * c_pow).exp() / denom
        + phi0(2.0 * rho * ca) / denom * ((2.0 - 2f64.powf(alpha)) * c_pow).exp()
        - 1.0;
    Ok(inner / ca.powf(2.0 * alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateWarning {
    /// A plug-in θ̂ was non-positive, non-finite or could not be evaluated:
    /// no confidence interval. Increase m or reduce σ.
    VarianceInvalid,
    /// The α-batch cf ratio was ≥ 1 and its norm estimate was clamped.
    ClippedAlpha,
    /// Same for the α = 1 batch.
    ClippedOne,
}

/// Point estimate of `k_α`, plug-in variance pieces and the `1 − β`
/// interval (absent when a θ̂ is non-positive).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsityEstimate {
    pub k_hat: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub norm_alpha: NormEstimate,
    pub norm_1: NormEstimate,
    pub c_hat_alpha: f64,
    pub rho_hat_alpha: f64,
    pub theta_hat_alpha: f64,
    pub c_hat_1: f64,
    pub rho_hat_1: f64,
    pub theta_hat_1: f64,
    pub pi_alpha: f64,
    pub w_hat: f64,
    pub m_total: usize,
    pub beta: f64,
    pub ci: Option<(f64, f64)>,
    pub warnings: Vec<EstimateWarning>,
}

impl SparsityEstimate {
    pub fn ci_low(&self) -> Option<f64> {
        self.ci.map(|c| c.0)
    }

    pub fn ci_high(&self) -> Option<f64> {
        self.ci.map(|c| c.1)
    }

    pub fn variance_valid(&self) -> bool {
        variance_usable(self.theta_hat_alpha, self.theta_hat_1, self.w_hat)
    }

    /// `√((m₁+m_α)/ŵ) (k̂/k − 1)`; `None` when the variance is invalid.
    pub fn studentized(&self, truth: f64) -> Option<f64> {
        self.variance_valid()
            .then(|| (self.m_total as f64 / self.w_hat).sqrt() * (self.k_hat / truth - 1.0))
    }

    pub fn covers(&self, truth: f64) -> bool {
        self.ci.is_some_and(|(lo, hi)| lo <= truth && truth <= hi)
    }
}

/// Plug-in variances must be finite and strictly positive for an interval.
fn variance_usable(theta_alpha: f64, theta_1: f64, w_hat: f64) -> bool {
    [theta_alpha, theta_1, w_hat].iter().all(|v| v.is_finite() && *v > 0.0)
}

struct BatchPlugIn {
    norm: NormEstimate,
    c_hat: f64,
    rho_hat: f64,
    theta_hat: f64,
}

fn batch_plug_in(y: &[f64], alpha: f64, gamma: f64, noise: &NoiseModel) -> Result<BatchPlugIn> {
    let t = pilot_t(y, noise)?;
    let norm = estimate_norm(y, alpha, gamma, noise, t)?;
    if norm.value == 0.0 {
        return numerical(format!(
            "norm estimate for alpha={alpha} clipped to zero; increase the number of measurements"
        ));
    }
    let root = norm.norm();
    let c_hat = gamma * t * root;
    let rho_hat = noise.sigma / (gamma * root);
    // An unevaluable plug-in is reported through the variance gate, not as an error.
    let theta_hat = theta_variance(alpha, c_hat, rho_hat, noise).unwrap_or(f64::NAN);
    Ok(BatchPlugIn { norm, c_hat, rho_hat, theta_hat })
}

/// `k̂ = (N̂_α)^{1/(1−α)} / (N̂_1)^{α/(1−α)}` with `N̂_α` the estimate of
/// `‖x̃‖_{2,α}^α`, plus its asymptotic `1 − β` interval.
pub fn estimate_block_sparsity(meas: &SketchMeasurements, beta: f64) -> Result<SparsityEstimate> {
    let alpha = meas.alpha;
    check_alpha_gamma(alpha, meas.gamma)?;
    if alpha == 1.0 {
        return invalid("block sparsity estimation needs alpha != 1");
    }
    if alpha < MIN_ESTIMATION_ALPHA {
        return invalid(format!("alpha below the supported floor {MIN_ESTIMATION_ALPHA}"));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return invalid(format!("beta must lie in (0, 1), got {beta}"));
    }
    if meas.batch_1.is_empty() || meas.batch_alpha.is_empty() {
        return invalid("both measurement batches must be nonempty");
    }
    let gamma = meas.gamma;
    let a = batch_plug_in(&meas.batch_alpha, alpha, gamma, &meas.noise)?;
    let one = batch_plug_in(&meas.batch_1, 1.0, gamma, &meas.noise)?;

    let inv = 1.0 / (1.0 - alpha);
    // exp of the log form keeps tiny α (exponents near 1) and huge norms finite
    let k_hat = (inv * a.norm.value.ln() - alpha * inv * one.norm.value.ln()).exp();
    if !k_hat.is_finite() {
        return numerical("block sparsity estimate is not finite");
    }

    let pi_alpha = meas.pi_alpha();
    let w_hat = a.theta_hat / pi_alpha * inv * inv
        + one.theta_hat / (1.0 - pi_alpha) * (alpha * inv).powi(2);
    let m_total = meas.m1() + meas.m_alpha();

    let mut warnings = Vec::new();
    if a.norm.clipped {
        warnings.push(EstimateWarning::ClippedAlpha);
    }
    if one.norm.clipped {
        warnings.push(EstimateWarning::ClippedOne);
    }
    let ci = if variance_usable(a.theta_hat, one.theta_hat, w_hat) {
        let z = normal_quantile(1.0 - beta / 2.0)?;
        let h = (w_hat / m_total as f64).sqrt() * z;
        Some(((1.0 - h) * k_hat, (1.0 + h) * k_hat))
    } else {
        warnings.push(EstimateWarning::VarianceInvalid);
        None
    };

    Ok(SparsityEstimate {
        k_hat,
        alpha,
        gamma,
        norm_alpha: a.norm,
        norm_1: one.norm,
        c_hat_alpha: a.c_hat,
        rho_hat_alpha: a.rho_hat,
        theta_hat_alpha: a.theta_hat,
        c_hat_1: one.c_hat,
        rho_hat_1: one.rho_hat,
        theta_hat_1: one.theta_hat,
        pi_alpha,
        w_hat,
        m_total,
        beta,
        ci,
        warnings,
    })
}

/// Flat JSON record of one estimate, for cross-implementation comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub spec_version: String,
    pub alpha: f64,
    /// Complex block size `d` (the real transform uses `2d`).
    pub d: usize,
    pub gamma: f64,
    pub sigma: f64,
    pub noise_family: String,
    pub m1: usize,
    pub m_alpha: usize,
    pub k_hat: f64,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub beta: f64,
    pub theta_alpha: f64,
    pub theta_1: f64,
    pub w_hat: f64,
    pub clipped_alpha: bool,
    pub clipped_1: bool,
    pub warnings: Vec<EstimateWarning>,
}

impl EstimateRecord {
    pub fn new(est: &SparsityEstimate, meas: &SketchMeasurements) -> Self {
        Self {
            spec_version: SCHEMA_VERSION.to_string(),
            alpha: est.alpha,
            d: meas.block_dim / 2,
            gamma: est.gamma,
            sigma: meas.noise.sigma,
            noise_family: meas.noise.family.to_string(),
            m1: meas.m1(),
            m_alpha: meas.m_alpha(),
            k_hat: est.k_hat,
            ci_low: est.ci_low(),
            ci_high: est.ci_high(),
            beta: est.beta,
            theta_alpha: est.theta_hat_alpha,
            theta_1: est.theta_hat_1,
            w_hat: est.w_hat,
            clipped_alpha: est.norm_alpha.clipped,
            clipped_1: est.norm_1.clipped,
            warnings: est.warnings.clone(),
        }
    }
}
