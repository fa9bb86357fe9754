//! Stable random-projection measurements `y_i = ⟨r_i, x̃⟩ + σ ε_i`.
//!
//! Rows `r_i` are drawn block by block from `S(2d, α, γ)` and discarded as
//! soon as their inner product is taken; only the `y` values are kept.
//! Blocks of `x̃` that are identically zero contribute exactly nothing, so
//! their row segments are never drawn.

use std::fmt::{self, Write as _};
use std::io::BufRead;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numeric::pairwise_sum;
use crate::rng::RngStream;
use crate::signal::{BlockNorms, RealBlockSignal};
use crate::stable::{check_alpha_gamma, IsotropicStable, StableLawParams};

/// Unit-scale noise distribution `F₀`; symmetric about zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseFamily {
    Gaussian,
    Cauchy,
    None,
}

impl NoiseFamily {
    /// Characteristic function `φ₀(t)` of the unit-scale family.
    pub fn cf(self, t: f64) -> f64 {
        match self {
            NoiseFamily::Gaussian => (-0.5 * t * t).exp(),
            NoiseFamily::Cauchy => (-t.abs()).exp(),
            NoiseFamily::None => 1.0,
        }
    }

    /// Largest `ω₀` with `φ₀ > 1/2` on `[0, ω₀)`.
    pub fn omega0(self) -> f64 {
        match self {
            NoiseFamily::Gaussian => (2.0 * std::f64::consts::LN_2).sqrt(),
            NoiseFamily::Cauchy => std::f64::consts::LN_2,
            NoiseFamily::None => f64::INFINITY,
        }
    }

    fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            NoiseFamily::Gaussian => rng.sample(StandardNormal),
            NoiseFamily::Cauchy => {
                let u: f64 = rng.gen();
                (std::f64::consts::PI * (u - 0.5)).tan()
            }
            NoiseFamily::None => 0.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NoiseFamily::Gaussian => "gaussian",
            NoiseFamily::Cauchy => "cauchy",
            NoiseFamily::None => "none",
        }
    }
}

impl fmt::Display for NoiseFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NoiseFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(NoiseFamily::Gaussian),
            "cauchy" => Ok(NoiseFamily::Cauchy),
            "none" => Ok(NoiseFamily::None),
            other => Err(Error::InvalidInput(format!("unknown noise family `{other}`"))),
        }
    }
}

/// Additive measurement noise `σ ε` with `ε ~ F₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub sigma: f64,
    pub family: NoiseFamily,
}

impl NoiseModel {
    pub fn new(sigma: f64, family: NoiseFamily) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return invalid(format!("noise scale must be finite and >= 0, got {sigma}"));
        }
        Ok(Self { sigma, family })
    }

    pub fn noiseless() -> Self {
        Self { sigma: 0.0, family: NoiseFamily::None }
    }

    pub fn gaussian(sigma: f64) -> Result<Self> {
        Self::new(sigma, NoiseFamily::Gaussian)
    }

    /// `φ₀(σ t)`.
    pub fn cf_at(&self, t: f64) -> f64 {
        self.family.cf(self.sigma * t)
    }

    /// Noise cap `ω₀/σ` on the cf evaluation point; `+∞` when noiseless.
    pub fn t_cap(&self) -> f64 {
        if self.sigma == 0.0 {
            f64::INFINITY
        } else {
            self.family.omega0() / self.sigma
        }
    }

    fn is_active(&self) -> bool {
        self.sigma > 0.0 && self.family != NoiseFamily::None
    }
}

/// `m` measurements of `signal` with `S(block_size, α, γ)` projection blocks.
pub fn sketch(
    signal: &RealBlockSignal,
    alpha: f64,
    gamma: f64,
    m: usize,
    noise: NoiseModel,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    check_alpha_gamma(alpha, gamma)?;
    if m == 0 {
        return invalid("number of measurements must be at least 1");
    }
    if signal.is_zero() {
        return invalid("cannot sketch the zero signal");
    }
    let sampler = IsotropicStable::new(StableLawParams::new(signal.block_size(), alpha, gamma)?);
    let active: Vec<&[f64]> = signal.blocks().filter(|b| b.iter().any(|&v| v != 0.0)).collect();
    let mut parts = vec![0.0; active.len()];
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        for (p, block) in parts.iter_mut().zip(&active) {
            *p = sampler.sample_projection(rng, block);
        }
        let mut y = pairwise_sum(&parts);
        if noise.is_active() {
            y += noise.sigma * noise.family.sample(rng);
        }
        out.push(y);
    }
    Ok(out)
}

/// Fork tags for the two independent batches.
pub const BATCH_ONE_TAG: u64 = 1;
pub const BATCH_ALPHA_TAG: u64 = 2;

/// Two independent measurement batches: one with α = 1 projections (for
/// `‖x̃‖_{2,1}`) and one with α projections (for `‖x̃‖_{2,α}^α`).
#[derive(Debug, Clone, PartialEq)]
pub struct SketchMeasurements {
    pub batch_1: Vec<f64>,
    pub batch_alpha: Vec<f64>,
    pub alpha: f64,
    pub gamma: f64,
    pub block_dim: usize,
    pub noise: NoiseModel,
    pub seed: u64,
    pub stream_id: u64,
}

impl SketchMeasurements {
    pub fn m1(&self) -> usize {
        self.batch_1.len()
    }

    pub fn m_alpha(&self) -> usize {
        self.batch_alpha.len()
    }

    /// `π_α = m_α / (m₁ + m_α)`.
    pub fn pi_alpha(&self) -> f64 {
        self.m_alpha() as f64 / (self.m1() + self.m_alpha()) as f64
    }
}

pub fn sketch_pair(
    signal: &RealBlockSignal,
    alpha: f64,
    gamma: f64,
    m1: usize,
    m_alpha: usize,
    noise: NoiseModel,
    rng: &RngStream,
) -> Result<SketchMeasurements> {
    let batch_1 = sketch(signal, 1.0, gamma, m1, noise, &mut rng.fork(BATCH_ONE_TAG))?;
    let batch_alpha = sketch(signal, alpha, gamma, m_alpha, noise, &mut rng.fork(BATCH_ALPHA_TAG))?;
    Ok(SketchMeasurements {
        batch_1,
        batch_alpha,
        alpha,
        gamma,
        block_dim: signal.block_size(),
        noise,
        seed: rng.seed(),
        stream_id: rng.stream_id(),
    })
}

/// One measurement batch with the parameters that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBatch {
    pub alpha: f64,
    pub gamma: f64,
    pub noise: NoiseModel,
    pub values: Vec<f64>,
}

impl MeasurementBatch {
    /// CSV form: `# alpha=.. gamma=.. sigma=.. family=.. m=..`, a `y`
    /// column header, then one value per row.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(24 * self.values.len() + 64);
        let _ = writeln!(
            out,
            "# alpha={} gamma={} sigma={} family={} m={}",
            self.alpha,
            self.gamma,
            self.noise.sigma,
            self.noise.family,
            self.values.len()
        );
        out.push_str("y\n");
        for y in &self.values {
            let _ = writeln!(out, "{y}");
        }
        out
    }

    pub fn from_csv<R: BufRead>(reader: R) -> Result<Self> {
        let fmt_err = |m: String| Error::Format(m);
        let mut lines = reader.lines();
        let mut next = || lines.next().transpose().map_err(|e| fmt_err(e.to_string()));
        let header = next()?.ok_or_else(|| fmt_err("empty measurement file".into()))?;
        let body = header
            .trim()
            .strip_prefix('#')
            .ok_or_else(|| fmt_err("measurement header must start with `#`".into()))?;
        let (mut alpha, mut gamma, mut sigma, mut family, mut m) = (None, None, None, None, None);
        for token in body.split_whitespace() {
            let Some((k, v)) = token.split_once('=') else { continue };
            match k {
                "alpha" => alpha = v.parse::<f64>().ok(),
                "gamma" => gamma = v.parse::<f64>().ok(),
                "sigma" => sigma = v.parse::<f64>().ok(),
                "family" => family = v.parse::<NoiseFamily>().ok(),
                "m" => m = v.parse::<usize>().ok(),
                _ => {}
            }
        }
        let (Some(alpha), Some(gamma), Some(sigma), Some(family), Some(m)) =
            (alpha, gamma, sigma, family, m)
        else {
            return Err(fmt_err(format!("incomplete measurement header `{header}`")));
        };
        let column = next()?.ok_or_else(|| fmt_err("missing `y` column header".into()))?;
        if column.trim() != "y" {
            return Err(fmt_err(format!("expected `y` column header, got `{column}`")));
        }
        let mut values = Vec::with_capacity(m);
        while let Some(line) = next()? {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            values.push(line.parse::<f64>().map_err(|_| fmt_err(format!("bad value `{line}`")))?);
        }
        if values.len() != m {
            return Err(fmt_err(format!("header says m={m} but found {} values", values.len())));
        }
        Ok(Self { alpha, gamma, noise: NoiseModel::new(sigma, family)?, values })
    }
}
