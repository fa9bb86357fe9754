//! Symmetric α-stable sampling.
//!
//! Scalars use the Chambers–Mallows–Stuck transform. Isotropic vectors
//! `S(d, α, γ)`, with characteristic function `exp(−γ^α ‖u‖₂^α)`, are built
//! as a sub-Gaussian mixture `v = √W · g`: `g` is Gaussian with per-component
//! variance `2γ²` and `W` is a totally skewed positive (α/2)-stable variate
//! with Laplace transform `E[exp(−sW)] = exp(−s^{α/2})`.
//!
//! α = 2 (Gaussian) and α = 1 (Cauchy) have closed-form fast paths.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{invalid, Result};

/// Angles are kept this far away from the poles of the CMS transform.
const ANGLE_GUARD: f64 = 1e-10;

/// Log-magnitude cap on heavy-tailed draws. Values beyond `e^690` would
/// overflow once summed or multiplied further downstream.
const LOG_MAGNITUDE_CAP: f64 = 690.0;

/// Parameters of `S(dim, α, γ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableLawParams {
    pub dim: usize,
    pub alpha: f64,
    pub gamma: f64,
}

impl StableLawParams {
    pub fn new(dim: usize, alpha: f64, gamma: f64) -> Result<Self> {
        check_alpha_gamma(alpha, gamma)?;
        if dim == 0 {
            return invalid("stable law dimension must be at least 1");
        }
        Ok(Self { dim, alpha, gamma })
    }
}

pub(crate) fn check_alpha_gamma(alpha: f64, gamma: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return invalid(format!("alpha must lie in (0, 2], got {alpha}"));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return invalid(format!("gamma must be positive and finite, got {gamma}"));
    }
    Ok(())
}

fn capped_exp(log_value: f64) -> f64 {
    log_value.min(LOG_MAGNITUDE_CAP).exp()
}

fn uniform_angle<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let u: f64 = rng.gen();
    (lo + (hi - lo) * u).clamp(lo + ANGLE_GUARD, hi - ANGLE_GUARD)
}

/// Standard symmetric α-stable variate (cf `exp(−|t|^α)`), CMS transform.
fn standard_sas<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let v = uniform_angle(rng, -FRAC_PI_2, FRAC_PI_2);
    let w: f64 = rng.sample(Exp1);
    let s = (alpha * v).sin();
    let log_mag = s.abs().ln() - v.cos().ln() / alpha
        + (1.0 - alpha) / alpha * (((1.0 - alpha) * v).cos().ln() - w.ln());
    s.signum() * capped_exp(log_mag)
}

/// Scalar symmetric α-stable variate with cf `exp(−γ^α |t|^α)`.
pub fn sample_scalar_sas<R: Rng + ?Sized>(alpha: f64, gamma: f64, rng: &mut R) -> Result<f64> {
    check_alpha_gamma(alpha, gamma)?;
    Ok(gamma * scalar_sas_unchecked(alpha, rng))
}

fn scalar_sas_unchecked<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    if alpha == 2.0 {
        let z: f64 = rng.sample(StandardNormal);
        SQRT_2 * z
    } else if alpha == 1.0 {
        uniform_angle(rng, -FRAC_PI_2, FRAC_PI_2).tan()
    } else {
        standard_sas(alpha, rng)
    }
}

/// Logarithm of a positive stable variate of index `a ∈ (0, 1)` with Laplace
/// transform `exp(−s^a)` (CMS/Kanter form, skewness 1).
fn log_positive_stable<R: Rng + ?Sized>(a: f64, rng: &mut R) -> f64 {
    let u = uniform_angle(rng, 0.0, PI);
    let e: f64 = rng.sample(Exp1);
    (a * u).sin().ln() - u.sin().ln() / a + (1.0 - a) / a * (((1.0 - a) * u).sin().ln() - e.ln())
}

/// Sampler for `S(dim, α, γ)` vectors.
#[derive(Debug, Clone, Copy)]
pub struct IsotropicStable {
    params: StableLawParams,
    gauss_scale: f64,
}

impl IsotropicStable {
    pub fn new(params: StableLawParams) -> Self {
        Self { params, gauss_scale: SQRT_2 * params.gamma }
    }

    pub fn params(&self) -> StableLawParams {
        self.params
    }

    /// Draw the mixing scale `√W · √2 γ` shared by all components of one
    /// vector. For α = 1 this is `γ / |Z|`, giving the multivariate Cauchy.
    pub fn sample_scale<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let alpha = self.params.alpha;
        if alpha == 2.0 {
            self.gauss_scale
        } else if alpha == 1.0 {
            let z: f64 = rng.sample(StandardNormal);
            // γ g / |Z| with unit-variance g.
            self.params.gamma * capped_exp(-z.abs().ln())
        } else {
            self.gauss_scale * capped_exp(0.5 * log_positive_stable(0.5 * alpha, rng))
        }
    }

    /// Fill `out` (length `dim`) with one draw.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.params.dim);
        let scale = self.sample_scale(rng);
        for v in out.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *v = scale * z;
        }
    }

    /// `⟨v, x⟩` for one fresh draw `v`, without materializing `v`.
    pub(crate) fn sample_projection<R: Rng + ?Sized>(&self, rng: &mut R, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.params.dim);
        let scale = self.sample_scale(rng);
        let mut acc = 0.0;
        for &xi in x {
            let z: f64 = rng.sample(StandardNormal);
            acc += z * xi;
        }
        scale * acc
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut out = vec![0.0; self.params.dim];
        self.sample_into(rng, &mut out);
        out
    }
}

/// One draw from `S(dim, α, γ)`.
pub fn sample_isotropic_vector<R: Rng + ?Sized>(params: StableLawParams, rng: &mut R) -> Vec<f64> {
    IsotropicStable::new(params).sample(rng)
}

/// A projection row: `n_blocks` independent `S(block_dim, α, γ)` draws,
/// concatenated.
pub fn sample_projection_row<R: Rng + ?Sized>(
    n_blocks: usize,
    block_dim: usize,
    alpha: f64,
    gamma: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let sampler = IsotropicStable::new(StableLawParams::new(block_dim, alpha, gamma)?);
    let mut row = vec![0.0; n_blocks * block_dim];
    for chunk in row.chunks_exact_mut(block_dim) {
        sampler.sample_into(rng, chunk);
    }
    Ok(row)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{median, sample_variance};
    use crate::rng::RngStream;

    fn ecf(draws: &[f64], t: f64) -> f64 {
        draws.iter().map(|y| (t * y).cos()).sum::<f64>() / draws.len() as f64
    }

    fn scalars(alpha: f64, gamma: f64, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = RngStream::new(seed, 0);
        (0..n).map(|_| sample_scalar_sas(alpha, gamma, &mut rng).unwrap()).collect()
    }

    #[test]
    fn gaussian_preset_has_unit_variance() {
        let d = scalars(2.0, SQRT_2 / 2.0, 100_000, 1);
        assert!((sample_variance(&d) - 1.0).abs() < 0.03);
    }

    #[test]
    fn cauchy_preset_has_unit_median_abs() {
        let d = scalars(1.0, 1.0, 100_000, 2);
        let abs: Vec<f64> = d.iter().map(|v| v.abs()).collect();
        assert!((median(&abs).unwrap() - 1.0).abs() < 0.03);
    }

    #[test]
    fn scalar_cf_matches_definition() {
        for (i, &(alpha, gamma)) in [(0.3, 1.0), (0.5, 0.7), (1.0, 1.3), (1.5, 1.0), (1.9, 0.5), (2.0, 1.0)]
            .iter()
            .enumerate()
        {
            let d = scalars(alpha, gamma, 100_000, 10 + i as u64);
            let expected = (-gamma.powf(alpha)).exp();
            assert!((ecf(&d, 1.0) - expected).abs() < 0.02, "alpha={alpha}");
        }
    }

    #[test]
    fn generic_cms_agrees_near_fast_paths() {
        // α close to 1 and 2 through the general transform.
        for (alpha, seed) in [(0.999, 3), (1.999, 4)] {
            let d = scalars(alpha, 1.0, 100_000, seed);
            assert!((ecf(&d, 0.7) - (-(0.7f64).powf(alpha)).exp()).abs() < 0.02);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut rng = RngStream::new(0, 0);
        assert!(sample_scalar_sas(0.0, 1.0, &mut rng).is_err());
        assert!(sample_scalar_sas(2.1, 1.0, &mut rng).is_err());
        assert!(sample_scalar_sas(1.0, 0.0, &mut rng).is_err());
        assert!(StableLawParams::new(0, 1.0, 1.0).is_err());
        assert!(sample_projection_row(2, 2, 3.0, 1.0, &mut rng).is_err());
    }

    #[test]
    fn gaussian_vector_components_uncorrelated() {
        let p = StableLawParams::new(2, 2.0, SQRT_2 / 2.0).unwrap();
        let s = IsotropicStable::new(p);
        let mut rng = RngStream::new(5, 0);
        let n = 100_000;
        let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
        for _ in 0..n {
            let v = s.sample(&mut rng);
            sxy += v[0] * v[1];
            sxx += v[0] * v[0];
            syy += v[1] * v[1];
        }
        assert!((sxx / n as f64 - 1.0).abs() < 0.03);
        assert!((syy / n as f64 - 1.0).abs() < 0.03);
        assert!((sxy / (sxx * syy).sqrt()).abs() < 0.02);
    }

    #[test]
    fn vector_cf_matches_definition_on_probes() {
        let probes: [&[f64]; 5] = [
            &[1.0, 0.0, 0.0],
            &[0.0, 0.5, 0.0],
            &[0.3, -0.4, 0.0],
            &[0.2, 0.2, 0.2],
            &[-1.0, 0.5, 0.7],
        ];
        for (i, &(alpha, gamma)) in [(0.5, 1.0), (1.0, 1.0), (1.5, 0.8), (2.0, SQRT_2 / 2.0)].iter().enumerate() {
            let sampler = IsotropicStable::new(StableLawParams::new(3, alpha, gamma).unwrap());
            let mut rng = RngStream::new(20 + i as u64, 0);
            let draws: Vec<Vec<f64>> = (0..100_000).map(|_| sampler.sample(&mut rng)).collect();
            for u in probes {
                let emp = draws
                    .iter()
                    .map(|v| v.iter().zip(u).map(|(a, b)| a * b).sum::<f64>().cos())
                    .sum::<f64>()
                    / draws.len() as f64;
                let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
                let expected = (-(gamma * norm).powf(alpha)).exp();
                assert!((emp - expected).abs() < 0.02, "alpha={alpha} u={u:?} emp={emp} exp={expected}");
            }
        }
    }

    /// Two-sample Kolmogorov–Smirnov statistic.
    fn ks_two_sample(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        let (mut i, mut j, mut d) = (0, 0, 0.0f64);
        while i < a.len() && j < b.len() {
            let x = a[i].min(b[j]);
            while i < a.len() && a[i] <= x {
                i += 1;
            }
            while j < b.len() && b[j] <= x {
                j += 1;
            }
            d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
        }
        d
    }

    #[test]
    fn projections_are_rotation_invariant() {
        let n = 10_000;
        for (k, alpha) in [0.7, 1.0, 1.6].into_iter().enumerate() {
            let s = IsotropicStable::new(StableLawParams::new(2, alpha, 1.0).unwrap());
            let mut rng = RngStream::new(40 + k as u64, 0);
            let u1 = [1.0, 0.0];
            let u2 = [0.6, 0.8];
            let a: Vec<f64> = (0..n).map(|_| s.sample_projection(&mut rng, &u1)).collect();
            let b: Vec<f64> = (0..n).map(|_| s.sample_projection(&mut rng, &u2)).collect();
            let crit = 1.628 * ((2 * n) as f64 / (n * n) as f64).sqrt();
            assert!(ks_two_sample(a, b) < crit);
        }
    }

    #[test]
    fn projection_row_blocks_independent() {
        let mut rng = RngStream::new(6, 0);
        let n = 100_000;
        let (mut s01, mut s00, mut s11, mut s23) = (0.0, 0.0, 0.0, 0.0);
        for _ in 0..n {
            let r = sample_projection_row(3, 2, 2.0, 1.0, &mut rng).unwrap();
            assert_eq!(r.len(), 6);
            s01 += r[0] * r[2];
            s23 += r[3] * r[5];
            s00 += r[0] * r[0];
            s11 += r[2] * r[2];
        }
        assert!((s01 / (s00 * s11).sqrt()).abs() < 0.02);
        assert!((s23 / n as f64 / 2.0).abs() < 0.02);
        // α = 2 entries are N(0, 2γ²).
        assert!((s00 / n as f64 - 2.0).abs() < 0.06);
    }

    #[test]
    fn sum_stability() {
        // (v1 + v2) / 2^{1/α} ~ S(d, α, γ).
        let alpha = 0.8;
        let s = IsotropicStable::new(StableLawParams::new(2, alpha, 1.0).unwrap());
        let mut rng = RngStream::new(8, 0);
        let u = [0.4, -0.3];
        let m = 100_000;
        let emp = (0..m)
            .map(|_| {
                let a = s.sample_projection(&mut rng, &u);
                let b = s.sample_projection(&mut rng, &u);
                ((a + b) / 2f64.powf(1.0 / alpha)).cos()
            })
            .sum::<f64>()
            / m as f64;
        let expected = (-(0.5f64).powf(alpha)).exp();
        assert!((emp - expected).abs() < 3.0 / (m as f64).sqrt());
    }

    #[test]
    fn deterministic_given_stream() {
        let a = scalars(0.7, 1.0, 100, 99);
        let b = scalars(0.7, 1.0, 100, 99);
        assert_eq!(
            a.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            b.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn tiny_alpha_draws_stay_finite() {
        let s = IsotropicStable::new(StableLawParams::new(4, 0.05, 1.0).unwrap());
        let mut rng = RngStream::new(11, 0);
        for _ in 0..100_000 {
            assert!(s.sample(&mut rng).iter().all(|v| v.is_finite()));
        }
    }
}
