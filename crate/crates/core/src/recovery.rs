//! Model-based CoSaMP for block-sparse complex signals measured by a real
//! Gaussian matrix, and the recovery-error sensitivity curve.
//!
//! The measurement matrix is real and acts on complex vectors entrywise, so
//! the proxy `Aᴴr` is just `Aᵀr` applied to the complex residual. Least
//! squares on the candidate support is solved with CGLS, warm-started from
//! the current iterate.

use num_complex::Complex64;
use rand::seq::index;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, numerical, Error, Result};
use crate::rng::RngStream;
use crate::signal::{BlockNorms, ComplexBlockSignal};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense real `m × n` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    seed: Option<(u64, u64)>,
}

impl MeasurementMatrix {
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return invalid(format!(
                "matrix data of length {} does not match {rows}x{cols}",
                data.len()
            ));
        }
        Ok(Self { rows, cols, data, seed: None })
    }

    /// I.i.d. `N(0, 1/m)` entries.
    pub fn gaussian(rows: usize, cols: usize, rng: &mut RngStream) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return invalid("matrix dimensions must be positive");
        }
        let scale = 1.0 / (rows as f64).sqrt();
        let data = (0..rows * cols)
            .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
            .collect();
        Ok(Self { rows, cols, data, seed: Some((rng.seed(), rng.stream_id())) })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { rows: n, cols: n, data, seed: None }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `(seed, stream_id)` of the generating stream, if random.
    pub fn seed(&self) -> Option<(u64, u64)> {
        self.seed
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.cols {
            return invalid(format!("vector length {} != matrix columns {}", x.len(), self.cols));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, z)| z * a).sum())
            .collect())
    }

    /// `Aᵀ r` (equal to `Aᴴ r` for a real matrix).
    pub fn adjoint_apply(&self, r: &[Complex64]) -> Result<Vec<Complex64>> {
        if r.len() != self.rows {
            return invalid(format!("vector length {} != matrix rows {}", r.len(), self.rows));
        }
        let mut out = vec![ZERO; self.cols];
        for (i, ri) in r.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += ri * a;
            }
        }
        Ok(out)
    }

    /// Column-major copy of the columns in `cols`.
    fn gather_columns(&self, cols: &[usize]) -> ColumnBlock {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for &c in cols {
            data.extend((0..self.rows).map(|i| self.data[i * self.cols + c]));
        }
        ColumnBlock { rows: self.rows, cols: cols.len(), data }
    }
}

struct ColumnBlock {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl ColumnBlock {
    fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        out.fill(ZERO);
        for (j, xj) in x.iter().enumerate() {
            if xj.re == 0.0 && xj.im == 0.0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.col(j)) {
                *o += xj * a;
            }
        }
    }

    fn adjoint_apply(&self, r: &[Complex64], out: &mut [Complex64]) {
        for (j, o) in out.iter_mut().enumerate() {
            *o = self.col(j).iter().zip(r).map(|(&a, z)| z * a).sum();
        }
    }
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// CGLS for `min ‖A x − y‖₂` starting from `x` (updated in place). Returns
/// the final residual norm.
fn cgls(
    a: &ColumnBlock,
    y: &[Complex64],
    x: &mut [Complex64],
    max_iterations: usize,
    tolerance: f64,
) -> Result<f64> {
    let mut r = vec![ZERO; a.rows];
    a.apply(x, &mut r);
    for (ri, yi) in r.iter_mut().zip(y) {
        *ri = yi - *ri;
    }
    let mut s = vec![ZERO; a.cols];
    a.adjoint_apply(y, &mut s);
    let target = tolerance * norm_sqr(&s).sqrt();
    a.adjoint_apply(&r, &mut s);
    let mut p = s.clone();
    let mut q = vec![ZERO; a.rows];
    let mut gamma = norm_sqr(&s);
    for it in 0..max_iterations {
        if gamma.sqrt() <= target {
            break;
        }
        a.apply(&p, &mut q);
        let qq = norm_sqr(&q);
        if !(qq > 0.0) || !qq.is_finite() {
            return numerical(format!("least-squares breakdown at iteration {it} (‖Ap‖² = {qq})"));
        }
        let step = gamma / qq;
        for (xi, pi) in x.iter_mut().zip(&p) {
            *xi += pi * step;
        }
        for (ri, qi) in r.iter_mut().zip(&q) {
            *ri -= qi * step;
        }
        a.adjoint_apply(&r, &mut s);
        let gamma_next = norm_sqr(&s);
        if !gamma_next.is_finite() {
            return numerical("least-squares iterate became non-finite");
        }
        let beta = gamma_next / gamma;
        for (pi, si) in p.iter_mut().zip(&s) {
            *pi = si + *pi * beta;
        }
        gamma = gamma_next;
    }
    Ok(norm_sqr(&r).sqrt())
}

/// Settings for [`cosamp_block`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoveryConfig {
    pub block_size: usize,
    /// Block sparsity handed to the algorithm.
    pub block_sparsity: usize,
    pub max_iterations: usize,
    /// Stop once `‖y − A x̂‖ / ‖y‖` falls to this level.
    pub residual_tolerance: f64,
    pub ls_max_iterations: usize,
    pub ls_tolerance: f64,
    /// While `k_in` blocks fit in this fraction of the rows, new proxy
    /// blocks are admitted only until the candidate system has at most
    /// `fraction · m` columns. Square or wide candidate systems let the
    /// least-squares step interpolate and the iteration wander.
    pub candidate_column_fraction: f64,
}

impl RecoveryConfig {
    pub fn new(block_size: usize, block_sparsity: usize) -> Self {
        Self {
            block_size,
            block_sparsity,
            max_iterations: 50,
            residual_tolerance: 1e-6,
            ls_max_iterations: 200,
            ls_tolerance: 1e-10,
            candidate_column_fraction: 0.75,
        }
    }

    fn validate(&self, n_blocks: usize) -> Result<()> {
        if self.block_size == 0 {
            return invalid("block size must be at least 1");
        }
        if self.block_sparsity == 0 || self.block_sparsity > n_blocks {
            return invalid(format!(
                "block sparsity input {} must lie in 1..={n_blocks}",
                self.block_sparsity
            ));
        }
        if !(self.candidate_column_fraction > 0.0 && self.candidate_column_fraction <= 1.0) {
            return invalid("candidate column fraction must lie in (0, 1]");
        }
        if self.max_iterations == 0 || self.ls_max_iterations == 0 {
            return invalid("iteration limits must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Converged,
    MaxIterations,
    /// The least-squares residual exceeded the current one; the previous
    /// iterate was kept.
    ResidualIncreased,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    pub x_hat: ComplexBlockSignal,
    pub iterations: usize,
    pub relative_residual: f64,
    pub stop: StopReason,
    /// `‖x̂ − x‖₂/‖x‖₂` when the truth was supplied.
    pub relative_error: Option<f64>,
}

/// Keep the `k` blocks with the largest ℓ2 norms (ties: lower index wins);
/// zero the rest.
pub fn block_hard_threshold(v: &ComplexBlockSignal, k: usize) -> Result<ComplexBlockSignal> {
    let n = v.num_blocks();
    if k > n {
        return invalid(format!("cannot keep {k} blocks out of {n}"));
    }
    let keep = top_blocks(&v.block_norms(), k);
    let d = v.block_size();
    let mut entries = vec![ZERO; v.len()];
    for j in keep {
        entries[j * d..(j + 1) * d].copy_from_slice(v.block(j));
    }
    ComplexBlockSignal::new(entries, d)
}

/// Indices of the `k` largest norms in rank order, ties broken by lower index.
fn ranked_blocks(norms: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..norms.len()).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]).then(a.cmp(&b)));
    order.truncate(k);
    order
}

/// Like [`ranked_blocks`] but in ascending index order.
fn top_blocks(norms: &[f64], k: usize) -> Vec<usize> {
    let mut keep = ranked_blocks(norms, k);
    keep.sort_unstable();
    keep
}

fn block_norms_of(v: &[Complex64], d: usize) -> Vec<f64> {
    v.chunks_exact(d).map(|b| norm_sqr(b).sqrt()).collect()
}

/// Model-based CoSaMP. `y` must equal `A x` for the unknown block-sparse
/// `x`; the result has at most `cfg.block_sparsity` nonzero blocks.
pub fn cosamp_block(
    y: &[Complex64],
    a: &MeasurementMatrix,
    cfg: &RecoveryConfig,
) -> Result<RecoveryResult> {
    let d = cfg.block_size;
    if y.len() != a.rows() {
        return invalid(format!("measurement length {} != matrix rows {}", y.len(), a.rows()));
    }
    if d == 0 || a.cols() % d != 0 {
        return invalid(format!("matrix columns {} not a multiple of block size {d}", a.cols()));
    }
    let n_blocks = a.cols() / d;
    cfg.validate(n_blocks)?;
    let k = cfg.block_sparsity;
    let cap_blocks = (cfg.candidate_column_fraction * a.rows() as f64) as usize / d;
    let capped = k < cap_blocks;

    let y_norm = norm_sqr(y).sqrt();
    let mut x = vec![ZERO; a.cols()];
    if y_norm == 0.0 {
        return Ok(RecoveryResult {
            x_hat: ComplexBlockSignal::new(x, d)?,
            iterations: 0,
            relative_residual: 0.0,
            stop: StopReason::Converged,
            relative_error: None,
        });
    }
    let mut support: Vec<usize> = Vec::new();
    let mut residual = y.to_vec();
    let mut res_norm = y_norm;
    let mut stop = StopReason::MaxIterations;
    let mut iterations = 0;

    for it in 1..=cfg.max_iterations {
        let proxy = a.adjoint_apply(&residual)?;
        let mut fresh: Vec<usize> = ranked_blocks(&block_norms_of(&proxy, d), (2 * k).min(n_blocks))
            .into_iter()
            .filter(|j| !support.contains(j))
            .collect();
        if capped {
            fresh.truncate(cap_blocks.saturating_sub(support.len()));
        }
        let mut candidate = fresh;
        candidate.extend_from_slice(&support);
        candidate.sort_unstable();
        candidate.dedup();

        let columns: Vec<usize> = candidate.iter().flat_map(|&j| j * d..(j + 1) * d).collect();
        let sub = a.gather_columns(&columns);
        let mut coef: Vec<Complex64> = columns.iter().map(|&c| x[c]).collect();
        let ls_norm = cgls(&sub, y, &mut coef, cfg.ls_max_iterations, cfg.ls_tolerance)?;
        iterations = it;
        // the candidate span contains the current iterate, so an exact
        // solve cannot do worse than the current residual
        if ls_norm > res_norm * (1.0 + 1e-9) {
            stop = StopReason::ResidualIncreased;
            break;
        }

        let local_keep = top_blocks(&block_norms_of(&coef, d), k);
        let mut next = vec![ZERO; a.cols()];
        for &lj in &local_keep {
            let j = candidate[lj];
            next[j * d..(j + 1) * d].copy_from_slice(&coef[lj * d..(lj + 1) * d]);
        }
        let ax = a.apply(&next)?;
        let next_residual: Vec<Complex64> = y.iter().zip(&ax).map(|(u, v)| u - v).collect();
        let next_norm = norm_sqr(&next_residual).sqrt();
        if !next_norm.is_finite() {
            return numerical("residual became non-finite");
        }
        x = next;
        residual = next_residual;
        res_norm = next_norm;
        support = local_keep.iter().map(|&lj| candidate[lj]).collect();
        if res_norm / y_norm <= cfg.residual_tolerance {
            stop = StopReason::Converged;
            break;
        }
    }

    Ok(RecoveryResult {
        x_hat: ComplexBlockSignal::new(x, d)?,
        iterations,
        relative_residual: res_norm / y_norm,
        stop,
        relative_error: None,
    })
}

/// `‖x̂ − x‖₂ / ‖x‖₂`.
pub fn relative_error(x_hat: &ComplexBlockSignal, truth: &ComplexBlockSignal) -> Result<f64> {
    if x_hat.len() != truth.len() {
        return invalid("signals have different lengths");
    }
    let norm = truth.l2_norm();
    if norm == 0.0 {
        return invalid("relative error undefined for a zero reference signal");
    }
    let diff: Vec<Complex64> = x_hat.entries().iter().zip(truth.entries()).map(|(a, b)| a - b).collect();
    Ok(norm_sqr(&diff).sqrt() / norm)
}

/// Recover `truth` from `A·truth` and report the relative error.
pub fn recover_with_truth(
    truth: &ComplexBlockSignal,
    a: &MeasurementMatrix,
    cfg: &RecoveryConfig,
) -> Result<RecoveryResult> {
    let y = a.apply(truth.entries())?;
    let mut result = cosamp_block(&y, a, cfg)?;
    result.relative_error = Some(relative_error(&result.x_hat, truth)?);
    Ok(result)
}

/// Random block-sparse signal: `k` blocks chosen uniformly, entries with
/// i.i.d. standard normal real and imaginary parts.
pub fn random_block_sparse_signal(
    len: usize,
    d: usize,
    k: usize,
    rng: &mut RngStream,
) -> Result<ComplexBlockSignal> {
    if d == 0 || len % d != 0 {
        return invalid(format!("length {len} is not a multiple of block size {d}"));
    }
    let n = len / d;
    if k == 0 || k > n {
        return invalid(format!("block sparsity {k} must lie in 1..={n}"));
    }
    let mut support = index::sample(rng, n, k).into_vec();
    support.sort_unstable();
    let mut entries = vec![ZERO; len];
    for j in support {
        for e in &mut entries[j * d..(j + 1) * d] {
            *e = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
    }
    ComplexBlockSignal::new(entries, d)
}

/// One point of the sensitivity curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MrePoint {
    pub k_in: usize,
    pub mre: f64,
    pub trials: usize,
    /// Trials whose recovery failed; each counts as RE = 1.
    pub failures: usize,
}

/// Settings shared by every point of an MRE curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MreSettings {
    pub m: usize,
    pub trials: usize,
    pub max_iterations: usize,
    pub residual_tolerance: f64,
}

impl MreSettings {
    pub fn new(m: usize, trials: usize) -> Self {
        let defaults = RecoveryConfig::new(1, 1);
        Self {
            m,
            trials,
            max_iterations: defaults.max_iterations,
            residual_tolerance: defaults.residual_tolerance,
        }
    }
}

/// Fork tag of the matrix stream for trial `t`.
pub fn trial_stream(rng: &RngStream, trial: usize) -> RngStream {
    rng.fork(trial as u64)
}

/// Mean relative error over `trials` fresh Gaussian matrices for each
/// block-sparsity input in `k_grid`. Trial `t` uses the same matrix for
/// every grid point.
pub fn mre_curve(
    truth: &ComplexBlockSignal,
    settings: MreSettings,
    k_grid: &[usize],
    rng: &RngStream,
) -> Result<Vec<MrePoint>> {
    if settings.trials == 0 {
        return invalid("at least one trial is required");
    }
    if settings.m == 0 {
        return invalid("number of measurements must be positive");
    }
    let d = truth.block_size();
    let n = truth.num_blocks();
    if let Some(&bad) = k_grid.iter().find(|&&k| k == 0 || k > n) {
        return invalid(format!("grid value {bad} outside 1..={n}"));
    }
    let per_trial: Vec<Vec<Option<f64>>> = (0..settings.trials)
        .into_par_iter()
        .map(|t| -> Result<Vec<Option<f64>>> {
            let a = MeasurementMatrix::gaussian(settings.m, truth.len(), &mut trial_stream(rng, t))?;
            Ok(k_grid
                .iter()
                .map(|&k_in| {
                    let mut cfg = RecoveryConfig::new(d, k_in);
                    cfg.max_iterations = settings.max_iterations;
                    cfg.residual_tolerance = settings.residual_tolerance;
                    recover_with_truth(truth, &a, &cfg).ok().and_then(|r| r.relative_error)
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    Ok(k_grid
        .iter()
        .enumerate()
        .map(|(g, &k_in)| {
            let mut failures = 0;
            let total: f64 = per_trial
                .iter()
                .map(|row| {
                    row[g].unwrap_or_else(|| {
                        failures += 1;
                        1.0
                    })
                })
                .sum();
            MrePoint { k_in, mre: total / settings.trials as f64, trials: settings.trials, failures }
        })
        .collect())
}

/// CSV with columns `k_in,mre,trials,failures`.
pub fn mre_to_csv(points: &[MrePoint]) -> String {
    let mut out = String::from("k_in,mre,trials,failures\n");
    for p in points {
        out.push_str(&format!("{},{},{},{}\n", p.k_in, p.mre, p.trials, p.failures));
    }
    out
}

pub fn parse_grid(spec: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidInput(format!("bad grid `{spec}`; use `a:b:step` or `a,b,c`"));
    if let Some((range, step)) = spec.split_once(':').and_then(|(a, rest)| {
        rest.split_once(':').map(|(b, s)| ((a, b), s))
    }) {
        let lo: usize = range.0.trim().parse().map_err(|_| bad())?;
        let hi: usize = range.1.trim().parse().map_err(|_| bad())?;
        let step: usize = step.trim().parse().map_err(|_| bad())?;
        if step == 0 || lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).step_by(step).collect());
    }
    spec.split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| bad()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hard_threshold_keeps_largest_blocks() {
        let v = ComplexBlockSignal::new(vec![c(3.0, 0.0), c(0.0, 1.0), c(2.0, 0.0)], 1).unwrap();
        let t = block_hard_threshold(&v, 2).unwrap();
        assert_eq!(t.entries(), &[c(3.0, 0.0), ZERO, c(2.0, 0.0)]);
        assert!(block_hard_threshold(&v, 0).unwrap().is_zero());
        assert_eq!(block_hard_threshold(&v, 3).unwrap(), v);
        assert!(block_hard_threshold(&v, 4).is_err());
    }

    #[test]
    fn hard_threshold_ties_prefer_lower_index() {
        let v = ComplexBlockSignal::new(vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)], 1).unwrap();
        let t = block_hard_threshold(&v, 2).unwrap();
        assert_eq!(t.entries(), &[c(1.0, 0.0), c(0.0, 1.0), ZERO]);
    }

    #[test]
    fn matrix_apply_and_adjoint_are_consistent() {
        let mut rng = RngStream::new(1, 0);
        let a = MeasurementMatrix::gaussian(5, 7, &mut rng).unwrap();
        let x: Vec<Complex64> = (0..7).map(|i| c(i as f64, 1.0 - i as f64)).collect();
        let r: Vec<Complex64> = (0..5).map(|i| c(0.5 * i as f64, 2.0)).collect();
        // ⟨Ax, r⟩ = ⟨x, Aᵀr⟩ with the Hermitian inner product
        let lhs: Complex64 = a.apply(&x).unwrap().iter().zip(&r).map(|(u, v)| u * v.conj()).sum();
        let rhs: Complex64 = x.iter().zip(&a.adjoint_apply(&r).unwrap()).map(|(u, v)| u * v.conj()).sum();
        assert_relative_eq!(lhs.re, rhs.re, max_relative = 1e-12);
        assert_relative_eq!(lhs.im, rhs.im, max_relative = 1e-12);
        assert!(a.apply(&x[..3]).is_err());
        assert_eq!(a.seed(), Some((1, 0)));
    }

    #[test]
    fn cgls_solves_overdetermined_system() {
        let a = MeasurementMatrix::from_row_major(3, 2, vec![1.0, 0.0, 0.0, 1.0, 1.0, 1.0]).unwrap();
        let sub = a.gather_columns(&[0, 1]);
        let y = [c(1.0, 0.0), c(2.0, 1.0), c(3.0, 1.0)];
        let mut x = vec![ZERO; 2];
        cgls(&sub, &y, &mut x, 50, 1e-14).unwrap();
        // consistent system: exact solution (1, 2+i)
        assert_relative_eq!(x[0].re, 1.0, epsilon = 1e-12);
        assert_relative_eq!(x[1].re, 2.0, epsilon = 1e-12);
        assert_relative_eq!(x[1].im, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn identity_matrix_recovers_exactly() {
        let mut rng = RngStream::new(2, 0);
        let truth = random_block_sparse_signal(40, 4, 3, &mut rng).unwrap();
        let a = MeasurementMatrix::identity(40);
        let r = recover_with_truth(&truth, &a, &RecoveryConfig::new(4, 3)).unwrap();
        assert!(r.relative_error.unwrap() <= 1e-6);
        assert_eq!(r.stop, StopReason::Converged);
    }

    #[test]
    fn output_respects_block_budget() {
        let mut rng = RngStream::new(3, 0);
        let truth = random_block_sparse_signal(120, 4, 6, &mut rng).unwrap();
        let a = MeasurementMatrix::gaussian(50, 120, &mut rng).unwrap();
        for k_in in [1, 3, 6, 10, 30] {
            let r = recover_with_truth(&truth, &a, &RecoveryConfig::new(4, k_in)).unwrap();
            assert!(r.x_hat.block_support_size() <= k_in);
        }
    }

    #[test]
    fn rejects_bad_configuration() {
        let a = MeasurementMatrix::identity(8);
        let y = vec![c(1.0, 0.0); 8];
        assert!(cosamp_block(&y, &a, &RecoveryConfig::new(3, 1)).is_err());
        assert!(cosamp_block(&y, &a, &RecoveryConfig::new(2, 0)).is_err());
        assert!(cosamp_block(&y, &a, &RecoveryConfig::new(2, 5)).is_err());
        assert!(cosamp_block(&y[..4], &a, &RecoveryConfig::new(2, 1)).is_err());
    }

    #[test]
    fn zero_measurements_give_zero_signal() {
        let a = MeasurementMatrix::identity(4);
        let r = cosamp_block(&[ZERO; 4], &a, &RecoveryConfig::new(2, 1)).unwrap();
        assert!(r.x_hat.is_zero());
    }

    #[test]
    fn random_signal_shape() {
        let mut rng = RngStream::new(4, 0);
        let x = random_block_sparse_signal(300, 4, 12, &mut rng).unwrap();
        assert_eq!(x.block_support_size(), 12);
        assert!(random_block_sparse_signal(300, 4, 76, &mut rng).is_err());
        assert!(random_block_sparse_signal(301, 4, 2, &mut rng).is_err());
    }

    #[test]
    fn mre_approaches_zero_when_square() {
        let mut rng = RngStream::new(5, 0);
        let truth = random_block_sparse_signal(40, 2, 3, &mut rng).unwrap();
        let pts = mre_curve(&truth, MreSettings::new(40, 5), &[3], &RngStream::new(6, 0)).unwrap();
        assert!(pts[0].mre < 1e-6);
        assert_eq!(pts[0].failures, 0);
        assert!(mre_curve(&truth, MreSettings::new(40, 0), &[3], &rng).is_err());
        assert!(mre_curve(&truth, MreSettings::new(40, 1), &[0], &rng).is_err());
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("4:16:4").unwrap(), vec![4, 8, 12, 16]);
        assert_eq!(parse_grid("1, 7,12").unwrap(), vec![1, 7, 12]);
        assert!(parse_grid("4:1:1").is_err());
        assert!(parse_grid("a").is_err());
        assert_eq!(
            mre_to_csv(&[MrePoint { k_in: 2, mre: 0.5, trials: 3, failures: 0 }]),
            "k_in,mre,trials,failures\n2,0.5,3,0\n"
        );
    }
}
