//! Replicated simulation designs for the estimator and the recovery
//! sensitivity study.
//!
//! A design is a grid of cells (block sparsity × noise level). Replication
//! `r` of a cell draws its projections from `RngStream::new(seed, r)`
//! forked by the cell index, so any record can be regenerated on its own.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::estimate::{estimate_block_sparsity, EstimateWarning, SCHEMA_VERSION};
use crate::numeric::{mean, sample_variance};
use crate::recovery::{
    mre_curve, random_block_sparse_signal, recover_with_truth, trial_stream, MeasurementMatrix,
    MrePoint, MreSettings, RecoveryConfig,
};
use crate::rng::RngStream;
use crate::signal::{block_sparsity_measure, harmonic_block_signal, to_real_block, ComplexBlockSignal, SparsityMeasureSpec};
use crate::sketch::{sketch_pair, NoiseFamily, NoiseModel};
use crate::stats::{ks_test_standard_normal, KsOutcome};

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "BLOCKSKETCH_THREADS";

const CELL_TAG_BASE: u64 = 0x100;
const SIGNAL_TAG: u64 = 11;
const MATRIX_TAG: u64 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Design {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    Recovery,
    Mre,
}

impl Design {
    pub const ALL: [Design; 9] = [
        Design::A,
        Design::B,
        Design::C,
        Design::D,
        Design::E,
        Design::F,
        Design::G,
        Design::Recovery,
        Design::Mre,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Design::A => "a",
            Design::B => "b",
            Design::C => "c",
            Design::D => "d",
            Design::E => "e",
            Design::F => "f",
            Design::G => "g",
            Design::Recovery => "recovery",
            Design::Mre => "mre",
        }
    }

    pub fn is_estimation(self) -> bool {
        !matches!(self, Design::Recovery | Design::Mre)
    }
}

impl fmt::Display for Design {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Design {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Design::ALL
            .into_iter()
            .find(|d| d.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidInput(format!("unknown design `{s}`")))
    }
}

/// Parameters of one estimation design. Cells are the cartesian product of
/// `block_sparsity` and `sigma`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub design: Design,
    /// Complex signal length `N`.
    pub len: usize,
    /// Complex block size `d`.
    pub block_size: usize,
    pub block_sparsity: Vec<usize>,
    pub alpha: f64,
    pub gamma: f64,
    pub sigma: Vec<f64>,
    pub noise_family: NoiseFamily,
    pub m1: usize,
    pub m_alpha: usize,
    pub replications: usize,
    pub beta: f64,
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn for_design(design: Design) -> Self {
        let base = Self {
            design,
            len: 1000,
            block_size: 1,
            block_sparsity: vec![100],
            alpha: 2.0,
            gamma: 1.0,
            sigma: vec![0.0],
            noise_family: NoiseFamily::Gaussian,
            m1: 500,
            m_alpha: 500,
            replications: 500,
            beta: 0.05,
            seed: 1,
        };
        match design {
            Design::A => base,
            Design::B => Self { sigma: vec![0.1], ..base },
            Design::C => Self { m1: 1000, m_alpha: 1000, ..base },
            Design::D => Self { sigma: vec![0.1], m1: 1000, m_alpha: 1000, ..base },
            Design::E | Design::F => {
                let m = if design == Design::E { 500 } else { 1000 };
                Self {
                    alpha: 0.05,
                    block_size: 5,
                    block_sparsity: vec![10, 50, 100, 200],
                    sigma: vec![0.1],
                    m1: m,
                    m_alpha: m,
                    ..base
                }
            }
            Design::G => Self { sigma: vec![0.0, 0.1, 0.3, 0.5], m1: 1000, m_alpha: 1000, ..base },
            // estimation half of the recovery study
            Design::Recovery | Design::Mre => Self {
                len: 300,
                block_size: 4,
                block_sparsity: vec![12],
                alpha: 0.05,
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_size == 0 || self.len == 0 || self.len % self.block_size != 0 {
            return invalid(format!(
                "signal length {} must be a positive multiple of block size {}",
                self.len, self.block_size
            ));
        }
        let n_blocks = self.len / self.block_size;
        if self.block_sparsity.is_empty() || self.sigma.is_empty() {
            return invalid("block_sparsity and sigma lists must be nonempty");
        }
        if let Some(k) = self.block_sparsity.iter().find(|&&k| k == 0 || k > n_blocks) {
            return invalid(format!("block sparsity {k} outside 1..={n_blocks}"));
        }
        for &s in &self.sigma {
            NoiseModel::new(s, self.noise_family)?;
        }
        if self.m1 == 0 || self.m_alpha == 0 || self.replications == 0 {
            return invalid("m1, m_alpha and replications must be positive");
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return invalid(format!("beta must lie in (0, 1), got {}", self.beta));
        }
        crate::stable::check_alpha_gamma(self.alpha, self.gamma)?;
        if self.alpha == 1.0 || self.alpha < crate::estimate::MIN_ESTIMATION_ALPHA {
            return invalid(format!("alpha {} is not usable for estimation", self.alpha));
        }
        Ok(())
    }

    /// `(block_sparsity, sigma)` per cell, sparsity-major.
    pub fn cells(&self) -> Vec<(usize, f64)> {
        self.block_sparsity
            .iter()
            .flat_map(|&k| self.sigma.iter().map(move |&s| (k, s)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRecord {
    pub replication: usize,
    pub block_sparsity: usize,
    pub sigma: f64,
    /// True `k_α(x̃)`.
    pub truth: f64,
    pub k_hat: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub covered: bool,
    pub studentized: Option<f64>,
    pub warnings: Vec<EstimateWarning>,
    /// Estimator error message when no estimate was produced.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub block_sparsity: usize,
    pub sigma: f64,
    pub truth: f64,
    pub replications: usize,
    /// Replications without an estimate.
    pub failures: usize,
    /// Replications with an estimate but no interval.
    pub without_interval: usize,
    pub mean_k_hat: f64,
    pub coverage: f64,
    pub mean_ci_half_width: f64,
    pub studentized_mean: f64,
    pub studentized_variance: f64,
    pub ks: Option<KsOutcome>,
    /// `|‖x‖_{2,0} − mean k̂| / ‖x‖_{2,0}`.
    pub relative_error: f64,
}

impl CellSummary {
    fn from_records(block_sparsity: usize, sigma: f64, truth: f64, records: &[ReplicationRecord]) -> Self {
        let k_hats: Vec<f64> = records.iter().filter_map(|r| r.k_hat).collect();
        let z: Vec<f64> = records.iter().filter_map(|r| r.studentized).collect();
        let half_widths: Vec<f64> = records
            .iter()
            .filter_map(|r| Some((r.ci_high? - r.ci_low?) / 2.0))
            .collect();
        let mean_k_hat = if k_hats.is_empty() { f64::NAN } else { mean(&k_hats) };
        let k0 = block_sparsity as f64;
        Self {
            block_sparsity,
            sigma,
            truth,
            replications: records.len(),
            failures: records.len() - k_hats.len(),
            without_interval: k_hats.len() - half_widths.len(),
            mean_k_hat,
            coverage: records.iter().filter(|r| r.covered).count() as f64 / records.len() as f64,
            mean_ci_half_width: if half_widths.is_empty() { f64::NAN } else { mean(&half_widths) },
            studentized_mean: if z.is_empty() { f64::NAN } else { mean(&z) },
            studentized_variance: if z.len() < 2 { f64::NAN } else { sample_variance(&z) },
            ks: ks_test_standard_normal(&z).ok(),
            relative_error: (k0 - mean_k_hat).abs() / k0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub summary: CellSummary,
    pub records: Vec<ReplicationRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub spec_version: String,
    pub spec: ExperimentSpec,
    pub cells: Vec<CellReport>,
}

/// Worker pool honoring [`THREADS_ENV`].
pub fn worker_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::InvalidInput(format!("{THREADS_ENV}={raw} is not a positive integer")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot build worker pool: {e}")))
}

/// Stream of replication `r` in cell `cell`.
pub fn replication_stream(seed: u64, cell: usize, replication: usize) -> RngStream {
    RngStream::new(seed, replication as u64).fork(CELL_TAG_BASE + cell as u64)
}

pub fn run_design(spec: &ExperimentSpec) -> Result<DesignReport> {
    if !spec.design.is_estimation() {
        return invalid(format!("design `{}` is a recovery study", spec.design));
    }
    run_estimation(spec)
}

/// Replicated estimation over every cell of `spec`, for any design id.
pub fn run_estimation(spec: &ExperimentSpec) -> Result<DesignReport> {
    spec.validate()?;
    let pool = worker_pool()?;
    let cells = spec
        .cells()
        .into_iter()
        .enumerate()
        .map(|(cell, (k, sigma))| {
            let x = harmonic_block_signal(k, spec.block_size, spec.len)?;
            run_cell(spec, &pool, cell, k, sigma, &x)
        })
        .collect::<Result<_>>()?;
    Ok(DesignReport { spec_version: SCHEMA_VERSION.to_string(), spec: spec.clone(), cells })
}

fn run_cell(
    spec: &ExperimentSpec,
    pool: &rayon::ThreadPool,
    cell: usize,
    k: usize,
    sigma: f64,
    x: &ComplexBlockSignal,
) -> Result<CellReport> {
    let xt = to_real_block(x);
    let truth = block_sparsity_measure(&xt, SparsityMeasureSpec::new(spec.alpha)?)?;
    let noise = NoiseModel::new(sigma, spec.noise_family)?;
    let records: Vec<ReplicationRecord> = pool.install(|| {
        (0..spec.replications)
            .into_par_iter()
            .map(|r| -> Result<ReplicationRecord> {
                let rng = replication_stream(spec.seed, cell, r);
                let meas = sketch_pair(&xt, spec.alpha, spec.gamma, spec.m1, spec.m_alpha, noise, &rng)?;
                let mut rec = ReplicationRecord {
                    replication: r,
                    block_sparsity: k,
                    sigma,
                    truth,
                    k_hat: None,
                    ci_low: None,
                    ci_high: None,
                    covered: false,
                    studentized: None,
                    warnings: Vec::new(),
                    error: None,
                };
                match estimate_block_sparsity(&meas, spec.beta) {
                    Ok(est) => {
                        rec.k_hat = Some(est.k_hat);
                        rec.ci_low = est.ci_low();
                        rec.ci_high = est.ci_high();
                        rec.covered = est.covers(truth);
                        rec.studentized = est.studentized(truth);
                        rec.warnings = est.warnings;
                    }
                    Err(e @ Error::Numerical(_)) => rec.error = Some(e.to_string()),
                    Err(e) => return Err(e),
                }
                Ok(rec)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let summary = CellSummary::from_records(k, sigma, truth, &records);
    Ok(CellReport { summary, records })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn warning_names(w: &[EstimateWarning]) -> String {
    w.iter()
        .map(|w| serde_json::to_value(w).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default())
        .collect::<Vec<_>>()
        .join(";")
}

impl DesignReport {
    /// One row per replication, cells in order.
    pub fn records_csv(&self) -> String {
        let mut out = format!(
            "# spec_version={} design={} seed={}\n",
            self.spec_version, self.spec.design, self.spec.seed
        );
        out.push_str("block_sparsity,sigma,replication,truth,k_hat,ci_low,ci_high,covered,studentized,warnings,error\n");
        for rec in self.cells.iter().flat_map(|c| &c.records) {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                rec.block_sparsity,
                rec.sigma,
                rec.replication,
                rec.truth,
                opt(rec.k_hat),
                opt(rec.ci_low),
                opt(rec.ci_high),
                rec.covered,
                opt(rec.studentized),
                warning_names(&rec.warnings),
                rec.error.as_deref().unwrap_or("").replace(',', ";"),
            ));
        }
        out
    }

    /// Spec plus per-cell summaries (records omitted).
    pub fn summary_json(&self) -> Result<String> {
        let summaries: Vec<&CellSummary> = self.cells.iter().map(|c| &c.summary).collect();
        let value = serde_json::json!({
            "spec_version": self.spec_version,
            "spec": self.spec,
            "cells": summaries,
        });
        serde_json::to_string_pretty(&value).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }
}

/// Parameters of the recovery sensitivity study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryStudySpec {
    pub len: usize,
    pub block_size: usize,
    /// True block sparsity of the random test signal.
    pub block_sparsity: usize,
    /// Rows of the Gaussian measurement matrix.
    pub rows: usize,
    pub trials: usize,
    pub k_grid: Vec<usize>,
    /// Inputs whose reconstructions are dumped (matrix of trial 0).
    pub example_k_in: Vec<usize>,
    /// Estimation replications on the same signal; 0 skips the handoff.
    pub handoff_replications: usize,
    pub handoff_alpha: f64,
    pub handoff_gamma: f64,
    pub handoff_m1: usize,
    pub handoff_m_alpha: usize,
    pub seed: u64,
}

impl Default for RecoveryStudySpec {
    fn default() -> Self {
        Self {
            len: 300,
            block_size: 4,
            block_sparsity: 12,
            rows: 120,
            trials: 100,
            k_grid: (1..=75).collect(),
            example_k_in: vec![12, 7],
            handoff_replications: 500,
            handoff_alpha: 0.05,
            handoff_gamma: 1.0,
            handoff_m1: 500,
            handoff_m_alpha: 500,
            seed: 1,
        }
    }
}

impl RecoveryStudySpec {
    /// Stream that generates the true signal.
    pub fn signal_stream(&self) -> RngStream {
        RngStream::new(self.seed, 0).fork(SIGNAL_TAG)
    }

    /// Parent of the per-trial matrix streams.
    pub fn matrix_stream(&self) -> RngStream {
        RngStream::new(self.seed, 0).fork(MATRIX_TAG)
    }

    pub fn truth(&self) -> Result<ComplexBlockSignal> {
        random_block_sparse_signal(self.len, self.block_size, self.block_sparsity, &mut self.signal_stream())
    }

    fn handoff_spec(&self) -> ExperimentSpec {
        ExperimentSpec {
            len: self.len,
            block_size: self.block_size,
            block_sparsity: vec![self.block_sparsity],
            alpha: self.handoff_alpha,
            gamma: self.handoff_gamma,
            sigma: vec![0.0],
            noise_family: NoiseFamily::None,
            m1: self.handoff_m1,
            m_alpha: self.handoff_m_alpha,
            replications: self.handoff_replications,
            seed: self.seed,
            ..ExperimentSpec::for_design(Design::Recovery)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub k_in: usize,
    pub relative_error: f64,
    pub x_hat: ComplexBlockSignal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HandoffSummary {
    pub alpha: f64,
    pub truth: f64,
    pub mean_k_hat: f64,
    pub replications: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryStudy {
    pub spec: RecoveryStudySpec,
    pub truth: ComplexBlockSignal,
    pub curve: Vec<MrePoint>,
    pub examples: Vec<Reconstruction>,
    pub handoff: Option<HandoffSummary>,
}

/// Mean block-sparsity estimate over the handoff replications on the study
/// signal (noiseless measurements).
pub fn run_handoff(spec: &RecoveryStudySpec) -> Result<HandoffSummary> {
    run_handoff_on(spec, &spec.truth()?, &worker_pool()?)
}

fn run_handoff_on(spec: &RecoveryStudySpec, truth: &ComplexBlockSignal, pool: &rayon::ThreadPool) -> Result<HandoffSummary> {
    let hs = spec.handoff_spec();
    hs.validate()?;
    let cell = run_cell(&hs, pool, 0, spec.block_sparsity, 0.0, truth)?;
    Ok(HandoffSummary {
        alpha: hs.alpha,
        truth: cell.summary.truth,
        mean_k_hat: cell.summary.mean_k_hat,
        replications: cell.summary.replications,
        failures: cell.summary.failures,
    })
}

pub fn run_recovery_study(spec: &RecoveryStudySpec) -> Result<RecoveryStudy> {
    let truth = spec.truth()?;
    let pool = worker_pool()?;
    let matrices = spec.matrix_stream();
    let curve = pool.install(|| mre_curve(&truth, MreSettings::new(spec.rows, spec.trials), &spec.k_grid, &matrices))?;

    let a = MeasurementMatrix::gaussian(spec.rows, spec.len, &mut trial_stream(&matrices, 0))?;
    let examples = spec
        .example_k_in
        .iter()
        .map(|&k_in| {
            let r = recover_with_truth(&truth, &a, &RecoveryConfig::new(spec.block_size, k_in))?;
            Ok(Reconstruction { k_in, relative_error: r.relative_error.unwrap_or(f64::NAN), x_hat: r.x_hat })
        })
        .collect::<Result<_>>()?;

    let handoff = if spec.handoff_replications > 0 {
        Some(run_handoff_on(spec, &truth, &pool)?)
    } else {
        None
    };

    Ok(RecoveryStudy { spec: spec.clone(), truth, curve, examples, handoff })
}

impl RecoveryStudy {
    pub fn mre(&self, k_in: usize) -> Option<f64> {
        self.curve.iter().find(|p| p.k_in == k_in).map(|p| p.mre)
    }

    /// Grid value with the smallest MRE (first on ties).
    pub fn argmin(&self) -> Option<usize> {
        self.curve
            .iter()
            .min_by(|a, b| a.mre.total_cmp(&b.mre))
            .map(|p| p.k_in)
    }

    /// Per-entry truth and reconstructions: `index,truth_re,truth_im`, then
    /// `k<K>_re,k<K>_im` per example.
    pub fn reconstructions_csv(&self) -> String {
        let mut out = String::from("index,truth_re,truth_im");
        for ex in &self.examples {
            out.push_str(&format!(",k{0}_re,k{0}_im", ex.k_in));
        }
        out.push('\n');
        for (i, z) in self.truth.entries().iter().enumerate() {
            out.push_str(&format!("{i},{},{}", z.re, z.im));
            for ex in &self.examples {
                let w = ex.x_hat.entries()[i];
                out.push_str(&format!(",{},{}", w.re, w.im));
            }
            out.push('\n');
        }
        out
    }

    /// Seeds and settings needed to rerun the study exactly.
    pub fn sidecar_json(&self) -> Result<String> {
        let signal = self.spec.signal_stream();
        let matrices = self.spec.matrix_stream();
        let value = serde_json::json!({
            "spec_version": SCHEMA_VERSION,
            "study": self.spec,
            "signal_stream": { "seed": signal.seed(), "stream_id": signal.stream_id() },
            "matrix_stream": { "seed": matrices.seed(), "stream_id": matrices.stream_id(),
                               "trial_fork": "trial index" },
            "examples": self.examples.iter()
                .map(|e| serde_json::json!({ "k_in": e.k_in, "relative_error": e.relative_error }))
                .collect::<Vec<_>>(),
            "handoff": self.handoff,
        });
        serde_json::to_string_pretty(&value).map_err(|e| Error::Format(e.to_string()))
    }
}
