//! Complex and real block signals, the complex-to-real interleaving
//! transform, mixed ℓ2/ℓα norms and the entropy-based block-sparsity
//! measures `k_α`.
//!
//! A signal of length `N` with block size `d` is split into `n = N / d`
//! contiguous blocks. The measures only ever look at the vector of block
//! ℓ2 norms, so both signal types implement [`BlockNorms`] and every measure
//! is written once against that trait.

use std::fmt::Write as _;
use std::io::BufRead;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::numeric::{pairwise_sum, pairwise_sum_sq};

/// Anything that can report the ℓ2 norm of each of its blocks.
pub trait BlockNorms {
    fn num_blocks(&self) -> usize;
    fn block_size(&self) -> usize;
    fn block_norms(&self) -> Vec<f64>;

    /// Number of blocks with nonzero ℓ2 norm (`‖x‖_{2,0}`).
    fn block_support_size(&self) -> usize {
        self.block_norms().iter().filter(|&&w| w > 0.0).count()
    }
}

/// A length-`N` complex vector partitioned into blocks of `d` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexBlockSignal {
    entries: Vec<Complex64>,
    block_size: usize,
}

/// A length-`2N` real vector with block size `2d`; the image of a
/// [`ComplexBlockSignal`] under [`to_real_block`].
#[derive(Debug, Clone, PartialEq)]
pub struct RealBlockSignal {
    entries: Vec<f64>,
    block_size: usize,
}

fn check_shape(len: usize, block_size: usize) -> Result<()> {
    if block_size == 0 {
        return invalid("block size must be at least 1");
    }
    if len == 0 {
        return invalid("signal must have at least one entry");
    }
    if len % block_size != 0 {
        return invalid(format!(
            "signal length {len} is not a multiple of block size {block_size}"
        ));
    }
    Ok(())
}

impl ComplexBlockSignal {
    pub fn new(entries: Vec<Complex64>, block_size: usize) -> Result<Self> {
        check_shape(entries.len(), block_size)?;
        Ok(Self { entries, block_size })
    }

    pub fn zeros(len: usize, block_size: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); len], block_size)
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Block `j` (0-based).
    pub fn block(&self, j: usize) -> &[Complex64] {
        &self.entries[j * self.block_size..(j + 1) * self.block_size]
    }

    pub fn blocks(&self) -> impl Iterator<Item = &[Complex64]> {
        self.entries.chunks_exact(self.block_size)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z * factor).collect(),
            block_size: self.block_size,
        }
    }

    /// Plain ℓ2 norm of the whole vector.
    pub fn l2_norm(&self) -> f64 {
        let sq: Vec<f64> = self.entries.iter().map(|z| z.norm_sqr()).collect();
        pairwise_sum(&sq).sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Serialize to the signal CSV form: a `# N=.. d=..` header line, a
    /// column header, then one `index,real,imag` row per entry (0-based).
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 * self.entries.len());
        let _ = writeln!(out, "# N={} d={}", self.entries.len(), self.block_size);
        out.push_str("index,real,imag\n");
        for (i, z) in self.entries.iter().enumerate() {
            let _ = writeln!(out, "{i},{},{}", z.re, z.im);
        }
        out
    }

    /// Parse the CSV form written by [`ComplexBlockSignal::to_csv`].
    pub fn from_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines();
        let header = next_line(&mut lines)?.ok_or_else(|| fmt_err("empty signal file"))?;
        let (len, block_size) = parse_signal_header(&header)?;
        let columns = next_line(&mut lines)?.ok_or_else(|| fmt_err("missing column header"))?;
        if columns.trim() != "index,real,imag" {
            return Err(fmt_err(format!("unexpected column header `{}`", columns.trim())));
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); len];
        let mut seen = vec![false; len];
        while let Some(line) = next_line(&mut lines)? {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let mut field = |name: &str| {
                fields
                    .next()
                    .map(str::trim)
                    .ok_or_else(|| fmt_err(format!("row `{line}` is missing `{name}`")))
            };
            let idx: usize = field("index")?
                .parse()
                .map_err(|_| fmt_err(format!("bad index in row `{line}`")))?;
            let re: f64 = parse_float(field("real")?)?;
            let im: f64 = parse_float(field("imag")?)?;
            if idx >= len {
                return Err(fmt_err(format!("index {idx} out of range for N={len}")));
            }
            if seen[idx] {
                return Err(fmt_err(format!("duplicate index {idx}")));
            }
            seen[idx] = true;
            entries[idx] = Complex64::new(re, im);
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(fmt_err(format!("missing row for index {missing}")));
        }
        Self::new(entries, block_size)
    }
}

fn fmt_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn next_line<B: BufRead>(lines: &mut std::io::Lines<B>) -> Result<Option<String>> {
    lines.next().transpose().map_err(|e| fmt_err(e.to_string()))
}

fn parse_float(s: &str) -> Result<f64> {
    s.parse().map_err(|_| fmt_err(format!("bad number `{s}`")))
}

fn parse_signal_header(line: &str) -> Result<(usize, usize)> {
    let body = line
        .trim()
        .strip_prefix('#')
        .ok_or_else(|| fmt_err("signal header must start with `#`"))?;
    let mut len = None;
    let mut block = None;
    for token in body.split_whitespace() {
        match token.split_once('=') {
            Some(("N", v)) => len = v.parse::<usize>().ok(),
            Some(("d", v)) => block = v.parse::<usize>().ok(),
            _ => {}
        }
    }
    match (len, block) {
        (Some(n), Some(d)) => Ok((n, d)),
        _ => Err(fmt_err(format!("header `{line}` must carry N=<len> d=<block size>"))),
    }
}

impl RealBlockSignal {
    pub fn new(entries: Vec<f64>, block_size: usize) -> Result<Self> {
        check_shape(entries.len(), block_size)?;
        Ok(Self { entries, block_size })
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn block(&self, j: usize) -> &[f64] {
        &self.entries[j * self.block_size..(j + 1) * self.block_size]
    }

    pub fn blocks(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks_exact(self.block_size)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0.0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            entries: self.entries.iter().map(|v| v * factor).collect(),
            block_size: self.block_size,
        }
    }
}

impl BlockNorms for ComplexBlockSignal {
    fn num_blocks(&self) -> usize {
        self.entries.len() / self.block_size
    }

    fn block_size(&self) -> usize {
        self.block_size
    }

    fn block_norms(&self) -> Vec<f64> {
        let mut sq = Vec::with_capacity(self.block_size);
        self.blocks()
            .map(|b| {
                sq.clear();
                sq.extend(b.iter().map(|z| z.norm_sqr()));
                pairwise_sum(&sq).sqrt()
            })
            .collect()
    }
}

impl BlockNorms for RealBlockSignal {
    fn num_blocks(&self) -> usize {
        self.entries.len() / self.block_size
    }

    fn block_size(&self) -> usize {
        self.block_size
    }

    fn block_norms(&self) -> Vec<f64> {
        self.blocks().map(|b| pairwise_sum_sq(b).sqrt()).collect()
    }
}

/// Interleave real and imaginary parts: block `j` of the output is
/// `(a, b)` pairs of complex block `j`, in order. Block size doubles.
pub fn to_real_block(signal: &ComplexBlockSignal) -> RealBlockSignal {
    let entries = signal.entries.iter().flat_map(|z| [z.re, z.im]).collect();
    RealBlockSignal { entries, block_size: 2 * signal.block_size }
}

/// Inverse of [`to_real_block`]. Requires an even block size.
pub fn from_real_block(signal: &RealBlockSignal) -> Result<ComplexBlockSignal> {
    if signal.block_size % 2 != 0 {
        return invalid(format!(
            "real block size {} is odd, not the image of a complex signal",
            signal.block_size
        ));
    }
    let entries = signal
        .entries
        .chunks_exact(2)
        .map(|p| Complex64::new(p[0], p[1]))
        .collect();
    ComplexBlockSignal::new(entries, signal.block_size / 2)
}

/// Mixed ℓ2/ℓα norm `(Σ_j ‖x[j]‖₂^α)^{1/α}`.
pub fn mixed_norm<S: BlockNorms + ?Sized>(signal: &S, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return invalid(format!("mixed norm needs alpha > 0, got {alpha}"));
    }
    Ok(power_sum(&signal.block_norms(), alpha).powf(1.0 / alpha))
}

/// `Σ_j w_j^α` over block norms (zero blocks contribute nothing).
fn power_sum(norms: &[f64], alpha: f64) -> f64 {
    let powered: Vec<f64> = norms
        .iter()
        .map(|&w| if w > 0.0 { w.powf(alpha) } else { 0.0 })
        .collect();
    pairwise_sum(&powered)
}

/// Order `α ∈ [0, ∞]` of the block-sparsity measure `k_α`.
///
/// `0`, `1` and `∞` are the limit cases and are evaluated in closed form;
/// every other value uses the ratio of mixed norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SparsityMeasureSpec {
    alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureCase {
    /// Block count `‖x‖_{2,0}`.
    Count,
    /// Exponential of the Shannon entropy of block-norm proportions.
    Entropy,
    /// `‖x‖_{2,1} / ‖x‖_{2,∞}`.
    PeakRatio,
    /// `(‖x‖_{2,α}/‖x‖_{2,1})^{α/(1−α)}`.
    NormRatio,
}

impl SparsityMeasureSpec {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_nan() || alpha < 0.0 {
            return invalid(format!("sparsity order must be >= 0, got {alpha}"));
        }
        Ok(Self { alpha })
    }

    pub fn infinity() -> Self {
        Self { alpha: f64::INFINITY }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn case(&self) -> MeasureCase {
        if self.alpha == 0.0 {
            MeasureCase::Count
        } else if self.alpha == 1.0 {
            MeasureCase::Entropy
        } else if self.alpha.is_infinite() {
            MeasureCase::PeakRatio
        } else {
            MeasureCase::NormRatio
        }
    }
}

/// Block-sparsity measure `k_α` of a nonzero signal.
pub fn block_sparsity_measure<S: BlockNorms + ?Sized>(
    signal: &S,
    spec: SparsityMeasureSpec,
) -> Result<f64> {
    let norms = signal.block_norms();
    measure_from_norms(&norms, spec)
}

/// `k_α` evaluated directly on a vector of block norms.
pub fn measure_from_norms(norms: &[f64], spec: SparsityMeasureSpec) -> Result<f64> {
    if norms.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return invalid("block norms must be finite and non-negative");
    }
    let l1 = pairwise_sum(norms);
    if !(l1 > 0.0) {
        return invalid("block sparsity is undefined for the zero signal");
    }
    let value = match spec.case() {
        MeasureCase::Count => norms.iter().filter(|&&w| w > 0.0).count() as f64,
        MeasureCase::Entropy => {
            // 0 ln 0 = 0 for empty blocks.
            let terms: Vec<f64> = norms
                .iter()
                .filter(|&&w| w > 0.0)
                .map(|&w| {
                    let p = w / l1;
                    -p * p.ln()
                })
                .collect();
            pairwise_sum(&terms).exp()
        }
        MeasureCase::PeakRatio => {
            let peak = norms.iter().copied().fold(0.0, f64::max);
            l1 / peak
        }
        MeasureCase::NormRatio => {
            // (S_α^{1/α} / S_1)^{α/(1−α)} = exp((ln S_α − α ln S_1)/(1 − α)),
            // computed on norms rescaled by the peak to avoid under/overflow.
            let alpha = spec.alpha;
            let peak = norms.iter().copied().fold(0.0, f64::max);
            let scaled: Vec<f64> = norms.iter().map(|w| w / peak).collect();
            let s_alpha = power_sum(&scaled, alpha);
            let s_one = pairwise_sum(&scaled);
            ((s_alpha.ln() - alpha * s_one.ln()) / (1.0 - alpha)).exp()
        }
    };
    Ok(value)
}

/// Deterministic compressible test signal with `block_sparsity` nonzero
/// blocks whose norms decay as `1/j`.
///
/// Every entry of block `j` (1-based, `j <= block_sparsity`) equals
/// `(√2·c/2)(1+i)/(√d·j)`; remaining entries are zero and `c` is chosen so
/// that `‖x‖₂ = 1`.
pub fn harmonic_block_signal(block_sparsity: usize, d: usize, len: usize) -> Result<ComplexBlockSignal> {
    if d == 0 || len == 0 || len % d != 0 {
        return invalid(format!("length {len} must be a positive multiple of block size {d}"));
    }
    if block_sparsity == 0 || block_sparsity * d > len {
        return invalid(format!(
            "cannot place {block_sparsity} blocks of size {d} in a signal of length {len}"
        ));
    }
    let unit = Complex64::new(1.0, 1.0) * (std::f64::consts::SQRT_2 / 2.0);
    let inv_sqrt_d = 1.0 / (d as f64).sqrt();
    let mut entries = vec![Complex64::new(0.0, 0.0); len];
    for j in 0..block_sparsity {
        let value = unit * (inv_sqrt_d / (j + 1) as f64);
        entries[j * d..(j + 1) * d].fill(value);
    }
    let unnormalized = ComplexBlockSignal::new(entries, d)?;
    let c = 1.0 / unnormalized.l2_norm();
    Ok(unnormalized.scaled(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Independent oracle: partial harmonic sums H_k and H_k^(2).
    fn harmonic(k: usize, power: i32) -> f64 {
        (1..=k).map(|j| 1.0 / (j as f64).powi(power)).sum()
    }

    #[test]
    fn to_real_block_interleaves_single_entries() {
        let x = ComplexBlockSignal::new(vec![c(1.0, 2.0), c(3.0, 0.0)], 1).unwrap();
        let r = to_real_block(&x);
        assert_eq!(r.entries(), &[1.0, 2.0, 3.0, 0.0]);
        assert_eq!(r.block_size(), 2);
    }

    #[test]
    fn to_real_block_keeps_block_grouping() {
        let x = ComplexBlockSignal::new(
            vec![c(1.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, -1.0)],
            2,
        )
        .unwrap();
        let r = to_real_block(&x);
        assert_eq!(r.entries(), &[1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 2.0, -1.0]);
        assert_eq!(r.block_size(), 4);
        assert_eq!(r.block(1), &[0.0, 0.0, 2.0, -1.0]);
    }

    #[test]
    fn shape_errors() {
        assert!(ComplexBlockSignal::new(vec![c(1.0, 0.0); 5], 2).is_err());
        assert!(ComplexBlockSignal::new(vec![c(1.0, 0.0); 4], 0).is_err());
        assert!(RealBlockSignal::new(vec![], 2).is_err());
        let odd = RealBlockSignal::new(vec![1.0; 6], 3).unwrap();
        assert!(from_real_block(&odd).is_err());
    }

    #[test]
    fn mixed_norm_examples() {
        let r = RealBlockSignal::new(vec![3.0, 4.0, 0.0, 0.0], 2).unwrap();
        assert_eq!(mixed_norm(&r, 1.0).unwrap(), 5.0);

        let e = c(1.0, 1.0) / 2f64.sqrt();
        let x = ComplexBlockSignal::new(vec![e; 4], 2).unwrap();
        assert_relative_eq!(mixed_norm(&x, 2.0).unwrap(), 2.0, max_relative = 1e-15);

        assert!(mixed_norm(&r, 0.0).is_err());
        assert!(mixed_norm(&r, -1.0).is_err());
    }

    #[test]
    fn single_block_has_unit_measure() {
        let x = ComplexBlockSignal::new(
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.3, -2.0), c(1.0, 0.5)],
            2,
        )
        .unwrap();
        for a in [0.0, 0.5, 1.0, 2.0] {
            let k = block_sparsity_measure(&x, SparsityMeasureSpec::new(a).unwrap()).unwrap();
            assert_relative_eq!(k, 1.0, max_relative = 1e-14);
        }
        let k = block_sparsity_measure(&x, SparsityMeasureSpec::infinity()).unwrap();
        assert_relative_eq!(k, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn equal_blocks_measure_their_count() {
        // 3 equal-norm blocks out of 5, d = 2.
        let mut entries = vec![c(0.0, 0.0); 10];
        entries[0] = c(3.0, 4.0);
        entries[3] = c(0.0, 5.0);
        entries[8] = c(4.0, 0.0);
        entries[9] = c(0.0, 3.0);
        let x = ComplexBlockSignal::new(entries, 2).unwrap();
        for a in [0.0, 0.05, 0.5, 1.0, 1.5, 2.0, 7.0] {
            let k = block_sparsity_measure(&x, SparsityMeasureSpec::new(a).unwrap()).unwrap();
            assert_relative_eq!(k, 3.0, max_relative = 1e-13);
        }
        let k = block_sparsity_measure(&x, SparsityMeasureSpec::infinity()).unwrap();
        assert_relative_eq!(k, 3.0, max_relative = 1e-14);
    }

    #[test]
    fn zero_signal_rejected() {
        let x = ComplexBlockSignal::zeros(4, 2).unwrap();
        assert!(block_sparsity_measure(&x, SparsityMeasureSpec::new(2.0).unwrap()).is_err());
        assert!(SparsityMeasureSpec::new(-0.1).is_err());
        assert!(SparsityMeasureSpec::new(f64::NAN).is_err());
    }

    #[test]
    fn harmonic_signal_small_cases() {
        let x = harmonic_block_signal(1, 1, 4).unwrap();
        let h = std::f64::consts::SQRT_2 / 2.0;
        assert_relative_eq!(x.entries()[0].re, h, max_relative = 1e-15);
        assert_relative_eq!(x.entries()[0].im, h, max_relative = 1e-15);
        assert_eq!(&x.entries()[1..], &[c(0.0, 0.0); 3]);
        assert_relative_eq!(x.l2_norm(), 1.0, max_relative = 1e-15);

        // c^2 (1 + 1/4) = 1.
        let x = harmonic_block_signal(2, 1, 4).unwrap();
        let norms = x.block_norms();
        let c_expected = 2.0 / 5f64.sqrt();
        assert_relative_eq!(norms[0], c_expected, max_relative = 1e-14);
        assert_relative_eq!(norms[1], c_expected / 2.0, max_relative = 1e-14);

        assert!(harmonic_block_signal(5, 2, 8).is_err());
        assert!(harmonic_block_signal(0, 2, 8).is_err());
        assert!(harmonic_block_signal(2, 3, 8).is_err());
    }

    #[test]
    fn harmonic_signal_k2_matches_harmonic_oracle() {
        // k_2 = (Σ w)^2 / Σ w^2 with w_j ∝ 1/j  =>  H_k^2 / H_k^(2).
        let expected = harmonic(100, 1).powi(2) / harmonic(100, 2);
        assert_relative_eq!(expected, 16.4567, max_relative = 1e-4);
        for d in [1, 2, 5, 10] {
            let x = harmonic_block_signal(100, d, 1000).unwrap();
            assert_eq!(x.block_support_size(), 100);
            let k = block_sparsity_measure(&x, SparsityMeasureSpec::new(2.0).unwrap()).unwrap();
            assert_relative_eq!(k, expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn small_alpha_approaches_block_count() {
        for k in [1, 5, 10, 20] {
            let x = harmonic_block_signal(k, 5, 200).unwrap();
            let approx = block_sparsity_measure(&x, SparsityMeasureSpec::new(1e-4).unwrap()).unwrap();
            assert!((approx - k as f64).abs() / k as f64 <= 0.01, "k={k} approx={approx}");
        }
    }

    #[test]
    fn entropy_case_matches_direct_formula() {
        let norms = [1.0, 2.0, 0.0, 3.0];
        let p = [1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0];
        let h: f64 = p.iter().map(|q: &f64| -q * q.ln()).sum();
        let k = measure_from_norms(&norms, SparsityMeasureSpec::new(1.0).unwrap()).unwrap();
        assert_relative_eq!(k, h.exp(), max_relative = 1e-14);
        // continuity across the dispatch point
        let near = measure_from_norms(&norms, SparsityMeasureSpec::new(1.0 + 1e-7).unwrap()).unwrap();
        assert_relative_eq!(k, near, max_relative = 1e-6);
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let x = harmonic_block_signal(3, 2, 10).unwrap();
        let text = x.to_csv();
        assert!(text.starts_with("# N=10 d=2\nindex,real,imag\n"));
        let back = ComplexBlockSignal::from_csv(text.as_bytes()).unwrap();
        assert_eq!(back, x);

        assert!(ComplexBlockSignal::from_csv("N=2 d=1\n".as_bytes()).is_err());
        let missing = "# N=2 d=1\nindex,real,imag\n0,1,0\n";
        assert!(ComplexBlockSignal::from_csv(missing.as_bytes()).is_err());
        let dup = "# N=2 d=1\nindex,real,imag\n0,1,0\n0,1,0\n";
        assert!(ComplexBlockSignal::from_csv(dup.as_bytes()).is_err());
        let bad = "# N=1 d=1\nindex,real,imag\n0,x,0\n";
        assert!(matches!(
            ComplexBlockSignal::from_csv(bad.as_bytes()),
            Err(Error::Format(_))
        ));
    }

    fn complex_signal() -> impl Strategy<Value = ComplexBlockSignal> {
        (prop::sample::select(vec![1usize, 2, 5]), 1usize..=20).prop_flat_map(|(d, n)| {
            prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), d * n).prop_map(move |v| {
                let entries = v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
                ComplexBlockSignal::new(entries, d).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn transform_round_trips(x in complex_signal()) {
            let back = from_real_block(&to_real_block(&x)).unwrap();
            prop_assert_eq!(back, x);
        }

        #[test]
        fn transform_preserves_norms_and_measures(x in complex_signal(), alpha in 0.01f64..2.0) {
            prop_assume!(!x.is_zero());
            let r = to_real_block(&x);
            let nc = mixed_norm(&x, alpha).unwrap();
            let nr = mixed_norm(&r, alpha).unwrap();
            prop_assert!((nc - nr).abs() <= 1e-12 * nc);
            let spec = SparsityMeasureSpec::new(alpha).unwrap();
            let kc = block_sparsity_measure(&x, spec).unwrap();
            let kr = block_sparsity_measure(&r, spec).unwrap();
            prop_assert!((kc - kr).abs() <= 1e-12 * kc);
        }

        #[test]
        fn measure_is_monotone_and_bounded(x in complex_signal(), a in 0.0f64..3.0, b in 0.0f64..3.0) {
            prop_assume!(!x.is_zero());
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let k_lo = block_sparsity_measure(&x, SparsityMeasureSpec::new(lo).unwrap()).unwrap();
            let k_hi = block_sparsity_measure(&x, SparsityMeasureSpec::new(hi).unwrap()).unwrap();
            let k0 = block_sparsity_measure(&x, SparsityMeasureSpec::new(0.0).unwrap()).unwrap();
            let kinf = block_sparsity_measure(&x, SparsityMeasureSpec::infinity()).unwrap();
            let tol = 1e-9 * k0;
            prop_assert!(k_hi <= k_lo + tol);
            prop_assert!(kinf <= k_hi + tol && k_lo <= k0 + tol);
        }

        #[test]
        fn measure_is_scale_invariant(x in complex_signal(), alpha in 0.0f64..3.0, scale in 1e-3f64..1e3) {
            prop_assume!(!x.is_zero());
            let spec = SparsityMeasureSpec::new(alpha).unwrap();
            let k = block_sparsity_measure(&x, spec).unwrap();
            let ks = block_sparsity_measure(&x.scaled(-scale), spec).unwrap();
            prop_assert!((k - ks).abs() <= 1e-11 * k);
        }

        #[test]
        fn unit_blocks_give_scalar_measure(v in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..30), alpha in 0.05f64..2.0) {
            // d = 1: k_{α,1}(x) is the scalar measure (‖x‖_α/‖x‖_1)^{α/(1−α)} on moduli.
            let entries: Vec<Complex64> = v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
            let x = ComplexBlockSignal::new(entries.clone(), 1).unwrap();
            prop_assume!(!x.is_zero());
            prop_assume!((alpha - 1.0).abs() > 1e-3);
            let moduli: Vec<f64> = entries.iter().map(|z| z.norm()).collect();
            let la: f64 = moduli.iter().map(|m| m.powf(alpha)).sum::<f64>().powf(1.0 / alpha);
            let l1: f64 = moduli.iter().sum();
            let s = (la / l1).powf(alpha / (1.0 - alpha));
            let k = block_sparsity_measure(&x, SparsityMeasureSpec::new(alpha).unwrap()).unwrap();
            prop_assert!((k - s).abs() <= 1e-9 * s);
        }
    }
}
