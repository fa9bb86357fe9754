//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use blocksketch::recovery::MeasurementMatrix;
use blocksketch::{BlockNorms, ComplexBlockSignal, RealBlockSignal};
use num_complex::Complex64;

/// `Σ_j 1/j^p` for `j = 1..=k`.
pub fn harmonic(k: usize, p: i32) -> f64 {
    (1..=k).map(|j| 1.0 / (j as f64).powi(p)).sum()
}

/// `(Σ_j ‖x̃[j]‖^α)^{1/α}` straight from the entries.
pub fn mixed_norm_direct(x: &RealBlockSignal, alpha: f64) -> f64 {
    let d = x.block_size();
    x.entries()
        .chunks(d)
        .map(|b| b.iter().map(|v| v * v).sum::<f64>().sqrt().powf(alpha))
        .sum::<f64>()
        .powf(1.0 / alpha)
}

/// Solve the square system `m x = rhs` by Gaussian elimination with partial
/// pivoting; `None` when singular.
pub fn solve_dense(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-13 {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for c in col..n {
                m[row][c] -= f * m[col][c];
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| m[row][c] * x[c]).sum();
        x[row] = (rhs[row] - s) / m[row][row];
    }
    Some(x)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (0..n)
        .flat_map(|first| {
            combinations(n - first - 1, k - 1)
                .into_iter()
                .map(move |rest| std::iter::once(first).chain(rest.into_iter().map(|r| r + first + 1)).collect())
        })
        .collect()
}

pub struct OracleFit {
    pub support: Vec<usize>,
    pub residual: f64,
    pub x: Vec<Complex64>,
}

/// Best `k`-block fit of `y` by exhaustive search over supports, each
/// solved through the normal equations.
pub fn exhaustive_block_ls(a: &MeasurementMatrix, y: &[Complex64], d: usize, k: usize) -> Option<OracleFit> {
    let n_blocks = a.cols() / d;
    let mut best: Option<OracleFit> = None;
    for support in combinations(n_blocks, k) {
        let cols: Vec<usize> = support.iter().flat_map(|&j| j * d..(j + 1) * d).collect();
        let p = cols.len();
        let gram: Vec<Vec<f64>> = (0..p)
            .map(|i| (0..p).map(|j| (0..a.rows()).map(|r| a.row(r)[cols[i]] * a.row(r)[cols[j]]).sum()).collect())
            .collect();
        let rhs_re: Vec<f64> = cols.iter().map(|&c| (0..a.rows()).map(|r| a.row(r)[c] * y[r].re).sum()).collect();
        let rhs_im: Vec<f64> = cols.iter().map(|&c| (0..a.rows()).map(|r| a.row(r)[c] * y[r].im).sum()).collect();
        let (Some(re), Some(im)) = (solve_dense(gram.clone(), rhs_re), solve_dense(gram, rhs_im)) else {
            continue;
        };
        let mut x = vec![Complex64::new(0.0, 0.0); a.cols()];
        for (i, &c) in cols.iter().enumerate() {
            x[c] = Complex64::new(re[i], im[i]);
        }
        let ax = a.apply(&x).unwrap();
        let residual = ax.iter().zip(y).map(|(u, v)| (u - v).norm_sqr()).sum::<f64>().sqrt();
        if best.as_ref().map_or(true, |b| residual < b.residual) {
            best = Some(OracleFit { support, residual, x });
        }
    }
    best
}

pub fn relative_error(x: &[Complex64], truth: &ComplexBlockSignal) -> f64 {
    let num: f64 = x.iter().zip(truth.entries()).map(|(a, b)| (a - b).norm_sqr()).sum();
    let den: f64 = truth.entries().iter().map(|b| b.norm_sqr()).sum();
    (num / den).sqrt()
}
