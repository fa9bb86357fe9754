//! Replicated estimation for one design: coverage, studentized moments and
//! a KS check of normality.
//!
//! cargo run --release --example confidence_intervals -- [design] [replications]

use blocksketch::experiment::{run_design, Design, ExperimentSpec};

fn main() -> blocksketch::Result<()> {
    let mut args = std::env::args().skip(1);
    let design: Design = args.next().as_deref().unwrap_or("c").parse()?;
    let mut spec = ExperimentSpec::for_design(design);
    if let Some(reps) = args.next() {
        spec.replications = reps.parse().map_err(|_| blocksketch::Error::InvalidInput(reps))?;
    }
    let report = run_design(&spec)?;
    println!("design {} alpha={} d={} m1={} m_alpha={} reps={}", design, spec.alpha, spec.block_size, spec.m1, spec.m_alpha, spec.replications);
    for cell in &report.cells {
        let s = &cell.summary;
        let (d, p) = s.ks.map_or((f64::NAN, f64::NAN), |k| (k.statistic, k.p_value));
        println!(
            "k={:<4} sigma={:<4} truth={:9.4} mean={:9.4} coverage={:.3} z_mean={:+.3} z_var={:.3} KS D={:.4} p={:.4}",
            s.block_sparsity, s.sigma, s.truth, s.mean_k_hat, s.coverage, s.studentized_mean, s.studentized_variance, d, p
        );
        if s.failures + s.without_interval > 0 {
            println!("  {} failed, {} without interval", s.failures, s.without_interval);
        }
    }
    Ok(())
}
