//! Mean relative recovery error as a function of the block sparsity given
//! to CoSaMP, plus the estimate a user would have fed it.
//!
//! cargo run --release --example sensitivity_curve -- [trials]

use blocksketch::experiment::{run_recovery_study, RecoveryStudySpec};

fn main() -> blocksketch::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let spec = RecoveryStudySpec {
        trials,
        k_grid: vec![2, 4, 7, 8, 10, 12, 14, 16, 20, 28, 40],
        handoff_replications: 100,
        ..RecoveryStudySpec::default()
    };
    let study = run_recovery_study(&spec)?;
    for p in &study.curve {
        let bar = "#".repeat((p.mre * 60.0).round() as usize);
        println!("{:>3} {:10.3e} {bar}", p.k_in, p.mre);
    }
    println!("argmin: {:?}", study.argmin());
    if let Some(h) = &study.handoff {
        println!("estimated block sparsity (alpha={}): {:.2} (k_alpha = {:.2})", h.alpha, h.mean_k_hat, h.truth);
    }
    Ok(())
}
