//! Recover a 12-block-sparse complex signal from 120 Gaussian measurements,
//! once with the right block sparsity and once with too small a guess.
//!
//! cargo run --release --example cosamp_recovery

use blocksketch::recovery::{random_block_sparse_signal, recover_with_truth, MeasurementMatrix, RecoveryConfig};
use blocksketch::{BlockNorms, RngStream};

fn main() -> blocksketch::Result<()> {
    let rng = RngStream::new(5, 0);
    let truth = random_block_sparse_signal(300, 4, 12, &mut rng.fork(1))?;
    let a = MeasurementMatrix::gaussian(120, 300, &mut rng.fork(2))?;

    for k_in in [12, 7] {
        let r = recover_with_truth(&truth, &a, &RecoveryConfig::new(4, k_in))?;
        println!(
            "k_in={k_in:<3} RE={:.3e} iterations={} stop={:?} blocks={}",
            r.relative_error.unwrap_or(f64::NAN),
            r.iterations,
            r.stop,
            r.x_hat.block_support_size()
        );
    }
    Ok(())
}
