//! Block sparsity measures of the decaying test signal, before and after
//! the complex-to-real transform.
//!
//! cargo run --example transform_and_measures

use blocksketch::{block_sparsity_measure, harmonic_block_signal, to_real_block, BlockNorms, SparsityMeasureSpec};

fn main() -> blocksketch::Result<()> {
    let x = harmonic_block_signal(100, 5, 1000)?;
    let xt = to_real_block(&x);
    println!("N={} d={} -> real length {} block size {}", x.len(), x.block_size(), xt.len(), xt.block_size());
    println!("nonzero blocks: {}", x.block_support_size());

    println!("{:>8} {:>12} {:>12}", "alpha", "k(x)", "k(x~)");
    for alpha in [0.0, 0.05, 0.5, 1.0, 2.0] {
        let spec = SparsityMeasureSpec::new(alpha)?;
        let kx = block_sparsity_measure(&x, spec)?;
        let kxt = block_sparsity_measure(&xt, spec)?;
        println!("{alpha:>8} {kx:>12.6} {kxt:>12.6}");
    }
    let inf = SparsityMeasureSpec::infinity();
    println!("{:>8} {:>12.6}", "inf", block_sparsity_measure(&xt, inf)?);

    // k_2 of this signal is H_k^2 / H_k^(2)
    let (h1, h2) = (1..=100).fold((0.0, 0.0), |(a, b), j| (a + 1.0 / j as f64, b + 1.0 / (j * j) as f64));
    println!("harmonic value for alpha=2: {:.6}", h1 * h1 / h2);
    Ok(())
}
