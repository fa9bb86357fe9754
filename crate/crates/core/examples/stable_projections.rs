//! Isotropic stable projections: the empirical characteristic function of
//! <v, x> against exp(-(gamma * ||x||_{2,alpha})^alpha |t|^alpha).
//!
//! cargo run --release --example stable_projections

use blocksketch::{harmonic_block_signal, mixed_norm, sample_projection_row, to_real_block, BlockNorms, RngStream};

fn main() -> blocksketch::Result<()> {
    let xt = to_real_block(&harmonic_block_signal(20, 2, 100)?);
    let (n_blocks, dim) = (xt.num_blocks(), xt.block_size());
    let draws = 20_000;

    for (alpha, gamma) in [(2.0, std::f64::consts::FRAC_1_SQRT_2), (1.0, 1.0), (0.5, 1.0)] {
        let mut rng = RngStream::new(3, 0);
        let mut proj = Vec::with_capacity(draws);
        for _ in 0..draws {
            let v = sample_projection_row(n_blocks, dim, alpha, gamma, &mut rng)?;
            proj.push(v.iter().zip(xt.entries()).map(|(a, b)| a * b).sum::<f64>());
        }
        let scale = gamma * mixed_norm(&xt, alpha)?;
        println!("alpha={alpha} gamma={gamma:.4}");
        for t in [0.25, 0.5, 1.0, 2.0] {
            let emp = proj.iter().map(|p| (t * p).cos()).sum::<f64>() / draws as f64;
            let exact = (-(scale * t).powf(alpha)).exp();
            println!("  t={t:<5} empirical={emp:.4} exact={exact:.4}");
        }
    }
    Ok(())
}
