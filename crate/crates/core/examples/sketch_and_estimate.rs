//! Sketch a signal read from CSV (or the built-in test signal) and print
//! the estimate as JSON.
//!
//! cargo run --release --example sketch_and_estimate -- [signal.csv]

use std::fs::File;
use std::io::BufReader;

use blocksketch::{
    block_sparsity_measure, estimate_block_sparsity, harmonic_block_signal, sketch_pair, to_real_block,
    ComplexBlockSignal, EstimateRecord, NoiseModel, RngStream, SparsityMeasureSpec,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = match std::env::args().nth(1) {
        Some(path) => ComplexBlockSignal::from_csv(BufReader::new(File::open(path)?))?,
        None => harmonic_block_signal(100, 1, 1000)?,
    };
    let xt = to_real_block(&x);
    let alpha = 2.0;
    let noise = NoiseModel::gaussian(0.1)?;
    let meas = sketch_pair(&xt, alpha, 1.0, 1000, 1000, noise, &RngStream::new(42, 0))?;
    let est = estimate_block_sparsity(&meas, 0.05)?;

    let truth = block_sparsity_measure(&xt, SparsityMeasureSpec::new(alpha)?)?;
    eprintln!("true k_{alpha} = {truth:.4}, covered: {}", est.covers(truth));
    println!("{}", serde_json::to_string_pretty(&EstimateRecord::new(&est, &meas))?);
    Ok(())
}
