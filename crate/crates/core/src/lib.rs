//! Block-sparsity estimation for complex-valued signals.
//!
//! A complex signal with block size `d` is mapped to a real signal with
//! block size `2d` ([`signal::to_real_block`]), sketched with isotropic
//! symmetric α-stable random projections ([`sketch`]) and its block
//! sparsity `k_α` is estimated from the empirical characteristic function
//! of the measurements, together with an asymptotic confidence interval
//! ([`estimate`]). [`recovery`] holds a block CoSaMP solver used to show how
//! recovery quality depends on the block sparsity it is given, and
//! [`experiment`] runs the replicated simulation designs.

pub mod error;
pub mod estimate;
pub mod experiment;
pub mod numeric;
pub mod recovery;
pub mod rng;
pub mod signal;
pub mod sketch;
pub mod stable;
pub mod stats;

pub use error::{Error, Result};
pub use estimate::{
    empirical_cf, estimate_block_sparsity, estimate_norm, pilot_t, theta_variance, EstimateRecord,
    EstimateWarning, NormEstimate, SparsityEstimate,
};
pub use rng::RngStream;
pub use signal::{
    block_sparsity_measure, from_real_block, harmonic_block_signal, mixed_norm, to_real_block,
    BlockNorms, ComplexBlockSignal, RealBlockSignal, SparsityMeasureSpec,
};
pub use sketch::{sketch, sketch_pair, NoiseFamily, NoiseModel, SketchMeasurements};
pub use stable::{
    sample_isotropic_vector, sample_projection_row, sample_scalar_sas, IsotropicStable,
    StableLawParams,
};
pub use stats::{ks_test_standard_normal, normal_quantile};
