//! The bottleneck simulator: between layers, the dictionary of known
//! vertices is cut back to what the tier input still makes guessable,
//! with Monte Carlo estimates over consistent trees standing in for exact
//! counts.

mod config;
mod core;
mod estimate;
mod fidelity;
mod report;
mod tape;
mod wrapper;

pub use self::core::{bottleneck, loop_ceiling, size_ceiling, AbortCause, Bottleneck, BottleneckCall, CallEstimates, LabelEstimate};
pub use config::{default_tau, BottleneckConfig, Ensemble, Threshold};
pub use estimate::{
    draw_batch, estimate_consistency_ratio, estimate_membership_probability, unconditioned_membership, Batch,
    EstimatorContext, Probability,
};
pub use fidelity::{fidelity_gap_check, FidelityGapReport, LayerGap};
pub use report::{check_ceilings, BottleneckReport, CeilingCheck};
pub use tape::SeedTape;
pub use wrapper::{bottleneck_tier_sim, bottleneck_wrapper, BottleneckRun, BottleneckSimulator, TierOutcome};
