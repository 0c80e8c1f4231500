//! Shrinkage rules and the BlockJS, hybrid, superefficient and local-constant estimators.

mod plan;
mod rules;
mod select;
mod shrink;

pub use plan::{
    horizontal_blocks, largest_level_below, plan_levels, smallest_level_at_least, BlockPartition, LevelPlan,
};
pub use rules::{
    block_js, hybrid_branches, hybrid_estimate, local_constant_estimate, local_constant_level, soft_estimate,
    superefficient_estimate, superefficient_level, Branch,
};
pub use select::{Estimate, EstimatorContext, EstimatorSpec, ESTIMATORS};
pub use shrink::{james_stein_block, shrink_factor, soft_threshold, solve_threshold_constant, ThresholdConstants};
