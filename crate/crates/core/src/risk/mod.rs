//! Neighborhood and weighted risk, Monte Carlo evaluation, bound oracles and rate fits.

mod bounds;
mod engine;
mod fit;
mod neighborhood;
mod regime;

pub use bounds::{chi_square_tail, normal_density, normal_tail, oracle_bound, truncated_second_moment, BoundVariant};
pub use engine::{neighborhood_risk, weighted_risk, RiskJob, RiskReport};
pub use fit::{rate_fit, RateFit};
pub use neighborhood::{window_integral, CellWeights, Kernel, NeighborhoodSpec, KERNEL_MASS_TOLERANCE};
pub use regime::{
    half_width, DnKind, DnSequence, Regime, SuperefficiencyReport, SuperefficiencyRow, SuperefficiencyStudy,
};
