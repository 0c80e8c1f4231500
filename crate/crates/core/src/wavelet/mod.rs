//! Orthonormal periodized wavelet bases on `[0, 1]`.

mod filters;
mod support;
mod transform;
mod tree;

pub use filters::{
    build_basis, check_orthonormal, quadrature_mirror, WaveletKind, WaveletSpec, FAMILIES,
    FILTER_TOLERANCE,
};
pub use support::{
    neighborhood_index_sets, restricted_norm_bounds, support_interval, touching_positions, Dyadic,
    IndexSet, NeighborhoodIndexSets, SupportInterval,
};
pub use transform::{analyze, dyadic_level, grid_energy, scaling_coefficients, synthesize};
pub use tree::CoefficientTree;
