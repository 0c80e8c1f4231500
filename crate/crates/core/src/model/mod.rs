//! Test functions, Hölder verification, the two-point bump and the sequence-model sampler.

pub mod bump;
pub mod catalog;
pub mod holder;
pub mod noise;

pub use bump::{bump_scales, make_bump, minimal_support, smoothstep, two_point_pair, Bump, TwoPointPair};
pub use catalog::{catalog, catalog_with, check_membership, describe, CatalogParams, Profile, TestFunction, FUNCTIONS};
pub use holder::{derivative_order, holder_seminorm, holder_seminorm_with, HolderClass, HolderEstimate};
pub use noise::{sample_observation, sample_observation_stream, NormalStream, ObservedSequence};
