//! Admissible forests and samplers for the skeleton laws.

pub mod sampler;
pub mod tree;

pub use sampler::{
    sample_annulus_skeleton, sample_extinct_tree, sample_hull_skeleton, sample_offspring_tilted,
    sample_rooted_hull_skeleton, sample_spine_tree, HullVariant, OffspringTable, SkeletonSampler,
};
pub use tree::{count_max_height_trees, count_property_p, PlaneForest, PlaneTree};
