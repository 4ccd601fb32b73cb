//! Mixture-of-product-distribution models: definition, sampling,
//! normalization, feature blocking and divergence.

mod blocks;
mod model;
mod sample;
mod spec;

pub use blocks::{split_feature_blocks, FeatureBlocks};
pub use model::{
    divergence, divergence_of_rows, random_model, spread_for_divergence, two_block_model,
    PopulationModel,
};
pub use sample::{normalize, sample, SampleMatrix};
pub use spec::{ModelSpec, ProbSpec};
