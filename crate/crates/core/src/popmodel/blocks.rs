use rand::seq::SliceRandom;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::{Seed, Substream};

/// Disjoint groups of feature indices, one per classification round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeatureBlocks {
    blocks: Vec<Vec<usize>>,
    block_size: usize,
}

impl FeatureBlocks {
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Shuffles `0..total_features` and cuts the first `rounds·block_size`
/// indices into `rounds` disjoint blocks.
pub fn split_feature_blocks(
    total_features: usize,
    block_size: usize,
    rounds: usize,
    seed: Seed,
) -> Result<FeatureBlocks> {
    if block_size == 0 || rounds == 0 {
        return Err(Error::InvalidParameters(
            "block size and round count must be positive".into(),
        ));
    }
    let needed = rounds
        .checked_mul(block_size)
        .ok_or_else(|| Error::InvalidParameters("rounds * block_size overflows".into()))?;
    if needed > total_features {
        return Err(Error::InvalidParameters(format!(
            "{rounds} blocks of {block_size} features need {needed}, only {total_features} available"
        )));
    }
    let mut order: Vec<usize> = (0..total_features).collect();
    order.shuffle(&mut Substream::new(seed).rng());
    let blocks = order
        .chunks_exact(block_size)
        .take(rounds)
        .map(<[usize]>::to_vec)
        .collect();
    Ok(FeatureBlocks { blocks, block_size })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn covers_all_when_exact() {
        let b = split_feature_blocks(4, 2, 2, 1).unwrap();
        assert_eq!(b.len(), 2);
        let all: BTreeSet<usize> = b.blocks().iter().flatten().copied().collect();
        assert_eq!(all, (0..4).collect());
    }

    #[test]
    fn single_round_distinct() {
        let b = split_feature_blocks(50, 10, 1, 3).unwrap();
        let set: BTreeSet<usize> = b.blocks()[0].iter().copied().collect();
        assert_eq!(set.len(), 10);
    }

    #[test]
    fn insufficient_features() {
        assert!(matches!(
            split_feature_blocks(5, 3, 2, 0),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn deterministic_given_seed() {
        assert_eq!(
            split_feature_blocks(100, 7, 5, 42).unwrap(),
            split_feature_blocks(100, 7, 5, 42).unwrap()
        );
        assert_ne!(
            split_feature_blocks(100, 7, 5, 42).unwrap(),
            split_feature_blocks(100, 7, 5, 43).unwrap()
        );
    }
}
