//! Bagged random forest over [`DecisionTree`]s.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{DecisionTree, TreeParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_trees: usize,
    /// Bootstrap sample size as a fraction of the training rows.
    pub bootstrap_fraction: f64,
    /// Features tried per split; `None` means ceil(sqrt(d)).
    pub max_features: Option<usize>,
    pub min_leaf: usize,
    pub max_depth: Option<usize>,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig { n_trees: 100, bootstrap_fraction: 1.0, max_features: None, min_leaf: 5, max_depth: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub n_classes: usize,
    pub tree_seeds: Vec<u64>,
    pub trees: Vec<DecisionTree>,
    /// Set when training data held a single class; predictions are constant.
    pub constant: Option<usize>,
}

impl ForestModel {
    pub fn fit(x: &[Vec<f64>], y: &[usize], n_classes: usize, config: &ForestConfig, seed: u64) -> ForestModel {
        let present: Vec<usize> = (0..n_classes).filter(|c| y.contains(c)).collect();
        if present.len() < 2 {
            log::warn!("training data has a single class; forest degenerates to a constant model");
            return ForestModel {
                n_classes,
                tree_seeds: Vec::new(),
                trees: Vec::new(),
                constant: Some(present.first().copied().unwrap_or(0)),
            };
        }
        let d = x.first().map_or(0, Vec::len);
        let params = TreeParams {
            max_features: Some(config.max_features.unwrap_or_else(|| (d as f64).sqrt().ceil() as usize)),
            min_leaf: config.min_leaf,
            max_depth: config.max_depth,
        };
        let mut master = ChaCha8Rng::seed_from_u64(seed);
        let tree_seeds: Vec<u64> = (0..config.n_trees).map(|_| master.gen()).collect();
        let n = x.len();
        let bag = ((n as f64 * config.bootstrap_fraction).round() as usize).max(1);
        let trees = tree_seeds
            .par_iter()
            .map(|&s| {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                let rows: Vec<usize> = (0..bag).map(|_| rng.gen_range(0..n)).collect();
                DecisionTree::fit(x, y, n_classes, &rows, &params, &mut rng)
            })
            .collect();
        ForestModel { n_classes, tree_seeds, trees, constant: None }
    }

    /// Majority vote; ties go to the lowest class index.
    pub fn predict(&self, row: &[f64]) -> usize {
        if let Some(c) = self.constant {
            return c;
        }
        let mut votes = vec![0usize; self.n_classes];
        for t in &self.trees {
            votes[t.predict(row)] += 1;
        }
        let mut best = 0;
        for (k, &v) in votes.iter().enumerate() {
            if v > votes[best] {
                best = k;
            }
        }
        best
    }
}
