//! Stratified k-fold cross-validation and held-out splits.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::dataset::TrainingSet;
use super::model::{ModelConfig, TrainedModel};
use crate::error::{DomainError, Result};

fn by_class(labels: &[usize]) -> Vec<Vec<usize>> {
    let n_classes = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut groups = vec![Vec::new(); n_classes];
    for (i, &l) in labels.iter().enumerate() {
        groups[l].push(i);
    }
    groups
}

/// Fold number for each row. Within each class rows are shuffled and dealt
/// round-robin, continuing where the previous class stopped, so per-class
/// counts differ by at most one across folds.
pub fn stratified_folds(labels: &[usize], k: usize, seed: u64) -> Result<Vec<usize>, DomainError> {
    if k < 2 || k > labels.len() {
        return Err(DomainError::Invalid(format!("cannot make {k} folds from {} rows", labels.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold = vec![0; labels.len()];
    let mut next = 0;
    for (class, mut members) in by_class(labels).into_iter().enumerate() {
        if !members.is_empty() && members.len() < k {
            log::warn!("class {class} has {} rows, fewer than {k} folds; stratification relaxed", members.len());
        }
        members.shuffle(&mut rng);
        for i in members {
            fold[i] = next % k;
            next += 1;
        }
    }
    Ok(fold)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub model: String,
    pub k: usize,
    pub folds: Vec<usize>,
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
}

/// Each fold trains on the other folds alone, so imputation means and
/// standardization never see held-out rows.
pub fn cross_validate(set: &TrainingSet, config: &ModelConfig, k: usize, seed: u64) -> Result<CvReport> {
    let folds = stratified_folds(&set.labels, k, seed)?;
    let mut fold_accuracies = Vec::with_capacity(k);
    for f in 0..k {
        let (train, test): (Vec<usize>, Vec<usize>) = (0..set.len()).partition(|&i| folds[i] != f);
        let tr = set.subset(&train);
        let te = set.subset(&test);
        let model = TrainedModel::fit_set(&tr, config, seed.wrapping_add(1 + f as u64))?;
        fold_accuracies.push(model.accuracy(&te.rows, &te.labels));
    }
    let mean_accuracy = fold_accuracies.iter().sum::<f64>() / k as f64;
    Ok(CvReport { model: config.name().to_string(), k, folds, fold_accuracies, mean_accuracy })
}

/// Stratified split; returns sorted (train, validation) row indices.
pub fn train_validation_split(labels: &[usize], validation_fraction: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut train, mut val) = (Vec::new(), Vec::new());
    for mut members in by_class(labels) {
        members.shuffle(&mut rng);
        let n_val = (members.len() as f64 * validation_fraction).round() as usize;
        val.extend_from_slice(&members[..n_val]);
        train.extend_from_slice(&members[n_val..]);
    }
    train.sort_unstable();
    val.sort_unstable();
    (train, val)
}
