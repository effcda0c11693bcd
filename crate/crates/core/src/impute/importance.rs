//! Permutation feature importance on held-out rows.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::dataset::{Feature, RawRow};
use super::model::TrainedModel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureImportance {
    pub feature: Feature,
    /// Baseline accuracy minus mean shuffled accuracy.
    pub mean: f64,
    /// Population standard deviation of the per-repeat drops.
    pub std: f64,
    pub drops: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceReport {
    pub baseline: f64,
    pub repeats: usize,
    pub n_validation: usize,
    pub features: Vec<FeatureImportance>,
}

impl ImportanceReport {
    /// Features sorted by decreasing mean importance.
    pub fn ranked(&self) -> Vec<&FeatureImportance> {
        let mut v: Vec<&FeatureImportance> = self.features.iter().collect();
        v.sort_by(|a, b| b.mean.total_cmp(&a.mean));
        v
    }
}

/// `rows` must be disjoint from the model's training rows.
pub fn permutation_importance(
    model: &TrainedModel,
    rows: &[RawRow],
    labels: &[usize],
    repeats: usize,
    seed: u64,
) -> ImportanceReport {
    let baseline = model.accuracy(rows, labels);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut work = rows.to_vec();
    let features = model
        .features
        .iter()
        .enumerate()
        .map(|(k, &feature)| {
            let original: Vec<Option<f64>> = rows.iter().map(|r| r[k]).collect();
            let mut column = original.clone();
            let drops: Vec<f64> = (0..repeats)
                .map(|_| {
                    column.shuffle(&mut rng);
                    for (r, v) in work.iter_mut().zip(&column) {
                        r[k] = *v;
                    }
                    baseline - model.accuracy(&work, labels)
                })
                .collect();
            for (r, v) in work.iter_mut().zip(&original) {
                r[k] = *v;
            }
            let n = drops.len().max(1) as f64;
            let mean = drops.iter().sum::<f64>() / n;
            let std = (drops.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n).sqrt();
            FeatureImportance { feature, mean, std, drops }
        })
        .collect();
    ImportanceReport { baseline, repeats, n_validation: rows.len(), features }
}

fn fixed6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// `feature,importance_mean,importance_std`.
pub fn write_importance_csv<W: Write>(report: &ImportanceReport, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["feature", "importance_mean", "importance_std"]).map_err(Error::from_csv)?;
    for f in &report.features {
        w.write_record([f.feature.name().to_string(), fixed6(f.mean), fixed6(f.std)])
            .map_err(Error::from_csv)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyRow {
    pub model: String,
    pub study_area: String,
    pub cv_accuracy: f64,
    pub test_accuracy: Option<f64>,
}

/// `model,study_area,cv_accuracy,test_accuracy`; an unknown test accuracy is left blank.
pub fn write_accuracy_csv<W: Write>(rows: &[AccuracyRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["model", "study_area", "cv_accuracy", "test_accuracy"]).map_err(Error::from_csv)?;
    for r in rows {
        w.write_record([
            r.model.clone(),
            r.study_area.clone(),
            format!("{:.6}", r.cv_accuracy),
            r.test_accuracy.map(|a| format!("{a:.6}")).unwrap_or_default(),
        ])
        .map_err(Error::from_csv)?;
    }
    w.flush()?;
    Ok(())
}
