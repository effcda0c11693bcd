//! Trained imputation models: preprocessing plus classifier, and their files.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::dataset::{Feature, MeanImputer, RawRow, Standardizer, Target, TrainingSet};
use super::forest::{ForestConfig, ForestModel};
use super::margin::{MarginConfig, MarginModel};
use crate::error::{Error, Result};

pub const MODEL_FORMAT: &str = "roofinv-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelConfig {
    Forest(ForestConfig),
    Margin(MarginConfig),
}

impl ModelConfig {
    pub fn name(&self) -> &'static str {
        match self {
            ModelConfig::Forest(_) => "random_forest",
            ModelConfig::Margin(_) => "linear_margin",
        }
    }
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig::Forest(ForestConfig::default())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classifier {
    Forest(ForestModel),
    Margin(MarginModel),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub target: Target,
    pub features: Vec<Feature>,
    pub config: ModelConfig,
    pub seed: u64,
    pub n_train: usize,
    pub imputer: MeanImputer,
    pub standardizer: Standardizer,
    pub classifier: Classifier,
}

impl TrainedModel {
    /// Fits imputation means, standardization and the classifier on `rows` only.
    pub fn fit(
        target: Target,
        features: &[Feature],
        rows: &[RawRow],
        labels: &[usize],
        config: &ModelConfig,
        seed: u64,
    ) -> Result<TrainedModel> {
        if rows.is_empty() || rows.len() != labels.len() {
            return Err(Error::Input(format!("{} rows but {} labels", rows.len(), labels.len())));
        }
        let width = features.len();
        let imputer = MeanImputer::fit(rows, width);
        let dense: Vec<Vec<f64>> = rows.iter().map(|r| imputer.transform(r)).collect();
        let standardizer = Standardizer::fit(&dense, width);
        let z: Vec<Vec<f64>> = dense.iter().map(|r| standardizer.transform(r)).collect();
        let classifier = match config {
            ModelConfig::Forest(c) => Classifier::Forest(ForestModel::fit(&z, labels, 2, c, seed)),
            ModelConfig::Margin(c) => {
                for (k, f) in features.iter().enumerate() {
                    if standardizer.is_constant(k) {
                        log::warn!("feature {} has zero variance and is dropped", f.name());
                    }
                }
                Classifier::Margin(MarginModel::fit(&z, labels, c, seed))
            }
        };
        Ok(TrainedModel {
            target,
            features: features.to_vec(),
            config: *config,
            seed,
            n_train: rows.len(),
            imputer,
            standardizer,
            classifier,
        })
    }

    pub fn fit_set(set: &TrainingSet, config: &ModelConfig, seed: u64) -> Result<TrainedModel> {
        Self::fit(set.target, &set.features, &set.rows, &set.labels, config, seed)
    }

    pub fn predict(&self, row: &[Option<f64>]) -> usize {
        let z = self.standardizer.transform(&self.imputer.transform(row));
        match &self.classifier {
            Classifier::Forest(f) => f.predict(&z),
            Classifier::Margin(m) => m.predict(&z),
        }
    }

    pub fn accuracy(&self, rows: &[RawRow], labels: &[usize]) -> f64 {
        if rows.is_empty() {
            return 0.0;
        }
        let hits = rows.iter().zip(labels).filter(|(r, &l)| self.predict(r) == l).count();
        hits as f64 / rows.len() as f64
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        #[derive(Serialize)]
        struct File<'a> {
            format: &'a str,
            version: u32,
            model: &'a TrainedModel,
        }
        let mut out = serde_json::to_vec_pretty(&File { format: MODEL_FORMAT, version: MODEL_VERSION, model: self })?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn from_json(bytes: &[u8]) -> Result<TrainedModel> {
        let mut v: serde_json::Value = serde_json::from_slice(bytes)?;
        let format = v.get("format").and_then(|f| f.as_str()).unwrap_or("");
        if format != MODEL_FORMAT {
            return Err(Error::Model(format!("not a model file (format {format:?})")));
        }
        let version = v.get("version").and_then(|f| f.as_u64());
        if version != Some(u64::from(MODEL_VERSION)) {
            return Err(Error::Model(format!(
                "format version {} is not supported (expected {MODEL_VERSION})",
                version.map_or("missing".to_string(), |x| x.to_string())
            )));
        }
        let model = v.get_mut("model").map(serde_json::Value::take).ok_or_else(|| Error::Model("missing model".into()))?;
        Ok(serde_json::from_value(model)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<TrainedModel> {
        Self::from_json(&std::fs::read(path)?)
    }
}
