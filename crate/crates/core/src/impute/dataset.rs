//! Feature extraction, mean imputation and standardization.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{DomainError, Error, Result};
use crate::inventory::{BuildingId, BuildingRecord, Inventory, RoofSource};
use crate::roof::{Complexity, RoofClass, RoofFamily};
use crate::spatial::NeighborFeatures;

/// Which binary axis a model predicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    /// Class 0 = gable, 1 = hip.
    Type,
    /// Class 0 = simple, 1 = complex.
    Complexity,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Type => "type",
            Target::Complexity => "complexity",
        }
    }

    pub fn label_of(self, roof: RoofClass) -> Result<usize, DomainError> {
        let f = roof.to_features()?;
        Ok(match self {
            Target::Type => usize::from(f.family == RoofFamily::Hip),
            Target::Complexity => usize::from(f.complexity == Complexity::Complex),
        })
    }

    /// Features selected for this target when none are given explicitly.
    pub fn default_features(self) -> Vec<Feature> {
        match self {
            Target::Type => vec![Feature::YearBuilt, Feature::BuildingArea, Feature::NeighborType],
            Target::Complexity => vec![Feature::YearBuilt, Feature::BuildingArea, Feature::NeighborComplexity],
        }
    }

    /// Every attribute available for importance studies.
    pub fn all_features(self) -> Vec<Feature> {
        let neighbor = match self {
            Target::Type => Feature::NeighborType,
            Target::Complexity => Feature::NeighborComplexity,
        };
        vec![Feature::YearBuilt, Feature::BuildingArea, Feature::BuildingValue, Feature::Stories, neighbor]
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Feature {
    YearBuilt,
    BuildingArea,
    BuildingValue,
    Stories,
    NeighborType,
    NeighborComplexity,
}

impl Feature {
    pub fn name(self) -> &'static str {
        match self {
            Feature::YearBuilt => "year_built",
            Feature::BuildingArea => "building_area",
            Feature::BuildingValue => "building_value",
            Feature::Stories => "stories",
            Feature::NeighborType => "neighbor_type",
            Feature::NeighborComplexity => "neighbor_complexity",
        }
    }

    pub fn extract(self, b: &BuildingRecord, nf: Option<&NeighborFeatures>) -> Option<f64> {
        match self {
            Feature::YearBuilt => Some(f64::from(b.year_built)),
            Feature::BuildingArea => Some(b.building_area),
            Feature::BuildingValue => b.building_value,
            Feature::Stories => b.stories.map(f64::from),
            Feature::NeighborType => nf.and_then(|n| n.type_ratio),
            Feature::NeighborComplexity => nf.and_then(|n| n.complexity_ratio),
        }
    }
}

impl FromStr for Feature {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, DomainError> {
        [
            Feature::YearBuilt,
            Feature::BuildingArea,
            Feature::BuildingValue,
            Feature::Stories,
            Feature::NeighborType,
            Feature::NeighborComplexity,
        ]
        .into_iter()
        .find(|f| f.name() == s)
        .ok_or_else(|| DomainError::Invalid(format!("unknown feature {s:?}")))
    }
}

/// Raw row with `None` marking a missing value.
pub type RawRow = Vec<Option<f64>>;

pub fn feature_row(b: &BuildingRecord, nf: Option<&NeighborFeatures>, features: &[Feature]) -> RawRow {
    features.iter().map(|f| f.extract(b, nf)).collect()
}

/// Labeled rows for one target, built from classifier-sourced roofs.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    pub target: Target,
    pub features: Vec<Feature>,
    pub ids: Vec<BuildingId>,
    pub rows: Vec<RawRow>,
    pub labels: Vec<usize>,
    /// Column means over present values of all rows.
    pub means: Vec<f64>,
}

impl TrainingSet {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows with missing values replaced by the column means, plus missing flags.
    pub fn imputed(&self) -> (Vec<Vec<f64>>, Vec<Vec<bool>>) {
        let imp = MeanImputer { means: self.means.clone() };
        let dense = self.rows.iter().map(|r| imp.transform(r)).collect();
        let flags = self.rows.iter().map(|r| r.iter().map(Option::is_none).collect()).collect();
        (dense, flags)
    }

    pub fn subset(&self, indices: &[usize]) -> TrainingSet {
        let rows: Vec<RawRow> = indices.iter().map(|&i| self.rows[i].clone()).collect();
        let means = MeanImputer::fit(&rows, self.features.len()).means;
        TrainingSet {
            target: self.target,
            features: self.features.clone(),
            ids: indices.iter().map(|&i| self.ids[i].clone()).collect(),
            rows,
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            means,
        }
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let mut c = [0; 2];
        for &l in &self.labels {
            c[l] += 1;
        }
        c
    }
}

/// One row per classifier-labeled building. Neighbor ratios come from
/// `neighbor_features`; a building missing there has missing ratios.
pub fn build_training_set(
    inventory: &Inventory,
    neighbor_features: &BTreeMap<BuildingId, NeighborFeatures>,
    target: Target,
    features: &[Feature],
) -> Result<TrainingSet> {
    let mut ids = Vec::new();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for b in inventory.iter() {
        if b.roof_source != RoofSource::Classified {
            continue;
        }
        let Some(roof) = b.valid_roof() else { continue };
        ids.push(b.id.clone());
        rows.push(feature_row(b, neighbor_features.get(&b.id), features));
        labels.push(target.label_of(roof)?);
    }
    if rows.is_empty() {
        return Err(Error::Input("no classifier-labeled buildings to train on".into()));
    }
    let means = MeanImputer::fit(&rows, features.len()).means;
    Ok(TrainingSet { target, features: features.to_vec(), ids, rows, labels, means })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanImputer {
    pub means: Vec<f64>,
}

impl MeanImputer {
    /// Means over present values; a column with no values gets 0.
    pub fn fit(rows: &[RawRow], width: usize) -> MeanImputer {
        let mut sum = vec![0.0; width];
        let mut n = vec![0usize; width];
        for r in rows {
            for (k, v) in r.iter().enumerate() {
                if let Some(v) = v {
                    sum[k] += v;
                    n[k] += 1;
                }
            }
        }
        let means = sum.iter().zip(&n).map(|(s, &c)| if c == 0 { 0.0 } else { s / c as f64 }).collect();
        MeanImputer { means }
    }

    pub fn transform(&self, row: &[Option<f64>]) -> Vec<f64> {
        row.iter().zip(&self.means).map(|(v, m)| v.unwrap_or(*m)).collect()
    }
}

/// Zero-mean, unit-variance scaling. Zero-variance columns map to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    pub fn fit(rows: &[Vec<f64>], width: usize) -> Standardizer {
        let n = rows.len().max(1) as f64;
        let mut mean = vec![0.0; width];
        for r in rows {
            for k in 0..width {
                mean[k] += r[k];
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; width];
        for r in rows {
            for k in 0..width {
                var[k] += (r[k] - mean[k]).powi(2);
            }
        }
        let std = var.iter().map(|v| (v / n).sqrt()).collect();
        Standardizer { mean, std }
    }

    pub fn is_constant(&self, k: usize) -> bool {
        !(self.std[k] > 1e-12 * self.mean[k].abs().max(1.0))
    }

    pub fn transform(&self, row: &[f64]) -> Vec<f64> {
        (0..row.len())
            .map(|k| if self.is_constant(k) { 0.0 } else { (row[k] - self.mean[k]) / self.std[k] })
            .collect()
    }
}
