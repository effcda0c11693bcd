//! Filling roof-absent buildings from the two binary models.

use std::collections::BTreeMap;

use super::dataset::{feature_row, Target};
use super::model::TrainedModel;
use crate::error::{Error, Result};
use crate::inventory::{BuildingId, Inventory, RoofSource};
use crate::roof::{Complexity, RoofFamily, RoofFeatures};
use crate::spatial::NeighborFeatures;

/// Every roof-absent building gets the class implied by the predicted
/// (type, complexity) pair with source `imputed`. Buildings that already
/// have a roof are left alone. Returns the number imputed.
pub fn impute_missing(
    mut inventory: Inventory,
    neighbor_features: &BTreeMap<BuildingId, NeighborFeatures>,
    type_model: &TrainedModel,
    complexity_model: &TrainedModel,
) -> Result<(Inventory, usize)> {
    if type_model.target != Target::Type || complexity_model.target != Target::Complexity {
        return Err(Error::Input(format!(
            "expected type and complexity models, got {} and {}",
            type_model.target, complexity_model.target
        )));
    }
    let mut imputed = 0;
    for b in inventory.iter_mut() {
        if b.valid_roof().is_some() {
            continue;
        }
        let nf = neighbor_features.get(&b.id);
        let family = match type_model.predict(&feature_row(b, nf, &type_model.features)) {
            1 => RoofFamily::Hip,
            _ => RoofFamily::Gable,
        };
        let complexity = match complexity_model.predict(&feature_row(b, nf, &complexity_model.features)) {
            1 => Complexity::Complex,
            _ => Complexity::Simple,
        };
        b.set_roof(Some(RoofFeatures::new(family, complexity).to_class()), RoofSource::Imputed);
        imputed += 1;
    }
    Ok((inventory, imputed))
}
