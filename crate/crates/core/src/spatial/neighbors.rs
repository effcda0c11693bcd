//! Neighborhood roof statistics and the dominant-type baseline predictor.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::index::NeighborIndex;
use crate::error::{DomainError, Error, Result};
use crate::inventory::BuildingId;
use crate::roof::{Complexity, RoofClass, RoofFamily, RoofFeatures};

pub const DEFAULT_RADIUS_M: f64 = 80.0;
pub const DEFAULT_SWEEP_RADII_M: [f64; 4] = [50.0, 80.0, 100.0, 150.0];

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NeighborFeatures {
    /// Fraction of labeled neighbors with a gable-family roof.
    pub type_ratio: Option<f64>,
    /// Fraction of labeled neighbors with a complex roof.
    pub complexity_ratio: Option<f64>,
    /// Labeled neighbors only; unlabeled ones do not count.
    pub neighbor_count: usize,
}

impl NeighborFeatures {
    fn from_counts(labeled: usize, gable: usize, complex: usize) -> Self {
        if labeled == 0 {
            return NeighborFeatures::default();
        }
        let n = labeled as f64;
        NeighborFeatures {
            type_ratio: Some(gable as f64 / n),
            complexity_ratio: Some(complex as f64 / n),
            neighbor_count: labeled,
        }
    }
}

/// Label lookup aligned with index positions.
fn label_table(idx: &NeighborIndex, labels: &BTreeMap<BuildingId, RoofClass>) -> Vec<Option<RoofFeatures>> {
    idx.ids().iter().map(|id| labels.get(id).and_then(|c| c.to_features().ok())).collect()
}

fn count(neigh: impl Iterator<Item = usize>, table: &[Option<RoofFeatures>]) -> NeighborFeatures {
    let (mut n, mut g, mut c) = (0, 0, 0);
    for j in neigh {
        if let Some(f) = table[j] {
            n += 1;
            g += usize::from(f.family == RoofFamily::Gable);
            c += usize::from(f.complexity == Complexity::Complex);
        }
    }
    NeighborFeatures::from_counts(n, g, c)
}

/// Ratios over the labeled neighbors of `id` within `radius`.
pub fn neighbor_features(
    idx: &NeighborIndex,
    labels: &BTreeMap<BuildingId, RoofClass>,
    id: &BuildingId,
    radius: f64,
) -> Result<NeighborFeatures, DomainError> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(DomainError::BadRadius(radius));
    }
    let i = idx.position(id).ok_or_else(|| DomainError::NotIndexed(id.to_string()))?;
    let table = label_table(idx, labels);
    Ok(count(idx.within_of_index(i, radius).into_iter().map(|(j, _)| j), &table))
}

/// Features for every indexed building, keyed by id.
pub fn all_neighbor_features(
    idx: &NeighborIndex,
    labels: &BTreeMap<BuildingId, RoofClass>,
    radius: f64,
) -> Result<BTreeMap<BuildingId, NeighborFeatures>, DomainError> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(DomainError::BadRadius(radius));
    }
    let table = label_table(idx, labels);
    let feats: Vec<NeighborFeatures> = (0..idx.len())
        .into_par_iter()
        .map(|i| count(idx.within_of_index(i, radius).into_iter().map(|(j, _)| j), &table))
        .collect();
    Ok(idx.ids().iter().cloned().zip(feats).collect())
}

/// What to predict when exactly half the labeled neighbors are hip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TieBreak {
    #[default]
    Gable,
    Hip,
}

/// Hip iff strictly more than half of the labeled neighbors are hip;
/// `None` (abstain) when there are no labeled neighbors.
pub fn dominant_type_predict(features: &NeighborFeatures, tie: TieBreak) -> Option<RoofFamily> {
    let gable = features.type_ratio?;
    let hip = 1.0 - gable;
    Some(if hip > 0.5 {
        RoofFamily::Hip
    } else if hip < 0.5 {
        RoofFamily::Gable
    } else {
        match tie {
            TieBreak::Gable => RoofFamily::Gable,
            TieBreak::Hip => RoofFamily::Hip,
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub radius_m: f64,
    /// Over buildings with at least one labeled neighbor; `None` if there are none.
    pub accuracy: Option<f64>,
    /// Labeled buildings with no labeled neighbor in range.
    pub missing_fraction: f64,
    pub n_evaluated: usize,
    pub n_labeled: usize,
}

/// Evaluates the dominant-type predictor against each labeled building's
/// own label for each radius. Abstentions are excluded from accuracy and
/// counted in the missing fraction.
pub fn radius_sweep(
    idx: &NeighborIndex,
    labels: &BTreeMap<BuildingId, RoofClass>,
    radii: &[f64],
    tie: TieBreak,
) -> Result<Vec<SweepRow>, DomainError> {
    if radii.is_empty() {
        return Err(DomainError::Invalid("radius sweep needs at least one radius".into()));
    }
    if let Some(&r) = radii.iter().find(|r| !(**r > 0.0) || !r.is_finite()) {
        return Err(DomainError::BadRadius(r));
    }
    let table = label_table(idx, labels);
    let max_r = radii.iter().copied().fold(0.0, f64::max);
    let labeled: Vec<usize> = (0..idx.len()).filter(|&i| table[i].is_some()).collect();

    // For each labeled building: (truth family, labeled neighbor distances with family).
    let per_building: Vec<(RoofFamily, Vec<(f64, RoofFamily)>)> = labeled
        .par_iter()
        .map(|&i| {
            let truth = table[i].expect("labeled").family;
            let neigh = idx
                .within_of_index(i, max_r)
                .into_iter()
                .filter_map(|(j, d)| table[j].map(|f| (d, f.family)))
                .collect();
            (truth, neigh)
        })
        .collect();

    Ok(radii
        .iter()
        .map(|&r| {
            let (mut evaluated, mut correct, mut missing) = (0usize, 0usize, 0usize);
            for (truth, neigh) in &per_building {
                let (mut n, mut g) = (0, 0);
                for &(d, fam) in neigh {
                    if d <= r {
                        n += 1;
                        g += usize::from(fam == RoofFamily::Gable);
                    }
                }
                let feats = NeighborFeatures::from_counts(n, g, 0);
                match dominant_type_predict(&feats, tie) {
                    Some(pred) => {
                        evaluated += 1;
                        correct += usize::from(pred == *truth);
                    }
                    None => missing += 1,
                }
            }
            let n_labeled = per_building.len();
            SweepRow {
                radius_m: r,
                accuracy: (evaluated > 0).then(|| correct as f64 / evaluated as f64),
                missing_fraction: if n_labeled == 0 { 0.0 } else { missing as f64 / n_labeled as f64 },
                n_evaluated: evaluated,
                n_labeled,
            }
        })
        .collect())
}

/// `radius_m,accuracy,missing_fraction,n_evaluated`.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["radius_m", "accuracy", "missing_fraction", "n_evaluated"]).map_err(Error::from_csv)?;
    for r in rows {
        w.write_record([
            r.radius_m.to_string(),
            r.accuracy.map(|a| format!("{a:.6}")).unwrap_or_default(),
            format!("{:.6}", r.missing_fraction),
            r.n_evaluated.to_string(),
        ])
        .map_err(Error::from_csv)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inventory::LatLon;
    use crate::spatial::index::destination;

    fn star(neighbor_roofs: &[Option<RoofClass>]) -> (NeighborIndex, BTreeMap<BuildingId, RoofClass>) {
        let center = LatLon::new(34.2, -77.9).unwrap();
        let mut pts = vec![(BuildingId::from("c"), center)];
        let mut labels = BTreeMap::new();
        for (k, roof) in neighbor_roofs.iter().enumerate() {
            let id = BuildingId(format!("n{k}"));
            pts.push((id.clone(), destination(center, k as f64 * 360.0 / neighbor_roofs.len() as f64, 30.0)));
            if let Some(r) = roof {
                labels.insert(id, *r);
            }
        }
        (NeighborIndex::new(pts), labels)
    }

    #[test]
    fn mixed_neighbors() {
        use RoofClass::*;
        let (idx, labels) = star(&[Some(SimpleGable), Some(CrossHip), Some(SimpleHip)]);
        let f = neighbor_features(&idx, &labels, &"c".into(), 80.0).unwrap();
        assert_eq!(f.neighbor_count, 3);
        assert!((f.type_ratio.unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((f.complexity_ratio.unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn homogeneous_scg_neighbors() {
        let (idx, labels) = star(&[Some(RoofClass::SimpleCrossGable); 5]);
        let f = neighbor_features(&idx, &labels, &"c".into(), 80.0).unwrap();
        assert_eq!((f.type_ratio, f.complexity_ratio), (Some(1.0), Some(1.0)));
    }

    #[test]
    fn unlabeled_neighbors_are_ignored() {
        let (idx, labels) = star(&[None, None, None]);
        let f = neighbor_features(&idx, &labels, &"c".into(), 80.0).unwrap();
        assert_eq!(f, NeighborFeatures { type_ratio: None, complexity_ratio: None, neighbor_count: 0 });

        let (idx, labels) = star(&[Some(RoofClass::SimpleHip), None]);
        let f = neighbor_features(&idx, &labels, &"c".into(), 80.0).unwrap();
        assert_eq!(f.type_ratio, Some(0.0));
        assert_eq!(f.neighbor_count, 1);
    }

    #[test]
    fn majority_rule() {
        let with = |r: f64| NeighborFeatures { type_ratio: Some(r), complexity_ratio: Some(0.0), neighbor_count: 10 };
        assert_eq!(dominant_type_predict(&with(0.4), TieBreak::Gable), Some(RoofFamily::Hip));
        assert_eq!(dominant_type_predict(&with(0.5), TieBreak::Gable), Some(RoofFamily::Gable));
        assert_eq!(dominant_type_predict(&with(0.5), TieBreak::Hip), Some(RoofFamily::Hip));
        assert_eq!(dominant_type_predict(&with(0.6), TieBreak::Hip), Some(RoofFamily::Gable));
        assert_eq!(dominant_type_predict(&NeighborFeatures::default(), TieBreak::Gable), None);
    }

    #[test]
    fn homogeneous_cluster_sweep() {
        let (idx, mut labels) = star(&[Some(RoofClass::CrossHip); 6]);
        labels.insert("c".into(), RoofClass::SimpleHip);
        let rows = radius_sweep(&idx, &labels, &[80.0, 150.0], TieBreak::Gable).unwrap();
        for r in rows {
            assert_eq!(r.accuracy, Some(1.0));
            assert_eq!(r.missing_fraction, 0.0);
            assert_eq!(r.n_evaluated, 7);
        }
        assert!(radius_sweep(&idx, &labels, &[], TieBreak::Gable).is_err());
    }
}
