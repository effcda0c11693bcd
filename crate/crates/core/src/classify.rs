//! External classifier predictions: file format, argmax, and merging into an inventory.

use std::collections::HashSet;
use std::io::{Read, Write};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::inventory::{BuildingId, Inventory, RoofSource};
use crate::roof::RoofClass;

pub const PREDICTION_COLUMNS: [&str; 8] =
    ["building_id", "p_g", "p_scg", "p_ccg", "p_h", "p_ch", "p_unknown", "model_id"];

pub const SCORE_SUM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRecord {
    pub building_id: BuildingId,
    /// Scores in canonical class order.
    pub scores: [f64; 6],
    pub model_id: String,
}

impl PredictionRecord {
    /// Highest-scoring class; ties go to the lowest canonical index.
    pub fn argmax(&self) -> RoofClass {
        let mut best = 0;
        for i in 1..6 {
            if self.scores[i] > self.scores[best] {
                best = i;
            }
        }
        RoofClass::ALL[best]
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.scores.iter().any(|s| !s.is_finite() || *s < 0.0) {
            return Err("scores must be finite and non-negative".into());
        }
        let sum: f64 = self.scores.iter().sum();
        if (sum - 1.0).abs() > SCORE_SUM_TOLERANCE {
            return Err(format!("scores sum to {sum}"));
        }
        Ok(())
    }

    /// Scores concentrated on `class`: `peak` there, the rest spread evenly.
    pub fn peaked(building_id: BuildingId, class: RoofClass, peak: f64, model_id: &str) -> Self {
        let rest = (1.0 - peak) / 5.0;
        let mut scores = [rest; 6];
        scores[class.index()] = peak;
        PredictionRecord { building_id, scores, model_id: model_id.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRejection {
    pub row: usize,
    pub reason: String,
}

pub fn parse_predictions<R: Read>(reader: R) -> Result<(Vec<PredictionRecord>, Vec<PredictionRejection>)> {
    let mut rdr = csv::Reader::from_reader(reader);
    let header = rdr.headers().map_err(Error::from_csv)?;
    let got: Vec<&str> = header.iter().map(str::trim).collect();
    if got != PREDICTION_COLUMNS {
        return Err(Error::Parse { line: 1, message: format!("expected header {}", PREDICTION_COLUMNS.join(",")) });
    }
    let mut preds = Vec::new();
    let mut rejected = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(Error::from_csv)?;
        let row = i + 1;
        let id = rec[0].trim();
        if id.is_empty() {
            rejected.push(PredictionRejection { row, reason: "missing building_id".into() });
            continue;
        }
        let mut scores = [0.0; 6];
        let mut bad = None;
        for (k, slot) in scores.iter_mut().enumerate() {
            match rec[k + 1].trim().parse::<f64>() {
                Ok(v) => *slot = v,
                Err(_) => {
                    bad = Some(format!("{} is not a number", PREDICTION_COLUMNS[k + 1]));
                    break;
                }
            }
        }
        let p = PredictionRecord { building_id: BuildingId(id.to_string()), scores, model_id: rec[7].trim().to_string() };
        match bad.map_or_else(|| p.validate(), Err) {
            Ok(()) => preds.push(p),
            Err(reason) => rejected.push(PredictionRejection { row, reason }),
        }
    }
    Ok((preds, rejected))
}

pub fn write_predictions<W: Write>(preds: &[PredictionRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(PREDICTION_COLUMNS).map_err(Error::from_csv)?;
    for p in preds {
        let mut row = vec![p.building_id.0.clone()];
        row.extend(p.scores.iter().map(|s| s.to_string()));
        row.push(p.model_id.clone());
        w.write_record(&row).map_err(Error::from_csv)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Discrepancy {
    /// Prediction names a building that is not in the inventory.
    UnknownBuilding(BuildingId),
    /// Second and later predictions for the same building are ignored.
    DuplicatePrediction(BuildingId),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ApplyReport {
    pub applied: usize,
    pub unknown: usize,
    /// Buildings left without any prediction.
    pub unpredicted: usize,
    pub discrepancies: Vec<Discrepancy>,
}

impl ApplyReport {
    /// Fraction of applied predictions whose argmax was the unknown class.
    pub fn unknown_rate(&self) -> f64 {
        if self.applied == 0 {
            0.0
        } else {
            self.unknown as f64 / self.applied as f64
        }
    }
}

/// Sets each predicted building's roof to the argmax class. Unknown argmax
/// leaves the roof absent so the building is routed to imputation.
pub fn apply_predictions(mut inventory: Inventory, preds: &[PredictionRecord]) -> (Inventory, ApplyReport) {
    let mut report = ApplyReport::default();
    let mut seen = HashSet::new();
    for p in preds {
        let Some(b) = inventory.get_mut(&p.building_id) else {
            report.discrepancies.push(Discrepancy::UnknownBuilding(p.building_id.clone()));
            continue;
        };
        if !seen.insert(p.building_id.clone()) {
            report.discrepancies.push(Discrepancy::DuplicatePrediction(p.building_id.clone()));
            continue;
        }
        report.applied += 1;
        match p.argmax() {
            RoofClass::Unknown => {
                report.unknown += 1;
                b.set_roof(None, RoofSource::Absent);
            }
            class => b.set_roof(Some(class), RoofSource::Classified),
        }
    }
    report.unpredicted = inventory.len() - seen.len();
    (inventory, report)
}

pub fn write_discrepancies<W: Write>(items: &[Discrepancy], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["building_id", "issue"]).map_err(Error::from_csv)?;
    for d in items {
        let (id, issue) = match d {
            Discrepancy::UnknownBuilding(id) => (id, "unknown-building"),
            Discrepancy::DuplicatePrediction(id) => (id, "duplicate-prediction"),
        };
        w.write_record([id.0.as_str(), issue]).map_err(Error::from_csv)?;
    }
    w.flush()?;
    Ok(())
}

/// Deterministic stand-in for the image classifier.
#[derive(Debug, Clone)]
pub enum StubClassifier {
    /// Class = first 8 bytes of sha256(building_id) mod 6.
    Hash,
    /// Predicts each building's recorded roof; absent roofs become unknown.
    Truth,
}

impl StubClassifier {
    pub const MODEL_ID_HASH: &'static str = "stub-hash";
    pub const MODEL_ID_TRUTH: &'static str = "stub-truth";

    pub fn class_for_id(id: &BuildingId) -> RoofClass {
        let digest = Sha256::digest(id.0.as_bytes());
        let mut head = [0u8; 8];
        head.copy_from_slice(&digest[..8]);
        RoofClass::ALL[(u64::from_be_bytes(head) % 6) as usize]
    }

    pub fn predict(&self, inventory: &Inventory) -> Vec<PredictionRecord> {
        inventory
            .iter()
            .map(|b| {
                let (class, model) = match self {
                    StubClassifier::Hash => (Self::class_for_id(&b.id), Self::MODEL_ID_HASH),
                    StubClassifier::Truth => (b.roof.unwrap_or(RoofClass::Unknown), Self::MODEL_ID_TRUTH),
                };
                PredictionRecord::peaked(b.id.clone(), class, 0.9, model)
            })
            .collect()
    }
}
