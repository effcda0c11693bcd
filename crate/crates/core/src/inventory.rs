//! Building records and the ordered inventory that every stage passes along.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::DomainError;
use crate::roof::RoofClass;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BuildingId(pub String);

impl fmt::Display for BuildingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for BuildingId {
    fn from(s: &str) -> Self {
        BuildingId(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TractId(pub String);

impl fmt::Display for TractId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for TractId {
    fn from(s: &str) -> Self {
        TractId(s.to_string())
    }
}

/// Geographic position in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatLon {
    pub lat: f64,
    pub lon: f64,
}

impl LatLon {
    pub fn new(lat: f64, lon: f64) -> Result<Self, DomainError> {
        if lat.is_finite() && lon.is_finite() && (-90.0..=90.0).contains(&lat) && (-180.0..=180.0).contains(&lon) {
            Ok(LatLon { lat, lon })
        } else {
            Err(DomainError::BadCoordinate { lat, lon })
        }
    }
}

/// Where a building's roof label came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RoofSource {
    Classified,
    Imputed,
    LabeledTruth,
    Absent,
}

impl RoofSource {
    pub fn code(self) -> &'static str {
        match self {
            RoofSource::Classified => "classified",
            RoofSource::Imputed => "imputed",
            RoofSource::LabeledTruth => "labeled-truth",
            RoofSource::Absent => "absent",
        }
    }
}

impl FromStr for RoofSource {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "classified" => Ok(RoofSource::Classified),
            "imputed" => Ok(RoofSource::Imputed),
            "labeled-truth" => Ok(RoofSource::LabeledTruth),
            "absent" => Ok(RoofSource::Absent),
            other => Err(DomainError::BadRoofSource(other.to_string())),
        }
    }
}

impl fmt::Display for RoofSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildingRecord {
    pub id: BuildingId,
    pub centroid: LatLon,
    pub year_built: i32,
    /// Square meters.
    pub building_area: f64,
    pub building_value: Option<f64>,
    pub stories: Option<u32>,
    pub tract_id: Option<TractId>,
    pub roof: Option<RoofClass>,
    pub roof_source: RoofSource,
}

impl BuildingRecord {
    /// A record with no roof information.
    pub fn new(id: impl Into<String>, centroid: LatLon, year_built: i32, building_area: f64) -> Self {
        BuildingRecord {
            id: BuildingId(id.into()),
            centroid,
            year_built,
            building_area,
            building_value: None,
            stories: None,
            tract_id: None,
            roof: None,
            roof_source: RoofSource::Absent,
        }
    }

    /// A roof that counts in distribution statistics: present and not unknown.
    pub fn valid_roof(&self) -> Option<RoofClass> {
        self.roof.filter(|r| r.is_valid())
    }

    pub fn set_roof(&mut self, roof: Option<RoofClass>, source: RoofSource) {
        match roof {
            Some(r) => {
                self.roof = Some(r);
                self.roof_source = source;
            }
            None => {
                self.roof = None;
                self.roof_source = RoofSource::Absent;
            }
        }
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        LatLon::new(self.centroid.lat, self.centroid.lon)?;
        if !(self.building_area > 0.0) || !self.building_area.is_finite() {
            return Err(DomainError::NonPositiveArea(self.building_area));
        }
        match (self.roof, self.roof_source) {
            (Some(_), RoofSource::Absent) => {
                Err(DomainError::Invalid(format!("building {}: roof present but source is absent", self.id)))
            }
            (None, RoofSource::Classified | RoofSource::LabeledTruth | RoofSource::Imputed) => Err(
                DomainError::Invalid(format!("building {}: source {} requires a roof", self.id, self.roof_source)),
            ),
            _ => Ok(()),
        }
    }
}

/// Row accounting for the document an inventory was parsed from.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    pub total_rows: usize,
    pub accepted_rows: usize,
    pub rejected_rows: usize,
}

/// Buildings keyed and iterated by id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Inventory {
    buildings: BTreeMap<BuildingId, BuildingRecord>,
    pub provenance: Provenance,
}

impl Inventory {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a record; returns it back if the id is already taken.
    pub fn insert(&mut self, record: BuildingRecord) -> Result<(), BuildingRecord> {
        if self.buildings.contains_key(&record.id) {
            return Err(record);
        }
        self.buildings.insert(record.id.clone(), record);
        Ok(())
    }

    pub fn get(&self, id: &BuildingId) -> Option<&BuildingRecord> {
        self.buildings.get(id)
    }

    pub fn get_mut(&mut self, id: &BuildingId) -> Option<&mut BuildingRecord> {
        self.buildings.get_mut(id)
    }

    pub fn contains(&self, id: &BuildingId) -> bool {
        self.buildings.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.buildings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buildings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BuildingRecord> {
        self.buildings.values()
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = &mut BuildingRecord> {
        self.buildings.values_mut()
    }

    /// Roofs of buildings whose label came from the image classifier.
    pub fn classified_roofs(&self) -> BTreeMap<BuildingId, RoofClass> {
        self.iter()
            .filter(|b| b.roof_source == RoofSource::Classified)
            .filter_map(|b| b.valid_roof().map(|r| (b.id.clone(), r)))
            .collect()
    }

    pub fn count_absent(&self) -> usize {
        self.iter().filter(|b| b.roof.is_none()).count()
    }
}

impl FromIterator<BuildingRecord> for Inventory {
    /// Later duplicates are dropped.
    fn from_iter<T: IntoIterator<Item = BuildingRecord>>(iter: T) -> Self {
        let mut inv = Inventory::new();
        for r in iter {
            let _ = inv.insert(r);
        }
        inv.provenance.total_rows = inv.len();
        inv.provenance.accepted_rows = inv.len();
        inv
    }
}
