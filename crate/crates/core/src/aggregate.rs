//! City- and tract-level roof distributions and the tract map export.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::ingest::{tract_geometry, TractPolygon};
use crate::inventory::{Inventory, RoofSource, TractId};
use crate::roof::RoofClass;

/// Tracts with fewer buildings are left off the map.
pub const MIN_MAPPED_BUILDINGS: usize = 10;
pub const UNASSIGNED_TRACT: &str = "unassigned";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SourceFilter {
    Classified,
    ClassifiedAndImputed,
    /// Any building with a valid roof, labeled truth included.
    AnyValid,
}

impl SourceFilter {
    pub fn accepts(self, source: RoofSource) -> bool {
        match self {
            SourceFilter::Classified => source == RoofSource::Classified,
            SourceFilter::ClassifiedAndImputed => matches!(source, RoofSource::Classified | RoofSource::Imputed),
            SourceFilter::AnyValid => source != RoofSource::Absent,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CityDistribution {
    pub filter: SourceFilter,
    pub n_buildings: usize,
    /// Buildings whose roof passes the filter; the proportion denominator.
    pub n_counted: usize,
    pub n_absent: usize,
    /// Counts over the five valid classes, canonical order.
    pub counts: [usize; 5],
    pub proportions: [f64; 5],
    /// Roof-absent buildings over all buildings.
    pub absent_share: f64,
}

pub fn city_distribution(inventory: &Inventory, filter: SourceFilter) -> CityDistribution {
    let mut counts = [0usize; 5];
    let mut n_absent = 0;
    for b in inventory.iter() {
        match b.valid_roof() {
            Some(r) if filter.accepts(b.roof_source) => counts[r.index()] += 1,
            Some(_) => {}
            None => n_absent += 1,
        }
    }
    let n_counted: usize = counts.iter().sum();
    let n_buildings = inventory.len();
    let share = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    CityDistribution {
        filter,
        n_buildings,
        n_counted,
        n_absent,
        counts,
        proportions: counts.map(|c| share(c, n_counted)),
        absent_share: share(n_absent, n_buildings),
    }
}

/// `class,count,proportion` plus a trailing `absent` row.
pub fn write_distribution_csv<W: Write>(d: &CityDistribution, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["class", "count", "proportion"]).map_err(Error::from_csv)?;
    for (c, class) in RoofClass::VALID.iter().enumerate() {
        w.write_record([class.code().to_string(), d.counts[c].to_string(), format!("{:.6}", d.proportions[c])])
            .map_err(Error::from_csv)?;
    }
    w.write_record(["absent".to_string(), d.n_absent.to_string(), format!("{:.6}", d.absent_share)])
        .map_err(Error::from_csv)?;
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TractSummary {
    pub tract_id: TractId,
    pub n_buildings: usize,
    pub n_valid: usize,
    /// g, scg, ccg, h, ch.
    pub counts: [usize; 5],
    pub gable_share: f64,
    pub complex_share: f64,
    /// Buildings without a valid roof over all buildings in the tract.
    pub unknown_share: f64,
    pub included: bool,
}

impl TractSummary {
    fn from_counts(tract_id: TractId, n_buildings: usize, counts: [usize; 5]) -> Self {
        let n_valid: usize = counts.iter().sum();
        let mut gable = 0;
        let mut complex = 0;
        for (k, class) in RoofClass::VALID.iter().enumerate() {
            if class.is_gable().unwrap_or(false) {
                gable += counts[k];
            }
            if class.is_complex().unwrap_or(false) {
                complex += counts[k];
            }
        }
        let share = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        TractSummary {
            tract_id,
            n_buildings,
            n_valid,
            counts,
            gable_share: share(gable, n_valid),
            complex_share: share(complex, n_valid),
            unknown_share: share(n_buildings - n_valid, n_buildings),
            included: n_buildings >= MIN_MAPPED_BUILDINGS,
        }
    }

    pub fn is_unassigned(&self) -> bool {
        self.tract_id.0 == UNASSIGNED_TRACT
    }
}

/// One summary per tract in id order, then an `unassigned` summary if any
/// building has no tract.
pub fn tract_summaries(inventory: &Inventory) -> Vec<TractSummary> {
    let mut by_tract: BTreeMap<&TractId, (usize, [usize; 5])> = BTreeMap::new();
    let mut unassigned: Option<(usize, [usize; 5])> = None;
    for b in inventory.iter() {
        let slot = match &b.tract_id {
            Some(t) => by_tract.entry(t).or_default(),
            None => unassigned.get_or_insert_with(Default::default),
        };
        slot.0 += 1;
        if let Some(r) = b.valid_roof() {
            slot.1[r.index()] += 1;
        }
    }
    let mut out: Vec<TractSummary> =
        by_tract.into_iter().map(|(t, (n, counts))| TractSummary::from_counts(t.clone(), n, counts)).collect();
    if let Some((n, counts)) = unassigned {
        out.push(TractSummary::from_counts(TractId(UNASSIGNED_TRACT.into()), n, counts));
    }
    out
}

pub const TRACT_COLUMNS: [&str; 12] = [
    "tract_id",
    "n_buildings",
    "n_valid",
    "g",
    "scg",
    "ccg",
    "h",
    "ch",
    "gable_share",
    "complex_share",
    "unknown_share",
    "included",
];

pub fn write_tract_csv<W: Write>(summaries: &[TractSummary], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(TRACT_COLUMNS).map_err(Error::from_csv)?;
    for s in summaries {
        let mut rec = vec![s.tract_id.0.clone(), s.n_buildings.to_string(), s.n_valid.to_string()];
        rec.extend(s.counts.iter().map(usize::to_string));
        rec.push(format!("{:.6}", s.gable_share));
        rec.push(format!("{:.6}", s.complex_share));
        rec.push(format!("{:.6}", s.unknown_share));
        rec.push(s.included.to_string());
        w.write_record(&rec).map_err(Error::from_csv)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MapExport {
    pub document: Value,
    pub written: Vec<TractId>,
    pub excluded: Vec<TractId>,
    pub missing_polygons: Vec<TractId>,
}

/// FeatureCollection of included tracts with their summary properties.
/// Tracts without a polygon are logged and skipped.
pub fn export_map(summaries: &[TractSummary], tracts: &[TractPolygon]) -> MapExport {
    let mut polys: BTreeMap<&TractId, Vec<&TractPolygon>> = BTreeMap::new();
    for t in tracts {
        polys.entry(&t.tract_id).or_default().push(t);
    }
    let mut out = MapExport::default();
    let mut features = Vec::new();
    for s in summaries {
        if s.is_unassigned() {
            continue;
        }
        if !s.included {
            out.excluded.push(s.tract_id.clone());
            continue;
        }
        let Some(p) = polys.get(&s.tract_id) else {
            log::warn!("tract {} has no polygon; left off the map", s.tract_id);
            out.missing_polygons.push(s.tract_id.clone());
            continue;
        };
        let mut props = Map::new();
        props.insert("tract_id".into(), json!(s.tract_id.0));
        props.insert("n_buildings".into(), json!(s.n_buildings));
        props.insert("n_valid".into(), json!(s.n_valid));
        for (k, class) in RoofClass::VALID.iter().enumerate() {
            props.insert(class.code().into(), json!(s.counts[k]));
        }
        props.insert("gable_share".into(), json!(s.gable_share));
        props.insert("complex_share".into(), json!(s.complex_share));
        props.insert("unknown_share".into(), json!(s.unknown_share));
        features.push(json!({ "type": "Feature", "properties": props, "geometry": tract_geometry(p) }));
        out.written.push(s.tract_id.clone());
    }
    out.document = json!({ "type": "FeatureCollection", "features": features });
    out
}
