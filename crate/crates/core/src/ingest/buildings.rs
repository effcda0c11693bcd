//! Buildings table reader/writer.
//!
//! Header: `building_id,latitude,longitude,year_built,building_area,building_value,stories,tract_id`,
//! optionally followed by `roof,roof_source`. Empty cells are absent optional fields.

use std::collections::HashMap;
use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inventory::{BuildingRecord, Inventory, LatLon, Provenance, RoofSource, TractId};
use crate::roof::RoofClass;

pub const BASE_COLUMNS: [&str; 8] = [
    "building_id",
    "latitude",
    "longitude",
    "year_built",
    "building_area",
    "building_value",
    "stories",
    "tract_id",
];
pub const ROOF_COLUMNS: [&str; 2] = ["roof", "roof_source"];

pub const SQUARE_FEET_TO_METERS: f64 = 0.092903;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum AreaUnit {
    #[default]
    SquareMeters,
    SquareFeet,
}

impl AreaUnit {
    fn to_square_meters(self, area: f64) -> f64 {
        match self {
            AreaUnit::SquareMeters => area,
            AreaUnit::SquareFeet => area * SQUARE_FEET_TO_METERS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RejectReason {
    BadCoordinate,
    NonPositiveArea,
    DuplicateId,
    MissingRequiredField,
    /// A cell that is present but not parseable (non-numeric year, bad roof code).
    MalformedField,
}

impl RejectReason {
    pub fn code(self) -> &'static str {
        match self {
            RejectReason::BadCoordinate => "bad-coordinate",
            RejectReason::NonPositiveArea => "nonpositive-area",
            RejectReason::DuplicateId => "duplicate-id",
            RejectReason::MissingRequiredField => "missing-required-field",
            RejectReason::MalformedField => "malformed-field",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// One rejected data row. `row` is 1-based over data rows (the header is not counted).
#[derive(Debug, Clone, PartialEq)]
pub struct Rejection {
    pub row: usize,
    pub reason: RejectReason,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    pub area_unit: AreaUnit,
}

struct Columns {
    base: [usize; 8],
    roof: Option<(usize, usize)>,
}

impl Columns {
    fn from_header(header: &csv::StringRecord) -> Result<Columns> {
        let index: HashMap<&str, usize> = header.iter().enumerate().map(|(i, h)| (h.trim(), i)).collect();
        let mut base = [0usize; 8];
        for (slot, name) in base.iter_mut().zip(BASE_COLUMNS) {
            *slot = *index
                .get(name)
                .ok_or_else(|| Error::Parse { line: 1, message: format!("header is missing column {name:?}") })?;
        }
        let roof = match (index.get("roof"), index.get("roof_source")) {
            (Some(&r), Some(&s)) => Some((r, s)),
            (None, None) => None,
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    message: "columns roof and roof_source must appear together".into(),
                })
            }
        };
        Ok(Columns { base, roof })
    }
}

type RowResult<T> = std::result::Result<T, (RejectReason, String)>;

fn required<'a>(rec: &'a csv::StringRecord, idx: usize, name: &str) -> RowResult<&'a str> {
    match rec.get(idx).map(str::trim) {
        Some(s) if !s.is_empty() => Ok(s),
        _ => Err((RejectReason::MissingRequiredField, name.to_string())),
    }
}

fn optional(rec: &csv::StringRecord, idx: usize) -> Option<&str> {
    rec.get(idx).map(str::trim).filter(|s| !s.is_empty())
}

fn number<T: std::str::FromStr>(s: &str, name: &str, reason: RejectReason) -> RowResult<T> {
    s.parse::<T>().map_err(|_| (reason, format!("{name}={s:?}")))
}

fn parse_row(rec: &csv::StringRecord, cols: &Columns, opts: &ParseOptions) -> RowResult<BuildingRecord> {
    let [c_id, c_lat, c_lon, c_year, c_area, c_value, c_stories, c_tract] = cols.base;
    let id = required(rec, c_id, "building_id")?;
    let lat_s = required(rec, c_lat, "latitude")?;
    let lon_s = required(rec, c_lon, "longitude")?;
    let year_s = required(rec, c_year, "year_built")?;
    let area_s = required(rec, c_area, "building_area")?;

    let lat: f64 = number(lat_s, "latitude", RejectReason::BadCoordinate)?;
    let lon: f64 = number(lon_s, "longitude", RejectReason::BadCoordinate)?;
    let centroid = LatLon::new(lat, lon).map_err(|e| (RejectReason::BadCoordinate, e.to_string()))?;
    let year_built: i32 = number(year_s, "year_built", RejectReason::MalformedField)?;
    let raw_area: f64 = number(area_s, "building_area", RejectReason::NonPositiveArea)?;
    let building_area = opts.area_unit.to_square_meters(raw_area);
    if !(building_area > 0.0 && building_area.is_finite()) {
        return Err((RejectReason::NonPositiveArea, format!("building_area={area_s}")));
    }

    let building_value = optional(rec, c_value)
        .map(|s| number::<f64>(s, "building_value", RejectReason::MalformedField))
        .transpose()?;
    if building_value.is_some_and(|v| !(v >= 0.0 && v.is_finite())) {
        return Err((RejectReason::MalformedField, "building_value must be >= 0".into()));
    }
    let stories =
        optional(rec, c_stories).map(|s| number::<u32>(s, "stories", RejectReason::MalformedField)).transpose()?;
    if stories == Some(0) {
        return Err((RejectReason::MalformedField, "stories must be >= 1".into()));
    }
    let tract_id = optional(rec, c_tract).map(|s| TractId(s.to_string()));

    let mut record = BuildingRecord::new(id, centroid, year_built, building_area);
    record.building_value = building_value;
    record.stories = stories;
    record.tract_id = tract_id;

    if let Some((c_roof, c_source)) = cols.roof {
        let roof = optional(rec, c_roof)
            .map(|s| s.parse::<RoofClass>())
            .transpose()
            .map_err(|e| (RejectReason::MalformedField, e.to_string()))?;
        let source = match optional(rec, c_source) {
            Some(s) => s.parse::<RoofSource>().map_err(|e| (RejectReason::MalformedField, e.to_string()))?,
            None if roof.is_some() => RoofSource::LabeledTruth,
            None => RoofSource::Absent,
        };
        record.roof = roof;
        record.roof_source = source;
        record.validate().map_err(|e| (RejectReason::MalformedField, e.to_string()))?;
    }
    Ok(record)
}

/// Reads a buildings table. Row-level problems are collected as rejections;
/// only an unreadable document (bad header, ragged rows, invalid UTF-8) is fatal.
pub fn parse_buildings<R: Read>(reader: R, source: &str, opts: &ParseOptions) -> Result<(Inventory, Vec<Rejection>)> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = rdr.headers().map_err(Error::from_csv)?.clone();
    let cols = Columns::from_header(&header)?;

    let mut inventory = Inventory::new();
    let mut rejections = Vec::new();
    let mut total = 0usize;
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(Error::from_csv)?;
        total += 1;
        let row = i + 1;
        match parse_row(&rec, &cols, opts) {
            Ok(record) => {
                if let Err(dup) = inventory.insert(record) {
                    rejections.push(Rejection {
                        row,
                        reason: RejectReason::DuplicateId,
                        detail: dup.id.to_string(),
                    });
                }
            }
            Err((reason, detail)) => rejections.push(Rejection { row, reason, detail }),
        }
    }
    inventory.provenance = Provenance {
        source: source.to_string(),
        total_rows: total,
        accepted_rows: inventory.len(),
        rejected_rows: rejections.len(),
    };
    Ok((inventory, rejections))
}

fn opt_to_string<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

/// Writes the full schema including `roof,roof_source`. Floats use the
/// shortest representation that parses back to the same value.
pub fn write_buildings<W: Write>(inventory: &Inventory, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let header: Vec<&str> = BASE_COLUMNS.iter().chain(ROOF_COLUMNS.iter()).copied().collect();
    w.write_record(&header).map_err(Error::from_csv)?;
    for b in inventory.iter() {
        w.write_record([
            b.id.0.clone(),
            b.centroid.lat.to_string(),
            b.centroid.lon.to_string(),
            b.year_built.to_string(),
            b.building_area.to_string(),
            opt_to_string(&b.building_value),
            opt_to_string(&b.stories),
            opt_to_string(&b.tract_id),
            opt_to_string(&b.roof),
            b.roof_source.to_string(),
        ])
        .map_err(Error::from_csv)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_rejections<W: Write>(rejections: &[Rejection], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["row", "reason"]).map_err(Error::from_csv)?;
    for r in rejections {
        w.write_record([r.row.to_string(), r.reason.to_string()]).map_err(Error::from_csv)?;
    }
    w.flush()?;
    Ok(())
}
