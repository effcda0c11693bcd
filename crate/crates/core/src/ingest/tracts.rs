//! Census-tract polygons from GeoJSON and centroid-to-tract assignment.

use serde_json::{json, Map, Value};

use super::geometry::{self, BBox, Point, Ring};
use crate::error::{Error, Result};
use crate::inventory::{Inventory, TractId};

#[derive(Debug, Clone, PartialEq)]
pub struct TractPolygon {
    pub tract_id: TractId,
    /// First ring is the exterior, the rest are holes. Points are `[lon, lat]`.
    pub rings: Vec<Ring>,
}

impl TractPolygon {
    pub fn contains(&self, lat: f64, lon: f64) -> bool {
        geometry::polygon_contains(&self.rings, [lon, lat])
    }

    pub fn bbox(&self) -> BBox {
        BBox::of(&self.rings[0])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRejection {
    /// Zero-based index into the collection's `features` array.
    pub feature_index: usize,
    pub reason: String,
}

fn parse_ring(v: &Value) -> std::result::Result<Ring, String> {
    let pts = v.as_array().ok_or("ring is not an array")?;
    let mut ring = Vec::with_capacity(pts.len());
    for p in pts {
        let c = p.as_array().ok_or("position is not an array")?;
        let (x, y) = match (c.first().and_then(Value::as_f64), c.get(1).and_then(Value::as_f64)) {
            (Some(x), Some(y)) if x.is_finite() && y.is_finite() => (x, y),
            _ => return Err("position needs two finite numbers".into()),
        };
        ring.push([x, y]);
    }
    Ok(ring)
}

fn parse_polygon(v: &Value) -> std::result::Result<Vec<Ring>, String> {
    let rings = v.as_array().ok_or("polygon coordinates are not an array")?;
    if rings.is_empty() {
        return Err("polygon has no rings".into());
    }
    let rings: Vec<Ring> = rings.iter().map(parse_ring).collect::<std::result::Result<_, _>>()?;
    for (i, r) in rings.iter().enumerate() {
        if !geometry::is_closed(r) {
            return Err(format!("ring {i} is not closed or has fewer than 4 points"));
        }
    }
    if !geometry::is_simple(&rings[0]) {
        return Err("exterior ring self-intersects".into());
    }
    Ok(rings)
}

fn tract_id_of(feature: &Value) -> Option<TractId> {
    match feature.get("properties")?.get("tract_id")? {
        Value::String(s) if !s.is_empty() => Some(TractId(s.clone())),
        Value::Number(n) => Some(TractId(n.to_string())),
        _ => None,
    }
}

fn parse_feature(feature: &Value) -> std::result::Result<Vec<TractPolygon>, String> {
    let tract_id = tract_id_of(feature).ok_or("feature has no tract_id property")?;
    let geom = feature.get("geometry").ok_or("feature has no geometry")?;
    let coords = geom.get("coordinates").ok_or("geometry has no coordinates")?;
    let polygons = match geom.get("type").and_then(Value::as_str) {
        Some("Polygon") => vec![parse_polygon(coords)?],
        Some("MultiPolygon") => coords
            .as_array()
            .ok_or("multipolygon coordinates are not an array")?
            .iter()
            .map(parse_polygon)
            .collect::<std::result::Result<Vec<_>, _>>()?,
        Some(other) => return Err(format!("unsupported geometry type {other}")),
        None => return Err("geometry has no type".into()),
    };
    Ok(polygons.into_iter().map(|rings| TractPolygon { tract_id: tract_id.clone(), rings }).collect())
}

/// Parses a FeatureCollection of polygons and multipolygons. A multipolygon
/// becomes one entry per member polygon; invalid features are rejected whole.
pub fn parse_tracts(text: &str) -> Result<(Vec<TractPolygon>, Vec<FeatureRejection>)> {
    let doc: Value = serde_json::from_str(text)?;
    if doc.get("type").and_then(Value::as_str) != Some("FeatureCollection") {
        return Err(Error::Input("tract document is not a GeoJSON FeatureCollection".into()));
    }
    let features = doc
        .get("features")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Input("FeatureCollection has no features array".into()))?;
    let mut tracts = Vec::new();
    let mut rejected = Vec::new();
    for (feature_index, f) in features.iter().enumerate() {
        match parse_feature(f) {
            Ok(mut polys) => tracts.append(&mut polys),
            Err(reason) => rejected.push(FeatureRejection { feature_index, reason }),
        }
    }
    Ok((tracts, rejected))
}

fn rings_json(rings: &[Ring]) -> Value {
    Value::Array(rings.iter().map(|r| Value::Array(r.iter().map(|p| json!([p[0], p[1]])).collect())).collect())
}

/// Geometry object for all polygons sharing one tract id.
pub fn tract_geometry(polygons: &[&TractPolygon]) -> Value {
    if polygons.len() == 1 {
        json!({ "type": "Polygon", "coordinates": rings_json(&polygons[0].rings) })
    } else {
        let coords: Vec<Value> = polygons.iter().map(|p| rings_json(&p.rings)).collect();
        json!({ "type": "MultiPolygon", "coordinates": coords })
    }
}

/// Serializes tracts as a FeatureCollection, one Polygon feature per entry.
pub fn tracts_to_geojson(tracts: &[TractPolygon]) -> Value {
    let features: Vec<Value> = tracts
        .iter()
        .map(|t| {
            let mut props = Map::new();
            props.insert("tract_id".into(), Value::String(t.tract_id.0.clone()));
            json!({ "type": "Feature", "properties": props, "geometry": tract_geometry(&[t]) })
        })
        .collect();
    json!({ "type": "FeatureCollection", "features": features })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AssignmentSummary {
    pub kept_from_source: usize,
    pub assigned: usize,
    pub unassigned: usize,
}

/// Sets each building's tract to the first polygon (ordered by tract id, then
/// input order) containing its centroid. Tract ids already present on a
/// record are kept.
pub fn assign_tracts(mut inventory: Inventory, tracts: &[TractPolygon]) -> (Inventory, AssignmentSummary) {
    let mut order: Vec<usize> = (0..tracts.len()).collect();
    order.sort_by(|&a, &b| tracts[a].tract_id.cmp(&tracts[b].tract_id).then(a.cmp(&b)));
    let boxes: Vec<BBox> = tracts.iter().map(TractPolygon::bbox).collect();

    let mut summary = AssignmentSummary::default();
    for b in inventory.iter_mut() {
        if b.tract_id.is_some() {
            summary.kept_from_source += 1;
            continue;
        }
        let p: Point = [b.centroid.lon, b.centroid.lat];
        let hit = order.iter().copied().find(|&i| boxes[i].contains(p) && geometry::polygon_contains(&tracts[i].rings, p));
        match hit {
            Some(i) => {
                b.tract_id = Some(tracts[i].tract_id.clone());
                summary.assigned += 1;
            }
            None => summary.unassigned += 1,
        }
    }
    (inventory, summary)
}
