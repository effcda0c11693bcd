use proptest::prelude::*;
use roofinv::ingest::geometry::{polygon_contains, Point, Ring};
use roofinv::ingest::{
    assign_tracts, parse_buildings, parse_tracts, tracts_to_geojson, write_buildings, ParseOptions, RejectReason,
    TractPolygon,
};
use roofinv::{BuildingRecord, Inventory, LatLon, RoofClass, RoofSource, TractId};

fn parse(text: &str) -> (Inventory, Vec<roofinv::ingest::Rejection>) {
    parse_buildings(text.as_bytes(), "test.csv", &ParseOptions::default()).unwrap()
}

const HEADER: &str = "building_id,latitude,longitude,year_built,building_area,building_value,stories,tract_id\n";

#[test]
fn reject_reasons_are_reported_per_row() {
    let doc = format!(
        "{HEADER}a,91.0,0,2000,100,,,\nb,10,10,2000,0,,,\nc,10,10,1990,120,5e5,2,T1\nc,10,10,1990,120,,,\nd,,10,1990,120,,,\n"
    );
    let (inv, rej) = parse(&doc);
    assert_eq!(inv.len(), 1);
    let reasons: Vec<(usize, RejectReason)> = rej.iter().map(|r| (r.row, r.reason)).collect();
    assert_eq!(
        reasons,
        vec![
            (1, RejectReason::BadCoordinate),
            (2, RejectReason::NonPositiveArea),
            (4, RejectReason::DuplicateId),
            (5, RejectReason::MissingRequiredField),
        ]
    );
    let c = inv.iter().next().unwrap();
    assert_eq!(c.roof_source, RoofSource::Absent);
    assert_eq!(c.roof, None);
    assert_eq!(c.tract_id, Some(TractId::from("T1")));
    assert_eq!(inv.provenance.total_rows, 5);
}

#[test]
fn hole_ring_excludes_interior() {
    let outer: Ring = vec![[0.0, 0.0], [4.0, 0.0], [4.0, 4.0], [0.0, 4.0], [0.0, 0.0]];
    let hole: Ring = vec![[1.0, 1.0], [3.0, 1.0], [3.0, 3.0], [1.0, 3.0], [1.0, 1.0]];
    let rings = vec![outer, hole];
    assert!(polygon_contains(&rings, [0.5, 0.5]));
    assert!(!polygon_contains(&rings, [2.0, 2.0]));
    assert!(!polygon_contains(&rings, [5.0, 2.0]));
}

#[test]
fn unclosed_ring_is_rejected_with_index() {
    let doc = r#"{"type":"FeatureCollection","features":[
        {"type":"Feature","properties":{"tract_id":"A"},
         "geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,1],[0,0]]]}},
        {"type":"Feature","properties":{"tract_id":"B"},
         "geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,1]]]}}]}"#;
    let (tracts, rej) = parse_tracts(doc).unwrap();
    assert_eq!(tracts.len(), 1);
    assert_eq!(rej.len(), 1);
    assert_eq!(rej[0].feature_index, 1);
}

#[test]
fn source_tract_takes_precedence() {
    let square = TractPolygon {
        tract_id: TractId::from("SQ"),
        rings: vec![vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.0, 0.0]]],
    };
    let mut inv = Inventory::new();
    let mut a = BuildingRecord::new("a", LatLon::new(0.5, 0.5).unwrap(), 2000, 100.0);
    a.tract_id = Some(TractId::from("KEEP"));
    inv.insert(a).unwrap();
    inv.insert(BuildingRecord::new("b", LatLon::new(0.5, 0.5).unwrap(), 2000, 100.0)).unwrap();
    inv.insert(BuildingRecord::new("c", LatLon::new(0.5, 1.5).unwrap(), 2000, 100.0)).unwrap();
    let (inv, summary) = assign_tracts(inv, &[square]);
    let ids: Vec<Option<String>> = inv.iter().map(|b| b.tract_id.as_ref().map(|t| t.0.clone())).collect();
    assert_eq!(ids, vec![Some("KEEP".into()), Some("SQ".into()), None]);
    assert_eq!((summary.kept_from_source, summary.assigned, summary.unassigned), (1, 1, 1));
}

#[test]
fn tract_geojson_round_trips() {
    let doc = r#"{"type":"FeatureCollection","features":[
        {"type":"Feature","properties":{"tract_id":"M"},
         "geometry":{"type":"MultiPolygon","coordinates":[
            [[[0,0],[1,0],[1,1],[0,1],[0,0]]],
            [[[2,0],[3,0],[3,1],[2,1],[2,0]]]]}}]}"#;
    let (tracts, _) = parse_tracts(doc).unwrap();
    let again = serde_json::to_string(&tracts_to_geojson(&tracts)).unwrap();
    let (back, rej) = parse_tracts(&again).unwrap();
    assert!(rej.is_empty());
    assert_eq!(back, tracts);
}

fn roof_strategy() -> impl Strategy<Value = (Option<RoofClass>, RoofSource)> {
    prop_oneof![
        Just((None, RoofSource::Absent)),
        (0usize..6).prop_map(|i| (Some(RoofClass::ALL[i]), RoofSource::Classified)),
        (0usize..5).prop_map(|i| (Some(RoofClass::VALID[i]), RoofSource::Imputed)),
        (0usize..5).prop_map(|i| (Some(RoofClass::VALID[i]), RoofSource::LabeledTruth)),
    ]
}

prop_compose! {
    fn record()(
        n in 0u32..100_000,
        lat in -90.0f64..=90.0,
        lon in -180.0f64..=180.0,
        year in 1800i32..2030,
        area in 1e-3f64..1e5,
        value in proptest::option::of(0.0f64..1e8),
        stories in proptest::option::of(1u32..6),
        tract in proptest::option::of("[A-Z][0-9]{1,4}"),
        roof in roof_strategy(),
    ) -> BuildingRecord {
        let mut b = BuildingRecord::new(format!("id{n:06}"), LatLon::new(lat, lon).unwrap(), year, area);
        b.building_value = value;
        b.stories = stories;
        b.tract_id = tract.map(TractId);
        b.roof = roof.0;
        b.roof_source = roof.1;
        b
    }
}

/// Winding number of a closed ring around `p`; nonzero means inside.
fn winding_number(ring: &[Point], p: Point) -> i32 {
    let cross = |a: Point, b: Point| (b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1]);
    let mut w = 0;
    for s in ring.windows(2) {
        let (a, b) = (s[0], s[1]);
        if a[1] <= p[1] {
            if b[1] > p[1] && cross(a, b) > 0.0 {
                w += 1;
            }
        } else if b[1] <= p[1] && cross(a, b) < 0.0 {
            w -= 1;
        }
    }
    w
}

/// Convex polygon from sorted angles on an ellipse.
fn convex_ring(cx: f64, cy: f64, rx: f64, ry: f64, mut angles: Vec<f64>) -> Ring {
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    let mut ring: Ring = angles.iter().map(|t| [cx + rx * t.cos(), cy + ry * t.sin()]).collect();
    ring.push(ring[0]);
    ring
}

fn distance_to_ring(ring: &[Point], p: Point) -> f64 {
    ring.windows(2)
        .map(|s| {
            let (a, b) = (s[0], s[1]);
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            let t = (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
            ((a[0] + t * dx - p[0]).powi(2) + (a[1] + t * dy - p[1]).powi(2)).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn write_then_parse_is_identity(records in proptest::collection::vec(record(), 0..40)) {
        let mut inv = Inventory::new();
        for r in records {
            let _ = inv.insert(r);
        }
        let mut buf = Vec::new();
        write_buildings(&inv, &mut buf).unwrap();
        let (back, rej) = parse(std::str::from_utf8(&buf).unwrap());
        prop_assert!(rej.is_empty(), "{:?}", rej);
        let a: Vec<&BuildingRecord> = inv.iter().collect();
        let b: Vec<&BuildingRecord> = back.iter().collect();
        prop_assert_eq!(a, b);
        let mut again = Vec::new();
        write_buildings(&back, &mut again).unwrap();
        prop_assert_eq!(buf, again);
    }

    #[test]
    fn row_accounting_is_complete(
        rows in proptest::collection::vec(
            (0u8..6, -100.0f64..100.0, -1.0f64..500.0, proptest::bool::ANY),
            0..60,
        ),
    ) {
        let mut doc = String::from(HEADER);
        for (id, lat, area, year_ok) in &rows {
            let year = if *year_ok { "1999" } else { "" };
            doc.push_str(&format!("b{id},{lat},10.0,{year},{area},,,\n"));
        }
        let (inv, rej) = parse(&doc);
        prop_assert_eq!(inv.len() + rej.len(), rows.len());
        prop_assert_eq!(inv.provenance.accepted_rows + inv.provenance.rejected_rows, inv.provenance.total_rows);
        prop_assert!(inv.iter().all(|b| b.validate().is_ok()));
    }

    #[test]
    fn ray_casting_matches_winding_number(
        cx in -50.0f64..50.0,
        cy in -50.0f64..50.0,
        rx in 0.5f64..10.0,
        ry in 0.5f64..10.0,
        angles in proptest::collection::vec(0.0f64..std::f64::consts::TAU, 3..16),
        hole in proptest::option::of((0.1f64..0.6, proptest::collection::vec(0.0f64..std::f64::consts::TAU, 3..8))),
        probes in proptest::collection::vec((-1.5f64..1.5, -1.5f64..1.5), 1..40),
    ) {
        let outer = convex_ring(cx, cy, rx, ry, angles);
        prop_assume!(outer.len() >= 4);
        let mut rings = vec![outer];
        if let Some((scale, ha)) = hole {
            let h = convex_ring(cx, cy, rx * scale * 0.5, ry * scale * 0.5, ha);
            // A hole must sit inside the exterior; with a convex exterior it
            // suffices that every hole vertex does.
            let inside = h.iter().all(|&v| winding_number(&rings[0], v) != 0 && distance_to_ring(&rings[0], v) > 1e-9);
            if h.len() >= 4 && inside {
                rings.push(h);
            }
        }
        for (u, v) in probes {
            let p = [cx + u * rx, cy + v * ry];
            // Boundary points are inside by convention; the oracle is undefined there.
            if rings.iter().any(|r| distance_to_ring(r, p) < 1e-9) {
                continue;
            }
            let in_outer = winding_number(&rings[0], p) != 0;
            let in_hole = rings[1..].iter().any(|h| winding_number(h, p) != 0);
            prop_assert_eq!(polygon_contains(&rings, p), in_outer && !in_hole, "p={:?}", p);
        }
    }
}
