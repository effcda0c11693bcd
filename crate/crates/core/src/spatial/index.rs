//! Exact radius queries over geographic points using a uniform degree grid.
//!
//! A query first bounds the search to the latitude band and longitude span
//! that a spherical cap of the given radius can reach, gathers candidates
//! from the grid cells overlapping that box, then filters by haversine
//! distance. The box is conservative, so results equal a brute-force scan.

use std::collections::HashMap;

use crate::error::DomainError;
use crate::inventory::{BuildingId, Inventory, LatLon};

pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// Great-circle distance in meters on a sphere of radius 6,371 km.
pub fn haversine(a: LatLon, b: LatLon) -> f64 {
    let (p1, p2) = (a.lat.to_radians(), b.lat.to_radians());
    let dp = p2 - p1;
    let dl = (b.lon - a.lon).to_radians();
    let h = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * h.sqrt().min(1.0).asin()
}

const DEFAULT_CELL_DEG: f64 = 0.002;
// Relative and absolute slack on the search box, in degrees.
const BOX_SLACK_REL: f64 = 1e-9;
const BOX_SLACK_ABS: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct NeighborIndex {
    ids: Vec<BuildingId>,
    points: Vec<LatLon>,
    by_id: HashMap<BuildingId, usize>,
    cell_deg: f64,
    cells: HashMap<(i64, i64), Vec<usize>>,
}

impl NeighborIndex {
    pub fn new(points: impl IntoIterator<Item = (BuildingId, LatLon)>) -> Self {
        Self::with_cell_size(points, DEFAULT_CELL_DEG)
    }

    pub fn with_cell_size(points: impl IntoIterator<Item = (BuildingId, LatLon)>, cell_deg: f64) -> Self {
        assert!(cell_deg > 0.0, "cell size must be positive");
        let mut idx = NeighborIndex {
            ids: Vec::new(),
            points: Vec::new(),
            by_id: HashMap::new(),
            cell_deg,
            cells: HashMap::new(),
        };
        for (id, p) in points {
            if idx.by_id.contains_key(&id) {
                continue;
            }
            let i = idx.ids.len();
            idx.by_id.insert(id.clone(), i);
            idx.ids.push(id);
            idx.points.push(p);
            idx.cells.entry(idx.cell_of(p)).or_default().push(i);
        }
        idx
    }

    pub fn from_inventory(inventory: &Inventory) -> Self {
        Self::new(inventory.iter().map(|b| (b.id.clone(), b.centroid)))
    }

    fn cell_of(&self, p: LatLon) -> (i64, i64) {
        ((p.lat / self.cell_deg).floor() as i64, (p.lon / self.cell_deg).floor() as i64)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, i: usize) -> &BuildingId {
        &self.ids[i]
    }

    pub fn point(&self, i: usize) -> LatLon {
        self.points[i]
    }

    pub fn position(&self, id: &BuildingId) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    pub fn ids(&self) -> &[BuildingId] {
        &self.ids
    }

    /// Longitude ranges (within [-180, 180]) and latitude band a cap of
    /// `radius` around `c` can touch. `None` means every longitude.
    fn search_box(c: LatLon, radius: f64) -> ((f64, f64), Option<Vec<(f64, f64)>>) {
        let ang = radius / EARTH_RADIUS_M;
        let dlat = ang.to_degrees() * (1.0 + BOX_SLACK_REL) + BOX_SLACK_ABS;
        let lat_lo = c.lat - dlat;
        let lat_hi = c.lat + dlat;
        let lat_band = (lat_lo.max(-90.0), lat_hi.min(90.0));
        if lat_lo <= -90.0 || lat_hi >= 90.0 || ang >= std::f64::consts::FRAC_PI_2 {
            return (lat_band, None);
        }
        let s = ang.sin() / c.lat.to_radians().cos();
        if s >= 1.0 {
            return (lat_band, None);
        }
        let dlon = s.asin().to_degrees() * (1.0 + BOX_SLACK_REL) + BOX_SLACK_ABS;
        if dlon >= 180.0 {
            return (lat_band, None);
        }
        let (lo, hi) = (c.lon - dlon, c.lon + dlon);
        let ranges = if lo < -180.0 {
            vec![(-180.0, hi), (lo + 360.0, 180.0)]
        } else if hi > 180.0 {
            vec![(lo, 180.0), (-180.0, hi - 360.0)]
        } else {
            vec![(lo, hi)]
        };
        (lat_band, Some(ranges))
    }

    fn candidates(&self, c: LatLon, radius: f64) -> Vec<usize> {
        let ((lat_lo, lat_hi), lon_ranges) = Self::search_box(c, radius);
        let Some(lon_ranges) = lon_ranges else {
            return (0..self.len()).collect();
        };
        let rows = (lat_lo / self.cell_deg).floor() as i64..=(lat_hi / self.cell_deg).floor() as i64;
        let col_ranges: Vec<_> = lon_ranges
            .iter()
            .map(|&(lo, hi)| (lo / self.cell_deg).floor() as i64..=(hi / self.cell_deg).floor() as i64)
            .collect();
        let n_cells: u128 = col_ranges.iter().map(|r| (r.end() - r.start() + 1) as u128).sum::<u128>()
            * (rows.end() - rows.start() + 1) as u128;
        if n_cells > self.cells.len() as u128 {
            return (0..self.len()).collect();
        }
        let mut out = Vec::new();
        for row in rows {
            for cols in &col_ranges {
                for col in cols.clone() {
                    if let Some(members) = self.cells.get(&(row, col)) {
                        out.extend_from_slice(members);
                    }
                }
            }
        }
        out
    }

    /// Indices and distances of points within `radius` of `c`, sorted by index.
    pub fn within_of_point(&self, c: LatLon, radius: f64) -> Vec<(usize, f64)> {
        let mut hits: Vec<(usize, f64)> = self
            .candidates(c, radius)
            .into_iter()
            .filter_map(|j| {
                let d = haversine(c, self.points[j]);
                (d <= radius).then_some((j, d))
            })
            .collect();
        hits.sort_by_key(|&(j, _)| j);
        hits
    }

    /// Other indexed points within `radius` of point `i`, with distances.
    pub fn within_of_index(&self, i: usize, radius: f64) -> Vec<(usize, f64)> {
        let mut hits = self.within_of_point(self.points[i], radius);
        hits.retain(|&(j, _)| j != i);
        hits
    }

    /// Buildings within `radius` meters of `id`, excluding `id` itself, sorted by id.
    pub fn neighbors_within(&self, id: &BuildingId, radius: f64) -> Result<Vec<BuildingId>, DomainError> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(DomainError::BadRadius(radius));
        }
        let i = self.position(id).ok_or_else(|| DomainError::NotIndexed(id.to_string()))?;
        let mut ids: Vec<BuildingId> = self.within_of_index(i, radius).into_iter().map(|(j, _)| self.ids[j].clone()).collect();
        ids.sort();
        Ok(ids)
    }
}

/// Point `distance` meters from `origin` along `bearing_deg` (clockwise from north).
pub fn destination(origin: LatLon, bearing_deg: f64, distance: f64) -> LatLon {
    let ang = distance / EARTH_RADIUS_M;
    let (p1, l1, th) = (origin.lat.to_radians(), origin.lon.to_radians(), bearing_deg.to_radians());
    let p2 = (p1.sin() * ang.cos() + p1.cos() * ang.sin() * th.cos()).asin();
    let l2 = l1 + (th.sin() * ang.sin() * p1.cos()).atan2(ang.cos() - p1.sin() * p2.sin());
    let lon = (l2.to_degrees() + 540.0).rem_euclid(360.0) - 180.0;
    LatLon { lat: p2.to_degrees(), lon }
}
