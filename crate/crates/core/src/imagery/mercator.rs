//! Web Mercator ground resolution and floor-area-driven crop size.

use serde::{Deserialize, Serialize};

use crate::error::DomainError;

pub const EARTH_RADIUS_WGS84_M: f64 = 6_378_137.0;
pub const MERCATOR_MAX_LAT: f64 = 85.05113;
pub const TILE_SIZE_PX: f64 = 256.0;

/// Meters per pixel at `latitude` for a 256-px-tile Web Mercator zoom level.
pub fn ground_resolution(latitude: f64, zoom: u32) -> Result<f64, DomainError> {
    if !latitude.is_finite() || latitude.abs() >= MERCATOR_MAX_LAT {
        return Err(DomainError::BeyondMercatorCutoff(latitude));
    }
    let equator = 2.0 * std::f64::consts::PI * EARTH_RADIUS_WGS84_M / TILE_SIZE_PX;
    Ok(equator * latitude.to_radians().cos() / 2f64.powi(zoom as i32))
}

/// Crop side length as `factor * sqrt(area)`, clamped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CropConfig {
    pub factor: f64,
    pub min_extent_m: f64,
    pub max_extent_m: f64,
}

impl Default for CropConfig {
    fn default() -> Self {
        CropConfig { factor: 2.5, min_extent_m: 30.0, max_extent_m: 120.0 }
    }
}

impl CropConfig {
    pub fn crop_extent(&self, building_area: f64) -> Result<f64, DomainError> {
        if !(building_area > 0.0) || !building_area.is_finite() {
            return Err(DomainError::NonPositiveArea(building_area));
        }
        Ok((self.factor * building_area.sqrt()).clamp(self.min_extent_m, self.max_extent_m))
    }
}
