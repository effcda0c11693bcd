use std::io::Write;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::mercator::{ground_resolution, CropConfig};
use crate::error::{DomainError, Error, Result};
use crate::inventory::{BuildingId, BuildingRecord};

pub const MIN_ZOOM: u32 = 15;
pub const MAX_ZOOM: u32 = 21;
pub const MIN_IMAGE_PX: u32 = 224;
pub const MAX_IMAGE_PX: u32 = 1280;

/// Name of the environment variable holding the provider credential.
pub const PROVIDER_KEY_ENV: &str = "ROOFINV_PROVIDER_KEY";

/// Static-map provider. The template may use `{lat}`, `{lon}`, `{zoom}`,
/// `{size}` and `{key}`; `{key}` is only filled in at request time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provider {
    pub name: String,
    pub uri_template: String,
}

impl Default for Provider {
    fn default() -> Self {
        Provider {
            name: "google-static".into(),
            uri_template: "https://maps.googleapis.com/maps/api/staticmap?center={lat},{lon}&zoom={zoom}\
                           &size={size}x{size}&maptype=satellite&key={key}"
                .into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanConfig {
    pub provider: Provider,
    pub image_size_px: u32,
    pub crop: CropConfig,
}

impl Default for PlanConfig {
    fn default() -> Self {
        PlanConfig { provider: Provider::default(), image_size_px: 640, crop: CropConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImagePlan {
    pub building_id: BuildingId,
    pub lat: f64,
    pub lon: f64,
    pub zoom: u32,
    pub image_size_px: u32,
    /// Ground distance spanned by one image side.
    pub ground_extent_m: f64,
    pub request_uri: String,
    pub cache_key: String,
}

fn micro_degrees(deg: f64) -> i64 {
    (deg * 1e6).round() as i64
}

fn format_micro(micro: i64) -> String {
    let sign = if micro < 0 { "-" } else { "" };
    let m = micro.unsigned_abs();
    format!("{sign}{}.{:06}", m / 1_000_000, m % 1_000_000)
}

/// Stable content key for one request; centers are rounded to 1e-6 degrees.
pub fn cache_key(provider: &str, lat: f64, lon: f64, zoom: u32, size_px: u32) -> String {
    let material = format!("{provider}|{}|{}|{zoom}|{size_px}", micro_degrees(lat), micro_degrees(lon));
    let digest = Sha256::digest(material.as_bytes());
    hex::encode(&digest[..16])
}

fn render_uri(template: &str, lat: f64, lon: f64, zoom: u32, size_px: u32) -> String {
    template
        .replace("{lat}", &format_micro(micro_degrees(lat)))
        .replace("{lon}", &format_micro(micro_degrees(lon)))
        .replace("{zoom}", &zoom.to_string())
        .replace("{size}", &size_px.to_string())
}

/// Picks the tightest zoom in 15..=21 whose image still spans the crop extent.
pub fn plan_image(building: &BuildingRecord, config: &PlanConfig) -> Result<ImagePlan, DomainError> {
    let size = config.image_size_px;
    if !(MIN_IMAGE_PX..=MAX_IMAGE_PX).contains(&size) {
        return Err(DomainError::ImageSizeOutOfRange(size));
    }
    let (lat, lon) = (building.centroid.lat, building.centroid.lon);
    let extent = config.crop.crop_extent(building.building_area)?;
    let mut chosen = None;
    for zoom in (MIN_ZOOM..=MAX_ZOOM).rev() {
        let span = ground_resolution(lat, zoom)? * size as f64;
        if span >= extent {
            chosen = Some((zoom, span));
            break;
        }
    }
    let (zoom, span) = chosen.ok_or(DomainError::UncoverableExtent { lat, extent_m: extent, size_px: size })?;
    Ok(ImagePlan {
        building_id: building.id.clone(),
        lat,
        lon,
        zoom,
        image_size_px: size,
        ground_extent_m: span,
        request_uri: render_uri(&config.provider.uri_template, lat, lon, zoom, size),
        cache_key: cache_key(&config.provider.name, lat, lon, zoom, size),
    })
}

/// Plan manifest: `building_id,lat,lon,zoom,size_px,cache_key`.
pub fn write_plan_manifest<W: Write>(plans: &[ImagePlan], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["building_id", "lat", "lon", "zoom", "size_px", "cache_key"]).map_err(Error::from_csv)?;
    for p in plans {
        w.write_record([
            p.building_id.0.clone(),
            p.lat.to_string(),
            p.lon.to_string(),
            p.zoom.to_string(),
            p.image_size_px.to_string(),
            p.cache_key.clone(),
        ])
        .map_err(Error::from_csv)?;
    }
    w.flush()?;
    Ok(())
}
