//! Per-building satellite image planning and fetching.

mod cache;
mod fetch;
mod http;
mod mercator;
mod plan;

pub use cache::{CacheMeta, DiskCache, ImageCache, MemoryCache};
pub use fetch::{
    execute_fetch, Clock, FetchLimits, FetchOutcome, FetchReport, FetchStatus, Fetcher, SystemClock, TokenBucket,
    VirtualClock,
};
pub use http::HttpFetcher;
pub use mercator::{ground_resolution, CropConfig, EARTH_RADIUS_WGS84_M, MERCATOR_MAX_LAT};
pub use plan::{
    cache_key, plan_image, write_plan_manifest, ImagePlan, PlanConfig, Provider, MAX_IMAGE_PX, MAX_ZOOM, MIN_IMAGE_PX,
    MIN_ZOOM, PROVIDER_KEY_ENV,
};
