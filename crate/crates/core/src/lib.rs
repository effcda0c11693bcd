//! Roof-type inventory pipeline for regional wind-risk studies.

pub mod aggregate;
pub mod classify;
pub mod error;
pub mod imagery;
pub mod impute;
pub mod ingest;
pub mod inventory;
pub mod kv;
pub mod metrics;
pub mod roof;
pub mod spatial;
pub mod synth;

pub use error::{DomainError, Error, Result};
pub use inventory::{BuildingId, BuildingRecord, Inventory, LatLon, RoofSource, TractId};
pub use roof::{Complexity, RoofClass, RoofFamily, RoofFeatures};
