//! Building tables, tract polygons, and tract assignment.

mod buildings;
pub mod geometry;
mod tracts;

pub use buildings::{
    parse_buildings, write_buildings, write_rejections, AreaUnit, ParseOptions, RejectReason, Rejection, BASE_COLUMNS,
    ROOF_COLUMNS, SQUARE_FEET_TO_METERS,
};
pub use tracts::{
    assign_tracts, parse_tracts, tract_geometry, tracts_to_geojson, AssignmentSummary, FeatureRejection, TractPolygon,
};
