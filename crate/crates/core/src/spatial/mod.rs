//! Haversine neighbor search and neighborhood roof statistics.

mod index;
mod neighbors;

pub use index::{destination, haversine, NeighborIndex, EARTH_RADIUS_M};
pub use neighbors::{
    all_neighbor_features, dominant_type_predict, neighbor_features, radius_sweep, write_sweep_csv, NeighborFeatures,
    SweepRow, TieBreak, DEFAULT_RADIUS_M, DEFAULT_SWEEP_RADII_M,
};
