//! Shared domain types: the campus registry, weekly demand snapshots,
//! allocations, and single-building coverage instances.
//!
//! Everything here is immutable after construction and safe to share
//! across threads. Construction validates the structural invariants
//! (unique building ids, door counts, matrix shapes) so the solvers can
//! rely on them.

mod allocation;
mod coverage;
mod demand;
mod params;
mod registry;

pub use allocation::{BuildingAllocation, ModelTag};
pub use coverage::CoverageInstance;
pub use demand::DemandSnapshot;
pub use params::{ModelParams, DEFAULT_MAX_PER_DOOR, DEFAULT_PUMPS_PER_STATION};
pub use registry::{Building, BuildingId, CampusRegistry, DoorRef};

use thiserror::Error;

/// Structural errors raised by the domain types themselves.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("building id must be non-empty")]
    EmptyBuildingId,

    #[error("duplicate building id '{0}'")]
    DuplicateBuilding(BuildingId),

    #[error("building '{0}' must have at least one door")]
    NoDoors(BuildingId),

    #[error("unknown building id '{0}'")]
    UnknownBuilding(BuildingId),

    #[error("door {door_index} out of range for building '{building}' ({door_count} doors)")]
    UnknownDoor {
        building: BuildingId,
        door_index: usize,
        door_count: usize,
    },

    #[error("duplicate door ({building}, {door_index}) in allocation")]
    DuplicateDoor {
        building: BuildingId,
        door_index: usize,
    },

    #[error("travel time matrix must be {classrooms}x{sites}; row {row} has {found} entries")]
    MatrixShape {
        classrooms: usize,
        sites: usize,
        row: usize,
        found: usize,
    },

    #[error(
        "travel time for (classroom {classroom}, site {site}) must be finite and >= 0, got {value}"
    )]
    BadTravelTime {
        classroom: usize,
        site: usize,
        value: f64,
    },

    #[error(
        "door-level allocation for building '{building}' sums to {door_sum} \
         but the building total is {building_total}"
    )]
    AggregationMismatch {
        building: BuildingId,
        door_sum: u64,
        building_total: u32,
    },
}
