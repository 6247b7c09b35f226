use indexmap::IndexMap;

use super::BuildingId;

/// Pumps of sanitizer per station, as estimated by facilities staff.
pub const DEFAULT_PUMPS_PER_STATION: u32 = 500;

/// Maximum dispensers a single door may receive in the restricted
/// door-allocation model.
pub const DEFAULT_MAX_PER_DOOR: u32 = 2;

/// Bag of solver parameters. Each solver reads only the fields it needs;
/// unset fields fall back to their documented defaults where one exists.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ModelParams {
    /// Campus-wide station budget N.
    pub total_stations: Option<u32>,
    /// Pumps per station u; defaults to 500.
    pub pumps_per_station: Option<u32>,
    /// Stations to place within one building, p.
    pub station_count: Option<u32>,
    /// Coverage threshold T in seconds.
    pub threshold_seconds: Option<f64>,
    /// Per-building quotas s_b for the restricted door model.
    pub per_building_quota: Option<IndexMap<BuildingId, u32>>,
    /// Per-door cap; defaults to 2.
    pub max_per_door: Option<u32>,
}

impl ModelParams {
    pub fn pumps_per_station_or_default(&self) -> u32 {
        self.pumps_per_station.unwrap_or(DEFAULT_PUMPS_PER_STATION)
    }

    pub fn max_per_door_or_default(&self) -> u32 {
        self.max_per_door.unwrap_or(DEFAULT_MAX_PER_DOOR)
    }
}
