use std::fmt;

use indexmap::IndexMap;
use serde::Serialize;

use super::{BuildingId, DoorRef, ModelError};

/// Which model produced an allocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelTag {
    /// The initial ad hoc deployment used as the comparison baseline.
    Baseline,
    /// Demand-proportional ceiling heuristic.
    Heuristic,
    /// Quadratic target-coverage building allocation.
    Target,
    /// Door-level placement with fixed per-building quotas.
    DoorsRestricted,
    /// Door-level placement with a campus-wide budget.
    DoorsUnrestricted,
}

impl ModelTag {
    pub fn name(self) -> &'static str {
        match self {
            ModelTag::Baseline => "baseline",
            ModelTag::Heuristic => "heuristic",
            ModelTag::Target => "target",
            ModelTag::DoorsRestricted => "doors-restricted",
            ModelTag::DoorsUnrestricted => "doors-unrestricted",
        }
    }
}

impl fmt::Display for ModelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Integer station counts per building, optionally broken down per door.
///
/// When the door-level map is present, the per-building totals are its
/// exact sums; the constructors enforce that identity.
#[derive(Debug, Clone, PartialEq)]
pub struct BuildingAllocation {
    model_tag: ModelTag,
    per_building: IndexMap<BuildingId, u32>,
    per_door: Option<IndexMap<DoorRef, u32>>,
}

impl BuildingAllocation {
    /// Building-level allocation (no door detail).
    pub fn building_level(
        model_tag: ModelTag,
        entries: impl IntoIterator<Item = (BuildingId, u32)>,
    ) -> Result<Self, ModelError> {
        let mut per_building = IndexMap::new();
        for (id, stations) in entries {
            if per_building.insert(id.clone(), stations).is_some() {
                return Err(ModelError::DuplicateBuilding(id));
            }
        }
        Ok(BuildingAllocation {
            model_tag,
            per_building,
            per_door: None,
        })
    }

    /// Door-level allocation; building totals are aggregated from the
    /// door counts, so the consistency invariant holds by construction.
    /// Buildings appear in first-seen door order.
    pub fn door_level(
        model_tag: ModelTag,
        entries: impl IntoIterator<Item = (DoorRef, u32)>,
    ) -> Result<Self, ModelError> {
        let mut per_building: IndexMap<BuildingId, u32> = IndexMap::new();
        let mut per_door = IndexMap::new();
        for (door, stations) in entries {
            if per_door.insert(door.clone(), stations).is_some() {
                return Err(ModelError::DuplicateDoor {
                    building: door.building,
                    door_index: door.door_index,
                });
            }
            *per_building.entry(door.building.clone()).or_insert(0) += stations;
        }
        Ok(BuildingAllocation {
            model_tag,
            per_building,
            per_door: Some(per_door),
        })
    }

    pub fn model_tag(&self) -> ModelTag {
        self.model_tag
    }

    pub fn stations(&self, id: &BuildingId) -> Option<u32> {
        self.per_building.get(id).copied()
    }

    /// Buildings in allocation order with their station counts.
    pub fn buildings(&self) -> impl Iterator<Item = (&BuildingId, u32)> {
        self.per_building.iter().map(|(id, &n)| (id, n))
    }

    pub fn building_count(&self) -> usize {
        self.per_building.len()
    }

    pub fn per_door(&self) -> Option<&IndexMap<DoorRef, u32>> {
        self.per_door.as_ref()
    }

    pub fn door_stations(&self, door: &DoorRef) -> Option<u32> {
        self.per_door.as_ref().and_then(|m| m.get(door).copied())
    }

    pub fn total_stations(&self) -> u64 {
        self.per_building.values().map(|&n| u64::from(n)).sum()
    }

    /// Re-checks the door-to-building aggregation identity. Holds by
    /// construction; exposed for values rebuilt from external files.
    pub fn validate(&self) -> Result<(), ModelError> {
        let Some(per_door) = &self.per_door else {
            return Ok(());
        };
        for (id, &total) in &self.per_building {
            let door_sum: u64 = per_door
                .iter()
                .filter(|(door, _)| &door.building == id)
                .map(|(_, &n)| u64::from(n))
                .sum();
            if door_sum != u64::from(total) {
                return Err(ModelError::AggregationMismatch {
                    building: id.clone(),
                    door_sum,
                    building_total: total,
                });
            }
        }
        Ok(())
    }
}
