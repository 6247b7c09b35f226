use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::ModelError;

/// Opaque, case-sensitive building identifier. Non-empty by construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct BuildingId(String);

impl BuildingId {
    pub fn new(value: impl Into<String>) -> Result<Self, ModelError> {
        let value = value.into();
        if value.is_empty() {
            return Err(ModelError::EmptyBuildingId);
        }
        Ok(BuildingId(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BuildingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A door identified by its building and a dense 0-based index.
///
/// Door indices are positional: external door labels are mapped to
/// indices in first-seen order at ingest time. A `DoorRef` is only
/// meaningful relative to the registry it was resolved against.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DoorRef {
    pub building: BuildingId,
    pub door_index: usize,
}

impl DoorRef {
    pub fn new(building: BuildingId, door_index: usize) -> Self {
        DoorRef {
            building,
            door_index,
        }
    }
}

impl fmt::Display for DoorRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, door {})", self.building, self.door_index)
    }
}

/// One campus building: exterior door count plus the number of stations
/// it received in the initial deployment.
#[derive(Debug, Clone, PartialEq)]
pub struct Building {
    id: BuildingId,
    display_name: String,
    door_count: usize,
    baseline_stations: u32,
}

impl Building {
    pub fn new(
        id: BuildingId,
        display_name: impl Into<String>,
        door_count: usize,
        baseline_stations: u32,
    ) -> Result<Self, ModelError> {
        if door_count == 0 {
            return Err(ModelError::NoDoors(id));
        }
        Ok(Building {
            id,
            display_name: display_name.into(),
            door_count,
            baseline_stations,
        })
    }

    pub fn id(&self) -> &BuildingId {
        &self.id
    }

    pub fn display_name(&self) -> &str {
        &self.display_name
    }

    pub fn door_count(&self) -> usize {
        self.door_count
    }

    pub fn baseline_stations(&self) -> u32 {
        self.baseline_stations
    }
}

/// Ordered collection of campus buildings. Insertion order is preserved
/// and is the canonical iteration order everywhere downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct CampusRegistry {
    buildings: Vec<Building>,
    index: HashMap<BuildingId, usize>,
}

impl CampusRegistry {
    pub fn new(buildings: impl IntoIterator<Item = Building>) -> Result<Self, ModelError> {
        let buildings: Vec<Building> = buildings.into_iter().collect();
        let mut index = HashMap::with_capacity(buildings.len());
        for (pos, b) in buildings.iter().enumerate() {
            if index.insert(b.id.clone(), pos).is_some() {
                return Err(ModelError::DuplicateBuilding(b.id.clone()));
            }
        }
        Ok(CampusRegistry { buildings, index })
    }

    pub fn buildings(&self) -> &[Building] {
        &self.buildings
    }

    pub fn len(&self) -> usize {
        self.buildings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buildings.is_empty()
    }

    pub fn get(&self, id: &BuildingId) -> Option<&Building> {
        self.index.get(id).map(|&pos| &self.buildings[pos])
    }

    /// Position of a building in registry order.
    pub fn position(&self, id: &BuildingId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn require(&self, id: &BuildingId) -> Result<&Building, ModelError> {
        self.get(id)
            .ok_or_else(|| ModelError::UnknownBuilding(id.clone()))
    }

    /// Checks that a door reference points at an existing door.
    pub fn resolve(&self, door: &DoorRef) -> Result<(), ModelError> {
        let building = self.require(&door.building)?;
        if door.door_index >= building.door_count {
            return Err(ModelError::UnknownDoor {
                building: door.building.clone(),
                door_index: door.door_index,
                door_count: building.door_count,
            });
        }
        Ok(())
    }

    /// Sum of the per-building initial-deployment station counts.
    pub fn total_baseline_stations(&self) -> u64 {
        self.buildings
            .iter()
            .map(|b| u64::from(b.baseline_stations))
            .sum()
    }

    pub fn total_doors(&self) -> u64 {
        self.buildings.iter().map(|b| b.door_count as u64).sum()
    }

    /// The initial deployment as a building-level allocation.
    pub fn baseline_allocation(&self) -> BuildingAllocation {
        BuildingAllocation::building_level(
            ModelTag::Baseline,
            self.buildings
                .iter()
                .map(|b| (b.id.clone(), b.baseline_stations)),
        )
        .expect("registry ids are unique")
    }
}

use super::{BuildingAllocation, ModelTag};
