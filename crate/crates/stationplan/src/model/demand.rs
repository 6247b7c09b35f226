use indexmap::IndexMap;

use super::{BuildingId, CampusRegistry, DoorRef, ModelError};

/// One week of door-access event counts, dense per building.
///
/// A snapshot is built against a registry: it carries a zero-filled count
/// vector for every door of every building, in registry order. Aggregation
/// to building demand is an exact integer sum.
#[derive(Debug, Clone, PartialEq)]
pub struct DemandSnapshot {
    label: String,
    counts: IndexMap<BuildingId, Vec<u64>>,
}

impl DemandSnapshot {
    /// An all-zero snapshot covering every door in the registry.
    pub fn new(registry: &CampusRegistry, label: impl Into<String>) -> Self {
        let counts = registry
            .buildings()
            .iter()
            .map(|b| (b.id().clone(), vec![0u64; b.door_count()]))
            .collect();
        DemandSnapshot {
            label: label.into(),
            counts,
        }
    }

    /// Builds a snapshot from per-door counts, validating every door
    /// reference against the registry. Repeated doors accumulate.
    pub fn with_counts(
        registry: &CampusRegistry,
        label: impl Into<String>,
        entries: impl IntoIterator<Item = (DoorRef, u64)>,
    ) -> Result<Self, ModelError> {
        let mut snapshot = DemandSnapshot::new(registry, label);
        for (door, count) in entries {
            snapshot.add(&door, count)?;
        }
        Ok(snapshot)
    }

    /// Adds events to one door's count.
    pub fn add(&mut self, door: &DoorRef, count: u64) -> Result<(), ModelError> {
        let doors = self
            .counts
            .get_mut(&door.building)
            .ok_or_else(|| ModelError::UnknownBuilding(door.building.clone()))?;
        if door.door_index >= doors.len() {
            return Err(ModelError::UnknownDoor {
                building: door.building.clone(),
                door_index: door.door_index,
                door_count: doors.len(),
            });
        }
        doors[door.door_index] += count;
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Total events across all of a building's doors; zero when every
    /// door is quiet.
    pub fn building_demand(&self, id: &BuildingId) -> Result<u64, ModelError> {
        Ok(self.door_counts(id)?.iter().sum())
    }

    pub fn door_counts(&self, id: &BuildingId) -> Result<&[u64], ModelError> {
        self.counts
            .get(id)
            .map(Vec::as_slice)
            .ok_or_else(|| ModelError::UnknownBuilding(id.clone()))
    }

    pub fn door_demand(&self, door: &DoorRef) -> Result<u64, ModelError> {
        let doors = self.door_counts(&door.building)?;
        doors
            .get(door.door_index)
            .copied()
            .ok_or_else(|| ModelError::UnknownDoor {
                building: door.building.clone(),
                door_index: door.door_index,
                door_count: doors.len(),
            })
    }

    /// Campus-wide event total.
    pub fn total_demand(&self) -> u64 {
        self.counts.values().flatten().sum()
    }

    /// Buildings in registry order, paired with their door counts.
    pub fn buildings(&self) -> impl Iterator<Item = (&BuildingId, &[u64])> {
        self.counts.iter().map(|(id, v)| (id, v.as_slice()))
    }
}
