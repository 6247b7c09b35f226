//! Door-level placement. Two variants share the coverage objective
//! (sum of door demand times stations placed there):
//!
//! - restricted: each building's station count is pinned to a quota, at
//!   most `cap` dispensers per door. Buildings decompose, and within one
//!   building filling doors in descending-demand order is exact.
//! - unrestricted: a campus-wide budget of 0/1 door picks, at least one
//!   per building. Taking every building's busiest door and topping up
//!   with the globally busiest remaining doors is exact (any optimum can
//!   be exchanged into this form without losing objective).
//!
//! Ties always resolve to the lower door index, then earlier registry
//! position, so outputs are deterministic.

use indexmap::IndexMap;

use crate::error::SolveError;
use crate::model::{
    BuildingAllocation, BuildingId, CampusRegistry, DemandSnapshot, DoorRef, ModelTag,
};

/// Doors of equal demand that a quota boundary split: some received more
/// dispensers than others despite identical traffic. Surfaced so users
/// can see where the restricted model's preference for stacking the
/// busiest doors was arbitrary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotaTie {
    pub building: BuildingId,
    pub demand: u64,
    /// Door indices sharing that demand but allocated unequally.
    pub doors: Vec<usize>,
}

/// Door indices of one building ordered by descending demand, ties by
/// ascending index.
fn doors_by_demand(counts: &[u64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
    order
}

/// Fills one building's doors to the cap in demand order until the quota
/// is spent. Returns per-door counts indexed by door.
fn fill_building(counts: &[u64], quota: u32, cap: u32) -> Vec<u32> {
    let mut stations = vec![0u32; counts.len()];
    let mut remaining = quota;
    for &door in &doors_by_demand(counts) {
        if remaining == 0 {
            break;
        }
        let take = cap.min(remaining);
        stations[door] = take;
        remaining -= take;
    }
    stations
}

/// Exact solution of the quota-restricted door model, one building at a
/// time. Every registry building must appear in `quotas`.
pub fn doors_restricted(
    snapshot: &DemandSnapshot,
    registry: &CampusRegistry,
    quotas: &IndexMap<BuildingId, u32>,
    max_per_door: u32,
) -> Result<BuildingAllocation, SolveError> {
    if max_per_door == 0 {
        return Err(SolveError::ZeroDoorCap);
    }

    let mut entries = Vec::new();
    for building in registry.buildings() {
        let quota = *quotas
            .get(building.id())
            .ok_or_else(|| SolveError::MissingQuota(building.id().clone()))?;
        let capacity = u64::from(max_per_door) * building.door_count() as u64;
        if u64::from(quota) > capacity {
            return Err(SolveError::QuotaExceedsCapacity {
                building: building.id().clone(),
                quota,
                doors: building.door_count(),
                cap: max_per_door,
                capacity,
            });
        }
        let counts = snapshot.door_counts(building.id())?;
        let stations = fill_building(counts, quota, max_per_door);
        entries.extend(
            stations
                .into_iter()
                .enumerate()
                .map(|(i, x)| (DoorRef::new(building.id().clone(), i), x)),
        );
    }
    Ok(BuildingAllocation::door_level(
        ModelTag::DoorsRestricted,
        entries,
    )?)
}

/// Quotas equal to each building's initial deployment, the default for
/// the restricted model.
pub fn baseline_quotas(registry: &CampusRegistry) -> IndexMap<BuildingId, u32> {
    registry
        .buildings()
        .iter()
        .map(|b| (b.id().clone(), b.baseline_stations()))
        .collect()
}

/// Reports demand ties cut by a quota boundary under the restricted
/// model, without changing the allocation itself.
pub fn quota_boundary_ties(
    snapshot: &DemandSnapshot,
    registry: &CampusRegistry,
    quotas: &IndexMap<BuildingId, u32>,
    max_per_door: u32,
) -> Result<Vec<QuotaTie>, SolveError> {
    let allocation = doors_restricted(snapshot, registry, quotas, max_per_door)?;
    let per_door = allocation
        .per_door()
        .expect("restricted model is door-level");

    let mut ties = Vec::new();
    for building in registry.buildings() {
        let counts = snapshot.door_counts(building.id())?;
        // group doors by demand, in-order; unequal allocations inside a
        // group mean the quota boundary fell on a tie
        let mut by_demand: IndexMap<u64, Vec<usize>> = IndexMap::new();
        for (i, &d) in counts.iter().enumerate() {
            by_demand.entry(d).or_default().push(i);
        }
        for (demand, doors) in by_demand {
            if doors.len() < 2 {
                continue;
            }
            let allocated: Vec<u32> = doors
                .iter()
                .map(|&i| per_door[&DoorRef::new(building.id().clone(), i)])
                .collect();
            if allocated.iter().any(|&a| a != allocated[0]) {
                ties.push(QuotaTie {
                    building: building.id().clone(),
                    demand,
                    doors,
                });
            }
        }
    }
    Ok(ties)
}

/// Exact solution of the campus-wide 0/1 door model: every building gets
/// its busiest door, then the remaining budget goes to the busiest
/// unselected doors anywhere on campus.
pub fn doors_unrestricted(
    snapshot: &DemandSnapshot,
    registry: &CampusRegistry,
    total_stations: u32,
) -> Result<BuildingAllocation, SolveError> {
    let n_buildings = registry.len();
    if (total_stations as usize) < n_buildings {
        return Err(SolveError::BudgetBelowBuildingCount {
            total: total_stations,
            buildings: n_buildings,
            shortfall: n_buildings as u64 - u64::from(total_stations),
        });
    }
    let door_capacity = registry.total_doors();
    if u64::from(total_stations) > door_capacity {
        return Err(SolveError::BudgetExceedsDoorCapacity {
            total: total_stations,
            doors: door_capacity,
        });
    }

    let mut selected: Vec<Vec<bool>> = registry
        .buildings()
        .iter()
        .map(|b| vec![false; b.door_count()])
        .collect();

    // phase 1: the busiest door of every building (tie: lowest index)
    for (pos, building) in registry.buildings().iter().enumerate() {
        let counts = snapshot.door_counts(building.id())?;
        let best = doors_by_demand(counts)[0];
        selected[pos][best] = true;
    }

    // phase 2: top up with the globally busiest unselected doors
    let mut leftovers: Vec<(u64, usize, usize)> = Vec::new();
    for (pos, building) in registry.buildings().iter().enumerate() {
        let counts = snapshot.door_counts(building.id())?;
        for (i, &d) in counts.iter().enumerate() {
            if !selected[pos][i] {
                leftovers.push((d, pos, i));
            }
        }
    }
    leftovers.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    for &(_, pos, i) in leftovers.iter().take(total_stations as usize - n_buildings) {
        selected[pos][i] = true;
    }

    let mut entries = Vec::new();
    for (pos, building) in registry.buildings().iter().enumerate() {
        entries.extend(
            selected[pos]
                .iter()
                .enumerate()
                .map(|(i, &on)| (DoorRef::new(building.id().clone(), i), u32::from(on))),
        );
    }
    Ok(BuildingAllocation::door_level(
        ModelTag::DoorsUnrestricted,
        entries,
    )?)
}
