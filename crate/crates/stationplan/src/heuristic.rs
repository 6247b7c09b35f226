//! Demand-proportional allocation: each building gets the ceiling of its
//! share of the station budget.
//!
//! The share is computed in exact integer arithmetic (demand times budget
//! over total demand, then a ceiling division), so results are
//! bit-reproducible. Because every fractional share rounds up, the summed
//! allocation may exceed the budget; that overshoot is part of the
//! contract and is not redistributed away.

use crate::error::SolveError;
use crate::model::{BuildingAllocation, CampusRegistry, DemandSnapshot, ModelTag};

/// Allocates `total_stations` across buildings proportionally to demand,
/// rounding each share up. Zero-demand buildings receive zero.
pub fn heuristic_allocate(
    snapshot: &DemandSnapshot,
    registry: &CampusRegistry,
    total_stations: u32,
) -> Result<BuildingAllocation, SolveError> {
    if total_stations == 0 {
        return Err(SolveError::ZeroTotal);
    }

    let mut demands = Vec::with_capacity(registry.len());
    let mut campus_demand: u128 = 0;
    for building in registry.buildings() {
        let demand = snapshot.building_demand(building.id())?;
        campus_demand += u128::from(demand);
        demands.push((building.id().clone(), demand));
    }
    if campus_demand == 0 {
        return Err(SolveError::ZeroTotalDemand);
    }

    let allocation = demands.into_iter().map(|(id, demand)| {
        let share = u128::from(demand) * u128::from(total_stations);
        let stations = ceil_div(share, campus_demand);
        // share/campus_demand <= total_stations, so the ceiling fits u32
        (id, stations as u32)
    });
    Ok(BuildingAllocation::building_level(
        ModelTag::Heuristic,
        allocation,
    )?)
}

fn ceil_div(numerator: u128, denominator: u128) -> u128 {
    numerator.div_ceil(denominator)
}
