//! Campus-wide building allocation that matches supplied pumps to
//! demand: minimize the sum over buildings of (demand - pumps * stations)
//! squared, subject to one station per building and a total budget.
//!
//! The objective is separable and convex in each building's count, so
//! greedy marginal allocation is exact: start everyone at one station and
//! repeatedly give the next station to the building whose squared
//! deviation drops the most. The budget constraint is an upper bound, so
//! the loop also stops early once no step helps; over-allocating would
//! only push supply past demand and grow the square.
//!
//! All marginals are exact integers; there is no floating point anywhere
//! in the argmin.

use crate::error::SolveError;
use crate::model::{BuildingAllocation, CampusRegistry, DemandSnapshot, ModelTag};

/// Cost change for building with demand `d` when moving from `x` to
/// `x + 1` stations at `u` pumps each: u*(u*(2x+1) - 2d). Negative means
/// the extra station reduces the squared deviation.
fn marginal_cost(demand: u64, pumps: u32, stations: u32) -> i128 {
    let u = i128::from(pumps);
    let x = i128::from(stations);
    u * (u * (2 * x + 1) - 2 * i128::from(demand))
}

/// Optimal integer solution of the target-coverage model. Ties in the
/// marginal argmin break by registry order.
pub fn target_allocate(
    snapshot: &DemandSnapshot,
    registry: &CampusRegistry,
    total_stations: u32,
    pumps_per_station: u32,
) -> Result<BuildingAllocation, SolveError> {
    if pumps_per_station == 0 {
        return Err(SolveError::ZeroPumps);
    }
    let n = registry.len();
    if (total_stations as usize) < n {
        return Err(SolveError::BudgetBelowBuildingCount {
            total: total_stations,
            buildings: n,
            shortfall: n as u64 - u64::from(total_stations),
        });
    }

    let mut demands = Vec::with_capacity(n);
    for building in registry.buildings() {
        demands.push(snapshot.building_demand(building.id())?);
    }

    // one station each is forced, then spend the rest marginally
    let mut stations = vec![1u32; n];
    let mut budget = total_stations - n as u32;
    while budget > 0 {
        let mut best: Option<(i128, usize)> = None;
        for (b, &demand) in demands.iter().enumerate() {
            let delta = marginal_cost(demand, pumps_per_station, stations[b]);
            if best.is_none_or(|(best_delta, _)| delta < best_delta) {
                best = Some((delta, b));
            }
        }
        match best {
            Some((delta, b)) if delta < 0 => {
                stations[b] += 1;
                budget -= 1;
            }
            // no step improves the objective; leave the budget unused
            _ => break,
        }
    }

    Ok(BuildingAllocation::building_level(
        ModelTag::Target,
        registry
            .buildings()
            .iter()
            .zip(stations)
            .map(|(b, x)| (b.id().clone(), x)),
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Building, BuildingId, DoorRef};

    fn bid(s: &str) -> BuildingId {
        BuildingId::new(s).unwrap()
    }

    fn setup(demands: &[u64]) -> (CampusRegistry, DemandSnapshot) {
        let registry =
            CampusRegistry::new(demands.iter().enumerate().map(|(i, _)| {
                Building::new(bid(&format!("b{i}")), format!("B{i}"), 1, 0).unwrap()
            }))
            .unwrap();
        let snapshot = DemandSnapshot::with_counts(
            &registry,
            "w1",
            demands
                .iter()
                .enumerate()
                .map(|(i, &d)| (DoorRef::new(bid(&format!("b{i}")), 0), d)),
        )
        .unwrap();
        (registry, snapshot)
    }

    fn allocate(demands: &[u64], total: u32, pumps: u32) -> Vec<u32> {
        let (registry, snapshot) = setup(demands);
        let alloc = target_allocate(&snapshot, &registry, total, pumps).unwrap();
        registry
            .buildings()
            .iter()
            .map(|b| alloc.stations(b.id()).unwrap())
            .collect()
    }

    /// Objective recomputed independently of the solver.
    fn objective(demands: &[u64], pumps: u32, stations: &[u32]) -> i128 {
        demands
            .iter()
            .zip(stations)
            .map(|(&d, &x)| {
                let gap = i128::from(d) - i128::from(pumps) * i128::from(x);
                gap * gap
            })
            .sum()
    }

    /// Exhaustive reference over all feasible vectors (x >= 1, sum <= N).
    fn brute_force_objective(demands: &[u64], total: u32, pumps: u32) -> i128 {
        fn descend(
            demands: &[u64],
            pumps: u32,
            budget: u32,
            current: &mut Vec<u32>,
            best: &mut Option<i128>,
        ) {
            if current.len() == demands.len() {
                let obj = objective(demands, pumps, current);
                if best.is_none_or(|b| obj < b) {
                    *best = Some(obj);
                }
                return;
            }
            let remaining = (demands.len() - current.len() - 1) as u32;
            for x in 1..=(budget - remaining) {
                current.push(x);
                descend(demands, pumps, budget - x, current, best);
                current.pop();
            }
        }
        let mut best = None;
        descend(demands, pumps, total, &mut Vec::new(), &mut best);
        best.unwrap()
    }

    #[test]
    fn perfect_fit_stops_at_one_station() {
        // demand 500 at 500 pumps: one station is exact, extras only hurt
        assert_eq!(allocate(&[500], 3, 500), vec![1]);
    }

    #[test]
    fn two_building_hand_instance() {
        let stations = allocate(&[1000, 400], 3, 500);
        assert_eq!(stations, vec![2, 1]);
        assert_eq!(objective(&[1000, 400], 500, &stations), 10_000);
        assert_eq!(brute_force_objective(&[1000, 400], 3, 500), 10_000);
    }

    #[test]
    fn budget_below_building_count_is_infeasible() {
        let (registry, snapshot) = setup(&[10, 10]);
        assert_eq!(
            target_allocate(&snapshot, &registry, 1, 500).unwrap_err(),
            SolveError::BudgetBelowBuildingCount {
                total: 1,
                buildings: 2,
                shortfall: 1,
            }
        );
    }

    #[test]
    fn zero_pumps_is_an_argument_error() {
        let (registry, snapshot) = setup(&[10]);
        assert_eq!(
            target_allocate(&snapshot, &registry, 3, 0).unwrap_err(),
            SolveError::ZeroPumps
        );
    }

    #[test]
    fn low_demand_saturates_at_all_ones() {
        // every demand <= 1.5u, so no marginal is negative at x = 1
        let stations = allocate(&[750, 300, 0, 749], 40, 500);
        assert_eq!(stations, vec![1, 1, 1, 1]);
    }

    #[test]
    fn greedy_matches_brute_force_on_small_grid() {
        let cases: &[(&[u64], u32, u32)] = &[
            (&[1000, 400], 3, 500),
            (&[9, 5, 2], 6, 1),
            (&[100, 70, 10, 40], 9, 10),
            (&[2500, 2500, 100], 12, 500),
            (&[3, 3, 3, 3], 8, 1),
        ];
        for &(demands, total, pumps) in cases {
            let stations = allocate(demands, total, pumps);
            assert_eq!(
                objective(demands, pumps, &stations),
                brute_force_objective(demands, total, pumps),
                "demands {demands:?}, total {total}, pumps {pumps}"
            );
        }
    }

    #[test]
    fn feasibility_always_holds() {
        let stations = allocate(&[40, 9000, 10, 777, 1234], 14, 500);
        assert!(stations.iter().all(|&x| x >= 1));
        assert!(stations.iter().map(|&x| u64::from(x)).sum::<u64>() <= 14);
    }

    #[test]
    fn raising_demand_never_lowers_a_buildings_share() {
        let base = allocate(&[1000, 400, 2600], 10, 500);
        for bump in [1u64, 400, 1500] {
            let bumped = allocate(&[1000 + bump, 400, 2600], 10, 500);
            assert!(bumped[0] >= base[0], "bump {bump}");
        }
    }
}
