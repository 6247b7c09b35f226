//! Allocation comparison and sensitivity analysis: per-building deltas
//! against a baseline, exact-integer histogram bins, same/more/fewer
//! tallies, and agreement across weekly demand snapshots.

mod render;

pub use render::{
    render_allocation, render_coverage, render_diff, render_histogram_csv, render_sensitivity,
    render_threshold, OutputFormat,
};

use std::collections::BTreeMap;

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

use crate::error::SolveError;
use crate::model::{BuildingAllocation, BuildingId, DemandSnapshot};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(
        "allocations cover different buildings (only in baseline: [{only_baseline}]; \
         only in candidate: [{only_candidate}])"
    )]
    BuildingSetMismatch {
        only_baseline: String,
        only_candidate: String,
    },

    #[error("sensitivity needs at least 2 snapshots, got {0}")]
    TooFewSnapshots(usize),

    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// One building's entry in a diff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiffRow {
    pub baseline: u32,
    pub candidate: u32,
    /// candidate - baseline
    pub delta: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiffSummary {
    /// Buildings where candidate == baseline.
    pub same: usize,
    /// Buildings needing more stations than the baseline gave them.
    pub more: usize,
    /// Buildings needing fewer.
    pub fewer: usize,
}

/// Per-building difference of a candidate allocation against a baseline,
/// with an exact histogram (one bin per distinct delta) and the
/// same/more/fewer summary. Rows follow the baseline's building order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllocationDiff {
    rows: IndexMap<BuildingId, DiffRow>,
    histogram: BTreeMap<i64, usize>,
    summary: DiffSummary,
}

impl AllocationDiff {
    pub fn rows(&self) -> impl Iterator<Item = (&BuildingId, &DiffRow)> {
        self.rows.iter()
    }

    pub fn delta(&self, id: &BuildingId) -> Option<i64> {
        self.rows.get(id).map(|r| r.delta)
    }

    pub fn per_building_delta(&self) -> impl Iterator<Item = (&BuildingId, i64)> {
        self.rows.iter().map(|(id, r)| (id, r.delta))
    }

    /// Occupied bins only: distinct delta value -> building count.
    pub fn histogram(&self) -> &BTreeMap<i64, usize> {
        &self.histogram
    }

    pub fn summary(&self) -> DiffSummary {
        self.summary
    }

    pub fn building_count(&self) -> usize {
        self.rows.len()
    }

    /// Sign of mean minus median of the deltas, the informal skew
    /// direction: positive means right-skewed. Exact integer compare of
    /// 2*n*sum against n*(twice the median).
    pub fn skew_direction(&self) -> std::cmp::Ordering {
        let n = self.rows.len() as i128;
        if n == 0 {
            return std::cmp::Ordering::Equal;
        }
        let sum: i128 = self.rows.values().map(|r| i128::from(r.delta)).sum();
        let mut deltas: Vec<i64> = self.rows.values().map(|r| r.delta).collect();
        deltas.sort_unstable();
        let twice_median = if deltas.len() % 2 == 1 {
            2 * i128::from(deltas[deltas.len() / 2])
        } else {
            i128::from(deltas[deltas.len() / 2 - 1]) + i128::from(deltas[deltas.len() / 2])
        };
        (2 * sum).cmp(&(n * twice_median))
    }
}

/// Compares a candidate allocation against a baseline over the same
/// building set.
pub fn diff(
    candidate: &BuildingAllocation,
    baseline: &BuildingAllocation,
) -> Result<AllocationDiff, ReportError> {
    let only_baseline: Vec<&BuildingId> = baseline
        .buildings()
        .map(|(id, _)| id)
        .filter(|id| candidate.stations(id).is_none())
        .collect();
    let only_candidate: Vec<&BuildingId> = candidate
        .buildings()
        .map(|(id, _)| id)
        .filter(|id| baseline.stations(id).is_none())
        .collect();
    if !only_baseline.is_empty() || !only_candidate.is_empty() {
        let join = |ids: Vec<&BuildingId>| {
            ids.iter()
                .map(|id| id.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        };
        return Err(ReportError::BuildingSetMismatch {
            only_baseline: join(only_baseline),
            only_candidate: join(only_candidate),
        });
    }

    let mut rows = IndexMap::with_capacity(baseline.building_count());
    let mut histogram: BTreeMap<i64, usize> = BTreeMap::new();
    let mut summary = DiffSummary {
        same: 0,
        more: 0,
        fewer: 0,
    };
    for (id, base) in baseline.buildings() {
        let cand = candidate.stations(id).expect("set equality checked");
        let delta = i64::from(cand) - i64::from(base);
        *histogram.entry(delta).or_insert(0) += 1;
        match delta.cmp(&0) {
            std::cmp::Ordering::Equal => summary.same += 1,
            std::cmp::Ordering::Greater => summary.more += 1,
            std::cmp::Ordering::Less => summary.fewer += 1,
        }
        rows.insert(
            id.clone(),
            DiffRow {
                baseline: base,
                candidate: cand,
                delta,
            },
        );
    }
    Ok(AllocationDiff {
        rows,
        histogram,
        summary,
    })
}

/// One building's allocation range across snapshots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SensitivityRow {
    pub min_alloc: u32,
    pub max_alloc: u32,
}

impl SensitivityRow {
    pub fn spread(&self) -> u32 {
        self.max_alloc - self.min_alloc
    }
}

/// How stable a model's recommendation is when the demand week changes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityReport {
    snapshot_labels: Vec<String>,
    per_building: IndexMap<BuildingId, SensitivityRow>,
    /// Buildings allocated identically in every snapshot, over all
    /// buildings.
    agreement_fraction: f64,
    /// Largest per-building difference between any two snapshots.
    max_abs_delta: u32,
}

impl SensitivityReport {
    pub fn snapshot_labels(&self) -> &[String] {
        &self.snapshot_labels
    }

    pub fn per_building(&self) -> impl Iterator<Item = (&BuildingId, &SensitivityRow)> {
        self.per_building.iter()
    }

    pub fn agreement_fraction(&self) -> f64 {
        self.agreement_fraction
    }

    pub fn max_abs_delta(&self) -> u32 {
        self.max_abs_delta
    }

    pub fn building_count(&self) -> usize {
        self.per_building.len()
    }
}

/// Runs an allocator over each snapshot and reports per-building
/// stability. All snapshots must resolve against the same registry; a
/// mismatch surfaces as the allocator's own lookup error.
pub fn sensitivity<F>(
    allocate: F,
    snapshots: &[DemandSnapshot],
) -> Result<SensitivityReport, ReportError>
where
    F: Fn(&DemandSnapshot) -> Result<BuildingAllocation, SolveError>,
{
    if snapshots.len() < 2 {
        return Err(ReportError::TooFewSnapshots(snapshots.len()));
    }
    let allocations: Vec<BuildingAllocation> =
        snapshots.iter().map(&allocate).collect::<Result<_, _>>()?;

    let mut per_building: IndexMap<BuildingId, SensitivityRow> = IndexMap::new();
    let first = &allocations[0];
    for (id, stations) in first.buildings() {
        per_building.insert(
            id.clone(),
            SensitivityRow {
                min_alloc: stations,
                max_alloc: stations,
            },
        );
    }
    for alloc in &allocations[1..] {
        // every run must cover exactly the first run's building set
        if alloc.building_count() != per_building.len()
            || alloc
                .buildings()
                .any(|(id, _)| !per_building.contains_key(id))
        {
            let only_first: Vec<&str> = per_building
                .keys()
                .filter(|id| alloc.stations(id).is_none())
                .map(BuildingId::as_str)
                .collect();
            let only_later: Vec<&str> = alloc
                .buildings()
                .filter(|&(id, _)| !per_building.contains_key(id))
                .map(|(id, _)| id.as_str())
                .collect();
            return Err(ReportError::BuildingSetMismatch {
                only_baseline: only_first.join(", "),
                only_candidate: only_later.join(", "),
            });
        }
        for (id, row) in per_building.iter_mut() {
            let stations = alloc.stations(id).expect("set equality checked");
            row.min_alloc = row.min_alloc.min(stations);
            row.max_alloc = row.max_alloc.max(stations);
        }
    }

    let total = per_building.len();
    let stable = per_building.values().filter(|r| r.spread() == 0).count();
    let agreement_fraction = if total == 0 {
        1.0
    } else {
        stable as f64 / total as f64
    };
    let max_abs_delta = per_building
        .values()
        .map(SensitivityRow::spread)
        .max()
        .unwrap_or(0);

    Ok(SensitivityReport {
        snapshot_labels: snapshots.iter().map(|s| s.label().to_string()).collect(),
        per_building,
        agreement_fraction,
        max_abs_delta,
    })
}
