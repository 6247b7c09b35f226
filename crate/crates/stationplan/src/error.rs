//! Error type shared by the allocation solvers, with a coarse kind used
//! by the CLI to pick exit statuses.

use thiserror::Error;

use crate::model::{BuildingId, ModelError};

/// How a solver failure should be classified downstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Caller passed an out-of-range or missing parameter.
    Argument,
    /// The instance admits no feasible solution under the constraints.
    Infeasible,
    /// The input data makes the model undefined or inconsistent.
    Data,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("total stations must be at least 1")]
    ZeroTotal,

    #[error("pumps per station must be at least 1")]
    ZeroPumps,

    #[error("per-door cap must be at least 1")]
    ZeroDoorCap,

    #[error("station count {p} out of range 1..={sites} ({sites} candidate sites)")]
    StationCountOutOfRange { p: usize, sites: usize },

    #[error("campus demand is zero; demand-proportional shares are undefined")]
    ZeroTotalDemand,

    #[error(
        "{total} stations cannot give each of {buildings} buildings at least one \
         (short by {shortfall})"
    )]
    BudgetBelowBuildingCount {
        total: u32,
        buildings: usize,
        shortfall: u64,
    },

    #[error("total stations {total} exceeds campus door capacity {doors}")]
    BudgetExceedsDoorCapacity { total: u32, doors: u64 },

    #[error(
        "quota {quota} for building '{building}' exceeds its door capacity {capacity} \
         ({doors} doors x cap {cap})"
    )]
    QuotaExceedsCapacity {
        building: BuildingId,
        quota: u32,
        doors: usize,
        cap: u32,
        capacity: u64,
    },

    #[error("no quota given for building '{0}'")]
    MissingQuota(BuildingId),

    #[error(transparent)]
    Model(#[from] ModelError),
}

impl SolveError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            SolveError::ZeroTotal
            | SolveError::ZeroPumps
            | SolveError::ZeroDoorCap
            | SolveError::StationCountOutOfRange { .. }
            | SolveError::MissingQuota(_) => ErrorKind::Argument,
            SolveError::BudgetBelowBuildingCount { .. }
            | SolveError::BudgetExceedsDoorCapacity { .. }
            | SolveError::QuotaExceedsCapacity { .. } => ErrorKind::Infeasible,
            SolveError::ZeroTotalDemand | SolveError::Model(_) => ErrorKind::Data,
        }
    }
}
