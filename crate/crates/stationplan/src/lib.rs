//! Facility-location models for placing hand-sanitizer stations across a
//! campus, driven by weekly door-access counts.
//!
//! The suite covers five ways to allocate stations, all solved exactly at
//! the scale of a campus (tens of buildings, a handful of doors each):
//!
//! - [`heuristic`]: demand-proportional ceiling shares per building.
//! - [`cover`]: maximal classroom coverage within one building, plus the
//!   min-max travel-time (p-center) threshold search.
//! - [`target`]: campus-wide building allocation minimizing the squared
//!   gap between demand and supplied pumps.
//! - [`doors`]: door-level placement, either holding each building to a
//!   fixed quota or re-optimizing over a campus-wide budget.
//! - [`report`]: allocation diffs against a baseline deployment,
//!   histograms, and multi-week sensitivity checks.
//!
//! Inputs arrive as CSV ([`ingest`]); the [`cli`] module wires everything
//! into the `stationplan` binary. All solvers are deterministic: ties
//! break by registry order and then door index, so identical inputs give
//! byte-identical outputs.

pub mod cli;
pub mod cover;
pub mod doors;
pub mod error;
pub mod heuristic;
pub mod ingest;
pub mod model;
pub mod report;
pub mod target;

pub use error::{ErrorKind, SolveError};
pub use model::{
    Building, BuildingAllocation, BuildingId, CampusRegistry, CoverageInstance, DemandSnapshot,
    DoorRef, ModelError, ModelParams, ModelTag,
};
