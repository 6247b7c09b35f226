//! CSV ingest and serialization for the external file formats:
//!
//! - campus registry: `building_id,display_name,door_count,baseline_stations`
//! - door-access demand: `building_id,door_label,week,event_count`
//! - coverage instance: `classroom_id,site_id,seconds`
//! - allocation interchange: `building_id,door_label,stations`
//! - allocation-columns table: `building_id,display_name,initial,heuristic,model2,model4`
//! - quotas: `building_id,quota`
//!
//! All files are UTF-8 with a mandatory header; `\n` and `\r\n` both
//! work. Loaders never drop a row silently: in lenient mode a bad row is
//! rejected and reported in the [`IngestReport`], in strict mode it is a
//! hard error. Some defects (duplicate ids, negative counts, impossible
//! door counts) are hard errors in every mode.
//!
//! External door labels are opaque strings; each loader maps them to
//! dense 0-based indices per building in first-seen order.

mod allocation;
mod appendix;
mod coverage;
mod demand;
mod quotas;
mod registry;

pub use allocation::{load_allocation, write_allocation_csv};
pub(crate) use appendix::is_columns_header;
pub use appendix::{load_allocation_columns, AllocationColumn, AllocationColumns};
pub use coverage::load_coverage_instance;
pub use demand::{load_demand, load_demand_weeks, write_demand_csv, WeekSelect};
pub use quotas::load_quotas;
pub use registry::{load_registry, write_registry_csv};

use thiserror::Error;

/// How loaders treat recoverable row defects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IngestMode {
    /// Reject bad rows with a warning and keep going.
    #[default]
    Lenient,
    /// Any rejected row is a hard error. Meant for CI fixtures.
    Strict,
}

impl IngestMode {
    pub fn is_strict(self) -> bool {
        matches!(self, IngestMode::Strict)
    }
}

/// What a loader saw: rows consumed, rows it had to reject, and one
/// warning per rejected row (file line number, message).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub rows_read: u64,
    pub rows_rejected: u64,
    pub warnings: Vec<(u64, String)>,
}

impl IngestReport {
    fn read_row(&mut self) {
        self.rows_read += 1;
    }

    fn reject(&mut self, row: u64, message: impl Into<String>) {
        self.rows_rejected += 1;
        self.warnings.push((row, message.into()));
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("expected header '{expected}', found '{found}'")]
    Header { expected: String, found: String },

    #[error("row {row}: {message}")]
    Invalid { row: u64, message: String },

    #[error("duplicate building id '{id}' (rows {first_row} and {second_row})")]
    DuplicateBuilding {
        id: String,
        first_row: u64,
        second_row: u64,
    },

    #[error("demand file mixes weeks [{weeks}]; pick one with a week selector")]
    MixedWeeks { weeks: String },

    #[error("week '{week}' not found in demand file (available: {available})")]
    UnknownWeek { week: String, available: String },

    #[error("demand file has no data rows")]
    NoWeeks,

    #[error("coverage matrix is missing the pair (classroom '{classroom}', site '{site}')")]
    MissingPair { classroom: String, site: String },

    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
}

/// Reads and checks the header row. Column names and their order are
/// fixed per format.
fn expect_header<R: std::io::Read>(
    reader: &mut csv::Reader<R>,
    expected: &[&str],
) -> Result<(), IngestError> {
    let found = reader.headers()?;
    if found.iter().ne(expected.iter().copied()) {
        return Err(IngestError::Header {
            expected: expected.join(","),
            found: found.iter().collect::<Vec<_>>().join(","),
        });
    }
    Ok(())
}

/// File line of a record, for error messages.
fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

fn csv_reader<R: std::io::Read>(source: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(source)
}

/// Integer field that must parse and be non-negative. Distinguishes a
/// malformed value (recoverable) from an explicitly negative one (hard
/// error at the caller's discretion).
enum IntField {
    Value(u64),
    Negative(i128),
    Malformed,
}

fn parse_count(raw: &str) -> IntField {
    match raw.trim().parse::<i128>() {
        Ok(v) if v < 0 => IntField::Negative(v),
        Ok(v) => match u64::try_from(v) {
            Ok(v) => IntField::Value(v),
            Err(_) => IntField::Malformed,
        },
        Err(_) => IntField::Malformed,
    }
}
