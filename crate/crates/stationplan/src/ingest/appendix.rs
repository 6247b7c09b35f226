use std::collections::HashMap;
use std::io::Read;

use crate::model::{BuildingAllocation, BuildingId, ModelTag};

use super::{csv_reader, expect_header, line_of, IngestError, IntField};

const HEADER: [&str; 6] = [
    "building_id",
    "display_name",
    "initial",
    "heuristic",
    "model2",
    "model4",
];

/// One of the four allocation columns in the bundled deployment table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllocationColumn {
    Initial,
    Heuristic,
    Model2,
    Model4,
}

impl AllocationColumn {
    pub fn name(self) -> &'static str {
        match self {
            AllocationColumn::Initial => "initial",
            AllocationColumn::Heuristic => "heuristic",
            AllocationColumn::Model2 => "model2",
            AllocationColumn::Model4 => "model4",
        }
    }
}

/// The bundled deployment table: per building, the initial deployment
/// and the three model recommendations, all as building-level
/// allocations sharing one building order.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationColumns {
    pub buildings: Vec<(BuildingId, String)>,
    pub initial: BuildingAllocation,
    pub heuristic: BuildingAllocation,
    pub model2: BuildingAllocation,
    pub model4: BuildingAllocation,
}

impl AllocationColumns {
    pub fn column(&self, column: AllocationColumn) -> &BuildingAllocation {
        match column {
            AllocationColumn::Initial => &self.initial,
            AllocationColumn::Heuristic => &self.heuristic,
            AllocationColumn::Model2 => &self.model2,
            AllocationColumn::Model4 => &self.model4,
        }
    }
}

/// Does this header belong to the allocation-columns table rather than
/// the single-allocation interchange format?
pub(crate) fn is_columns_header(header: &csv::StringRecord) -> bool {
    header.iter().eq(HEADER.iter().copied())
}

/// Loads the allocation-columns table. Fixture-grade input: every defect
/// is a hard error.
pub fn load_allocation_columns(source: impl Read) -> Result<AllocationColumns, IngestError> {
    let mut reader = csv_reader(source);
    expect_header(&mut reader, &HEADER)?;

    let mut buildings = Vec::new();
    let mut columns: [Vec<(BuildingId, u32)>; 4] = Default::default();
    let mut seen: HashMap<String, u64> = HashMap::new();

    for record in reader.records() {
        let record = record?;
        let row = line_of(&record);
        if record.len() != HEADER.len() {
            return Err(IngestError::Invalid {
                row,
                message: format!("expected {} fields, found {}", HEADER.len(), record.len()),
            });
        }
        let id_raw = &record[0];
        if let Some(&first_row) = seen.get(id_raw) {
            return Err(IngestError::DuplicateBuilding {
                id: id_raw.to_string(),
                first_row,
                second_row: row,
            });
        }
        seen.insert(id_raw.to_string(), row);
        let id = BuildingId::new(id_raw).map_err(|_| IngestError::Invalid {
            row,
            message: "building_id must be non-empty".to_string(),
        })?;
        buildings.push((id.clone(), record[1].to_string()));

        for (slot, field) in columns.iter_mut().zip(2..HEADER.len()) {
            let stations = match super::parse_count(&record[field]) {
                IntField::Value(v) => u32::try_from(v).ok(),
                _ => None,
            }
            .ok_or_else(|| IngestError::Invalid {
                row,
                message: format!(
                    "{} '{}' is not a non-negative integer for building '{id_raw}'",
                    HEADER[field], &record[field]
                ),
            })?;
            slot.push((id.clone(), stations));
        }
    }

    let [initial, heuristic, model2, model4] = columns;
    Ok(AllocationColumns {
        buildings,
        initial: BuildingAllocation::building_level(ModelTag::Baseline, initial)?,
        heuristic: BuildingAllocation::building_level(ModelTag::Heuristic, heuristic)?,
        model2: BuildingAllocation::building_level(ModelTag::Target, model2)?,
        model4: BuildingAllocation::building_level(ModelTag::DoorsUnrestricted, model4)?,
    })
}
