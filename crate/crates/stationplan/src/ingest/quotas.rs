use std::io::Read;

use indexmap::IndexMap;

use crate::model::{BuildingId, CampusRegistry};

use super::{csv_reader, expect_header, line_of, IngestError, IntField};

const HEADER: [&str; 2] = ["building_id", "quota"];

/// Loads per-building quotas for the restricted door model. The file
/// must mention every registry building exactly once and nothing else.
pub fn load_quotas(
    source: impl Read,
    registry: &CampusRegistry,
) -> Result<IndexMap<BuildingId, u32>, IngestError> {
    let mut reader = csv_reader(source);
    expect_header(&mut reader, &HEADER)?;

    let mut quotas: IndexMap<BuildingId, u32> = IndexMap::new();
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
        let Some(building) = registry
            .buildings()
            .iter()
            .find(|b| b.id().as_str() == id_raw)
        else {
            return Err(IngestError::Invalid {
                row,
                message: format!("building '{id_raw}' not in registry"),
            });
        };
        let quota = match super::parse_count(&record[1]) {
            IntField::Value(v) => u32::try_from(v).ok(),
            _ => None,
        }
        .ok_or_else(|| IngestError::Invalid {
            row,
            message: format!(
                "quota '{}' for building '{id_raw}' is not a non-negative integer",
                &record[1]
            ),
        })?;
        if quotas.insert(building.id().clone(), quota).is_some() {
            return Err(IngestError::Invalid {
                row,
                message: format!("building '{id_raw}' listed twice"),
            });
        }
    }

    let missing: Vec<&str> = registry
        .buildings()
        .iter()
        .filter(|b| !quotas.contains_key(b.id()))
        .map(|b| b.id().as_str())
        .collect();
    if !missing.is_empty() {
        return Err(IngestError::Invalid {
            row: 0,
            message: format!("no quota for building(s): {}", missing.join(", ")),
        });
    }
    Ok(quotas)
}
