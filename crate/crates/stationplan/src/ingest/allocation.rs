use std::io::Read;

use indexmap::IndexMap;

use crate::model::{BuildingAllocation, BuildingId, DoorRef, ModelTag};

use super::{csv_reader, expect_header, line_of, IngestError, IntField};

const HEADER: [&str; 3] = ["building_id", "door_label", "stations"];

/// Loads the allocation interchange format. An empty `door_label` means
/// a building-level row; the file must be entirely one kind or the
/// other. The tag is supplied by the caller since the format does not
/// carry provenance.
pub fn load_allocation(
    source: impl Read,
    tag: ModelTag,
) -> Result<BuildingAllocation, IngestError> {
    let mut reader = csv_reader(source);
    expect_header(&mut reader, &HEADER)?;

    let mut building_rows: Vec<(BuildingId, u32)> = Vec::new();
    let mut door_rows: Vec<(DoorRef, u32)> = Vec::new();
    let mut door_index: IndexMap<BuildingId, IndexMap<String, usize>> = IndexMap::new();

    for record in reader.records() {
        let record = record?;
        let row = line_of(&record);
        if record.len() != HEADER.len() {
            return Err(IngestError::Invalid {
                row,
                message: format!("expected {} fields, found {}", HEADER.len(), record.len()),
            });
        }
        let stations = match super::parse_count(&record[2]) {
            IntField::Value(v) => u32::try_from(v).map_err(|_| IngestError::Invalid {
                row,
                message: format!("stations '{v}' is too large"),
            })?,
            _ => {
                return Err(IngestError::Invalid {
                    row,
                    message: format!("stations '{}' is not a non-negative integer", &record[2]),
                })
            }
        };
        let id = BuildingId::new(&record[0]).map_err(|_| IngestError::Invalid {
            row,
            message: "building_id must be non-empty".to_string(),
        })?;

        let label = &record[1];
        if label.is_empty() {
            building_rows.push((id, stations));
        } else {
            let labels = door_index.entry(id.clone()).or_default();
            let next = labels.len();
            let door = *labels.entry(label.to_string()).or_insert(next);
            door_rows.push((DoorRef::new(id, door), stations));
        }
    }

    match (building_rows.is_empty(), door_rows.is_empty()) {
        (false, false) => Err(IngestError::Invalid {
            row: 0,
            message: "file mixes building-level and door-level rows".to_string(),
        }),
        (true, false) => Ok(BuildingAllocation::door_level(tag, door_rows)?),
        // an empty file is a valid empty building-level allocation
        _ => Ok(BuildingAllocation::building_level(tag, building_rows)?),
    }
}

/// Inverse of [`load_allocation`]. Door-level allocations use the door
/// index as the label, so a reload reproduces the same indices.
pub fn write_allocation_csv(allocation: &BuildingAllocation) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(HEADER).expect("in-memory write");
    match allocation.per_door() {
        Some(per_door) => {
            for (door, stations) in per_door {
                writer
                    .write_record([
                        door.building.as_str(),
                        &door.door_index.to_string(),
                        &stations.to_string(),
                    ])
                    .expect("in-memory write");
            }
        }
        None => {
            for (building, stations) in allocation.buildings() {
                writer
                    .write_record([building.as_str(), "", &stations.to_string()])
                    .expect("in-memory write");
            }
        }
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}
