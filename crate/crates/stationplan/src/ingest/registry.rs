use std::collections::HashMap;
use std::io::Read;

use crate::model::{Building, BuildingId, CampusRegistry};

use super::{csv_reader, expect_header, line_of, IngestError, IngestMode, IngestReport, IntField};

const HEADER: [&str; 4] = [
    "building_id",
    "display_name",
    "door_count",
    "baseline_stations",
];

/// Loads the campus registry. Row order becomes registry order.
///
/// Duplicate ids and non-positive door counts are hard errors in every
/// mode; otherwise-malformed rows are rejected with a warning unless
/// strict mode turns them into hard errors too.
pub fn load_registry(
    source: impl Read,
    mode: IngestMode,
) -> Result<(CampusRegistry, IngestReport), IngestError> {
    let mut reader = csv_reader(source);
    expect_header(&mut reader, &HEADER)?;

    let mut report = IngestReport::default();
    let mut buildings: Vec<Building> = Vec::new();
    let mut seen: HashMap<String, u64> = HashMap::new();

    for record in reader.records() {
        let record = record?;
        let row = line_of(&record);
        report.read_row();

        let bad = |report: &mut IngestReport, message: String| -> Result<(), IngestError> {
            if mode.is_strict() {
                Err(IngestError::Invalid { row, message })
            } else {
                report.reject(row, message);
                Ok(())
            }
        };

        if record.len() != HEADER.len() {
            bad(
                &mut report,
                format!("expected {} fields, found {}", HEADER.len(), record.len()),
            )?;
            continue;
        }
        let id_raw = &record[0];
        if id_raw.is_empty() {
            bad(&mut report, "building_id must be non-empty".to_string())?;
            continue;
        }
        if let Some(&first_row) = seen.get(id_raw) {
            return Err(IngestError::DuplicateBuilding {
                id: id_raw.to_string(),
                first_row,
                second_row: row,
            });
        }

        let door_count = match record[2].trim().parse::<i64>() {
            Ok(v) if v <= 0 => {
                return Err(IngestError::Invalid {
                    row,
                    message: format!("door_count must be >= 1 for building '{id_raw}', got {v}"),
                });
            }
            Ok(v) => v as usize,
            Err(_) => {
                bad(
                    &mut report,
                    format!("door_count '{}' is not an integer", &record[2]),
                )?;
                continue;
            }
        };
        let baseline = match parse_baseline(&record[3]) {
            Some(v) => v,
            None => {
                bad(
                    &mut report,
                    format!(
                        "baseline_stations '{}' is not a non-negative integer",
                        &record[3]
                    ),
                )?;
                continue;
            }
        };

        let id = BuildingId::new(id_raw)?;
        seen.insert(id_raw.to_string(), row);
        buildings.push(Building::new(
            id,
            record[1].to_string(),
            door_count,
            baseline,
        )?);
    }

    Ok((CampusRegistry::new(buildings)?, report))
}

fn parse_baseline(raw: &str) -> Option<u32> {
    match super::parse_count(raw) {
        IntField::Value(v) => u32::try_from(v).ok(),
        _ => None,
    }
}

/// Inverse of [`load_registry`]: reloading the output yields an
/// identical registry.
pub fn write_registry_csv(registry: &CampusRegistry) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(HEADER).expect("in-memory write");
    for b in registry.buildings() {
        writer
            .write_record([
                b.id().as_str(),
                b.display_name(),
                &b.door_count().to_string(),
                &b.baseline_stations().to_string(),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_rows_in_order() {
        let csv = "building_id,display_name,door_count,baseline_stations\n\
                   b1,Building One,4,2\n\
                   b2,Building Two,1,0\n";
        let (registry, report) = load_registry(csv.as_bytes(), IngestMode::Strict).unwrap();
        assert_eq!(registry.len(), 2);
        assert_eq!(registry.buildings()[0].id().as_str(), "b1");
        assert_eq!(registry.buildings()[0].door_count(), 4);
        assert_eq!(registry.total_baseline_stations(), 2);
        assert_eq!(report.rows_read, 2);
        assert_eq!(report.rows_rejected, 0);
    }

    #[test]
    fn header_only_gives_empty_registry() {
        let csv = "building_id,display_name,door_count,baseline_stations\n";
        let (registry, report) = load_registry(csv.as_bytes(), IngestMode::Lenient).unwrap();
        assert!(registry.is_empty());
        assert_eq!(report.rows_read, 0);
    }

    #[test]
    fn wrong_header_is_named() {
        let csv = "id,name,doors,baseline\nb1,B,2,1\n";
        let err = load_registry(csv.as_bytes(), IngestMode::Lenient).unwrap_err();
        assert!(matches!(err, IngestError::Header { .. }));
        assert!(err.to_string().contains("building_id"));
    }

    #[test]
    fn duplicate_id_is_always_hard_and_names_both_rows() {
        let csv = "building_id,display_name,door_count,baseline_stations\n\
                   b1,One,2,1\n\
                   b2,Two,2,1\n\
                   b1,One Again,3,0\n";
        for mode in [IngestMode::Lenient, IngestMode::Strict] {
            let err = load_registry(csv.as_bytes(), mode).unwrap_err();
            match err {
                IngestError::DuplicateBuilding {
                    id,
                    first_row,
                    second_row,
                } => {
                    assert_eq!(id, "b1");
                    assert_eq!((first_row, second_row), (2, 4));
                }
                other => panic!("expected duplicate error, got {other}"),
            }
        }
    }

    #[test]
    fn zero_door_count_is_always_hard() {
        let csv = "building_id,display_name,door_count,baseline_stations\nb1,One,0,1\n";
        for mode in [IngestMode::Lenient, IngestMode::Strict] {
            let err = load_registry(csv.as_bytes(), mode).unwrap_err();
            assert!(err.to_string().contains("b1"), "{err}");
        }
    }

    #[test]
    fn malformed_row_rejected_leniently_but_hard_in_strict() {
        let csv = "building_id,display_name,door_count,baseline_stations\n\
                   b1,One,abc,1\n\
                   b2,Two,2,1\n";
        let (registry, report) = load_registry(csv.as_bytes(), IngestMode::Lenient).unwrap();
        assert_eq!(registry.len(), 1);
        assert_eq!(report.rows_read, 2);
        assert_eq!(report.rows_rejected, 1);
        assert_eq!(report.warnings.len(), 1);
        assert_eq!(report.warnings[0].0, 2);

        let err = load_registry(csv.as_bytes(), IngestMode::Strict).unwrap_err();
        assert!(matches!(err, IngestError::Invalid { row: 2, .. }));
    }

    #[test]
    fn crlf_line_endings_accepted() {
        let csv = "building_id,display_name,door_count,baseline_stations\r\nb1,One,2,1\r\n";
        let (registry, _) = load_registry(csv.as_bytes(), IngestMode::Strict).unwrap();
        assert_eq!(registry.len(), 1);
    }

    #[test]
    fn round_trip_is_identity() {
        let csv = "building_id,display_name,door_count,baseline_stations\n\
                   b1,Building One,4,2\n\
                   b2,Building Two,1,0\n\
                   b3,Third,7,12\n";
        let (registry, _) = load_registry(csv.as_bytes(), IngestMode::Strict).unwrap();
        let written = write_registry_csv(&registry);
        let (reloaded, _) = load_registry(written.as_bytes(), IngestMode::Strict).unwrap();
        assert_eq!(registry, reloaded);
        assert_eq!(written, csv);
    }

    #[test]
    fn display_names_with_commas_round_trip_quoted() {
        let registry = CampusRegistry::new(vec![Building::new(
            BuildingId::new("lee-hall").unwrap(),
            "Lee Hall, Annex \"B\"",
            3,
            2,
        )
        .unwrap()])
        .unwrap();
        let written = write_registry_csv(&registry);
        assert!(written.contains("\"Lee Hall, Annex \"\"B\"\"\""));
        let (reloaded, _) = load_registry(written.as_bytes(), IngestMode::Strict).unwrap();
        assert_eq!(registry, reloaded);
    }
}
