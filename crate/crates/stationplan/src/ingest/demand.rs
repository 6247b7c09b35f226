use std::io::Read;

use indexmap::IndexMap;

use crate::model::{BuildingId, CampusRegistry, DemandSnapshot, DoorRef};

use super::{csv_reader, expect_header, line_of, IngestError, IngestMode, IngestReport, IntField};

const HEADER: [&str; 4] = ["building_id", "door_label", "week", "event_count"];

/// Which week(s) of a demand file to load.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeekSelect {
    /// The file must contain exactly one distinct week.
    Single,
    /// Load this week's rows only.
    Label(String),
    /// Sum counts across every week in the file.
    Aggregate,
}

struct ParsedDemand {
    /// week -> door -> summed count, in first-seen order
    weeks: IndexMap<String, IndexMap<DoorRef, u64>>,
    report: IngestReport,
}

/// Shared row scan. Door labels become dense per-building indices in
/// first-seen order across the whole file, so every week shares one
/// index space.
fn parse_rows(
    source: impl Read,
    registry: &CampusRegistry,
    mode: IngestMode,
) -> Result<ParsedDemand, IngestError> {
    let mut reader = csv_reader(source);
    expect_header(&mut reader, &HEADER)?;

    let mut report = IngestReport::default();
    let mut door_index: IndexMap<BuildingId, IndexMap<String, usize>> = IndexMap::new();
    let mut weeks: IndexMap<String, IndexMap<DoorRef, u64>> = IndexMap::new();

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
        let count = match super::parse_count(&record[3]) {
            IntField::Value(v) => v,
            IntField::Negative(v) => {
                // negative counts are corrupt data in every mode
                return Err(IngestError::Invalid {
                    row,
                    message: format!("event_count must be >= 0, got {v}"),
                });
            }
            IntField::Malformed => {
                bad(
                    &mut report,
                    format!("event_count '{}' is not an integer", &record[3]),
                )?;
                continue;
            }
        };

        let id_raw = &record[0];
        let Some(building) = registry
            .buildings()
            .iter()
            .find(|b| b.id().as_str() == id_raw)
        else {
            bad(&mut report, format!("building '{id_raw}' not in registry"))?;
            continue;
        };

        let label = record[1].to_string();
        let labels = door_index.entry(building.id().clone()).or_default();
        let next_index = labels.len();
        let door = match labels.get(&label) {
            Some(&i) => i,
            None => {
                if next_index >= building.door_count() {
                    return Err(IngestError::Invalid {
                        row,
                        message: format!(
                            "door label '{label}' would be distinct door {} of building \
                             '{id_raw}', which has only {} doors",
                            next_index + 1,
                            building.door_count()
                        ),
                    });
                }
                labels.insert(label.clone(), next_index);
                next_index
            }
        };

        let week = record[2].to_string();
        let door_ref = DoorRef::new(building.id().clone(), door);
        *weeks.entry(week).or_default().entry(door_ref).or_insert(0) += count;
    }

    Ok(ParsedDemand { weeks, report })
}

fn build_snapshot(
    registry: &CampusRegistry,
    label: &str,
    counts: &IndexMap<DoorRef, u64>,
) -> Result<DemandSnapshot, IngestError> {
    Ok(DemandSnapshot::with_counts(
        registry,
        label,
        counts.iter().map(|(door, &c)| (door.clone(), c)),
    )?)
}

/// Loads one snapshot according to the week selector.
pub fn load_demand(
    source: impl Read,
    registry: &CampusRegistry,
    select: WeekSelect,
    mode: IngestMode,
) -> Result<(DemandSnapshot, IngestReport), IngestError> {
    let parsed = parse_rows(source, registry, mode)?;
    let weeks = &parsed.weeks;

    let snapshot = match select {
        WeekSelect::Single => match weeks.len() {
            0 => return Err(IngestError::NoWeeks),
            1 => {
                let (week, counts) = weeks.first().expect("len checked");
                build_snapshot(registry, week, counts)?
            }
            _ => {
                return Err(IngestError::MixedWeeks {
                    weeks: week_list(weeks),
                })
            }
        },
        WeekSelect::Label(week) => match weeks.get(&week) {
            Some(counts) => build_snapshot(registry, &week, counts)?,
            None => {
                return Err(IngestError::UnknownWeek {
                    week,
                    available: week_list(weeks),
                })
            }
        },
        WeekSelect::Aggregate => {
            if weeks.is_empty() {
                return Err(IngestError::NoWeeks);
            }
            let label = weeks.keys().cloned().collect::<Vec<_>>().join("+");
            let mut snapshot = DemandSnapshot::new(registry, label);
            for counts in weeks.values() {
                for (door, &count) in counts {
                    snapshot.add(door, count)?;
                }
            }
            snapshot
        }
    };
    Ok((snapshot, parsed.report))
}

/// Loads every week in the file as its own snapshot, in first-seen
/// order. Used by the multi-week sensitivity analysis.
pub fn load_demand_weeks(
    source: impl Read,
    registry: &CampusRegistry,
    mode: IngestMode,
) -> Result<(Vec<DemandSnapshot>, IngestReport), IngestError> {
    let parsed = parse_rows(source, registry, mode)?;
    if parsed.weeks.is_empty() {
        return Err(IngestError::NoWeeks);
    }
    let mut snapshots = Vec::with_capacity(parsed.weeks.len());
    for (week, counts) in &parsed.weeks {
        snapshots.push(build_snapshot(registry, week, counts)?);
    }
    Ok((snapshots, parsed.report))
}

fn week_list(weeks: &IndexMap<String, IndexMap<DoorRef, u64>>) -> String {
    weeks.keys().cloned().collect::<Vec<_>>().join(", ")
}

/// Serializes a snapshot with door indices as labels. Reloading against
/// the same registry reproduces the snapshot exactly.
pub fn write_demand_csv(snapshot: &DemandSnapshot) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(HEADER).expect("in-memory write");
    for (building, counts) in snapshot.buildings() {
        for (door, &count) in counts.iter().enumerate() {
            writer
                .write_record([
                    building.as_str(),
                    &door.to_string(),
                    snapshot.label(),
                    &count.to_string(),
                ])
                .expect("in-memory write");
        }
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::load_registry;

    fn registry() -> CampusRegistry {
        let csv = "building_id,display_name,door_count,baseline_stations\n\
                   b1,One,2,1\n\
                   b2,Two,3,1\n";
        load_registry(csv.as_bytes(), IngestMode::Strict).unwrap().0
    }

    fn bid(s: &str) -> BuildingId {
        BuildingId::new(s).unwrap()
    }

    #[test]
    fn labels_map_to_first_seen_indices() {
        let reg = registry();
        let csv = "building_id,door_label,week,event_count\n\
                   b1,main,W1,50\n\
                   b1,side,W1,30\n";
        let (snap, report) =
            load_demand(csv.as_bytes(), &reg, WeekSelect::Single, IngestMode::Strict).unwrap();
        assert_eq!(snap.label(), "W1");
        assert_eq!(snap.building_demand(&bid("b1")).unwrap(), 80);
        assert_eq!(snap.door_counts(&bid("b1")).unwrap(), &[50, 30]);
        assert_eq!(report.rows_read, 2);
    }

    #[test]
    fn duplicate_door_rows_sum() {
        let reg = registry();
        let csv = "building_id,door_label,week,event_count\n\
                   b1,main,W1,20\n\
                   b1,main,W1,22\n";
        let (snap, _) =
            load_demand(csv.as_bytes(), &reg, WeekSelect::Single, IngestMode::Strict).unwrap();
        assert_eq!(snap.door_counts(&bid("b1")).unwrap(), &[42, 0]);
    }

    #[test]
    fn unknown_building_warns_leniently_and_fails_strict() {
        let reg = registry();
        let csv = "building_id,door_label,week,event_count\n\
                   nowhere,main,W1,5\n\
                   b1,main,W1,7\n";
        let (snap, report) = load_demand(
            csv.as_bytes(),
            &reg,
            WeekSelect::Single,
            IngestMode::Lenient,
        )
        .unwrap();
        assert_eq!(snap.building_demand(&bid("b1")).unwrap(), 7);
        assert_eq!(report.rows_rejected, 1);
        assert!(report.warnings[0].1.contains("nowhere"));

        let err =
            load_demand(csv.as_bytes(), &reg, WeekSelect::Single, IngestMode::Strict).unwrap_err();
        assert!(err.to_string().contains("nowhere"));
    }

    #[test]
    fn negative_count_is_hard_in_every_mode() {
        let reg = registry();
        let csv = "building_id,door_label,week,event_count\nb1,main,W1,-4\n";
        for mode in [IngestMode::Lenient, IngestMode::Strict] {
            let err = load_demand(csv.as_bytes(), &reg, WeekSelect::Single, mode).unwrap_err();
            assert!(err.to_string().contains("-4"), "{err}");
        }
    }

    #[test]
    fn too_many_door_labels_is_hard() {
        let reg = registry();
        let csv = "building_id,door_label,week,event_count\n\
                   b1,a,W1,1\n\
                   b1,b,W1,1\n\
                   b1,c,W1,1\n";
        let err = load_demand(
            csv.as_bytes(),
            &reg,
            WeekSelect::Single,
            IngestMode::Lenient,
        )
        .unwrap_err();
        assert!(err.to_string().contains("'c'"), "{err}");
        assert!(err.to_string().contains("2 doors"), "{err}");
    }

    #[test]
    fn mixed_weeks_require_a_selector() {
        let reg = registry();
        let csv = "building_id,door_label,week,event_count\n\
                   b1,main,W1,5\n\
                   b1,main,W2,6\n";
        let err =
            load_demand(csv.as_bytes(), &reg, WeekSelect::Single, IngestMode::Strict).unwrap_err();
        assert!(matches!(err, IngestError::MixedWeeks { .. }));

        let (snap, _) = load_demand(
            csv.as_bytes(),
            &reg,
            WeekSelect::Label("W2".into()),
            IngestMode::Strict,
        )
        .unwrap();
        assert_eq!(snap.building_demand(&bid("b1")).unwrap(), 6);

        let (agg, _) = load_demand(
            csv.as_bytes(),
            &reg,
            WeekSelect::Aggregate,
            IngestMode::Strict,
        )
        .unwrap();
        assert_eq!(agg.building_demand(&bid("b1")).unwrap(), 11);
        assert_eq!(agg.label(), "W1+W2");
    }

    #[test]
    fn missing_week_lists_available_ones() {
        let reg = registry();
        let csv = "building_id,door_label,week,event_count\nb1,main,W1,5\n";
        let err = load_demand(
            csv.as_bytes(),
            &reg,
            WeekSelect::Label("W9".into()),
            IngestMode::Strict,
        )
        .unwrap_err();
        assert!(err.to_string().contains("W9"));
        assert!(err.to_string().contains("W1"));
    }

    #[test]
    fn weeks_load_in_first_seen_order() {
        let reg = registry();
        let csv = "building_id,door_label,week,event_count\n\
                   b1,main,W2,5\n\
                   b1,main,W1,6\n\
                   b2,x,W2,7\n";
        let (snaps, _) = load_demand_weeks(csv.as_bytes(), &reg, IngestMode::Strict).unwrap();
        let labels: Vec<&str> = snaps.iter().map(|s| s.label()).collect();
        assert_eq!(labels, ["W2", "W1"]);
        assert_eq!(snaps[0].building_demand(&bid("b2")).unwrap(), 7);
        assert_eq!(snaps[1].building_demand(&bid("b2")).unwrap(), 0);
    }

    #[test]
    fn row_order_does_not_change_totals() {
        let reg = registry();
        let forward = "building_id,door_label,week,event_count\n\
                       b1,main,W1,5\n\
                       b1,side,W1,9\n\
                       b2,a,W1,3\n";
        let reversed = "building_id,door_label,week,event_count\n\
                        b2,a,W1,3\n\
                        b1,side,W1,9\n\
                        b1,main,W1,5\n";
        let (a, _) = load_demand(
            forward.as_bytes(),
            &reg,
            WeekSelect::Single,
            IngestMode::Strict,
        )
        .unwrap();
        let (b, _) = load_demand(
            reversed.as_bytes(),
            &reg,
            WeekSelect::Single,
            IngestMode::Strict,
        )
        .unwrap();
        // totals agree even though door labels map to different indices
        assert_eq!(
            a.building_demand(&bid("b1")).unwrap(),
            b.building_demand(&bid("b1")).unwrap()
        );
        assert_eq!(a.total_demand(), b.total_demand());
    }

    #[test]
    fn round_trip_is_identity() {
        let reg = registry();
        let csv = "building_id,door_label,week,event_count\n\
                   b1,main,W1,50\n\
                   b1,side,W1,30\n\
                   b2,only,W1,4\n";
        let (snap, _) =
            load_demand(csv.as_bytes(), &reg, WeekSelect::Single, IngestMode::Strict).unwrap();
        let written = write_demand_csv(&snap);
        let (reloaded, _) = load_demand(
            written.as_bytes(),
            &reg,
            WeekSelect::Single,
            IngestMode::Strict,
        )
        .unwrap();
        assert_eq!(snap, reloaded);
    }

    #[test]
    fn empty_demand_file_is_an_error() {
        let reg = registry();
        let csv = "building_id,door_label,week,event_count\n";
        let err =
            load_demand(csv.as_bytes(), &reg, WeekSelect::Single, IngestMode::Strict).unwrap_err();
        assert!(matches!(err, IngestError::NoWeeks));
    }
}
