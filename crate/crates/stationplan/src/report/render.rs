//! Deterministic serialization of results: plain-text tables with an
//! ASCII histogram, fixed-column CSV, and JSON. Identical inputs always
//! produce identical bytes.

use std::fmt::Write as _;

use serde_json::json;

use crate::cover::{CoverageSolution, ThresholdSolution};
use crate::ingest::write_allocation_csv;
use crate::model::{BuildingAllocation, CoverageInstance};

use super::{AllocationDiff, SensitivityReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
    Json,
}

fn json_line(value: &serde_json::Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("in-memory value");
    out.push('\n');
    out
}

/// CSV with proper quoting for free-form ids.
fn csv_string(build: impl FnOnce(&mut csv::Writer<Vec<u8>>)) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    build(&mut writer);
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn to_json_pretty<T: serde::Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("in-memory value");
    out.push('\n');
    out
}

/// Renders a diff. The text form carries the per-building table, the
/// histogram (one bin per occupied delta), the same/more/fewer summary
/// line, and the mean-vs-median skew direction. The CSV form is the
/// per-building table; see [`render_histogram_csv`] for the bins.
pub fn render_diff(diff: &AllocationDiff, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => csv_string(|w| {
            w.write_record(["building_id", "baseline", "candidate", "delta"])
                .expect("in-memory write");
            for (id, row) in diff.rows() {
                w.write_record([
                    id.as_str(),
                    &row.baseline.to_string(),
                    &row.candidate.to_string(),
                    &row.delta.to_string(),
                ])
                .expect("in-memory write");
            }
        }),
        OutputFormat::Json => to_json_pretty(diff),
        OutputFormat::Text => {
            let id_width = diff
                .rows()
                .map(|(id, _)| id.as_str().len())
                .max()
                .unwrap_or(0)
                .max("building_id".len());
            let mut out = format!("{:<id_width$}  baseline  candidate  delta\n", "building_id");
            for (id, row) in diff.rows() {
                let _ = writeln!(
                    out,
                    "{:<id_width$}  {:>8}  {:>9}  {:>5}",
                    id.as_str(),
                    row.baseline,
                    row.candidate,
                    row.delta
                );
            }
            out.push('\n');
            out.push_str("histogram (delta -> buildings)\n");
            let delta_width = diff
                .histogram()
                .keys()
                .map(|d| d.to_string().len())
                .max()
                .unwrap_or(1);
            for (&delta, &count) in diff.histogram() {
                let _ = writeln!(
                    out,
                    "{:>delta_width$} | {:>3} {}",
                    delta,
                    count,
                    "#".repeat(count)
                );
            }
            out.push('\n');
            let s = diff.summary();
            let _ = writeln!(
                out,
                "summary: same={} more={} fewer={}",
                s.same, s.more, s.fewer
            );
            let skew = match diff.skew_direction() {
                std::cmp::Ordering::Greater => "right (mean delta > median delta)",
                std::cmp::Ordering::Less => "left (mean delta < median delta)",
                std::cmp::Ordering::Equal => "none (mean delta = median delta)",
            };
            let _ = writeln!(out, "skew: {skew}");
            out
        }
    }
}

/// The histogram alone as CSV: `delta,count`, one row per occupied bin.
pub fn render_histogram_csv(diff: &AllocationDiff) -> String {
    let mut out = String::from("delta,count\n");
    for (&delta, &count) in diff.histogram() {
        let _ = writeln!(out, "{delta},{count}");
    }
    out
}

pub fn render_sensitivity(report: &SensitivityReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => csv_string(|w| {
            w.write_record(["building_id", "min_alloc", "max_alloc", "spread"])
                .expect("in-memory write");
            for (id, row) in report.per_building() {
                w.write_record([
                    id.as_str(),
                    &row.min_alloc.to_string(),
                    &row.max_alloc.to_string(),
                    &row.spread().to_string(),
                ])
                .expect("in-memory write");
            }
        }),
        OutputFormat::Json => to_json_pretty(report),
        OutputFormat::Text => {
            let stable = report
                .per_building()
                .filter(|(_, r)| r.spread() == 0)
                .count();
            let mut out = format!("snapshots: {}\n", report.snapshot_labels().join(", "));
            let _ = writeln!(
                out,
                "agreement: {stable} of {} buildings identical (fraction {:.4})",
                report.building_count(),
                report.agreement_fraction()
            );
            let _ = writeln!(out, "max spread: {}", report.max_abs_delta());
            let id_width = report
                .per_building()
                .map(|(id, _)| id.as_str().len())
                .max()
                .unwrap_or(0)
                .max("building_id".len());
            let _ = writeln!(out, "{:<id_width$}  min  max  spread", "building_id");
            for (id, row) in report.per_building() {
                let _ = writeln!(
                    out,
                    "{:<id_width$}  {:>3}  {:>3}  {:>6}",
                    id.as_str(),
                    row.min_alloc,
                    row.max_alloc,
                    row.spread()
                );
            }
            out
        }
    }
}

/// Renders an allocation. The CSV form is the interchange format that
/// `diff` reads back.
pub fn render_allocation(allocation: &BuildingAllocation, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => write_allocation_csv(allocation),
        OutputFormat::Json => {
            let buildings: Vec<serde_json::Value> = allocation
                .buildings()
                .map(|(id, stations)| {
                    let mut entry = json!({
                        "building_id": id,
                        "stations": stations,
                    });
                    if let Some(per_door) = allocation.per_door() {
                        let doors: Vec<serde_json::Value> = per_door
                            .iter()
                            .filter(|(door, _)| &door.building == id)
                            .map(|(door, &n)| json!({"door": door.door_index, "stations": n}))
                            .collect();
                        entry["doors"] = serde_json::Value::Array(doors);
                    }
                    entry
                })
                .collect();
            json_line(&json!({
                "model": allocation.model_tag(),
                "total_stations": allocation.total_stations(),
                "buildings": buildings,
            }))
        }
        OutputFormat::Text => {
            let id_width = allocation
                .buildings()
                .map(|(id, _)| id.as_str().len())
                .max()
                .unwrap_or(0)
                .max("building_id".len());
            let mut out = format!("model: {}\n", allocation.model_tag());
            match allocation.per_door() {
                Some(per_door) => {
                    let _ = writeln!(out, "{:<id_width$}  door  stations", "building_id");
                    for (door, &stations) in per_door {
                        let _ = writeln!(
                            out,
                            "{:<id_width$}  {:>4}  {:>8}",
                            door.building.as_str(),
                            door.door_index,
                            stations
                        );
                    }
                }
                None => {
                    let _ = writeln!(out, "{:<id_width$}  stations", "building_id");
                    for (id, stations) in allocation.buildings() {
                        let _ = writeln!(out, "{:<id_width$}  {:>8}", id.as_str(), stations);
                    }
                }
            }
            let _ = writeln!(out, "total: {}", allocation.total_stations());
            out
        }
    }
}

pub fn render_coverage(
    instance: &CoverageInstance,
    solution: &CoverageSolution,
    format: OutputFormat,
) -> String {
    match format {
        OutputFormat::Csv => csv_string(|w| {
            w.write_record(["site_index", "site_id"])
                .expect("in-memory write");
            for &j in &solution.chosen_sites {
                w.write_record([&j.to_string(), instance.sites()[j].as_str()])
                    .expect("in-memory write");
            }
        }),
        OutputFormat::Json => json_line(&json!({
            "objective": solution.objective,
            "classroom_count": instance.classroom_count(),
            "chosen_sites": solution
                .chosen_sites
                .iter()
                .map(|&j| json!({"index": j, "id": instance.sites()[j]}))
                .collect::<Vec<_>>(),
            "covered_classrooms": solution
                .covered_classrooms
                .iter()
                .map(|&c| json!({"index": c, "id": instance.classrooms()[c]}))
                .collect::<Vec<_>>(),
        })),
        OutputFormat::Text => {
            let mut out = format!(
                "objective: {} of {} classrooms covered\n",
                solution.objective,
                instance.classroom_count()
            );
            let sites = solution
                .chosen_sites
                .iter()
                .map(|&j| format!("{j} ({})", instance.sites()[j]))
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(out, "chosen sites: {sites}");
            let rooms = solution
                .covered_classrooms
                .iter()
                .map(|&c| format!("{c} ({})", instance.classrooms()[c]))
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(out, "covered classrooms: {rooms}");
            out
        }
    }
}

pub fn render_threshold(
    instance: &CoverageInstance,
    solution: &ThresholdSolution,
    format: OutputFormat,
) -> String {
    match format {
        OutputFormat::Csv => csv_string(|w| {
            w.write_record(["threshold_seconds", "site_index", "site_id"])
                .expect("in-memory write");
            for &j in &solution.chosen_sites {
                w.write_record([
                    &solution.threshold_seconds.to_string(),
                    &j.to_string(),
                    instance.sites()[j].as_str(),
                ])
                .expect("in-memory write");
            }
        }),
        OutputFormat::Json => json_line(&json!({
            "threshold_seconds": solution.threshold_seconds,
            "chosen_sites": solution
                .chosen_sites
                .iter()
                .map(|&j| json!({"index": j, "id": instance.sites()[j]}))
                .collect::<Vec<_>>(),
        })),
        OutputFormat::Text => {
            let mut out = format!(
                "min-max coverage time: {} seconds\n",
                solution.threshold_seconds
            );
            let sites = solution
                .chosen_sites
                .iter()
                .map(|&j| format!("{j} ({})", instance.sites()[j]))
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(out, "chosen sites: {sites}");
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::diff;
    use super::*;
    use crate::model::{BuildingAllocation, BuildingId, DoorRef, ModelTag};

    fn bid(s: &str) -> BuildingId {
        BuildingId::new(s).unwrap()
    }

    fn sample_diff() -> AllocationDiff {
        let baseline = BuildingAllocation::building_level(
            ModelTag::Baseline,
            [(bid("b1"), 2), (bid("b2"), 4), (bid("b3"), 1)],
        )
        .unwrap();
        let candidate = BuildingAllocation::building_level(
            ModelTag::Heuristic,
            [(bid("b1"), 2), (bid("b2"), 2), (bid("b3"), 3)],
        )
        .unwrap();
        diff(&candidate, &baseline).unwrap()
    }

    #[test]
    fn diff_csv_has_fixed_columns() {
        let out = render_diff(&sample_diff(), OutputFormat::Csv);
        assert_eq!(
            out,
            "building_id,baseline,candidate,delta\n\
             b1,2,2,0\n\
             b2,4,2,-2\n\
             b3,1,3,2\n"
        );
    }

    #[test]
    fn histogram_csv_lists_occupied_bins_only() {
        let out = render_histogram_csv(&sample_diff());
        assert_eq!(out, "delta,count\n-2,1\n0,1\n2,1\n");
    }

    #[test]
    fn empty_diff_renders_header_only_csv() {
        let empty_a =
            BuildingAllocation::building_level(ModelTag::Baseline, std::iter::empty()).unwrap();
        let empty_b =
            BuildingAllocation::building_level(ModelTag::Heuristic, std::iter::empty()).unwrap();
        let d = diff(&empty_b, &empty_a).unwrap();
        assert_eq!(
            render_diff(&d, OutputFormat::Csv),
            "building_id,baseline,candidate,delta\n"
        );
        assert_eq!(render_histogram_csv(&d), "delta,count\n");
    }

    #[test]
    fn text_diff_carries_summary_line_and_histogram() {
        let out = render_diff(&sample_diff(), OutputFormat::Text);
        assert!(out.contains("summary: same=1 more=1 fewer=1"));
        assert!(out.contains("histogram (delta -> buildings)"));
        assert!(out.contains("-2 |   1 #"));
    }

    #[test]
    fn rendering_twice_is_byte_identical() {
        let d = sample_diff();
        for format in [OutputFormat::Text, OutputFormat::Csv, OutputFormat::Json] {
            assert_eq!(render_diff(&d, format), render_diff(&d, format));
        }
    }

    #[test]
    fn allocation_text_lists_doors_when_present() {
        let alloc = BuildingAllocation::door_level(
            ModelTag::DoorsRestricted,
            [
                (DoorRef::new(bid("b1"), 0), 2),
                (DoorRef::new(bid("b1"), 1), 0),
            ],
        )
        .unwrap();
        let out = render_allocation(&alloc, OutputFormat::Text);
        assert!(out.starts_with("model: doors-restricted\n"));
        assert!(out.contains("door"));
        assert!(out.ends_with("total: 2\n"));
    }

    #[test]
    fn allocation_json_is_stable_and_tagged() {
        let alloc = BuildingAllocation::building_level(ModelTag::Target, [(bid("b1"), 3)]).unwrap();
        let out = render_allocation(&alloc, OutputFormat::Json);
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(value["model"], "target");
        assert_eq!(value["total_stations"], 3);
        assert_eq!(value["buildings"][0]["building_id"], "b1");
    }
}
