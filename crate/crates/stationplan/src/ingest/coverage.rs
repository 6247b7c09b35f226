use std::collections::HashMap;
use std::io::Read;

use indexmap::IndexMap;

use crate::model::CoverageInstance;

use super::{csv_reader, expect_header, line_of, IngestError};

const HEADER: [&str; 3] = ["classroom_id", "site_id", "seconds"];

/// Loads a travel-time matrix from long-form rows. Classrooms and sites
/// take first-seen order; every (classroom, site) pair must appear
/// exactly once. This is fixture-grade input, so every defect is hard.
pub fn load_coverage_instance(source: impl Read) -> Result<CoverageInstance, IngestError> {
    let mut reader = csv_reader(source);
    expect_header(&mut reader, &HEADER)?;

    let mut classrooms: IndexMap<String, usize> = IndexMap::new();
    let mut sites: IndexMap<String, usize> = IndexMap::new();
    let mut cells: HashMap<(usize, usize), f64> = HashMap::new();

    for record in reader.records() {
        let record = record?;
        let row = line_of(&record);
        if record.len() != HEADER.len() {
            return Err(IngestError::Invalid {
                row,
                message: format!("expected {} fields, found {}", HEADER.len(), record.len()),
            });
        }
        let seconds: f64 = record[2].trim().parse().map_err(|_| IngestError::Invalid {
            row,
            message: format!("seconds '{}' is not a number", &record[2]),
        })?;
        if !seconds.is_finite() || seconds < 0.0 {
            return Err(IngestError::Invalid {
                row,
                message: format!(
                    "travel time for (classroom '{}', site '{}') must be finite and >= 0, got {}",
                    &record[0], &record[1], &record[2]
                ),
            });
        }

        let next_c = classrooms.len();
        let c = *classrooms.entry(record[0].to_string()).or_insert(next_c);
        let next_j = sites.len();
        let j = *sites.entry(record[1].to_string()).or_insert(next_j);
        if cells.insert((c, j), seconds).is_some() {
            return Err(IngestError::Invalid {
                row,
                message: format!(
                    "duplicate pair (classroom '{}', site '{}')",
                    &record[0], &record[1]
                ),
            });
        }
    }

    // completeness: the matrix must be dense
    let mut travel = vec![vec![0.0f64; sites.len()]; classrooms.len()];
    for (classroom, &c) in &classrooms {
        for (site, &j) in &sites {
            match cells.get(&(c, j)) {
                Some(&seconds) => travel[c][j] = seconds,
                None => {
                    return Err(IngestError::MissingPair {
                        classroom: classroom.clone(),
                        site: site.clone(),
                    })
                }
            }
        }
    }

    Ok(CoverageInstance::new(
        classrooms.into_keys().collect(),
        sites.into_keys().collect(),
        travel,
    )?)
}
