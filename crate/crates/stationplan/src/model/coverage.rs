use super::ModelError;

/// One building's classrooms, candidate station sites, and the walking
/// times between them. Rows are classrooms, columns are sites.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageInstance {
    classrooms: Vec<String>,
    sites: Vec<String>,
    travel_seconds: Vec<Vec<f64>>,
}

impl CoverageInstance {
    pub fn new(
        classrooms: Vec<String>,
        sites: Vec<String>,
        travel_seconds: Vec<Vec<f64>>,
    ) -> Result<Self, ModelError> {
        if travel_seconds.len() != classrooms.len() {
            return Err(ModelError::MatrixShape {
                classrooms: classrooms.len(),
                sites: sites.len(),
                row: travel_seconds.len(),
                found: 0,
            });
        }
        for (row, times) in travel_seconds.iter().enumerate() {
            if times.len() != sites.len() {
                return Err(ModelError::MatrixShape {
                    classrooms: classrooms.len(),
                    sites: sites.len(),
                    row,
                    found: times.len(),
                });
            }
            for (col, &value) in times.iter().enumerate() {
                if !value.is_finite() || value < 0.0 {
                    return Err(ModelError::BadTravelTime {
                        classroom: row,
                        site: col,
                        value,
                    });
                }
            }
        }
        Ok(CoverageInstance {
            classrooms,
            sites,
            travel_seconds,
        })
    }

    pub fn classrooms(&self) -> &[String] {
        &self.classrooms
    }

    pub fn sites(&self) -> &[String] {
        &self.sites
    }

    pub fn classroom_count(&self) -> usize {
        self.classrooms.len()
    }

    pub fn site_count(&self) -> usize {
        self.sites.len()
    }

    /// Walking time from a classroom to a candidate site.
    pub fn time(&self, classroom: usize, site: usize) -> f64 {
        self.travel_seconds[classroom][site]
    }

    /// Binary coverage matrix: an entry is true exactly when the travel
    /// time is strictly below the threshold. Equality does not cover.
    pub fn coverage_matrix(&self, threshold_seconds: f64) -> Vec<Vec<bool>> {
        self.travel_seconds
            .iter()
            .map(|row| row.iter().map(|&t| t < threshold_seconds).collect())
            .collect()
    }
}
