//! Single-building maximal coverage: choose p candidate sites so the
//! largest number of classrooms has a site strictly within the travel
//! threshold, and the companion min-max search for the smallest
//! threshold p sites can attain.
//!
//! Instances are desk-scale (ten-ish sites), so both solvers enumerate
//! p-subsets exactly. The coverage search prunes branches whose
//! optimistic bound cannot beat the incumbent; results are identical to
//! the unpruned scan. Ties break on the lexicographically smallest site
//! set, which makes outputs regression-testable when several optima
//! exist.

use serde::Serialize;

use crate::error::SolveError;
use crate::model::CoverageInstance;

/// Optimal site choice for a fixed threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageSolution {
    /// Chosen site indices, ascending. Always exactly p of them.
    pub chosen_sites: Vec<usize>,
    /// Classrooms with at least one chosen site strictly in range.
    pub covered_classrooms: Vec<usize>,
    /// Number of covered classrooms.
    pub objective: usize,
}

/// Result of the min-max threshold search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdSolution {
    /// Smallest attainable worst-case travel time with p sites. This is
    /// the attained time itself: covering every classroom under the
    /// strict-inequality convention requires any threshold above it.
    pub threshold_seconds: f64,
    /// Site set attaining it, ascending.
    pub chosen_sites: Vec<usize>,
}

fn validate_station_count(p: usize, sites: usize) -> Result<(), SolveError> {
    if p < 1 || p > sites {
        return Err(SolveError::StationCountOutOfRange { p, sites });
    }
    Ok(())
}

/// Maximizes the number of classrooms covered by p sites at the given
/// threshold. Exhaustive over site subsets with sound pruning.
pub fn solve_max_coverage(
    instance: &CoverageInstance,
    p: usize,
    threshold_seconds: f64,
) -> Result<CoverageSolution, SolveError> {
    let n_sites = instance.site_count();
    let n_classrooms = instance.classroom_count();
    validate_station_count(p, n_sites)?;

    let w = instance.coverage_matrix(threshold_seconds);
    // classrooms each site covers
    let site_covers: Vec<Vec<usize>> = (0..n_sites)
        .map(|j| (0..n_classrooms).filter(|&c| w[c][j]).collect())
        .collect();
    // suffix_coverable[s][c]: some site with index >= s covers classroom c
    let mut suffix_coverable = vec![vec![false; n_classrooms]; n_sites + 1];
    for s in (0..n_sites).rev() {
        suffix_coverable[s] = suffix_coverable[s + 1].clone();
        for &c in &site_covers[s] {
            suffix_coverable[s][c] = true;
        }
    }

    let mut search = Search {
        site_covers: &site_covers,
        suffix_coverable: &suffix_coverable,
        n_sites,
        p,
        cover_count: vec![0u32; n_classrooms],
        covered: 0,
        chosen: Vec::with_capacity(p),
        best: None,
    };
    search.descend(0);
    let (objective, chosen_sites) = search.best.expect("p <= sites guarantees a subset");

    let covered_classrooms: Vec<usize> = (0..n_classrooms)
        .filter(|&c| chosen_sites.iter().any(|&j| w[c][j]))
        .collect();
    debug_assert_eq!(covered_classrooms.len(), objective);
    Ok(CoverageSolution {
        chosen_sites,
        covered_classrooms,
        objective,
    })
}

struct Search<'a> {
    site_covers: &'a [Vec<usize>],
    suffix_coverable: &'a [Vec<bool>],
    n_sites: usize,
    p: usize,
    cover_count: Vec<u32>,
    covered: usize,
    chosen: Vec<usize>,
    best: Option<(usize, Vec<usize>)>,
}

impl Search<'_> {
    /// Visits p-subsets in lexicographic order; only a strict improvement
    /// replaces the incumbent, so the first optimum found is the
    /// lexicographically smallest one.
    fn descend(&mut self, start: usize) {
        if self.chosen.len() == self.p {
            let improves = self.best.as_ref().is_none_or(|(b, _)| self.covered > *b);
            if improves {
                self.best = Some((self.covered, self.chosen.clone()));
            }
            return;
        }
        if let Some((incumbent, _)) = &self.best {
            // optimistic bound: everything still coverable from here on
            let reachable = self.suffix_coverable[start]
                .iter()
                .enumerate()
                .filter(|&(c, &ok)| ok && self.cover_count[c] == 0)
                .count();
            if self.covered + reachable <= *incumbent {
                return;
            }
        }
        let remaining = self.p - self.chosen.len();
        for j in start..=(self.n_sites - remaining) {
            self.chosen.push(j);
            for &c in &self.site_covers[j] {
                if self.cover_count[c] == 0 {
                    self.covered += 1;
                }
                self.cover_count[c] += 1;
            }
            self.descend(j + 1);
            for &c in &self.site_covers[j] {
                self.cover_count[c] -= 1;
                if self.cover_count[c] == 0 {
                    self.covered -= 1;
                }
            }
            self.chosen.pop();
        }
    }
}

/// Finds the smallest worst-case travel time attainable with p sites:
/// min over p-subsets of (max over classrooms of the nearest chosen
/// site). Ties again go to the lexicographically smallest set.
pub fn min_max_threshold(
    instance: &CoverageInstance,
    p: usize,
) -> Result<ThresholdSolution, SolveError> {
    let n_sites = instance.site_count();
    validate_station_count(p, n_sites)?;

    let mut best: Option<(f64, Vec<usize>)> = None;
    for_each_combination(n_sites, p, |subset| {
        let mut worst = 0.0f64;
        for c in 0..instance.classroom_count() {
            let nearest = subset
                .iter()
                .map(|&j| instance.time(c, j))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(nearest);
        }
        let improves = best.as_ref().is_none_or(|(b, _)| worst < *b);
        if improves {
            best = Some((worst, subset.to_vec()));
        }
    });
    let (threshold_seconds, chosen_sites) = best.expect("p <= sites guarantees a subset");
    Ok(ThresholdSolution {
        threshold_seconds,
        chosen_sites,
    })
}

/// Calls `visit` with each k-combination of 0..n in lexicographic order.
fn for_each_combination(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k == 0 {
        visit(&[]);
        return;
    }
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        // rightmost position that can still advance
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
