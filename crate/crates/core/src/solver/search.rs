use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::combinatorics::vertex_mask;
use crate::cycle::{verify_certificate, ColoredHypergraph, CycleSpec, Hamperm, RainbowCertificate};
use crate::error::{invalid, Error, Result};
use crate::sdr::IncrementalMatcher;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Runs to completion; `NotFound` is a proof of absence.
    Exhaustive,
    /// Gives up with `Unknown` after `budget` node expansions.
    Budgeted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found,
    NotFound,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NotFoundReason {
    /// Fewer colors than cycle edges.
    InsufficientColors,
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub certificate: Option<RainbowCertificate>,
    pub nodes_expanded: u64,
    pub budget_hit: bool,
    pub reason: Option<NotFoundReason>,
}

impl SearchOutcome {
    pub fn found(&self) -> bool {
        self.status == SearchStatus::Found
    }
}

/// Largest vertex count the search handles (vertex sets are u64 masks).
pub const MAX_SEARCH_N: u32 = 64;

/// Colors per present edge, keyed by vertex bitmask.
pub(crate) fn mask_index(h: &ColoredHypergraph) -> HashMap<u64, Vec<u32>> {
    h.edges()
        .map(|(e, cs)| (vertex_mask(e), cs.iter().copied().collect()))
        .collect()
}

/// Backtracking search for a rainbow `ell`-Hamilton cycle.
///
/// Vertices are placed position by position in increasing vertex order.
/// Each edge is checked the moment its last position is filled: it must be
/// present and the growing edge list must keep a distinct-color system
/// (incremental bipartite matching; in single-color mode this reduces to a
/// used-color check). A vertex is only tried at a position if it co-occurs
/// in some edge with every already placed vertex of each window through that
/// position. Rotations by multiples of `k - ell` preserve the edge set, so
/// vertex 1 is confined to the first block.
pub fn find_rainbow_cycle(
    h: &ColoredHypergraph,
    spec: CycleSpec,
    mode: SearchMode,
    budget: u64,
) -> Result<SearchOutcome> {
    if h.n() != spec.n() || h.k() != spec.k() {
        return invalid(format!(
            "hypergraph (n = {}, k = {}) does not match spec (n = {}, k = {})",
            h.n(),
            h.k(),
            spec.n(),
            spec.k()
        ));
    }
    if spec.n() > MAX_SEARCH_N {
        return Err(Error::TooLarge {
            n: spec.n(),
            limit: MAX_SEARCH_N,
        });
    }
    if mode == SearchMode::Budgeted && budget == 0 {
        return invalid("budgeted search needs a positive budget");
    }
    if h.r() < spec.m() {
        return Ok(SearchOutcome {
            status: SearchStatus::NotFound,
            certificate: None,
            nodes_expanded: 0,
            budget_hit: false,
            reason: Some(NotFoundReason::InsufficientColors),
        });
    }
    let index = mask_index(h);
    let mut search = Search::new(
        spec,
        h.r(),
        &index,
        (mode == SearchMode::Budgeted).then_some(budget),
    );
    let found = search.dfs(0);
    let outcome = if found {
        let pi: Vec<u32> = search.placed.iter().map(|&v| v + 1).collect();
        let hamperm = Hamperm::new(pi, spec)?;
        let cert = RainbowCertificate {
            edges: hamperm.edges(),
            hamperm,
            colors: search.window_colors(),
        };
        debug_assert!(verify_certificate(h, &cert));
        SearchOutcome {
            status: SearchStatus::Found,
            certificate: Some(cert),
            nodes_expanded: search.nodes,
            budget_hit: false,
            reason: None,
        }
    } else if search.budget_hit {
        SearchOutcome {
            status: SearchStatus::Unknown,
            certificate: None,
            nodes_expanded: search.nodes,
            budget_hit: true,
            reason: None,
        }
    } else {
        SearchOutcome {
            status: SearchStatus::NotFound,
            certificate: None,
            nodes_expanded: search.nodes,
            budget_hit: false,
            reason: Some(NotFoundReason::Exhausted),
        }
    };
    Ok(outcome)
}

struct Search<'a> {
    n: usize,
    step: usize,
    m: usize,
    r: usize,
    index: &'a HashMap<u64, Vec<u32>>,
    /// vertices sharing an edge with v (0-based bitmask)
    adj: Vec<u64>,
    /// window positions (0-based) per window
    windows: Vec<Vec<usize>>,
    /// windows whose last position to be filled is j
    completes: Vec<Vec<usize>>,
    /// earlier positions sharing a window with j
    before: Vec<Vec<usize>>,
    placed: Vec<u32>,
    used: u64,
    /// window index per matcher slot
    pushed: Vec<usize>,
    matcher: IncrementalMatcher,
    nodes: u64,
    budget: Option<u64>,
    budget_hit: bool,
}

impl<'a> Search<'a> {
    fn new(
        spec: CycleSpec,
        r: u32,
        index: &'a HashMap<u64, Vec<u32>>,
        budget: Option<u64>,
    ) -> Self {
        let n = spec.n() as usize;
        let mut adj = vec![0u64; n];
        for &mask in index.keys() {
            let mut rest = mask;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                adj[v] |= mask;
                rest &= rest - 1;
            }
        }
        let windows: Vec<Vec<usize>> = (0..spec.m())
            .map(|i| spec.window(i).map(|p| p as usize).collect())
            .collect();
        let mut completes = vec![Vec::new(); n];
        let mut before = vec![Vec::new(); n];
        for (w, positions) in windows.iter().enumerate() {
            let last = *positions.iter().max().expect("k >= 2");
            completes[last].push(w);
            for &p in positions {
                for &q in positions {
                    if q < p && !before[p].contains(&q) {
                        before[p].push(q);
                    }
                }
            }
        }
        Self {
            n,
            step: spec.step() as usize,
            m: spec.m() as usize,
            r: r as usize,
            index,
            adj,
            windows,
            completes,
            before,
            placed: Vec::with_capacity(n),
            used: 0,
            pushed: Vec::new(),
            matcher: IncrementalMatcher::new(r),
            nodes: 0,
            budget,
            budget_hit: false,
        }
    }

    fn window_mask(&self, w: usize) -> u64 {
        self.windows[w]
            .iter()
            .fold(0u64, |m, &p| m | 1u64 << self.placed[p])
    }

    fn window_colors(&self) -> Vec<u32> {
        let mut colors = vec![0; self.m];
        for (slot, &w) in self.pushed.iter().enumerate() {
            colors[w] = self.matcher.assignment()[slot];
        }
        colors
    }

    fn dfs(&mut self, j: usize) -> bool {
        if j == self.n {
            return true;
        }
        let need = self.before[j]
            .iter()
            .fold(0u64, |m, &q| m | 1u64 << self.placed[q]);
        for v in 0..self.n {
            let bit = 1u64 << v;
            if self.used & bit != 0 || self.adj[v] & need != need {
                continue;
            }
            if v == 0 && j >= self.step {
                continue;
            }
            if j + 1 == self.step && self.used & 1 == 0 && v != 0 {
                continue;
            }
            self.nodes += 1;
            if self.budget.is_some_and(|b| self.nodes > b) {
                self.budget_hit = true;
                return false;
            }
            self.placed.push(v as u32);
            self.used |= bit;
            let before_pushes = self.pushed.len();
            let mut ok = true;
            for i in 0..self.completes[j].len() {
                let w = self.completes[j][i];
                let Some(colors) = self.index.get(&self.window_mask(w)) else {
                    ok = false;
                    break;
                };
                if !self.matcher.push(colors) {
                    ok = false;
                    break;
                }
                self.pushed.push(w);
            }
            // remaining edges need fresh colors
            if ok && self.r - self.pushed.len() < self.m - self.pushed.len() {
                ok = false;
            }
            if ok && self.dfs(j + 1) {
                return true;
            }
            while self.pushed.len() > before_pushes {
                self.pushed.pop();
                self.matcher.pop();
            }
            self.used &= !bit;
            self.placed.pop();
            if self.budget_hit {
                return false;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::k_subsets;

    fn complete_distinct(n: u32, k: u32) -> ColoredHypergraph {
        let all: Vec<_> = k_subsets(n, k).collect();
        let mut h = ColoredHypergraph::new(n, k, all.len() as u32, false).unwrap();
        for (i, e) in all.iter().enumerate() {
            h.insert(e, i as u32 + 1).unwrap();
        }
        h
    }

    #[test]
    fn complete_distinct_is_found() {
        let spec = CycleSpec::new(8, 3, 1).unwrap();
        let h = complete_distinct(8, 3);
        let out = find_rainbow_cycle(&h, spec, SearchMode::Exhaustive, 0).unwrap();
        assert!(out.found());
        assert!(verify_certificate(&h, out.certificate.as_ref().unwrap()));
        assert_eq!(out.certificate.unwrap().hamperm.as_slice()[0], 1);
    }

    #[test]
    fn empty_is_not_found() {
        let spec = CycleSpec::new(8, 3, 1).unwrap();
        let h = ColoredHypergraph::new(8, 3, 4, false).unwrap();
        let out = find_rainbow_cycle(&h, spec, SearchMode::Exhaustive, 0).unwrap();
        assert_eq!(out.status, SearchStatus::NotFound);
        assert_eq!(out.reason, Some(NotFoundReason::Exhausted));
    }

    #[test]
    fn too_few_colors() {
        let spec = CycleSpec::new(8, 3, 1).unwrap();
        let h = complete_distinct(8, 3);
        let h3 =
            crate::models::sample_colored(8, 3, 1.0, 3, 0, crate::models::SampleMode::Enumerate)
                .unwrap();
        let out = find_rainbow_cycle(&h3, spec, SearchMode::Exhaustive, 0).unwrap();
        assert_eq!(out.reason, Some(NotFoundReason::InsufficientColors));
        assert_eq!(out.nodes_expanded, 0);
        assert!(find_rainbow_cycle(&h, spec, SearchMode::Budgeted, 1000)
            .unwrap()
            .found());
    }

    #[test]
    fn budget_hit_reports_unknown() {
        let spec = CycleSpec::new(9, 3, 2).unwrap();
        let h = ColoredHypergraph::new(9, 3, 9, false).unwrap();
        let mut h = h;
        // dense but single-colored: every tight cycle fails on colors late
        for e in k_subsets(9, 3) {
            h.insert(&e, 1 + (e[0] % 2)).unwrap();
        }
        let out = find_rainbow_cycle(&h, spec, SearchMode::Budgeted, 10).unwrap();
        assert_eq!(out.status, SearchStatus::Unknown);
        assert!(out.budget_hit);
        assert_eq!(out.nodes_expanded, 11);
        let full = find_rainbow_cycle(&h, spec, SearchMode::Exhaustive, 10).unwrap();
        assert_eq!(full.status, SearchStatus::NotFound);
    }

    #[test]
    fn rejects_mismatch_and_zero_budget() {
        let spec = CycleSpec::new(6, 3, 1).unwrap();
        let h = ColoredHypergraph::new(8, 3, 4, false).unwrap();
        assert!(find_rainbow_cycle(&h, spec, SearchMode::Exhaustive, 0).is_err());
        let h = ColoredHypergraph::new(6, 3, 4, false).unwrap();
        assert!(find_rainbow_cycle(&h, spec, SearchMode::Budgeted, 0).is_err());
    }

    #[test]
    fn multi_color_search_uses_matching() {
        let spec = CycleSpec::new(6, 3, 1).unwrap();
        let mut h = ColoredHypergraph::new(6, 3, 3, true).unwrap();
        h.insert(&[1, 2, 3], 1).unwrap();
        h.insert(&[1, 2, 3], 2).unwrap();
        h.insert(&[3, 4, 5], 1).unwrap();
        h.insert(&[1, 5, 6], 3).unwrap();
        let out = find_rainbow_cycle(&h, spec, SearchMode::Exhaustive, 0).unwrap();
        let cert = out.certificate.unwrap();
        assert!(verify_certificate(&h, &cert));
    }
}
