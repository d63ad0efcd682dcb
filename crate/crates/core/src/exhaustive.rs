//! Brute-force optimal source placements and minimum vertex cover for small
//! instances.
//!
//! Subsets are enumerated in lexicographic order and scored in parallel,
//! chunk by chunk; the reduction over each chunk runs in enumeration order so
//! results do not depend on the thread count. All scoring reads from one
//! all-pairs table computed up front.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::BOUND_TOLERANCE;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::shortest_path::{all_pairs, DistanceTable};

pub const DEFAULT_BUDGET: u128 = 1_000_000;

const CHUNK: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExhaustiveResult {
    pub objective: f64,
    /// Every set attaining `objective`, in lexicographic order.
    pub best_sets: Vec<Vec<usize>>,
    pub sets_examined: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExistsResult {
    pub exists: bool,
    /// First qualifying set in lexicographic order.
    pub witness: Option<Vec<usize>>,
    pub sets_examined: u64,
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by i + 1
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

fn check_budget(n: usize, k: usize, budget: u128) -> Result<u128> {
    let needed = binomial(n, k);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(needed)
}

/// Scores source subsets of one graph against a shared all-pairs table.
pub struct SubsetSearch<'g> {
    graph: &'g Graph,
    apsp: DistanceTable,
}

impl<'g> SubsetSearch<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        SubsetSearch {
            graph,
            apsp: all_pairs(graph),
        }
    }

    /// Stretch of `sources` over adjacent pairs. Summation order matches
    /// [`crate::analysis::stretch_fast`], so the two agree bit for bit.
    pub fn stretch(&self, sources: &[usize]) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for e in self.graph.edges() {
            let approx = sources
                .iter()
                .map(|&s| self.apsp.get(s, e.u) + self.apsp.get(s, e.v))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(approx / self.apsp.get(e.u, e.v));
        }
        worst
    }

    pub fn kcenter_radius(&self, sources: &[usize]) -> f64 {
        (0..self.graph.vertex_count())
            .map(|v| {
                sources
                    .iter()
                    .map(|&s| self.apsp.get(s, v))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }

    pub fn optimal_stretch(&self, k: usize, budget: u128) -> Result<ExhaustiveResult> {
        if self.graph.edge_count() == 0 {
            return Err(Error::EmptyEdgeSet);
        }
        self.minimize(k, budget, |s| self.stretch(s))
    }

    pub fn optimal_kcenter(&self, k: usize, budget: u128) -> Result<ExhaustiveResult> {
        self.minimize(k, budget, |s| self.kcenter_radius(s))
    }

    /// Whether some `k`-subset has stretch at most `xi` (plus
    /// [`BOUND_TOLERANCE`]). Stops at the first witness.
    pub fn exists_with_stretch(&self, k: usize, xi: f64, budget: u128) -> Result<ExistsResult> {
        let n = self.graph.vertex_count();
        if k == 0 {
            return Ok(ExistsResult {
                exists: false,
                witness: None,
                sets_examined: 0,
            });
        }
        if k > n {
            return Err(Error::KTooLarge { k, n });
        }
        if self.graph.edge_count() == 0 {
            return Err(Error::EmptyEdgeSet);
        }
        check_budget(n, k, budget)?;
        let mut examined = 0u64;
        for chunk in &(0..n).combinations(k).chunks(CHUNK) {
            let chunk: Vec<Vec<usize>> = chunk.collect();
            let hit = chunk
                .par_iter()
                .position_first(|s| self.stretch(s) <= xi + BOUND_TOLERANCE);
            if let Some(i) = hit {
                return Ok(ExistsResult {
                    exists: true,
                    witness: Some(chunk[i].clone()),
                    sets_examined: examined + i as u64 + 1,
                });
            }
            examined += chunk.len() as u64;
        }
        Ok(ExistsResult {
            exists: false,
            witness: None,
            sets_examined: examined,
        })
    }

    fn minimize(&self, k: usize, budget: u128, score: impl Fn(&[usize]) -> f64 + Sync) -> Result<ExhaustiveResult> {
        let n = self.graph.vertex_count();
        if k == 0 {
            return Err(Error::KTooSmall);
        }
        if k > n {
            return Err(Error::KTooLarge { k, n });
        }
        check_budget(n, k, budget)?;
        let mut best = f64::INFINITY;
        let mut best_sets = Vec::new();
        for chunk in &(0..n).combinations(k).chunks(CHUNK) {
            let chunk: Vec<Vec<usize>> = chunk.collect();
            let scores: Vec<f64> = chunk.par_iter().map(|s| score(s)).collect();
            for (set, value) in chunk.into_iter().zip(scores) {
                if value < best {
                    best = value;
                    best_sets.clear();
                }
                if value == best {
                    best_sets.push(set);
                }
            }
        }
        Ok(ExhaustiveResult {
            objective: best,
            best_sets,
            sets_examined: binomial(n, k) as u64,
        })
    }
}

/// Minimum stretch over all `k`-subsets of vertices.
pub fn optimal_stretch_sources(graph: &Graph, k: usize, budget: u128) -> Result<ExhaustiveResult> {
    SubsetSearch::new(graph).optimal_stretch(k, budget)
}

/// Minimum covering radius over all `k`-subsets of vertices.
pub fn optimal_kcenter_sources(graph: &Graph, k: usize, budget: u128) -> Result<ExhaustiveResult> {
    SubsetSearch::new(graph).optimal_kcenter(k, budget)
}

/// `k == 0` is a valid query and always answers false.
pub fn exists_sources_with_stretch(graph: &Graph, k: usize, xi: f64, budget: u128) -> Result<ExistsResult> {
    SubsetSearch::new(graph).exists_with_stretch(k, xi, budget)
}

/// Smallest vertex cover of at most `max_k` vertices, or `None` if every
/// cover is larger. Only the lexicographically smallest cover of the minimum
/// size is returned. The budget bounds the total number of subsets tried.
pub fn minimum_vertex_cover(
    vertex_count: usize,
    edges: &[(usize, usize)],
    max_k: usize,
    budget: u128,
) -> Result<Option<ExhaustiveResult>> {
    for &(u, v) in edges {
        for id in [u, v] {
            if id >= vertex_count {
                return Err(Error::InvalidVertexId { id, vertex_count });
            }
        }
    }
    let mut examined: u128 = 0;
    for k in 0..=max_k.min(vertex_count) {
        let needed = examined.saturating_add(binomial(vertex_count, k));
        if needed > budget {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        let mut chosen = vec![false; vertex_count];
        for (i, set) in (0..vertex_count).combinations(k).enumerate() {
            set.iter().for_each(|&v| chosen[v] = true);
            let covers = edges.iter().all(|&(u, v)| chosen[u] || chosen[v]);
            set.iter().for_each(|&v| chosen[v] = false);
            if covers {
                return Ok(Some(ExhaustiveResult {
                    objective: k as f64,
                    best_sets: vec![set],
                    sets_examined: (examined + i as u128 + 1) as u64,
                }));
            }
        }
        examined = needed;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::stretch_of_sources;

    fn unit_path(n: usize) -> Graph {
        Graph::new(n, (0..n - 1).map(|i| (i, i + 1, 1.0))).unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(20, 10), 184_756);
        assert_eq!(binomial(30, 15), 155_117_520);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(200, 100), u128::MAX);
    }

    #[test]
    fn optimal_stretch_on_path() {
        let r = optimal_stretch_sources(&unit_path(3), 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.objective, 1.0);
        assert_eq!(r.best_sets, vec![vec![1]]);
        assert_eq!(r.sets_examined, 3);
        let all = optimal_stretch_sources(&unit_path(3), 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(all.objective, 1.0);
    }

    #[test]
    fn optimal_kcenter_on_paths() {
        let r = optimal_kcenter_sources(&unit_path(3), 1, DEFAULT_BUDGET).unwrap();
        assert_eq!((r.objective, r.best_sets.clone()), (1.0, vec![vec![1]]));
        let r = optimal_kcenter_sources(&unit_path(4), 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.objective, 1.0);
        assert_eq!(r.best_sets, vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]);
        assert_eq!(r.sets_examined, 6);
        assert_eq!(optimal_kcenter_sources(&unit_path(4), 4, DEFAULT_BUDGET).unwrap().objective, 0.0);
    }

    #[test]
    fn budget_limits() {
        let g = unit_path(20);
        assert!(optimal_kcenter_sources(&g, 10, DEFAULT_BUDGET).is_ok());
        let g = unit_path(30);
        match optimal_kcenter_sources(&g, 15, DEFAULT_BUDGET) {
            Err(Error::BudgetExceeded { needed, budget }) => {
                assert_eq!(needed, 155_117_520);
                assert_eq!(budget, DEFAULT_BUDGET);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn k_limits() {
        let g = unit_path(3);
        assert!(matches!(optimal_stretch_sources(&g, 0, DEFAULT_BUDGET), Err(Error::KTooSmall)));
        assert!(matches!(optimal_kcenter_sources(&g, 4, DEFAULT_BUDGET), Err(Error::KTooLarge { .. })));
        let none = exists_sources_with_stretch(&g, 0, 1e9, DEFAULT_BUDGET).unwrap();
        assert!(!none.exists && none.witness.is_none());
    }

    #[test]
    fn exists_on_path() {
        let g = unit_path(3);
        let r = exists_sources_with_stretch(&g, 1, 1.0, DEFAULT_BUDGET).unwrap();
        assert!(r.exists);
        assert_eq!(r.witness, Some(vec![1]));
        assert_eq!(r.sets_examined, 2);
        let r = exists_sources_with_stretch(&g, 1, 0.5, DEFAULT_BUDGET).unwrap();
        assert!(!r.exists);
        assert_eq!(r.sets_examined, 3);
    }

    #[test]
    fn subset_stretch_matches_oracle_stretch() {
        let g = Graph::new(5, [(0, 1, 1.0), (1, 2, 0.3), (2, 3, 1.7), (3, 4, 0.9), (4, 0, 1.1), (1, 3, 2.9)]).unwrap();
        let search = SubsetSearch::new(&g);
        for set in (0..5).combinations(2) {
            assert_eq!(search.stretch(&set), stretch_of_sources(&g, &set).unwrap().stretch);
        }
    }

    #[test]
    fn vertex_covers() {
        let r = minimum_vertex_cover(2, &[(0, 1)], 2, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!((r.objective, r.best_sets), (1.0, vec![vec![0]]));
        let r = minimum_vertex_cover(3, &[(0, 1), (1, 2)], 3, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!((r.objective, r.best_sets), (1.0, vec![vec![1]]));
        let triangle = [(0, 1), (1, 2), (0, 2)];
        let r = minimum_vertex_cover(3, &triangle, 3, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!(r.objective, 2.0);
        assert!(minimum_vertex_cover(3, &triangle, 1, DEFAULT_BUDGET).unwrap().is_none());
        let empty = minimum_vertex_cover(4, &[], 4, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!((empty.objective, empty.best_sets), (0.0, vec![vec![]]));
    }

    #[test]
    fn vertex_cover_budget_is_cumulative() {
        let triangle = [(0, 1), (1, 2), (0, 2)];
        // levels 0 and 1 cost 1 + 3 subsets
        assert!(matches!(
            minimum_vertex_cover(3, &triangle, 3, 4),
            Err(Error::BudgetExceeded { needed: 7, budget: 4 })
        ));
        assert!(minimum_vertex_cover(3, &triangle, 3, 7).is_ok());
    }
}
