//! Farthest point sampling.
//!
//! Starting from one vertex, repeatedly add the vertex whose distance to its
//! nearest chosen source is largest. A per-vertex nearest-source distance
//! array is updated with one SSSP per new source, so selecting `k` sources
//! costs `O(k (m + n log n))`. The covering radius after each pick is
//! recorded; it is the k-center objective of the prefix chosen so far.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::shortest_path::{distances_into, nearest_source_distances, DistanceTable};

/// How the first source is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StartPolicy {
    Vertex(usize),
    /// Uniformly random vertex from a seeded generator.
    Seeded(u64),
}

impl Default for StartPolicy {
    fn default() -> Self {
        StartPolicy::Vertex(0)
    }
}

/// Record of how the first source was picked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum StartRecord {
    Fixed { vertex: usize },
    Seeded { seed: u64, vertex: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SourceSet {
    pub sources: Vec<usize>,
    /// `radii[i]` is the covering radius of `sources[..=i]`.
    pub radii: Vec<f64>,
    pub start: StartRecord,
}

impl SourceSet {
    pub fn len(&self) -> usize {
        self.sources.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sources.is_empty()
    }

    pub fn final_radius(&self) -> f64 {
        *self.radii.last().expect("source sets are non-empty")
    }
}

impl std::ops::Deref for SourceSet {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.sources
    }
}

fn resolve_start(graph: &Graph, start: StartPolicy) -> Result<StartRecord> {
    match start {
        StartPolicy::Vertex(v) => {
            graph.check_vertex(v)?;
            Ok(StartRecord::Fixed { vertex: v })
        }
        StartPolicy::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vertex = rng.random_range(0..graph.vertex_count());
            Ok(StartRecord::Seeded { seed, vertex })
        }
    }
}

pub fn farthest_point_sampling(graph: &Graph, k: usize, start: StartPolicy) -> Result<SourceSet> {
    run_fps(graph, k, start, None)
}

/// FPS that keeps every SSSP row it computes, returning the distance table
/// for the selected sources alongside them. Saves rebuilding the table.
pub fn farthest_point_sampling_with_table(
    graph: &Graph,
    k: usize,
    start: StartPolicy,
) -> Result<(SourceSet, DistanceTable)> {
    let n = graph.vertex_count();
    let mut data = Vec::with_capacity(k.min(n) * n);
    let set = run_fps(graph, k, start, Some(&mut data))?;
    let table = DistanceTable::from_parts(n, set.sources.clone(), data);
    Ok((set, table))
}

fn run_fps(
    graph: &Graph,
    k: usize,
    start: StartPolicy,
    mut rows: Option<&mut Vec<f64>>,
) -> Result<SourceSet> {
    let n = graph.vertex_count();
    if k == 0 {
        return Err(Error::KTooSmall);
    }
    if k > n {
        return Err(Error::KTooLarge { k, n });
    }
    let start = resolve_start(graph, start)?;
    let first = match start {
        StartRecord::Fixed { vertex } | StartRecord::Seeded { vertex, .. } => vertex,
    };

    let mut nearest = vec![f64::INFINITY; n];
    let mut row = vec![f64::INFINITY; n];
    let mut sources = Vec::with_capacity(k);
    let mut radii = Vec::with_capacity(k);
    let mut next = first;
    for _ in 0..k {
        sources.push(next);
        distances_into(graph, next, &mut row);
        if let Some(rows) = rows.as_deref_mut() {
            rows.extend_from_slice(&row);
        }
        let mut best = (f64::NEG_INFINITY, 0usize);
        for (v, (near, &d)) in nearest.iter_mut().zip(&row).enumerate() {
            if d < *near {
                *near = d;
            }
            // strict comparison keeps the smallest id among ties
            if *near > best.0 {
                best = (*near, v);
            }
        }
        radii.push(best.0);
        next = best.1;
    }
    Ok(SourceSet {
        sources,
        radii,
        start,
    })
}

/// `max_v min_{s in sources} d(v, s)` from one multi-source sweep.
pub fn kcenter_radius(graph: &Graph, sources: &[usize]) -> Result<f64> {
    let dist = nearest_source_distances(graph, sources)?;
    Ok(dist.into_iter().fold(0.0, f64::max))
}

/// `k` distinct vertices drawn uniformly at random, as a baseline to compare
/// FPS against.
pub fn random_sources(graph: &Graph, k: usize, seed: u64) -> Result<Vec<usize>> {
    let n = graph.vertex_count();
    if k == 0 {
        return Err(Error::KTooSmall);
    }
    if k > n {
        return Err(Error::KTooLarge { k, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(rand::seq::index::sample(&mut rng, n, k).into_vec())
}
