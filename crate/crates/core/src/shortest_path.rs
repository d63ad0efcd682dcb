//! Exact geodesic distances with a binary-heap Dijkstra.
//!
//! The heap uses lazy deletion: improved labels are pushed again and stale
//! entries are skipped on pop. Entries are ordered by `(distance, vertex)`,
//! so equal-distance vertices settle in id order and the parent tree is
//! deterministic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq)]
struct HeapEntry {
    dist: f64,
    vertex: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed: BinaryHeap is a max-heap
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Distances and shortest-path parents from one source.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceRow {
    pub source: usize,
    pub dist: Vec<f64>,
    pub parent: Vec<Option<usize>>,
}

impl DistanceRow {
    /// Vertices on the shortest path from the source to `v`, source first.
    pub fn path_to(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }
}

pub fn sssp(graph: &Graph, source: usize) -> Result<DistanceRow> {
    graph.check_vertex(source)?;
    let n = graph.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut parent = vec![None; n];
    dijkstra(graph, &[source], &mut dist, Some(&mut parent));
    Ok(DistanceRow {
        source,
        dist,
        parent,
    })
}

/// Runs Dijkstra from every vertex in `sources` simultaneously. `dist` must
/// be all-infinite on entry.
fn dijkstra(graph: &Graph, sources: &[usize], dist: &mut [f64], mut parent: Option<&mut [Option<usize>]>) {
    let mut heap = BinaryHeap::with_capacity(sources.len());
    for &s in sources {
        dist[s] = 0.0;
        heap.push(HeapEntry { dist: 0.0, vertex: s });
    }
    while let Some(HeapEntry { dist: d, vertex: u }) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for (v, len) in graph.neighbors(u) {
            let nd = d + len;
            if nd < dist[v] {
                dist[v] = nd;
                if let Some(parent) = parent.as_deref_mut() {
                    parent[v] = Some(u);
                }
                heap.push(HeapEntry { dist: nd, vertex: v });
            }
        }
    }
}

/// Fills `dist` with distances from `source`, reusing the caller's buffer.
pub(crate) fn distances_into(graph: &Graph, source: usize, dist: &mut [f64]) {
    dist.fill(f64::INFINITY);
    dijkstra(graph, &[source], dist, None);
}

/// Distance from every vertex to its nearest vertex in `sources`, from one
/// multi-source sweep.
pub fn nearest_source_distances(graph: &Graph, sources: &[usize]) -> Result<Vec<f64>> {
    if sources.is_empty() {
        return Err(Error::EmptySourceSet);
    }
    for &s in sources {
        graph.check_vertex(s)?;
    }
    let mut dist = vec![f64::INFINITY; graph.vertex_count()];
    dijkstra(graph, sources, &mut dist, None);
    Ok(dist)
}

/// Reusable state for Dijkstra searches that stop early. Only touched
/// entries are reset between searches, so a search costs time proportional
/// to the region it explores rather than to `n`.
pub struct LocalSearch {
    dist: Vec<f64>,
    touched: Vec<usize>,
    heap: BinaryHeap<HeapEntry>,
}

impl LocalSearch {
    pub fn new(vertex_count: usize) -> Self {
        LocalSearch {
            dist: vec![f64::INFINITY; vertex_count],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    /// Exact `d(u, v)` for an edge `(u, v)`.
    ///
    /// Any path shorter than the edge stays within a ball of radius equal to
    /// the edge length, so the search stops once `v` is settled or the
    /// frontier passes that radius. The settle order matches a full search
    /// from `u`, so the result is bit-identical to `sssp(graph, u).dist[v]`.
    pub fn edge_endpoint_distance(&mut self, graph: &Graph, u: usize, v: usize) -> Result<f64> {
        graph.check_vertex(u)?;
        graph.check_vertex(v)?;
        let limit = graph.edge_length(u, v).ok_or(Error::NotAdjacent { u, v })?;
        self.set(u, 0.0);
        self.heap.push(HeapEntry { dist: 0.0, vertex: u });
        while let Some(HeapEntry { dist: d, vertex: x }) = self.heap.pop() {
            if d > self.dist[x] {
                continue;
            }
            if x == v || d > limit {
                break;
            }
            for (y, len) in graph.neighbors(x) {
                let nd = d + len;
                if nd < self.dist[y] {
                    self.set(y, nd);
                    self.heap.push(HeapEntry { dist: nd, vertex: y });
                }
            }
        }
        let result = self.dist[v];
        self.reset();
        Ok(result)
    }

    fn set(&mut self, x: usize, d: f64) {
        if self.dist[x] == f64::INFINITY {
            self.touched.push(x);
        }
        self.dist[x] = d;
    }

    fn reset(&mut self) {
        for &x in &self.touched {
            self.dist[x] = f64::INFINITY;
        }
        self.touched.clear();
        self.heap.clear();
    }
}

pub fn edge_endpoint_distance(graph: &Graph, u: usize, v: usize) -> Result<f64> {
    LocalSearch::new(graph.vertex_count()).edge_endpoint_distance(graph, u, v)
}

/// Exact distances from `k` sources to all `n` vertices, stored source-major
/// in one flat `k * n` buffer.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceTable {
    vertex_count: usize,
    sources: Vec<usize>,
    data: Vec<f64>,
}

impl DistanceTable {
    pub(crate) fn from_parts(vertex_count: usize, sources: Vec<usize>, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), sources.len() * vertex_count);
        DistanceTable {
            vertex_count,
            sources,
            data,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    pub fn k(&self) -> usize {
        self.sources.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.vertex_count..(i + 1) * self.vertex_count]
    }

    #[inline]
    pub fn get(&self, i: usize, v: usize) -> f64 {
        self.data[i * self.vertex_count + v]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Table restricted to the first `k` sources.
    pub fn prefix(&self, k: usize) -> DistanceTable {
        let k = k.min(self.k());
        DistanceTable {
            vertex_count: self.vertex_count,
            sources: self.sources[..k].to_vec(),
            data: self.data[..k * self.vertex_count].to_vec(),
        }
    }
}

pub(crate) fn validate_sources(graph: &Graph, sources: &[usize]) -> Result<()> {
    if sources.is_empty() {
        return Err(Error::EmptySourceSet);
    }
    let mut seen = vec![false; graph.vertex_count()];
    for &s in sources {
        graph.check_vertex(s)?;
        if std::mem::replace(&mut seen[s], true) {
            return Err(Error::DuplicateSource(s));
        }
    }
    Ok(())
}

/// One SSSP per source. Rows are independent and computed in parallel;
/// row order follows `sources`.
pub fn multi_sssp(graph: &Graph, sources: &[usize]) -> Result<DistanceTable> {
    validate_sources(graph, sources)?;
    let n = graph.vertex_count();
    let mut data = vec![0.0; sources.len() * n];
    data.par_chunks_mut(n)
        .zip(sources.par_iter())
        .for_each(|(row, &s)| distances_into(graph, s, row));
    Ok(DistanceTable::from_parts(n, sources.to_vec(), data))
}

/// All-pairs distances via `n` SSSP runs. Row `i` holds distances from vertex `i`.
pub fn all_pairs(graph: &Graph) -> DistanceTable {
    let all: Vec<usize> = (0..graph.vertex_count()).collect();
    multi_sssp(graph, &all).expect("every vertex is a valid distinct source")
}
