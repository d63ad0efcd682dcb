//! Weighted undirected graphs with strictly positive edge lengths.
//!
//! A [`Graph`] is validated on construction: ids are dense in `0..n`, there
//! are no self-loops, every length is positive and finite, and the graph is
//! connected so every geodesic distance is finite. Adjacency is stored in
//! compressed (CSR) form with neighbors sorted by id.

use std::collections::VecDeque;
use std::fmt;
use std::hash::Hasher;
use std::io::{BufRead, Write};

use fnv::FnvHasher;
use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};

/// An undirected edge, stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: f64,
}

/// Raised when the input listed the same unordered pair more than once and
/// the copies were merged into the shortest one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParallelEdgeWarning {
    pub u: usize,
    pub v: usize,
    pub copies: usize,
    pub kept_length: f64,
}

impl fmt::Display for ParallelEdgeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} parallel copies of edge ({}, {}) collapsed to length {}",
            self.copies, self.u, self.v, self.kept_length
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    lengths: Vec<f64>,
}

/// Shortest and longest edge length plus their ratio `r_e`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EdgeStats {
    pub l_min: f64,
    pub l_max: f64,
    pub r_e: f64,
}

impl Graph {
    /// Builds a graph, rejecting duplicate edges.
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let edges = canonical_edges(vertex_count, edges)?;
        if let Some(w) = edges.windows(2).find(|w| (w[0].u, w[0].v) == (w[1].u, w[1].v)) {
            return Err(Error::DuplicateEdge {
                u: w[0].u,
                v: w[0].v,
            });
        }
        Graph::from_canonical(vertex_count, edges)
    }

    /// Builds a graph, merging parallel edges into the shortest copy.
    pub fn with_parallel_edges_collapsed<I>(
        vertex_count: usize,
        edges: I,
    ) -> Result<(Graph, Vec<ParallelEdgeWarning>)>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let edges = canonical_edges(vertex_count, edges)?;
        let mut kept = Vec::with_capacity(edges.len());
        let mut warnings = Vec::new();
        for (_, group) in &edges.into_iter().chunk_by(|e| (e.u, e.v)) {
            let group: Vec<Edge> = group.collect();
            // sorted by length within a pair
            let shortest = group[0];
            if group.len() > 1 {
                warnings.push(ParallelEdgeWarning {
                    u: shortest.u,
                    v: shortest.v,
                    copies: group.len(),
                    kept_length: shortest.length,
                });
            }
            kept.push(shortest);
        }
        Ok((Graph::from_canonical(vertex_count, kept)?, warnings))
    }

    fn from_canonical(vertex_count: usize, edges: Vec<Edge>) -> Result<Graph> {
        let mut degree = vec![0usize; vertex_count];
        for e in &edges {
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
        let mut offsets = Vec::with_capacity(vertex_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..vertex_count].to_vec();
        let mut targets = vec![0usize; 2 * edges.len()];
        let mut lengths = vec![0.0f64; 2 * edges.len()];
        for e in &edges {
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                targets[cursor[a]] = b;
                lengths[cursor[a]] = e.length;
                cursor[a] += 1;
            }
        }
        // neighbors sorted by id, for binary search in `edge_length`
        for v in 0..vertex_count {
            let range = offsets[v]..offsets[v + 1];
            let mut adj: Vec<(usize, f64)> = targets[range.clone()]
                .iter()
                .copied()
                .zip(lengths[range.clone()].iter().copied())
                .collect();
            adj.sort_by_key(|&(t, _)| t);
            for (slot, (t, l)) in range.zip(adj) {
                targets[slot] = t;
                lengths[slot] = l;
            }
        }
        let graph = Graph {
            vertex_count,
            edges,
            offsets,
            targets,
            lengths,
        };
        let components = graph.components();
        if components.len() > 1 {
            return Err(Error::DisconnectedGraph { components });
        }
        Ok(graph)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order: `u < v`, sorted by `(u, v)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.lengths[range].iter().copied())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn edge_length(&self, u: usize, v: usize) -> Option<f64> {
        if u >= self.vertex_count || v >= self.vertex_count {
            return None;
        }
        let range = self.offsets[u]..self.offsets[u + 1];
        let slice = &self.targets[range.clone()];
        slice
            .binary_search(&v)
            .ok()
            .map(|i| self.lengths[range.start + i])
    }

    pub fn check_vertex(&self, id: usize) -> Result<()> {
        if id < self.vertex_count {
            Ok(())
        } else {
            Err(Error::InvalidVertexId {
                id,
                vertex_count: self.vertex_count,
            })
        }
    }

    pub fn edge_stats(&self) -> Result<EdgeStats> {
        let mut iter = self.edges.iter().map(|e| e.length);
        let first = iter.next().ok_or(Error::EmptyEdgeSet)?;
        let (l_min, l_max) = iter.fold((first, first), |(lo, hi), l| (lo.min(l), hi.max(l)));
        Ok(EdgeStats {
            l_min,
            l_max,
            r_e: l_max / l_min,
        })
    }

    /// 64-bit FNV-1a over the canonical edge list: `n` and `m` as u64, then
    /// each edge as `u`, `v` (u64) and the length bits, all little-endian.
    pub fn checksum(&self) -> u64 {
        let mut h = FnvHasher::default();
        h.write(&(self.vertex_count as u64).to_le_bytes());
        h.write(&(self.edges.len() as u64).to_le_bytes());
        for e in &self.edges {
            h.write(&(e.u as u64).to_le_bytes());
            h.write(&(e.v as u64).to_le_bytes());
            h.write(&e.length.to_bits().to_le_bytes());
        }
        h.finish()
    }

    fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertex_count];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.vertex_count {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for (v, _) in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

fn canonical_edges<I>(vertex_count: usize, edges: I) -> Result<Vec<Edge>>
where
    I: IntoIterator<Item = (usize, usize, f64)>,
{
    if vertex_count == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut out = Vec::new();
    for (u, v, length) in edges {
        for id in [u, v] {
            if id >= vertex_count {
                return Err(Error::InvalidVertexId { id, vertex_count });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::NonPositiveLength { u, v, length });
        }
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        out.push(Edge { u, v, length });
    }
    out.sort_by(|a, b| (a.u, a.v).cmp(&(b.u, b.v)).then(a.length.total_cmp(&b.length)));
    Ok(out)
}

/// Strips a trailing `#` comment and surrounding whitespace.
pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

/// Reads the edge-list format: a header line `n m`, then `m` lines
/// `u v length`. Parallel edges are collapsed to the shortest copy.
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<(Graph, Vec<ParallelEdgeWarning>)> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let body = strip_comment(&line);
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        match header {
            None => {
                if fields.len() != 2 {
                    return Err(Error::parse(lineno, "expected header `n m`"));
                }
                let n = parse_field::<usize>(fields[0], lineno, "vertex count")?;
                let m = parse_field::<usize>(fields[1], lineno, "edge count")?;
                header = Some((n, m));
            }
            Some((n, m)) => {
                if edges.len() == m {
                    return Err(Error::parse(lineno, format!("more than the declared {m} edges")));
                }
                if fields.len() != 3 {
                    return Err(Error::parse(lineno, "expected `u v length`"));
                }
                let u = parse_field::<usize>(fields[0], lineno, "vertex id")?;
                let v = parse_field::<usize>(fields[1], lineno, "vertex id")?;
                let length = parse_field::<f64>(fields[2], lineno, "length")?;
                for id in [u, v] {
                    if id >= n {
                        return Err(Error::parse(
                            lineno,
                            format!("vertex id {id} outside 0..{n}"),
                        ));
                    }
                }
                edges.push((u, v, length));
            }
        }
    }
    let (n, m) = header.ok_or_else(|| Error::parse(0, "missing header line"))?;
    if edges.len() != m {
        return Err(Error::parse(
            0,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Graph::with_parallel_edges_collapsed(n, edges)
}

pub fn write_edge_list<W: Write>(graph: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", graph.vertex_count(), graph.edge_count())?;
    for e in graph.edges() {
        writeln!(out, "{} {} {}", e.u, e.v, e.length)?;
    }
    Ok(())
}

pub(crate) fn parse_field<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} `{s}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_path(n: usize) -> Graph {
        Graph::new(n, (0..n - 1).map(|i| (i, i + 1, 1.0))).unwrap()
    }

    #[test]
    fn smallest_connected_graph() {
        let g = Graph::new(2, [(0, 1, 1.0)]).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn isolated_vertex_is_disconnected() {
        match Graph::new(3, [(0, 1, 1.0)]) {
            Err(Error::DisconnectedGraph { components }) => {
                assert_eq!(components, vec![vec![0, 1], vec![2]]);
            }
            other => panic!("expected DisconnectedGraph, got {other:?}"),
        }
    }

    #[test]
    fn triangle_ratio() {
        let g = Graph::new(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 0.5)]).unwrap();
        let s = g.edge_stats().unwrap();
        assert_eq!((s.l_min, s.l_max, s.r_e), (0.5, 1.0, 2.0));
    }

    #[test]
    fn unit_path_stats() {
        let s = unit_path(3).edge_stats().unwrap();
        assert_eq!((s.l_min, s.l_max, s.r_e), (1.0, 1.0, 1.0));
    }

    #[test]
    fn single_vertex_has_no_edge_stats() {
        let g = Graph::new(1, []).unwrap();
        assert!(matches!(g.edge_stats(), Err(Error::EmptyEdgeSet)));
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(Graph::new(0, []), Err(Error::EmptyGraph)));
        assert!(matches!(
            Graph::new(2, [(0, 0, 1.0), (0, 1, 1.0)]),
            Err(Error::SelfLoop(0))
        ));
        assert!(matches!(
            Graph::new(2, [(0, 1, 0.0)]),
            Err(Error::NonPositiveLength { .. })
        ));
        assert!(matches!(
            Graph::new(2, [(0, 1, f64::INFINITY)]),
            Err(Error::NonPositiveLength { .. })
        ));
        assert!(matches!(
            Graph::new(2, [(0, 1, f64::NAN)]),
            Err(Error::NonPositiveLength { .. })
        ));
        assert!(matches!(
            Graph::new(2, [(0, 2, 1.0)]),
            Err(Error::InvalidVertexId { id: 2, .. })
        ));
        assert!(matches!(
            Graph::new(2, [(0, 1, 1.0), (1, 0, 2.0)]),
            Err(Error::DuplicateEdge { u: 0, v: 1 })
        ));
    }

    #[test]
    fn parallel_edges_collapse_to_shortest() {
        let (g, warnings) =
            Graph::with_parallel_edges_collapsed(2, [(0, 1, 2.0), (1, 0, 0.5), (0, 1, 1.0)])
                .unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edge_length(0, 1), Some(0.5));
        assert_eq!(warnings.len(), 1);
        assert_eq!(warnings[0].copies, 3);
        assert_eq!(warnings[0].kept_length, 0.5);
    }

    #[test]
    fn adjacency_is_sorted_and_symmetric() {
        let g = Graph::new(4, [(3, 0, 1.0), (0, 1, 2.0), (2, 0, 3.0), (1, 2, 4.0)]).unwrap();
        let n0: Vec<_> = g.neighbors(0).collect();
        assert_eq!(n0, vec![(1, 2.0), (2, 3.0), (3, 1.0)]);
        assert_eq!(g.edge_length(2, 1), Some(4.0));
        assert_eq!(g.edge_length(3, 1), None);
        assert_eq!(g.degree(0), 3);
    }

    #[test]
    fn edge_list_round_trip() {
        let text = "# a triangle\n3 3\n0 1 1.0\n1 2 1.0 # trailing\n\n2 0 0.5\n";
        let (g, warnings) = read_edge_list(text.as_bytes()).unwrap();
        assert!(warnings.is_empty());
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let (h, _) = read_edge_list(buf.as_slice()).unwrap();
        assert_eq!(g.edges(), h.edges());
        assert_eq!(g.checksum(), h.checksum());
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(
            read_edge_list("3 1\n0 1 1.0\n".as_bytes()),
            Err(Error::DisconnectedGraph { .. })
        ));
        assert!(matches!(
            read_edge_list("2 1\n0 5 1.0\n".as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            read_edge_list("2 2\n0 1 1.0\n".as_bytes()),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            read_edge_list("2 1\n0 1 x\n".as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(read_edge_list("".as_bytes()), Err(Error::Parse { .. })));
    }

    #[test]
    fn checksum_depends_on_lengths() {
        let a = Graph::new(2, [(0, 1, 1.0)]).unwrap();
        let b = Graph::new(2, [(0, 1, 1.5)]).unwrap();
        assert_ne!(a.checksum(), b.checksum());
        assert_eq!(a.checksum(), Graph::new(2, [(1, 0, 1.0)]).unwrap().checksum());
    }
}
