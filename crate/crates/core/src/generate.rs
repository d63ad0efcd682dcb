//! Synthetic inputs: triangulated grid meshes, random connected graphs and a
//! corpus of small graphs for exhaustive sweeps.

use std::collections::HashSet;

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::mesh::Mesh;

/// A `rows x cols` lattice of unit squares' corners, each square split
/// along its main diagonal.
pub fn grid_mesh(rows: usize, cols: usize) -> Result<Mesh> {
    if rows < 2 || cols < 2 {
        return Err(Error::EmptyEdgeSet);
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut coords = Vec::with_capacity(rows * cols * 2);
    for r in 0..rows {
        for c in 0..cols {
            coords.extend([c as f64, r as f64]);
        }
    }
    let mut faces = Vec::with_capacity(2 * (rows - 1) * (cols - 1));
    for r in 0..rows - 1 {
        for c in 0..cols - 1 {
            faces.push([id(r, c), id(r, c + 1), id(r + 1, c + 1)]);
            faces.push([id(r, c), id(r + 1, c + 1), id(r + 1, c)]);
        }
    }
    Mesh::new(2, coords, faces)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Lengths {
    Unit,
    /// Uniform on `[lo, hi)`.
    Uniform(f64, f64),
}

impl Lengths {
    fn sample(self, rng: &mut impl Rng) -> f64 {
        match self {
            Lengths::Unit => 1.0,
            Lengths::Uniform(lo, hi) => rng.random_range(lo..hi),
        }
    }
}

/// A random spanning tree (each vertex attaches to a uniformly chosen
/// earlier one) plus up to `extra_edges` further random edges.
pub fn random_connected_graph(n: usize, extra_edges: usize, lengths: Lengths, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(n - 1 + extra_edges);
    for v in 1..n {
        let u = rng.random_range(0..v);
        seen.insert((u, v));
        edges.push((u, v, lengths.sample(&mut rng)));
    }
    let max_edges = n * (n - 1) / 2;
    for _ in 0..extra_edges {
        if seen.len() == max_edges {
            break;
        }
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if a != b && seen.insert((a.min(b), a.max(b))) {
            edges.push((a, b, lengths.sample(&mut rng)));
        }
    }
    Graph::new(n, edges)
}

pub fn path_graph(n: usize, length: f64) -> Result<Graph> {
    Graph::new(n, (1..n).map(|i| (i - 1, i, length)))
}

pub fn cycle_graph(n: usize, length: f64) -> Result<Graph> {
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n, length)))
}

pub fn star_graph(n: usize, length: f64) -> Result<Graph> {
    Graph::new(n, (1..n).map(|i| (0, i, length)))
}

pub fn complete_graph(n: usize, length: f64) -> Result<Graph> {
    Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v, length))))
}

/// Named connected graphs with at most `max_n` vertices: structured
/// families plus random graphs with unit and mixed lengths.
pub fn small_corpus(max_n: usize, random_per_size: usize, seed: u64) -> Vec<(String, Graph)> {
    let mut corpus = Vec::new();
    let mut push = |name: String, g: Result<Graph>| {
        if let Ok(g) = g {
            corpus.push((name, g));
        }
    };
    for n in 2..=max_n {
        push(format!("path{n}"), path_graph(n, 1.0));
        if n >= 3 {
            push(format!("cycle{n}"), cycle_graph(n, 1.0));
            push(format!("star{n}"), star_graph(n, 1.0));
        }
    }
    for n in [4, 5] {
        push(format!("complete{n}"), complete_graph(n, 1.0));
    }
    if max_n >= 12 {
        push("grid3x4".into(), grid_mesh(3, 4).and_then(|m| m.to_graph()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in 3..=max_n {
        for i in 0..random_per_size {
            let extra = rng.random_range(0..=n);
            let s = rng.random::<u64>();
            push(format!("tree_unit{n}_{i}"), random_connected_graph(n, 0, Lengths::Unit, s));
            push(format!("random_unit{n}_{i}"), random_connected_graph(n, extra, Lengths::Unit, s));
            push(
                format!("random_mixed{n}_{i}"),
                random_connected_graph(n, extra, Lengths::Uniform(0.5, 2.0), s),
            );
        }
    }
    corpus
}
