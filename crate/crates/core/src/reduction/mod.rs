//! Vertex cover reduction: subdivide a grid-embedded graph of maximum
//! degree 3 into `G_r`, then replace every `G_r` edge by a two-triangle
//! gadget to get `G'`. A vertex cover of size `k` in the input exists
//! exactly when `G'` admits `k + m` sources with stretch at most `xi`.
//! The checks here confirm both directions by brute force on small inputs.

pub mod embedding;
pub mod gadget;

use serde::Serialize;

pub use embedding::{read_embedding, subdivide, NodeRole, PlanarEmbedding, SubdivisionRecord};
pub use gadget::{gadget_case_table, gadget_replace, CaseTable, GadgetParams, ReductionInstance};

use crate::error::Result;
use crate::exhaustive::{minimum_vertex_cover, SubsetSearch};

fn cover_size(vertex_count: usize, edges: &[(usize, usize)], budget: u128) -> Result<usize> {
    let cover = minimum_vertex_cover(vertex_count, edges, vertex_count, budget)?;
    Ok(cover.expect("all vertices always cover").objective as usize)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverRow {
    pub k: usize,
    pub input_has_cover: bool,
    pub subdivided_has_cover: bool,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubdivisionCoverReport {
    pub input_cover: usize,
    pub subdivided_cover: usize,
    pub m: usize,
    pub rows: Vec<CoverRow>,
    pub all_agree: bool,
}

/// For every `k` in `0..=n`: the input has a cover of size `k` iff `G_r`
/// has one of size `k + m`.
pub fn subdivision_cover_check(embedding: &PlanarEmbedding, budget: u128) -> Result<SubdivisionCoverReport> {
    let (g_r, record) = subdivide(embedding)?;
    let n = embedding.vertex_count();
    let input_cover = cover_size(n, &embedding.edge_pairs(), budget)?;
    let gr_edges: Vec<(usize, usize)> = g_r.edges().iter().map(|e| (e.u, e.v)).collect();
    let subdivided_cover = cover_size(g_r.vertex_count(), &gr_edges, budget)?;
    let rows: Vec<CoverRow> = (0..=n)
        .map(|k| {
            let input_has_cover = input_cover <= k;
            let subdivided_has_cover = subdivided_cover <= k + record.m;
            CoverRow {
                k,
                input_has_cover,
                subdivided_has_cover,
                agree: input_has_cover == subdivided_has_cover,
            }
        })
        .collect();
    Ok(SubdivisionCoverReport {
        input_cover,
        subdivided_cover,
        m: record.m,
        all_agree: rows.iter().all(|r| r.agree),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceRow {
    pub k: usize,
    pub source_budget: usize,
    pub has_cover: bool,
    pub has_sources: bool,
    pub witness: Option<Vec<usize>>,
    pub sets_examined: u64,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub xi: f64,
    pub input_cover: usize,
    pub m: usize,
    pub g_prime_vertices: usize,
    pub rows: Vec<EquivalenceRow>,
    pub all_agree: bool,
}

/// For every `k` in `0..=max_k`: the input has a vertex cover of size `k`
/// iff `G'` has `k + m` sources with stretch at most `xi`.
pub fn reduction_equivalence_check(
    embedding: &PlanarEmbedding,
    params: GadgetParams,
    max_k: usize,
    budget: u128,
) -> Result<EquivalenceReport> {
    let (g_r, record) = subdivide(embedding)?;
    let instance = gadget_replace(&g_r, &record, params)?;
    let n = embedding.vertex_count();
    let input_cover = cover_size(n, &embedding.edge_pairs(), budget)?;
    let search = SubsetSearch::new(&instance.g_prime);
    let mut rows = Vec::new();
    for k in 0..=max_k.min(n) {
        let source_budget = instance.source_budget(k);
        let has_cover = input_cover <= k;
        let found = search.exists_with_stretch(source_budget, instance.xi, budget)?;
        rows.push(EquivalenceRow {
            k,
            source_budget,
            has_cover,
            has_sources: found.exists,
            witness: found.witness,
            sets_examined: found.sets_examined,
            agree: has_cover == found.exists,
        });
    }
    Ok(EquivalenceReport {
        xi: instance.xi,
        input_cover,
        m: instance.m,
        g_prime_vertices: instance.g_prime.vertex_count(),
        all_agree: rows.iter().all(|r| r.agree),
        rows,
    })
}
