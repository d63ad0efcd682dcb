//! Gadget replacement: every edge `(u, v)` of length `l` becomes two
//! triangles `{u, a, b}` and `{v, a, b}` with `|ua| = |ub| = |va| = |vb| = l/2`
//! and `|ab| = l/xi`. There is no direct `u`-`v` edge, so `d(u, v)` stays `l`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::oracle::Oracle;
use crate::reduction::embedding::SubdivisionRecord;
use crate::shortest_path::all_pairs;

pub const DEFAULT_XI: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GadgetParams {
    pub xi: f64,
}

impl GadgetParams {
    pub fn new(xi: f64) -> Result<Self> {
        // also rejects NaN
        if xi.is_nan() || xi < 3.0 || !xi.is_finite() {
            return Err(Error::XiTooSmall(xi));
        }
        Ok(GadgetParams { xi })
    }

    /// Length of each of the four slanted edges for a gadget replacing an
    /// edge of length `length`.
    pub fn slant(&self, length: f64) -> f64 {
        length / 2.0
    }

    pub fn base(&self, length: f64) -> f64 {
        length / self.xi
    }
}

impl Default for GadgetParams {
    fn default() -> Self {
        GadgetParams { xi: DEFAULT_XI }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GadgetTrace {
    pub u: usize,
    pub v: usize,
    pub a: usize,
    pub b: usize,
    /// Length of the replaced `G_r` edge.
    pub length: f64,
    pub slant: f64,
    pub base: f64,
    /// Index of the input edge the replaced `G_r` edge lies on.
    pub original_edge: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionInstance {
    #[serde(skip)]
    pub g_prime: Graph,
    pub faces: Vec<[usize; 3]>,
    pub m: usize,
    pub xi: f64,
    pub gadgets: Vec<GadgetTrace>,
}

impl ReductionInstance {
    /// Number of sources in `G'` that corresponds to a vertex cover of size
    /// `k` in the input graph.
    pub fn source_budget(&self, k: usize) -> usize {
        k + self.m
    }

    /// Every edge of `G'` borders one or two faces, every face edge is a
    /// graph edge, and `G'` is connected (guaranteed by construction of
    /// [`Graph`]).
    pub fn faces_form_triangle_graph(&self) -> bool {
        let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for f in &self.faces {
            for (x, y) in [(f[0], f[1]), (f[1], f[2]), (f[0], f[2])] {
                *counts.entry((x.min(y), x.max(y))).or_default() += 1;
            }
        }
        counts.len() == self.g_prime.edge_count()
            && self
                .g_prime
                .edges()
                .iter()
                .all(|e| matches!(counts.get(&(e.u, e.v)), Some(1 | 2)))
    }
}

/// Replaces each `G_r` edge, in canonical edge order, by a gadget. Gadget
/// `i` adds nodes `a = n + 2i` and `b = n + 2i + 1`.
pub fn gadget_replace(g_r: &Graph, record: &SubdivisionRecord, params: GadgetParams) -> Result<ReductionInstance> {
    let params = GadgetParams::new(params.xi)?;
    let n = g_r.vertex_count();
    let origin = record.originating_edge();
    let mut edges = Vec::with_capacity(5 * g_r.edge_count());
    let mut faces = Vec::with_capacity(2 * g_r.edge_count());
    let mut gadgets = Vec::with_capacity(g_r.edge_count());
    for (i, e) in g_r.edges().iter().enumerate() {
        let (a, b) = (n + 2 * i, n + 2 * i + 1);
        let slant = params.slant(e.length);
        let base = params.base(e.length);
        edges.extend([(e.u, a, slant), (e.u, b, slant), (e.v, a, slant), (e.v, b, slant), (a, b, base)]);
        faces.push([e.u, a, b]);
        faces.push([e.v, a, b]);
        gadgets.push(GadgetTrace {
            u: e.u,
            v: e.v,
            a,
            b,
            length: e.length,
            slant,
            base,
            original_edge: origin[&(e.u, e.v)],
        });
    }
    Ok(ReductionInstance {
        g_prime: Graph::new(n + 2 * g_r.edge_count(), edges)?,
        faces,
        m: record.m,
        xi: params.xi,
        gadgets,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseRow {
    pub case: &'static str,
    pub pair: (usize, usize),
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseTable {
    pub xi: f64,
    /// Single unit gadget `u = 0, a = 1, b = 2, v = 3` with source `u`.
    pub single: Vec<CaseRow>,
    /// Two unit gadgets sharing `v1 = u2`: `u1 = 0, a1 = 1, b1 = 2,
    /// v1 = 3, a2 = 4, b2 = 5, v2 = 6`, with sources `u1` and `v2`. Every
    /// pair with one end in `{u1, a1, b1}` and the other in `{a2, b2, v2}`.
    pub cross: Vec<CaseRow>,
    pub cross_max: CaseRow,
}

fn ratio_rows(graph: &Graph, sources: &[usize], pairs: &[(&'static str, usize, usize)]) -> Vec<CaseRow> {
    let oracle = Oracle::build(graph, sources).expect("gadget graphs are valid");
    let apsp = all_pairs(graph);
    pairs
        .iter()
        .map(|&(case, p, q)| CaseRow {
            case,
            pair: (p, q),
            ratio: oracle.approx_unchecked(p, q).0 / apsp.get(p, q),
        })
        .collect()
}

/// Ratios `approx / d` for the pair classes of the gadget's case analysis.
pub fn gadget_case_table(params: GadgetParams) -> CaseTable {
    let (slant, base) = (params.slant(1.0), params.base(1.0));
    let single = Graph::new(4, [(0, 1, slant), (0, 2, slant), (3, 1, slant), (3, 2, slant), (1, 2, base)])
        .expect("gadget graphs are valid");
    let single_rows = ratio_rows(
        &single,
        &[0],
        &[
            ("a_b", 1, 2),
            ("v_a", 3, 1),
            ("v_b", 3, 2),
            ("source_a", 0, 1),
            ("source_b", 0, 2),
            ("source_v", 0, 3),
        ],
    );

    let double = Graph::new(
        7,
        [
            (0, 1, slant),
            (0, 2, slant),
            (3, 1, slant),
            (3, 2, slant),
            (1, 2, base),
            (3, 4, slant),
            (3, 5, slant),
            (6, 4, slant),
            (6, 5, slant),
            (4, 5, base),
        ],
    )
    .expect("gadget graphs are valid");
    let pairs: Vec<_> = [0, 1, 2]
        .into_iter()
        .flat_map(|p| [4, 5, 6].into_iter().map(move |q| ("cross", p, q)))
        .collect();
    let cross = ratio_rows(&double, &[0, 6], &pairs);
    // first maximum in lexicographic pair order
    let cross_max = cross
        .iter()
        .fold(None::<&CaseRow>, |best, row| match best {
            Some(b) if b.ratio >= row.ratio => Some(b),
            _ => Some(row),
        })
        .expect("nine cross pairs")
        .clone();
    CaseTable {
        xi: params.xi,
        single: single_rows,
        cross,
        cross_max,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::embedding::{subdivide, PlanarEmbedding};
    use crate::shortest_path::sssp;

    fn row<'a>(rows: &'a [CaseRow], case: &str) -> &'a CaseRow {
        rows.iter().find(|r| r.case == case).unwrap()
    }

    #[test]
    fn xi_lower_limit() {
        assert!(matches!(GadgetParams::new(2.9), Err(Error::XiTooSmall(_))));
        assert!(GadgetParams::new(f64::NAN).is_err());
        assert!(GadgetParams::new(3.0).is_ok());
    }

    #[test]
    fn scaling() {
        let p = GadgetParams::new(4.0).unwrap();
        assert_eq!((p.slant(0.5), p.base(0.5)), (0.25, 0.125));
        let p = GadgetParams::new(3.0).unwrap();
        assert_eq!(2.0 * p.slant(1.0) / p.base(1.0), 3.0);
    }

    #[test]
    fn case_table_xi_three() {
        let t = gadget_case_table(GadgetParams::new(3.0).unwrap());
        assert_eq!(row(&t.single, "a_b").ratio, 3.0);
        assert_eq!(row(&t.single, "v_a").ratio, 3.0);
        assert_eq!(row(&t.single, "v_b").ratio, 3.0);
        for case in ["source_a", "source_b", "source_v"] {
            assert_eq!(row(&t.single, case).ratio, 1.0);
        }
        assert_eq!(t.cross_max.ratio, 2.0);
        assert_eq!(t.cross_max.pair, (1, 4));
    }

    #[test]
    fn case_table_xi_five() {
        let t = gadget_case_table(GadgetParams::new(5.0).unwrap());
        assert_eq!(row(&t.single, "a_b").ratio, 5.0);
        assert_eq!(row(&t.single, "v_a").ratio, 3.0);
    }

    #[test]
    fn single_edge_instance() {
        let emb = PlanarEmbedding::new(vec![(0, 0), (1, 0)], vec![(0, 1, vec![(0, 0), (1, 0)])]).unwrap();
        let (g_r, rec) = subdivide(&emb).unwrap();
        let inst = gadget_replace(&g_r, &rec, GadgetParams::default()).unwrap();
        assert_eq!(inst.g_prime.vertex_count(), 4);
        assert_eq!(inst.g_prime.edge_count(), 5);
        assert_eq!(inst.g_prime.edge_length(0, 1), None);
        assert_eq!(sssp(&inst.g_prime, 0).unwrap().dist[1], 1.0);
        assert_eq!(inst.faces, vec![[0, 2, 3], [1, 2, 3]]);
        assert!(inst.faces_form_triangle_graph());
        assert_eq!(inst.source_budget(1), 1);
    }

    #[test]
    fn gadgets_preserve_subdivided_distances() {
        let emb = PlanarEmbedding::new(
            vec![(0, 0), (1, 0), (0, 1)],
            vec![
                (0, 1, vec![(0, 0), (1, 0)]),
                (1, 2, vec![(1, 0), (1, 1), (0, 1)]),
                (0, 2, vec![(0, 0), (0, 1)]),
            ],
        )
        .unwrap();
        let (g_r, rec) = subdivide(&emb).unwrap();
        let inst = gadget_replace(&g_r, &rec, GadgetParams::new(4.0).unwrap()).unwrap();
        assert_eq!(inst.g_prime.vertex_count(), 15);
        assert_eq!(inst.m, 1);
        assert!(inst.faces_form_triangle_graph());
        let in_gr = all_pairs(&g_r);
        let in_gp = all_pairs(&inst.g_prime);
        for u in 0..g_r.vertex_count() {
            for v in 0..g_r.vertex_count() {
                assert_eq!(in_gr.get(u, v), in_gp.get(u, v));
            }
        }
        assert!(inst.gadgets.iter().all(|g| g.original_edge < 3));
        // longest slant over shortest base
        assert_eq!(inst.g_prime.edge_stats().unwrap().r_e, 4.0);
    }
}
