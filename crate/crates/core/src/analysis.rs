//! Stretch factor of a landmark oracle and checks of the inequalities that
//! bound it.
//!
//! The stretch factor is `max_{p != q} approx(p, q) / d(p, q)`. The maximum
//! is always attained by a pair of adjacent vertices, so [`stretch_fast`]
//! scans edges only: one truncated Dijkstra per edge for the true `d(p, q)`
//! (an edge can be longer than the geodesic between its endpoints) and an
//! `O(k)` oracle query. [`stretch_naive`] evaluates every ordered pair from
//! a full all-pairs table and serves as its reference.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::oracle::Oracle;
use crate::sampling::kcenter_radius;
use crate::shortest_path::{all_pairs, LocalSearch};

/// Absolute slack allowed when checking an inequality.
pub const BOUND_TOLERANCE: f64 = 1e-9;
/// Relative tolerance for comparing two computations of the same quantity.
pub const RELATIVE_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_NAIVE_CAP: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StretchMethod {
    /// Adjacent pairs only.
    Fast,
    /// All ordered pairs.
    Naive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StretchReport {
    pub stretch: f64,
    pub witness_pair: (usize, usize),
    pub witness_source: usize,
    pub method: StretchMethod,
    pub pair_count_examined: u64,
}

/// `lhs <= rhs`, up to [`BOUND_TOLERANCE`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub slack: f64,
}

impl BoundCheck {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        BoundCheck {
            name: name.into(),
            lhs,
            rhs,
            holds: lhs <= rhs + BOUND_TOLERANCE,
            slack: rhs - lhs,
        }
    }
}

pub fn relative_eq(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    ratio: f64,
    pair: (usize, usize),
    source_index: usize,
}

/// Larger ratio wins; equal ratios go to the lexicographically smaller pair.
fn better(a: Candidate, b: Candidate) -> Candidate {
    match a.ratio.total_cmp(&b.ratio) {
        Ordering::Greater => a,
        Ordering::Less => b,
        Ordering::Equal => {
            if a.pair <= b.pair {
                a
            } else {
                b
            }
        }
    }
}

pub fn stretch_fast(graph: &Graph, oracle: &Oracle) -> Result<StretchReport> {
    oracle.check_graph(graph)?;
    let n = graph.vertex_count();
    let best = graph
        .edges()
        .par_iter()
        .map_init(
            || LocalSearch::new(n),
            |search, e| {
                let d = search
                    .edge_endpoint_distance(graph, e.u, e.v)
                    .expect("edges of the graph are adjacent");
                let (approx, source_index) = oracle.approx_unchecked(e.u, e.v);
                Candidate {
                    ratio: approx / d,
                    pair: (e.u, e.v),
                    source_index,
                }
            },
        )
        .reduce_with(better)
        .ok_or(Error::EmptyEdgeSet)?;
    Ok(report(oracle, best, StretchMethod::Fast, graph.edge_count() as u64))
}

pub fn stretch_naive(graph: &Graph, oracle: &Oracle, cap: usize) -> Result<StretchReport> {
    oracle.check_graph(graph)?;
    let n = graph.vertex_count();
    if n > cap {
        return Err(Error::GraphTooLargeForNaive { n, cap });
    }
    let apsp = all_pairs(graph);
    let best = (0..n)
        .into_par_iter()
        .flat_map_iter(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
        .map(|(p, q)| {
            let (approx, source_index) = oracle.approx_unchecked(p, q);
            Candidate {
                ratio: approx / apsp.get(p, q),
                pair: (p, q),
                source_index,
            }
        })
        .reduce_with(better)
        .ok_or(Error::EmptyEdgeSet)?;
    Ok(report(oracle, best, StretchMethod::Naive, (n * (n - 1)) as u64))
}

fn report(oracle: &Oracle, best: Candidate, method: StretchMethod, examined: u64) -> StretchReport {
    StretchReport {
        stretch: best.ratio,
        witness_pair: best.pair,
        witness_source: oracle.sources()[best.source_index],
        method,
        pair_count_examined: examined,
    }
}

/// Builds an oracle for `sources` and returns its fast stretch.
pub fn stretch_of_sources(graph: &Graph, sources: &[usize]) -> Result<StretchReport> {
    stretch_fast(graph, &Oracle::build(graph, sources)?)
}

/// Two-sided bound of the stretch by the covering radius `R`:
/// `2R / l_max - 1 <= F <= 2R / l_min + 1`.
pub fn check_radius_sandwich(graph: &Graph, oracle: &Oracle) -> Result<(BoundCheck, BoundCheck)> {
    let stats = graph.edge_stats()?;
    let radius = oracle.covering_radius();
    let stretch = stretch_fast(graph, oracle)?.stretch;
    Ok((
        BoundCheck::new("radius_sandwich_lower", 2.0 * radius / stats.l_max - 1.0, stretch),
        BoundCheck::new("radius_sandwich_upper", stretch, 2.0 * radius / stats.l_min + 1.0),
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DetourViolation {
    pub u: usize,
    pub v: usize,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DetourReport {
    pub violations: Vec<DetourViolation>,
    /// The pair with the least slack, as a bound check.
    pub tightest: BoundCheck,
    pub tightest_pair: (usize, usize),
    pub pairs_examined: u64,
}

/// For every ordered pair `(u, v)`, including `u == v`:
/// `d(u, s_u) + d(s_u, v) <= approx(u, v) + 2 d(u, v)`, where `s_u` is the
/// source nearest to `u`.
pub fn check_nearest_source_detour(graph: &Graph, oracle: &Oracle, cap: usize) -> Result<DetourReport> {
    oracle.check_graph(graph)?;
    let n = graph.vertex_count();
    if n > cap {
        return Err(Error::GraphTooLargeForNaive { n, cap });
    }
    let apsp = all_pairs(graph);
    let table = oracle.table();
    let mut violations = Vec::new();
    let mut tightest: Option<(f64, (usize, usize), f64, f64)> = None;
    for u in 0..n {
        let (nearest, to_nearest) = oracle.nearest_unchecked(u);
        for v in 0..n {
            let lhs = to_nearest + table.get(nearest, v);
            let rhs = oracle.approx_unchecked(u, v).0 + 2.0 * apsp.get(u, v);
            let slack = rhs - lhs;
            if lhs > rhs + BOUND_TOLERANCE {
                violations.push(DetourViolation { u, v, lhs, rhs });
            }
            if tightest.is_none_or(|(s, ..)| slack < s) {
                tightest = Some((slack, (u, v), lhs, rhs));
            }
        }
    }
    let (_, pair, lhs, rhs) = tightest.expect("graphs have at least one vertex");
    Ok(DetourReport {
        violations,
        tightest: BoundCheck::new("nearest_source_detour", lhs, rhs),
        tightest_pair: pair,
        pairs_examined: (n * n) as u64,
    })
}

/// Right-hand side of the FPS versus optimal-k-center stretch bound.
pub fn kcenter_transfer_rhs(r_e: f64, kcenter_stretch: f64) -> f64 {
    2.0 * r_e * kcenter_stretch + 6.0 * r_e + 1.0
}

/// Right-hand side of the FPS versus optimal-placement stretch bound.
pub fn fps_bound_rhs(r_e: f64, optimal_stretch: f64) -> f64 {
    2.0 * r_e * r_e * optimal_stretch + 2.0 * r_e * r_e + 8.0 * r_e + 1.0
}

/// `F_fps <= 2 r_e F_kc + 6 r_e + 1` where `F_kc` is the stretch of an
/// optimal k-center source set of the same size.
pub fn check_kcenter_transfer(
    graph: &Graph,
    fps_sources: &[usize],
    kcenter_sources: &[usize],
) -> Result<BoundCheck> {
    if fps_sources.len() != kcenter_sources.len() {
        return Err(Error::SourceSetSizeMismatch {
            left: fps_sources.len(),
            right: kcenter_sources.len(),
        });
    }
    let r_e = graph.edge_stats()?.r_e;
    let fps = stretch_of_sources(graph, fps_sources)?.stretch;
    let kc = stretch_of_sources(graph, kcenter_sources)?.stretch;
    Ok(BoundCheck::new("kcenter_transfer", fps, kcenter_transfer_rhs(r_e, kc)))
}

/// `F_fps <= 2 r_e^2 F* + 2 r_e^2 + 8 r_e + 1`.
pub fn check_fps_bound(graph: &Graph, fps_sources: &[usize], optimal_stretch: f64) -> Result<BoundCheck> {
    let r_e = graph.edge_stats()?.r_e;
    let fps = stretch_of_sources(graph, fps_sources)?.stretch;
    Ok(BoundCheck::new("fps_stretch_bound", fps, fps_bound_rhs(r_e, optimal_stretch)))
}

/// Covering radius of the FPS sources is at most twice the optimum.
pub fn check_kcenter_two_approx(graph: &Graph, fps_sources: &[usize], optimal_radius: f64) -> Result<BoundCheck> {
    let radius = kcenter_radius(graph, fps_sources)?;
    Ok(BoundCheck::new("kcenter_two_approximation", radius, 2.0 * optimal_radius))
}
