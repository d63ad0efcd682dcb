//! Grid embeddings of planar graphs and their subdivision into `G_r`.
//!
//! Text format, one record per line, `#` starts a comment:
//!
//! ```text
//! v <id> <x> <y>
//! e <u> <v> : <x1> <y1> <x2> <y2> ...
//! ```
//!
//! Vertex ids must be exactly `0..n`. A polyline lists every corner from `u`
//! to `v`, endpoints included; axis-aligned runs longer than one unit are
//! expanded into unit steps.

use std::collections::HashMap;
use std::io::BufRead;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{parse_field, strip_comment, Graph};

pub type Point = (i64, i64);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmbeddedEdge {
    pub u: usize,
    pub v: usize,
    /// Unit-step polyline from `u` to `v`, endpoints included.
    pub points: Vec<Point>,
}

impl EmbeddedEdge {
    pub fn polyline_length(&self) -> usize {
        self.points.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlanarEmbedding {
    coords: Vec<Point>,
    edges: Vec<EmbeddedEdge>,
}

impl PlanarEmbedding {
    /// Checks degree at most 3, polyline shape and endpoints, and that no
    /// grid point is used twice except shared endpoints.
    pub fn new(coords: Vec<Point>, edges: Vec<(usize, usize, Vec<Point>)>) -> Result<Self> {
        let n = coords.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut occupied: HashMap<Point, Option<usize>> = HashMap::new();
        for &p in &coords {
            if occupied.insert(p, None).is_some() {
                return Err(Error::OverlappingPolylines { x: p.0, y: p.1 });
            }
        }
        let mut degree = vec![0usize; n];
        let mut out = Vec::with_capacity(edges.len());
        for (index, (u, v, corners)) in edges.into_iter().enumerate() {
            for id in [u, v] {
                if id >= n {
                    return Err(Error::InvalidVertexId { id, vertex_count: n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let points = expand(u, v, &corners)?;
            if points[0] != coords[u] || points[points.len() - 1] != coords[v] {
                return Err(Error::MalformedPolyline {
                    u,
                    v,
                    reason: "endpoints do not match vertex coordinates".into(),
                });
            }
            for &p in &points[1..points.len() - 1] {
                match occupied.insert(p, Some(index)) {
                    None => {}
                    Some(Some(other)) if other == index => {
                        return Err(Error::MalformedPolyline {
                            u,
                            v,
                            reason: format!("polyline revisits ({}, {})", p.0, p.1),
                        })
                    }
                    Some(_) => return Err(Error::OverlappingPolylines { x: p.0, y: p.1 }),
                }
            }
            degree[u] += 1;
            degree[v] += 1;
            out.push(EmbeddedEdge { u, v, points });
        }
        if let Some((vertex, &degree)) = degree.iter().enumerate().find(|(_, &d)| d > 3) {
            return Err(Error::DegreeTooHigh { vertex, degree });
        }
        let embedding = PlanarEmbedding { coords, edges: out };
        // rejects parallel edges and disconnected inputs
        embedding.graph()?;
        Ok(embedding)
    }

    pub fn vertex_count(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Point] {
        &self.coords
    }

    pub fn edges(&self) -> &[EmbeddedEdge] {
        &self.edges
    }

    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.u, e.v)).collect()
    }

    /// The embedded graph with each edge weighted by its polyline length.
    pub fn graph(&self) -> Result<Graph> {
        Graph::new(
            self.vertex_count(),
            self.edges.iter().map(|e| (e.u, e.v, e.polyline_length() as f64)),
        )
    }
}

fn expand(u: usize, v: usize, corners: &[Point]) -> Result<Vec<Point>> {
    let malformed = |reason: &str| Error::MalformedPolyline {
        u,
        v,
        reason: reason.into(),
    };
    if corners.len() < 2 {
        return Err(malformed("polyline needs at least two points"));
    }
    let mut points = vec![corners[0]];
    for pair in corners.windows(2) {
        let ((x0, y0), (x1, y1)) = (pair[0], pair[1]);
        let (dx, dy) = ((x1 - x0).signum(), (y1 - y0).signum());
        if (dx != 0) == (dy != 0) {
            return Err(malformed("segments must be axis-aligned and non-empty"));
        }
        let mut p = pair[0];
        while p != pair[1] {
            p = (p.0 + dx, p.1 + dy);
            points.push(p);
        }
    }
    Ok(points)
}

pub fn read_embedding<R: BufRead>(reader: R) -> Result<PlanarEmbedding> {
    let mut vertices: Vec<(usize, Point)> = Vec::new();
    let mut edges = Vec::new();
    for (index, line) in reader.lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        let mut fields = strip_comment(&line).split_whitespace();
        match fields.next() {
            None => {}
            Some("v") => {
                let rest: Vec<&str> = fields.collect();
                if rest.len() != 3 {
                    return Err(Error::parse(line_no, "expected `v <id> <x> <y>`"));
                }
                let id = parse_field(rest[0], line_no, "vertex id")?;
                let x = parse_field(rest[1], line_no, "x coordinate")?;
                let y = parse_field(rest[2], line_no, "y coordinate")?;
                vertices.push((id, (x, y)));
            }
            Some("e") => {
                let rest: Vec<&str> = fields.collect();
                if rest.len() < 3 || rest[2] != ":" {
                    return Err(Error::parse(line_no, "expected `e <u> <v> : <x1> <y1> ...`"));
                }
                let u = parse_field(rest[0], line_no, "vertex id")?;
                let v = parse_field(rest[1], line_no, "vertex id")?;
                let coords = &rest[3..];
                if !coords.len().is_multiple_of(2) {
                    return Err(Error::parse(line_no, "odd number of polyline coordinates"));
                }
                let points = coords
                    .chunks(2)
                    .map(|c| Ok((parse_field(c[0], line_no, "x coordinate")?, parse_field(c[1], line_no, "y coordinate")?)))
                    .collect::<Result<Vec<Point>>>()?;
                edges.push((u, v, points));
            }
            Some(other) => {
                return Err(Error::parse(line_no, format!("unknown record `{other}`")));
            }
        }
    }
    vertices.sort_unstable_by_key(|&(id, _)| id);
    for (expected, &(id, _)) in vertices.iter().enumerate() {
        if id != expected {
            return Err(Error::parse(0, format!("vertex ids must be 0..n; missing or repeated id near {expected}")));
        }
    }
    PlanarEmbedding::new(vertices.into_iter().map(|(_, p)| p).collect(), edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum NodeRole {
    Regular { vertex: usize },
    Auxiliary { edge: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubdividedEdge {
    pub u: usize,
    pub v: usize,
    pub polyline_length: usize,
    /// Half the number of auxiliary nodes on this edge.
    pub k_e: usize,
    /// `G_r` node ids from `u` to `v`, endpoints included.
    pub path: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubdivisionRecord {
    pub edges: Vec<SubdividedEdge>,
    pub m: usize,
    pub node_roles: Vec<NodeRole>,
    /// Node positions on the half-integer grid, scaled by 2.
    pub doubled_coords: Vec<Point>,
}

impl SubdivisionRecord {
    /// Index of the input edge that a `G_r` edge lies on.
    pub fn originating_edge(&self) -> HashMap<(usize, usize), usize> {
        let mut map = HashMap::new();
        for (index, e) in self.edges.iter().enumerate() {
            for w in e.path.windows(2) {
                map.insert((w[0].min(w[1]), w[0].max(w[1])), index);
            }
        }
        map
    }
}

/// Places an even number of auxiliary nodes on every edge: the interior
/// grid points, plus the midpoint of the first unit segment when the count
/// of interior points is odd. Original vertices keep their ids; auxiliary
/// nodes follow in edge order, each edge's nodes listed from `u` to `v`.
pub fn subdivide(embedding: &PlanarEmbedding) -> Result<(Graph, SubdivisionRecord)> {
    let n = embedding.vertex_count();
    let mut node_roles: Vec<NodeRole> = (0..n).map(|vertex| NodeRole::Regular { vertex }).collect();
    let mut doubled_coords: Vec<Point> = embedding.coords().iter().map(|&(x, y)| (2 * x, 2 * y)).collect();
    let mut graph_edges = Vec::new();
    let mut records = Vec::with_capacity(embedding.edges().len());
    let mut m = 0;
    for (index, e) in embedding.edges().iter().enumerate() {
        let len = e.polyline_length();
        let mut path = vec![e.u];
        // (node position doubled, length of the segment leading to it)
        let mut steps: Vec<(Point, f64)> = Vec::with_capacity(len + 1);
        let split = (len - 1) % 2 == 1;
        for (i, w) in e.points.windows(2).enumerate() {
            let (a, b) = (w[0], w[1]);
            if i == 0 && split {
                steps.push(((a.0 + b.0, a.1 + b.1), 0.5));
                steps.push(((2 * b.0, 2 * b.1), 0.5));
            } else {
                steps.push(((2 * b.0, 2 * b.1), 1.0));
            }
        }
        let aux_count = steps.len() - 1;
        for (i, &(p, length)) in steps.iter().enumerate() {
            let node = if i == aux_count {
                e.v
            } else {
                node_roles.push(NodeRole::Auxiliary { edge: index });
                doubled_coords.push(p);
                node_roles.len() - 1
            };
            graph_edges.push((path[path.len() - 1], node, length));
            path.push(node);
        }
        debug_assert_eq!(aux_count % 2, 0);
        m += aux_count / 2;
        records.push(SubdividedEdge {
            u: e.u,
            v: e.v,
            polyline_length: len,
            k_e: aux_count / 2,
            path,
        });
    }
    let graph = Graph::new(node_roles.len(), graph_edges)?;
    Ok((
        graph,
        SubdivisionRecord {
            edges: records,
            m,
            node_roles,
            doubled_coords,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(points: Vec<Point>) -> PlanarEmbedding {
        let end = *points.last().unwrap();
        PlanarEmbedding::new(vec![points[0], end], vec![(0, 1, points)]).unwrap()
    }

    fn lengths(g: &Graph) -> Vec<f64> {
        g.edges().iter().map(|e| e.length).collect()
    }

    #[test]
    fn unit_polyline_is_unchanged() {
        let (g, rec) = subdivide(&single(vec![(0, 0), (1, 0)])).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(lengths(&g), vec![1.0]);
        assert_eq!((rec.m, rec.edges[0].k_e), (0, 0));
    }

    #[test]
    fn length_two_polyline_splits_first_segment() {
        let (g, rec) = subdivide(&single(vec![(0, 0), (1, 0), (2, 0)])).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!((rec.m, rec.edges[0].k_e), (1, 1));
        assert_eq!(rec.edges[0].path, vec![0, 2, 3, 1]);
        assert_eq!(g.edge_length(0, 2), Some(0.5));
        assert_eq!(g.edge_length(2, 3), Some(0.5));
        assert_eq!(g.edge_length(3, 1), Some(1.0));
        assert_eq!(rec.doubled_coords[2], (1, 0));
        assert_eq!(rec.doubled_coords[3], (2, 0));
        assert_eq!(rec.node_roles[2], NodeRole::Auxiliary { edge: 0 });
    }

    #[test]
    fn length_three_polyline_uses_interior_points() {
        let (g, rec) = subdivide(&single(vec![(0, 0), (0, 3)])).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(rec.edges[0].k_e, 1);
        assert_eq!(lengths(&g), vec![1.0; 3]);
    }

    #[test]
    fn parity_is_even_for_all_lengths() {
        for len in 1..12 {
            let (g, rec) = subdivide(&single(vec![(0, 0), (len, 0)])).unwrap();
            let aux = g.vertex_count() - 2;
            assert_eq!(aux % 2, 0, "len {len}");
            assert_eq!(rec.m * 2, aux);
            assert!(lengths(&g).iter().all(|&l| l == 1.0 || l == 0.5));
            let total: f64 = lengths(&g).iter().sum();
            assert_eq!(total, len as f64);
        }
    }

    #[test]
    fn parses_embedding_text() {
        let text = "# triangle\nv 0 0 0\nv 1 1 0\nv 2 0 1\ne 0 1 : 0 0 1 0\ne 1 2 : 1 0 1 1 0 1\ne 0 2 : 0 0 0 1\n";
        let emb = read_embedding(text.as_bytes()).unwrap();
        assert_eq!(emb.vertex_count(), 3);
        assert_eq!(emb.edges()[1].polyline_length(), 2);
        let (g, rec) = subdivide(&emb).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), rec.m), (5, 5, 1));
    }

    #[test]
    fn rejects_bad_embeddings() {
        let coords = vec![(0, 0), (2, 0)];
        let diagonal = PlanarEmbedding::new(coords.clone(), vec![(0, 1, vec![(0, 0), (1, 1), (2, 0)])]);
        assert!(matches!(diagonal, Err(Error::MalformedPolyline { .. })));
        let wrong_end = PlanarEmbedding::new(coords.clone(), vec![(0, 1, vec![(0, 0), (1, 0)])]);
        assert!(matches!(wrong_end, Err(Error::MalformedPolyline { .. })));
        let through_vertex = PlanarEmbedding::new(
            vec![(0, 0), (2, 0), (1, 0)],
            vec![(0, 1, vec![(0, 0), (2, 0)]), (1, 2, vec![(2, 0), (1, 0)])],
        );
        assert!(matches!(through_vertex, Err(Error::OverlappingPolylines { x: 1, y: 0 })));
        let crossing = PlanarEmbedding::new(
            vec![(0, 1), (2, 1), (1, 0), (1, 2)],
            vec![(0, 1, vec![(0, 1), (2, 1)]), (2, 3, vec![(1, 0), (1, 2)]), (0, 2, vec![(0, 1), (0, 0), (1, 0)])],
        );
        assert!(matches!(crossing, Err(Error::OverlappingPolylines { x: 1, y: 1 })));
    }

    #[test]
    fn rejects_degree_four() {
        let coords = vec![(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)];
        let edges = (1..5).map(|i| (0, i, vec![(0, 0), coords[i]])).collect();
        assert!(matches!(
            PlanarEmbedding::new(coords, edges),
            Err(Error::DegreeTooHigh { vertex: 0, degree: 4 })
        ));
    }

    #[test]
    fn rejects_bad_ids_in_text() {
        assert!(read_embedding("v 0 0 0\nv 2 1 0\ne 0 2 : 0 0 1 0\n".as_bytes()).is_err());
        assert!(matches!(
            read_embedding("v 0 0 0\nx 1\n".as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
