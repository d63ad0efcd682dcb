//! Triangle meshes and the edge graph they induce.

use std::collections::{BTreeMap, VecDeque};
use std::io::{BufRead, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{parse_field, strip_comment, Graph};

/// Vertex positions in `R^dim` plus triangular faces.
///
/// Construction only checks that face indices are in range; the structural
/// properties a mesh is expected to have are reported by [`Mesh::validate`].
#[derive(Clone, Debug)]
pub struct Mesh {
    dim: usize,
    coords: Vec<f64>,
    faces: Vec<[usize; 3]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Informational checks never fail a report.
    pub informational: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub vertex_count: usize,
    pub face_count: usize,
    pub edge_count: usize,
    pub checks: Vec<ValidationCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.informational)
    }

    pub fn check(&self, name: &str) -> Option<&ValidationCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl Mesh {
    pub fn new(dim: usize, coords: Vec<f64>, faces: Vec<[usize; 3]>) -> Result<Mesh> {
        if dim == 0 || !coords.len().is_multiple_of(dim) {
            return Err(Error::parse(
                0,
                format!("{} coordinates do not form {dim}-dimensional points", coords.len()),
            ));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::parse(0, format!("coordinate {i} is not finite")));
        }
        let n = coords.len() / dim;
        for (f, face) in faces.iter().enumerate() {
            if let Some(&id) = face.iter().find(|&&id| id >= n) {
                return Err(Error::InvalidFace {
                    face: f,
                    reason: format!("vertex id {id} out of range for {n} vertices"),
                });
            }
        }
        Ok(Mesh { dim, coords, faces })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn point(&self, v: usize) -> &[f64] {
        &self.coords[v * self.dim..(v + 1) * self.dim]
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        self.point(a)
            .iter()
            .zip(self.point(b))
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }

    /// Undirected edges derived from faces, with the number of incident faces.
    pub fn edge_face_counts(&self) -> BTreeMap<(usize, usize), usize> {
        let mut counts = BTreeMap::new();
        for face in &self.faces {
            for (a, b) in face_edges(face) {
                if a != b {
                    *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
                }
            }
        }
        counts
    }

    /// One graph edge per distinct mesh edge, weighted by Euclidean length.
    pub fn to_graph(&self) -> Result<Graph> {
        for (f, face) in self.faces.iter().enumerate() {
            if has_repeated_vertex(face) {
                return Err(Error::InvalidFace {
                    face: f,
                    reason: format!("repeated vertex in {face:?}"),
                });
            }
        }
        let mut edges = Vec::new();
        for &(u, v) in self.edge_face_counts().keys() {
            let length = self.distance(u, v);
            if length == 0.0 {
                return Err(Error::DegenerateEdge { u, v });
            }
            edges.push((u, v, length));
        }
        Graph::new(self.vertex_count(), edges)
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.vertex_count();
        let edges = self.edge_face_counts();
        let mut checks = Vec::new();

        let bad_faces: Vec<usize> = (0..self.faces.len())
            .filter(|&f| has_repeated_vertex(&self.faces[f]))
            .collect();
        checks.push(ValidationCheck {
            name: "distinct_face_vertices",
            passed: bad_faces.is_empty(),
            informational: false,
            detail: summarize("faces with a repeated vertex", &bad_faces),
        });

        let boundary = edges.values().filter(|&&c| c == 1).count();
        let interior = edges.values().filter(|&&c| c == 2).count();
        let non_manifold: Vec<(usize, usize)> = edges
            .iter()
            .filter(|(_, &c)| c > 2)
            .map(|(&e, _)| e)
            .collect();
        checks.push(ValidationCheck {
            name: "edge_face_incidence",
            passed: non_manifold.is_empty(),
            informational: false,
            detail: format!(
                "{boundary} boundary edges, {interior} interior edges, {} edges in more than two faces{}",
                non_manifold.len(),
                non_manifold
                    .first()
                    .map(|e| format!(" (first {e:?})"))
                    .unwrap_or_default()
            ),
        });

        let components = component_count(n, edges.keys().copied());
        checks.push(ValidationCheck {
            name: "connectivity",
            passed: components == 1,
            informational: false,
            detail: format!("{components} connected components"),
        });

        let degenerate: Vec<usize> = (0..self.faces.len())
            .filter(|&f| !has_repeated_vertex(&self.faces[f]) && self.is_degenerate(&self.faces[f]))
            .collect();
        checks.push(ValidationCheck {
            name: "non_degenerate_faces",
            passed: degenerate.is_empty(),
            informational: false,
            detail: summarize("faces with coincident vertices or zero area", &degenerate),
        });

        let irregular = self.non_manifold_vertices();
        checks.push(ValidationCheck {
            name: "manifold_vertices",
            passed: irregular.is_empty(),
            informational: true,
            detail: summarize(
                "vertices whose incident faces do not form a single fan",
                &irregular,
            ),
        });

        ValidationReport {
            vertex_count: n,
            face_count: self.faces.len(),
            edge_count: edges.len(),
            checks,
        }
    }

    fn is_degenerate(&self, face: &[usize; 3]) -> bool {
        let [a, b, c] = *face;
        let pa = self.point(a);
        let e1: Vec<f64> = self.point(b).iter().zip(pa).map(|(x, y)| x - y).collect();
        let e2: Vec<f64> = self.point(c).iter().zip(pa).map(|(x, y)| x - y).collect();
        let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>();
        // squared area (times 4) via the Gram determinant; valid in any dimension
        let gram = dot(&e1, &e1) * dot(&e2, &e2) - dot(&e1, &e2).powi(2);
        gram <= 0.0
    }

    /// Vertices whose incident triangles cannot be ordered cyclically (or as
    /// a single open fan on the boundary) around them.
    fn non_manifold_vertices(&self) -> Vec<usize> {
        let mut links: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.vertex_count()];
        for face in self.faces.iter().filter(|f| !has_repeated_vertex(f)) {
            for i in 0..3 {
                links[face[i]].push((face[(i + 1) % 3], face[(i + 2) % 3]));
            }
        }
        let mut out = Vec::new();
        for (v, link) in links.iter().enumerate() {
            if link.is_empty() {
                continue;
            }
            let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
            for &(a, b) in link {
                *degree.entry(a).or_insert(0) += 1;
                *degree.entry(b).or_insert(0) += 1;
            }
            let ids: Vec<usize> = degree.keys().copied().collect();
            let index = |x: usize| ids.binary_search(&x).unwrap();
            let fan = degree.values().all(|&d| d <= 2)
                && component_count(ids.len(), link.iter().map(|&(a, b)| (index(a), index(b)))) == 1;
            if !fan {
                out.push(v);
            }
        }
        out
    }
}

fn face_edges(face: &[usize; 3]) -> [(usize, usize); 3] {
    [(face[0], face[1]), (face[1], face[2]), (face[2], face[0])]
}

fn has_repeated_vertex(face: &[usize; 3]) -> bool {
    face[0] == face[1] || face[1] == face[2] || face[0] == face[2]
}

fn summarize(what: &str, items: &[usize]) -> String {
    match items.first() {
        None => format!("0 {what}"),
        Some(first) => format!("{} {what} (first {first})", items.len()),
    }
}

fn component_count(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> usize {
    let mut adj = vec![Vec::new(); n];
    for (a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    count
}

/// Reads an OFF file. Only triangular faces are accepted. The counts may
/// follow `OFF` on the same line.
pub fn read_off<R: BufRead>(reader: R) -> Result<Mesh> {
    let mut tokens: Vec<(usize, Vec<String>)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let body = strip_comment(&line);
        if !body.is_empty() {
            tokens.push((idx + 1, body.split_whitespace().map(str::to_owned).collect()));
        }
    }
    let mut lines = tokens.into_iter();
    let (lineno, mut header) = lines.next().ok_or_else(|| Error::parse(0, "empty file"))?;
    if header.first().map(String::as_str) != Some("OFF") {
        return Err(Error::parse(lineno, "missing `OFF` header"));
    }
    header.remove(0);
    let (lineno, counts) = if header.is_empty() {
        lines
            .next()
            .ok_or_else(|| Error::parse(lineno, "missing counts line"))?
    } else {
        (lineno, header)
    };
    if counts.len() < 2 {
        return Err(Error::parse(lineno, "expected `nv nf ne`"));
    }
    let nv = parse_field::<usize>(&counts[0], lineno, "vertex count")?;
    let nf = parse_field::<usize>(&counts[1], lineno, "face count")?;

    let mut coords = Vec::with_capacity(nv * 3);
    for _ in 0..nv {
        let (lineno, fields) = lines
            .next()
            .ok_or_else(|| Error::parse(lineno, "file ends before all vertices"))?;
        if fields.len() != 3 {
            return Err(Error::parse(lineno, "expected three coordinates"));
        }
        for f in &fields {
            coords.push(parse_field::<f64>(f, lineno, "coordinate")?);
        }
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (lineno, fields) = lines
            .next()
            .ok_or_else(|| Error::parse(lineno, "file ends before all faces"))?;
        let arity = parse_field::<usize>(&fields[0], lineno, "face arity")?;
        if arity != 3 || fields.len() < 4 {
            return Err(Error::parse(
                lineno,
                format!("only triangular faces are supported, found arity {arity}"),
            ));
        }
        let mut face = [0usize; 3];
        for (slot, f) in face.iter_mut().zip(&fields[1..4]) {
            *slot = parse_field::<usize>(f, lineno, "vertex id")?;
        }
        faces.push(face);
    }
    if let Some((lineno, _)) = lines.next() {
        return Err(Error::parse(lineno, "unexpected trailing data"));
    }
    Mesh::new(3, coords, faces)
}

pub fn write_off<W: Write>(mesh: &Mesh, mut out: W) -> Result<()> {
    writeln!(out, "OFF")?;
    writeln!(out, "{} {} {}", mesh.vertex_count(), mesh.faces().len(), mesh.edge_face_counts().len())?;
    for v in 0..mesh.vertex_count() {
        let p = mesh.point(v);
        let mut row: Vec<String> = p.iter().map(|c| c.to_string()).collect();
        row.resize(3, "0".to_owned());
        writeln!(out, "{}", row.join(" "))?;
    }
    for f in mesh.faces() {
        writeln!(out, "3 {} {} {}", f[0], f[1], f[2])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetrahedron() -> Mesh {
        Mesh::new(
            3,
            vec![0., 0., 0., 1., 0., 0., 0., 1., 0., 0., 0., 1.],
            vec![[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]],
        )
        .unwrap()
    }

    #[test]
    fn single_face_edge_lengths() {
        let m = Mesh::new(3, vec![0., 0., 0., 1., 0., 0., 0., 1., 0.], vec![[0, 1, 2]]).unwrap();
        let g = m.to_graph().unwrap();
        let lengths: Vec<f64> = g.edges().iter().map(|e| e.length).collect();
        assert_eq!(lengths, vec![1.0, 1.0, 2f64.sqrt()]);
    }

    #[test]
    fn shared_edge_appears_once() {
        let m = Mesh::new(
            3,
            vec![0., 0., 0., 1., 0., 0., 0., 1., 0., 1., 1., 0.],
            vec![[0, 1, 2], [1, 3, 2]],
        )
        .unwrap();
        assert_eq!(m.to_graph().unwrap().edge_count(), 5);
        assert_eq!(m.edge_face_counts()[&(1, 2)], 2);
    }

    #[test]
    fn coincident_vertices_are_degenerate() {
        let m = Mesh::new(3, vec![0., 0., 0., 0., 0., 0., 0., 1., 0.], vec![[0, 1, 2]]).unwrap();
        assert!(matches!(m.to_graph(), Err(Error::DegenerateEdge { u: 0, v: 1 })));
        let report = m.validate();
        assert!(!report.check("non_degenerate_faces").unwrap().passed);
    }

    #[test]
    fn tetrahedron_is_closed_manifold() {
        let m = tetrahedron();
        let report = m.validate();
        assert!(report.passed(), "{report:?}");
        assert!(m.edge_face_counts().values().all(|&c| c == 2));
        assert!(report.check("manifold_vertices").unwrap().passed);
    }

    #[test]
    fn single_triangle_is_boundary_mesh() {
        let m = Mesh::new(3, vec![0., 0., 0., 1., 0., 0., 0., 1., 0.], vec![[0, 1, 2]]).unwrap();
        let report = m.validate();
        assert!(report.passed());
        assert!(m.edge_face_counts().values().all(|&c| c == 1));
    }

    #[test]
    fn two_separate_triangles_fail_connectivity() {
        let m = Mesh::new(
            3,
            vec![0., 0., 0., 1., 0., 0., 0., 1., 0., 5., 0., 0., 6., 0., 0., 5., 1., 0.],
            vec![[0, 1, 2], [3, 4, 5]],
        )
        .unwrap();
        let report = m.validate();
        assert!(!report.passed());
        assert!(!report.check("connectivity").unwrap().passed);
        assert!(matches!(m.to_graph(), Err(Error::DisconnectedGraph { .. })));
    }

    #[test]
    fn bowtie_vertex_is_flagged_but_informational() {
        // two triangles sharing only vertex 0
        let m = Mesh::new(
            3,
            vec![0., 0., 0., 1., 0., 0., 1., 1., 0., -1., 0., 0., -1., -1., 0.],
            vec![[0, 1, 2], [0, 3, 4]],
        )
        .unwrap();
        let report = m.validate();
        let check = report.check("manifold_vertices").unwrap();
        assert!(!check.passed && check.informational);
        assert!(report.passed());
    }

    #[test]
    fn three_faces_on_one_edge_fail_incidence() {
        let m = Mesh::new(
            3,
            vec![0., 0., 0., 1., 0., 0., 0., 1., 0., 0., -1., 0., 0., 0., 1.],
            vec![[0, 1, 2], [0, 1, 3], [0, 1, 4]],
        )
        .unwrap();
        assert!(!m.validate().check("edge_face_incidence").unwrap().passed);
    }

    #[test]
    fn off_round_trip() {
        let m = tetrahedron();
        let mut buf = Vec::new();
        write_off(&m, &mut buf).unwrap();
        let back = read_off(buf.as_slice()).unwrap();
        assert_eq!(back.faces(), m.faces());
        assert_eq!(back.point(3), m.point(3));
    }

    #[test]
    fn off_rejects_quads_and_bad_ids() {
        let quad = "OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n";
        assert!(matches!(read_off(quad.as_bytes()), Err(Error::Parse { line: 7, .. })));
        let bad = "OFF 3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n";
        assert!(matches!(read_off(bad.as_bytes()), Err(Error::InvalidFace { .. })));
        assert!(matches!(read_off("PLY\n".as_bytes()), Err(Error::Parse { .. })));
    }
}
