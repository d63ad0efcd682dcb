//! Any-pair approximate distances through landmark sources.
//!
//! The oracle stores exact distances from `k` sources to every vertex and
//! answers `d(p, q) ~ min_i d(p, s_i) + d(s_i, q)` in `O(k)`.
//!
//! # File format
//!
//! Little-endian binary:
//!
//! ```text
//! magic    5 bytes  "GSTR1"
//! n        u64
//! k        u64
//! sources  k x u64
//! table    k*n x f64, source-major
//! checksum u64      graph checksum (see `Graph::checksum`)
//! ```

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::shortest_path::{multi_sssp, DistanceTable};

const MAGIC: &[u8; 5] = b"GSTR1";

#[derive(Clone, Debug, PartialEq)]
pub struct Oracle {
    table: DistanceTable,
    graph_checksum: u64,
}

/// Approximate distance and the source that attains it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ApproxDistance {
    pub value: f64,
    pub witness_source: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NearestSource {
    pub source: usize,
    pub distance: f64,
}

impl Oracle {
    pub fn build(graph: &Graph, sources: &[usize]) -> Result<Oracle> {
        let table = multi_sssp(graph, sources)?;
        Ok(Oracle {
            table,
            graph_checksum: graph.checksum(),
        })
    }

    /// Wraps a table already computed for `graph`.
    pub fn from_table(graph: &Graph, table: DistanceTable) -> Result<Oracle> {
        if table.vertex_count() != graph.vertex_count() {
            return Err(Error::GraphOracleMismatch(format!(
                "table has {} columns, graph has {} vertices",
                table.vertex_count(),
                graph.vertex_count()
            )));
        }
        Ok(Oracle {
            table,
            graph_checksum: graph.checksum(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.table.vertex_count()
    }

    pub fn k(&self) -> usize {
        self.table.k()
    }

    pub fn sources(&self) -> &[usize] {
        self.table.sources()
    }

    pub fn table(&self) -> &DistanceTable {
        &self.table
    }

    pub fn graph_checksum(&self) -> u64 {
        self.graph_checksum
    }

    /// Oracle over the first `k` sources only.
    pub fn prefix(&self, k: usize) -> Oracle {
        Oracle {
            table: self.table.prefix(k),
            graph_checksum: self.graph_checksum,
        }
    }

    pub fn check_graph(&self, graph: &Graph) -> Result<()> {
        if graph.vertex_count() != self.vertex_count() {
            return Err(Error::GraphOracleMismatch(format!(
                "oracle has {} vertices, graph has {}",
                self.vertex_count(),
                graph.vertex_count()
            )));
        }
        let found = graph.checksum();
        if found != self.graph_checksum {
            return Err(Error::ChecksumMismatch {
                expected: self.graph_checksum,
                found,
            });
        }
        Ok(())
    }

    fn check_vertex(&self, id: usize) -> Result<()> {
        if id < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertexId {
                id,
                vertex_count: self.vertex_count(),
            })
        }
    }

    /// `min_i d(p, s_i) + d(s_i, q)`; ties go to the earlier source.
    ///
    /// For `p == q` this is the literal formula, `2 d(p, s_p)`, not zero.
    pub fn approx_distance(&self, p: usize, q: usize) -> Result<ApproxDistance> {
        self.check_vertex(p)?;
        self.check_vertex(q)?;
        let (value, index) = self.approx_unchecked(p, q);
        Ok(ApproxDistance {
            value,
            witness_source: self.sources()[index],
        })
    }

    /// Returns the value and the index (not id) of the witness source.
    #[inline]
    pub(crate) fn approx_unchecked(&self, p: usize, q: usize) -> (f64, usize) {
        let n = self.vertex_count();
        let data = self.table.data();
        let mut best = (f64::INFINITY, 0);
        for i in 0..self.k() {
            let sum = data[i * n + p] + data[i * n + q];
            if sum < best.0 {
                best = (sum, i);
            }
        }
        best
    }

    pub fn nearest_source(&self, p: usize) -> Result<NearestSource> {
        self.check_vertex(p)?;
        let (index, distance) = self.nearest_unchecked(p);
        Ok(NearestSource {
            source: self.sources()[index],
            distance,
        })
    }

    pub(crate) fn nearest_unchecked(&self, p: usize) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for i in 0..self.k() {
            let d = self.table.get(i, p);
            if d < best.1 {
                best = (i, d);
            }
        }
        best
    }

    /// `max_p d(p, s_p)`: the k-center objective of the source set.
    pub fn covering_radius(&self) -> f64 {
        (0..self.vertex_count())
            .map(|p| self.nearest_unchecked(p).1)
            .fold(0.0, f64::max)
    }

    pub fn save<W: Write>(&self, out: W) -> Result<()> {
        let mut out = BufWriter::new(out);
        out.write_all(MAGIC)?;
        out.write_all(&(self.vertex_count() as u64).to_le_bytes())?;
        out.write_all(&(self.k() as u64).to_le_bytes())?;
        for &s in self.sources() {
            out.write_all(&(s as u64).to_le_bytes())?;
        }
        for &d in self.table.data() {
            out.write_all(&d.to_le_bytes())?;
        }
        out.write_all(&self.graph_checksum.to_le_bytes())?;
        out.flush()?;
        Ok(())
    }

    pub fn save_to_path(&self, path: impl AsRef<Path>) -> Result<()> {
        self.save(File::create(path)?)
    }

    /// Reads an oracle without checking which graph it was built for.
    pub fn load<R: Read>(input: R) -> Result<Oracle> {
        let mut input = BufReader::new(input);
        let mut magic = [0u8; 5];
        read_exact(&mut input, &mut magic, "magic")?;
        if &magic != MAGIC {
            if magic.starts_with(b"GSTR") {
                return Err(Error::VersionMismatch {
                    found: String::from_utf8_lossy(&magic[4..]).into_owned(),
                });
            }
            return Err(Error::CorruptFile("bad magic".into()));
        }
        let n = read_u64(&mut input, "vertex count")? as usize;
        let k = read_u64(&mut input, "source count")? as usize;
        if n == 0 || k == 0 || k > n {
            return Err(Error::CorruptFile(format!("invalid header n = {n}, k = {k}")));
        }
        let mut sources = Vec::with_capacity(k.min(1 << 16));
        let mut seen = HashSet::new();
        for _ in 0..k {
            let s = read_u64(&mut input, "source id")? as usize;
            if s >= n || !seen.insert(s) {
                return Err(Error::CorruptFile(format!("invalid source id {s}")));
            }
            sources.push(s);
        }
        let byte_len = k
            .checked_mul(n)
            .and_then(|len| len.checked_mul(8))
            .ok_or_else(|| Error::CorruptFile("table size overflows".into()))?;
        // `take` bounds the allocation by the actual file size
        let mut bytes = Vec::new();
        input.by_ref().take(byte_len as u64).read_to_end(&mut bytes)?;
        if bytes.len() != byte_len {
            return Err(Error::CorruptFile("truncated while reading distance table".into()));
        }
        let data: Vec<f64> = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        if let Some(bad) = data.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
            return Err(Error::CorruptFile(format!("invalid distance {bad}")));
        }
        for (i, &s) in sources.iter().enumerate() {
            if data[i * n + s] != 0.0 {
                return Err(Error::CorruptFile(format!("source {s} has nonzero self-distance")));
            }
        }
        let graph_checksum = read_u64(&mut input, "checksum")?;
        if input.read(&mut [0u8; 1])? != 0 {
            return Err(Error::CorruptFile("trailing bytes".into()));
        }
        Ok(Oracle {
            table: DistanceTable::from_parts(n, sources, data),
            graph_checksum,
        })
    }

    /// Reads an oracle and verifies it was built for `graph`.
    pub fn load_for<R: Read>(input: R, graph: &Graph) -> Result<Oracle> {
        let oracle = Oracle::load(input)?;
        oracle.check_graph(graph)?;
        Ok(oracle)
    }

    pub fn load_from_path(path: impl AsRef<Path>) -> Result<Oracle> {
        Oracle::load(File::open(path)?)
    }
}

fn read_exact<R: Read>(input: &mut R, buf: &mut [u8], what: &str) -> Result<()> {
    input.read_exact(buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::CorruptFile(format!("truncated while reading {what}")),
        _ => Error::Io(e),
    })
}

fn read_u64<R: Read>(input: &mut R, what: &str) -> Result<u64> {
    let mut buf = [0u8; 8];
    read_exact(input, &mut buf, what)?;
    Ok(u64::from_le_bytes(buf))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_path(n: usize) -> Graph {
        Graph::new(n, (0..n - 1).map(|i| (i, i + 1, 1.0))).unwrap()
    }

    #[test]
    fn build_tables() {
        let g = unit_path(3);
        let o = Oracle::build(&g, &[0]).unwrap();
        assert_eq!(o.table().row(0), &[0.0, 1.0, 2.0]);
        let o = Oracle::build(&g, &[0, 2]).unwrap();
        assert_eq!(o.table().row(1), &[2.0, 1.0, 0.0]);
    }

    #[test]
    fn query_through_single_source() {
        let o = Oracle::build(&unit_path(3), &[0]).unwrap();
        let a = o.approx_distance(1, 2).unwrap();
        assert_eq!(a, ApproxDistance { value: 3.0, witness_source: 0 });
        // p == q keeps the literal formula
        assert_eq!(o.approx_distance(1, 1).unwrap().value, 2.0);
        assert!(matches!(
            o.approx_distance(1, 3),
            Err(Error::InvalidVertexId { id: 3, .. })
        ));
    }

    #[test]
    fn query_at_source_is_exact() {
        let g = unit_path(5);
        let o = Oracle::build(&g, &[3, 1]).unwrap();
        for p in 0..5 {
            let a = o.approx_distance(p, 1).unwrap();
            assert_eq!(a.value, (p as f64 - 1.0).abs());
        }
    }

    #[test]
    fn full_source_set_is_exact() {
        let g = unit_path(4);
        let o = Oracle::build(&g, &[0, 1, 2, 3]).unwrap();
        for p in 0..4 {
            for q in 0..4 {
                if p != q {
                    assert_eq!(o.approx_distance(p, q).unwrap().value, (p as f64 - q as f64).abs());
                }
            }
        }
    }

    #[test]
    fn nearest_source_ties() {
        let o = Oracle::build(&unit_path(3), &[0, 2]).unwrap();
        assert_eq!(o.nearest_source(1).unwrap(), NearestSource { source: 0, distance: 1.0 });
        assert_eq!(o.nearest_source(2).unwrap(), NearestSource { source: 2, distance: 0.0 });
        let o = Oracle::build(&unit_path(3), &[0]).unwrap();
        assert_eq!(o.nearest_source(2).unwrap(), NearestSource { source: 0, distance: 2.0 });
        assert_eq!(o.covering_radius(), 2.0);
    }

    #[test]
    fn save_load_round_trip() {
        let g = Graph::new(4, [(0, 1, 0.1), (1, 2, 0.7), (2, 3, 1.3), (3, 0, 2.9)]).unwrap();
        let o = Oracle::build(&g, &[2, 0]).unwrap();
        let mut buf = Vec::new();
        o.save(&mut buf).unwrap();
        assert_eq!(&buf[..5], b"GSTR1");
        assert_eq!(buf.len(), 5 + 16 + 2 * 8 + 2 * 4 * 8 + 8);
        let back = Oracle::load_for(buf.as_slice(), &g).unwrap();
        assert_eq!(back, o);
        for (a, b) in back.table().data().iter().zip(o.table().data()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn load_guards() {
        let g = unit_path(3);
        let o = Oracle::build(&g, &[0]).unwrap();
        let mut buf = Vec::new();
        o.save(&mut buf).unwrap();

        let other = Graph::new(3, [(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
        assert!(matches!(
            Oracle::load_for(buf.as_slice(), &other),
            Err(Error::ChecksumMismatch { .. })
        ));
        assert!(matches!(
            Oracle::load(&buf[..buf.len() - 3]),
            Err(Error::CorruptFile(_))
        ));
        let mut extra = buf.clone();
        extra.push(0);
        assert!(matches!(Oracle::load(extra.as_slice()), Err(Error::CorruptFile(_))));
        let mut v2 = buf.clone();
        v2[4] = b'2';
        assert!(matches!(Oracle::load(v2.as_slice()), Err(Error::VersionMismatch { .. })));
        let mut junk = buf.clone();
        junk[0] = b'X';
        assert!(matches!(Oracle::load(junk.as_slice()), Err(Error::CorruptFile(_))));
        assert!(matches!(
            Oracle::load_for(buf.as_slice(), &unit_path(4)),
            Err(Error::GraphOracleMismatch(_))
        ));
    }
}
