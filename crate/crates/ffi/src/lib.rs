//! C ABI for geostretch.
//!
//! Graphs and oracles are opaque handles created by `gs_*` constructors and
//! released with the matching `*_free`. Every fallible call returns a
//! [`GsStatus`]; on failure, `gs_last_error_message` describes the error
//! for the calling thread. Vertex ids and counts are `size_t`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::BufReader;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use geostretch::analysis::stretch_fast;
use geostretch::graph::read_edge_list;
use geostretch::mesh::read_off;
use geostretch::sampling::farthest_point_sampling_with_table;
use geostretch::{farthest_point_sampling, Error, Graph, Oracle, StartPolicy};

/// Opaque graph handle.
pub struct GsGraph(Graph);

/// Opaque oracle handle.
pub struct GsOracle(Oracle);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidVertex = 3,
    InvalidGraph = 4,
    Parse = 5,
    Io = 6,
    GraphMismatch = 7,
    CorruptFile = 8,
    TooLarge = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GsStretchReport {
    pub stretch: f64,
    pub witness_p: usize,
    pub witness_q: usize,
    pub witness_source: usize,
    pub pairs_examined: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(error: &Error) -> GsStatus {
    match error {
        Error::InvalidVertexId { .. } => GsStatus::InvalidVertex,
        Error::DisconnectedGraph { .. }
        | Error::NonPositiveLength { .. }
        | Error::SelfLoop(_)
        | Error::DuplicateEdge { .. }
        | Error::EmptyGraph
        | Error::EmptyEdgeSet
        | Error::InvalidFace { .. }
        | Error::DegenerateEdge { .. } => GsStatus::InvalidGraph,
        Error::Parse { .. } => GsStatus::Parse,
        Error::Io(_) => GsStatus::Io,
        Error::GraphOracleMismatch(_) | Error::ChecksumMismatch { .. } => GsStatus::GraphMismatch,
        Error::CorruptFile(_) | Error::VersionMismatch { .. } => GsStatus::CorruptFile,
        Error::GraphTooLargeForNaive { .. } | Error::BudgetExceeded { .. } => GsStatus::TooLarge,
        _ => GsStatus::InvalidArgument,
    }
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), (GsStatus, String)>) -> GsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GsStatus::Ok,
        Ok(Err((status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            GsStatus::Panic
        }
    }
}

fn lib(error: Error) -> (GsStatus, String) {
    (status_of(&error), error.to_string())
}

fn null(what: &str) -> (GsStatus, String) {
    (GsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn path_arg(path: *const c_char) -> Result<PathBuf, (GsStatus, String)> {
    if path.is_null() {
        return Err(null("path"));
    }
    let text = unsafe { CStr::from_ptr(path) }
        .to_str()
        .map_err(|_| (GsStatus::InvalidArgument, "path is not valid UTF-8".to_string()))?;
    Ok(PathBuf::from(text))
}

unsafe fn slice_arg<'a, T>(data: *const T, len: usize, what: &str) -> Result<&'a [T], (GsStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(unsafe { std::slice::from_raw_parts(data, len) })
}

unsafe fn graph_arg<'a>(graph: *const GsGraph) -> Result<&'a Graph, (GsStatus, String)> {
    unsafe { graph.as_ref() }.map(|g| &g.0).ok_or_else(|| null("graph"))
}

unsafe fn oracle_arg<'a>(oracle: *const GsOracle) -> Result<&'a Oracle, (GsStatus, String)> {
    unsafe { oracle.as_ref() }.map(|o| &o.0).ok_or_else(|| null("oracle"))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), (GsStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> Result<(), (GsStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    unsafe { out.write(Box::into_raw(Box::new(value))) };
    Ok(())
}

/// Static description of a status code; "unknown status" for values
/// outside [`GsStatus`]. Never null.
#[no_mangle]
pub extern "C" fn gs_status_string(status: i32) -> *const c_char {
    const ALL: [GsStatus; 11] = [
        GsStatus::Ok,
        GsStatus::NullPointer,
        GsStatus::InvalidArgument,
        GsStatus::InvalidVertex,
        GsStatus::InvalidGraph,
        GsStatus::Parse,
        GsStatus::Io,
        GsStatus::GraphMismatch,
        GsStatus::CorruptFile,
        GsStatus::TooLarge,
        GsStatus::Panic,
    ];
    let text: &'static CStr = match ALL.into_iter().find(|&s| s as i32 == status) {
        Some(GsStatus::Ok) => c"ok",
        Some(GsStatus::NullPointer) => c"null pointer argument",
        Some(GsStatus::InvalidArgument) => c"invalid argument",
        Some(GsStatus::InvalidVertex) => c"invalid vertex id",
        Some(GsStatus::InvalidGraph) => c"invalid graph",
        Some(GsStatus::Parse) => c"parse error",
        Some(GsStatus::Io) => c"i/o error",
        Some(GsStatus::GraphMismatch) => c"oracle was built for a different graph",
        Some(GsStatus::CorruptFile) => c"corrupt or incompatible file",
        Some(GsStatus::TooLarge) => c"instance too large",
        Some(GsStatus::Panic) => c"internal panic",
        None => c"unknown status",
    };
    text.as_ptr()
}

/// Message for the last failed call on this thread; empty if none. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a graph from `m` edges `(us[i], vs[i], lengths[i])`.
///
/// # Safety
/// The three arrays must hold `m` elements; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_graph_from_edges(
    vertex_count: usize,
    us: *const usize,
    vs: *const usize,
    lengths: *const f64,
    m: usize,
    out: *mut *mut GsGraph,
) -> GsStatus {
    guard(|| {
        let us = unsafe { slice_arg(us, m, "us") }?;
        let vs = unsafe { slice_arg(vs, m, "vs") }?;
        let lengths = unsafe { slice_arg(lengths, m, "lengths") }?;
        let edges = (0..m).map(|i| (us[i], vs[i], lengths[i]));
        let graph = Graph::new(vertex_count, edges).map_err(lib)?;
        unsafe { write_handle(out, GsGraph(graph)) }
    })
}

/// Loads an edge-list file. Parallel edges are collapsed to the shortest.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_graph_load_edge_list(path: *const c_char, out: *mut *mut GsGraph) -> GsStatus {
    guard(|| {
        let path = unsafe { path_arg(path) }?;
        let file = File::open(path).map_err(|e| lib(e.into()))?;
        let (graph, _) = read_edge_list(BufReader::new(file)).map_err(lib)?;
        unsafe { write_handle(out, GsGraph(graph)) }
    })
}

/// Loads a triangle mesh in OFF format as its edge graph.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_graph_load_off(path: *const c_char, out: *mut *mut GsGraph) -> GsStatus {
    guard(|| {
        let path = unsafe { path_arg(path) }?;
        let file = File::open(path).map_err(|e| lib(e.into()))?;
        let graph = read_off(BufReader::new(file)).and_then(|m| m.to_graph()).map_err(lib)?;
        unsafe { write_handle(out, GsGraph(graph)) }
    })
}

/// # Safety
/// `graph` must come from a `gs_graph_*` constructor and not be used
/// afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn gs_graph_free(graph: *mut GsGraph) {
    if !graph.is_null() {
        drop(unsafe { Box::from_raw(graph) });
    }
}

/// # Safety
/// `graph` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn gs_graph_vertex_count(graph: *const GsGraph) -> usize {
    unsafe { graph.as_ref() }.map_or(0, |g| g.0.vertex_count())
}

/// # Safety
/// `graph` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn gs_graph_edge_count(graph: *const GsGraph) -> usize {
    unsafe { graph.as_ref() }.map_or(0, |g| g.0.edge_count())
}

/// Farthest point sampling from vertex `start`; writes `k` source ids.
///
/// # Safety
/// `graph` must be a live handle; `out_sources` must hold `k` elements.
#[no_mangle]
pub unsafe extern "C" fn gs_fps(graph: *const GsGraph, k: usize, start: usize, out_sources: *mut usize) -> GsStatus {
    guard(|| {
        let graph = unsafe { graph_arg(graph) }?;
        if out_sources.is_null() {
            return Err(null("out_sources"));
        }
        let set = farthest_point_sampling(graph, k, StartPolicy::Vertex(start)).map_err(lib)?;
        unsafe { ptr::copy_nonoverlapping(set.sources.as_ptr(), out_sources, set.len()) };
        Ok(())
    })
}

/// Oracle over the given `k` sources.
///
/// # Safety
/// `graph` must be a live handle; `sources` must hold `k` elements; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_oracle_build(
    graph: *const GsGraph,
    sources: *const usize,
    k: usize,
    out: *mut *mut GsOracle,
) -> GsStatus {
    guard(|| {
        let graph = unsafe { graph_arg(graph) }?;
        let sources = unsafe { slice_arg(sources, k, "sources") }?;
        let oracle = Oracle::build(graph, sources).map_err(lib)?;
        unsafe { write_handle(out, GsOracle(oracle)) }
    })
}

/// Oracle over `k` sources chosen by farthest point sampling from `start`.
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_oracle_build_fps(
    graph: *const GsGraph,
    k: usize,
    start: usize,
    out: *mut *mut GsOracle,
) -> GsStatus {
    guard(|| {
        let graph = unsafe { graph_arg(graph) }?;
        let (_, table) = farthest_point_sampling_with_table(graph, k, StartPolicy::Vertex(start)).map_err(lib)?;
        let oracle = Oracle::from_table(graph, table).map_err(lib)?;
        unsafe { write_handle(out, GsOracle(oracle)) }
    })
}

/// # Safety
/// `oracle` must come from a `gs_oracle_*` constructor and not be used
/// afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn gs_oracle_free(oracle: *mut GsOracle) {
    if !oracle.is_null() {
        drop(unsafe { Box::from_raw(oracle) });
    }
}

/// # Safety
/// `oracle` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn gs_oracle_source_count(oracle: *const GsOracle) -> usize {
    unsafe { oracle.as_ref() }.map_or(0, |o| o.0.k())
}

/// Copies the source ids, in selection order.
///
/// # Safety
/// `oracle` must be a live handle; `out_sources` must hold
/// `gs_oracle_source_count(oracle)` elements.
#[no_mangle]
pub unsafe extern "C" fn gs_oracle_sources(oracle: *const GsOracle, out_sources: *mut usize) -> GsStatus {
    guard(|| {
        let oracle = unsafe { oracle_arg(oracle) }?;
        if out_sources.is_null() {
            return Err(null("out_sources"));
        }
        unsafe { ptr::copy_nonoverlapping(oracle.sources().as_ptr(), out_sources, oracle.k()) };
        Ok(())
    })
}

/// `min_i d(p, s_i) + d(s_i, q)` and the source attaining it. Either output
/// pointer may be null.
///
/// # Safety
/// `oracle` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gs_oracle_query(
    oracle: *const GsOracle,
    p: usize,
    q: usize,
    out_value: *mut f64,
    out_witness: *mut usize,
) -> GsStatus {
    guard(|| {
        let oracle = unsafe { oracle_arg(oracle) }?;
        let answer = oracle.approx_distance(p, q).map_err(lib)?;
        if !out_value.is_null() {
            unsafe { out_value.write(answer.value) };
        }
        if !out_witness.is_null() {
            unsafe { out_witness.write(answer.witness_source) };
        }
        Ok(())
    })
}

/// Nearest source to `p` and its distance. Either output pointer may be
/// null.
///
/// # Safety
/// `oracle` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gs_oracle_nearest_source(
    oracle: *const GsOracle,
    p: usize,
    out_source: *mut usize,
    out_distance: *mut f64,
) -> GsStatus {
    guard(|| {
        let oracle = unsafe { oracle_arg(oracle) }?;
        let nearest = oracle.nearest_source(p).map_err(lib)?;
        if !out_source.is_null() {
            unsafe { out_source.write(nearest.source) };
        }
        if !out_distance.is_null() {
            unsafe { out_distance.write(nearest.distance) };
        }
        Ok(())
    })
}

/// # Safety
/// `oracle` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn gs_oracle_save(oracle: *const GsOracle, path: *const c_char) -> GsStatus {
    guard(|| {
        let oracle = unsafe { oracle_arg(oracle) }?;
        let path = unsafe { path_arg(path) }?;
        oracle.save_to_path(path).map_err(lib)
    })
}

/// Loads an oracle file. If `graph` is not null, the file must have been
/// built for that graph.
///
/// # Safety
/// `path` must be a NUL-terminated string; `graph` a live handle or null;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_oracle_load(
    path: *const c_char,
    graph: *const GsGraph,
    out: *mut *mut GsOracle,
) -> GsStatus {
    guard(|| {
        let path = unsafe { path_arg(path) }?;
        let oracle = Oracle::load_from_path(path).map_err(lib)?;
        if let Some(graph) = unsafe { graph.as_ref() } {
            oracle.check_graph(&graph.0).map_err(lib)?;
        }
        unsafe { write_handle(out, GsOracle(oracle)) }
    })
}

/// Stretch factor of `oracle` on `graph`, scanning adjacent pairs only.
///
/// # Safety
/// `graph` and `oracle` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_stretch_fast(
    graph: *const GsGraph,
    oracle: *const GsOracle,
    out: *mut GsStretchReport,
) -> GsStatus {
    guard(|| {
        let graph = unsafe { graph_arg(graph) }?;
        let oracle = unsafe { oracle_arg(oracle) }?;
        let report = stretch_fast(graph, oracle).map_err(lib)?;
        let value = GsStretchReport {
            stretch: report.stretch,
            witness_p: report.witness_pair.0,
            witness_q: report.witness_pair.1,
            witness_source: report.witness_source,
            pairs_examined: report.pair_count_examined,
        };
        unsafe { write_out(out, value, "out") }
    })
}
