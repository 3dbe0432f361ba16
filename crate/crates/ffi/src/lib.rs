//! C ABI over the `mlsp` library.
//!
//! Every fallible function returns an [`MlspStatus`]. On failure a message is
//! stored per thread and can be read with [`mlsp_last_error_message`].
//! Handles are opaque; each `*_new`/`*_load`/`*_seal`/`mlsp_sssp` result must
//! be released with the matching `*_free`. Buffer-filling functions take a
//! capacity, always report the required length through `out_len`, and return
//! [`MlspStatus::BufferTooSmall`] without writing when it does not fit.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mlsp::analytics::path_stats;
use mlsp::io::{load_edge_list, LoadOptions};
use mlsp::{
    aggregate::distance, ml_floyd_warshall, repeated_dijkstra_apsp, AggregationMode,
    AggregationParams, Algorithm, DuplicatePolicy, Error, LayerId, LayeredEdge,
    MultiLayeredNetwork, NetworkBuilder, NodeId, Polarity, ShortestPathResult,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlspStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidInput = 3,
    SizeGuard = 4,
    Io = 5,
    UnknownNode = 6,
    BufferTooSmall = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlspPolarity {
    Positive = 0,
    Negative = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlspMode {
    Combined = 0,
    LayersOnly = 1,
    DistanceOnly = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlspAlgorithm {
    Dap = 0,
    Mda = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlspApspStrategy {
    FloydWarshall = 0,
    RepeatedDijkstra = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlspParams {
    pub alpha: u32,
    pub beta: f64,
    pub mode: MlspMode,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MlspPathStats {
    pub source: u64,
    pub alpha: u32,
    pub beta: f64,
    pub num_routes: usize,
    pub avg_len: f64,
    pub min_len: f64,
    pub max_len: f64,
    pub avg_handshakes: f64,
    pub num_neighbors: usize,
    pub pct_connected: f64,
}

/// Mutable network under construction.
pub struct MlspBuilder(NetworkBuilder);

/// Sealed, immutable network.
pub struct MlspNetwork(MultiLayeredNetwork);

/// Single-source shortest path result.
pub struct MlspPaths(ShortestPathResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(message));
}

fn fail(status: MlspStatus, message: impl Into<String>) -> MlspStatus {
    set_last_error(message.into());
    status
}

fn status_of(err: &Error) -> MlspStatus {
    match err.root() {
        Error::UnknownNode(_) => MlspStatus::UnknownNode,
        Error::SizeGuardExceeded { .. } => MlspStatus::SizeGuard,
        Error::Io(_) => MlspStatus::Io,
        Error::InvalidAlpha(_)
        | Error::InvalidBeta(_)
        | Error::InvalidArgument(_)
        | Error::SameNode(_)
        | Error::UnknownLayer(_) => MlspStatus::InvalidArgument,
        _ => MlspStatus::InvalidInput,
    }
}

/// Runs `f`, records any error or panic, and returns its status.
fn guard(f: impl FnOnce() -> Result<(), MlspStatus>) -> MlspStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MlspStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => fail(MlspStatus::Internal, "internal panic"),
    }
}

trait IntoStatus<T> {
    fn status(self) -> Result<T, MlspStatus>;
}

impl<T> IntoStatus<T> for mlsp::Result<T> {
    fn status(self) -> Result<T, MlspStatus> {
        self.map_err(|e| fail(status_of(&e), e.to_string()))
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, MlspStatus> {
    p.as_ref().ok_or_else(|| fail(MlspStatus::NullPointer, "null pointer argument"))
}

unsafe fn deref_mut<'a, T>(p: *mut T) -> Result<&'a mut T, MlspStatus> {
    p.as_mut().ok_or_else(|| fail(MlspStatus::NullPointer, "null pointer argument"))
}

unsafe fn c_str<'a>(p: *const c_char) -> Result<&'a str, MlspStatus> {
    if p.is_null() {
        return Err(fail(MlspStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(MlspStatus::InvalidArgument, "string is not valid UTF-8"))
}

unsafe fn fill<T: Copy>(
    values: &[T],
    buf: *mut T,
    capacity: usize,
    out_len: *mut usize,
) -> Result<(), MlspStatus> {
    *deref_mut(out_len)? = values.len();
    if values.len() > capacity {
        return Err(fail(
            MlspStatus::BufferTooSmall,
            format!("buffer holds {capacity} values, {} needed", values.len()),
        ));
    }
    if !values.is_empty() {
        if buf.is_null() {
            return Err(fail(MlspStatus::NullPointer, "null output buffer"));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    }
    Ok(())
}

fn params_of(p: &MlspParams) -> Result<AggregationParams, MlspStatus> {
    let mode = match p.mode {
        MlspMode::Combined => AggregationMode::Combined,
        MlspMode::LayersOnly => AggregationMode::LayersOnly,
        MlspMode::DistanceOnly => AggregationMode::DistanceOnly,
    };
    AggregationParams::new(p.alpha, p.beta, mode).status()
}

fn polarity_of(p: MlspPolarity) -> Polarity {
    match p {
        MlspPolarity::Positive => Polarity::Positive,
        MlspPolarity::Negative => Polarity::Negative,
    }
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `capacity`). Returns the full message length without the
/// terminator, or 0 if there is no message.
#[no_mangle]
pub unsafe extern "C" fn mlsp_last_error_message(buf: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && capacity > 0 {
            let n = bytes.len().min(capacity - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

#[no_mangle]
pub extern "C" fn mlsp_builder_new(polarity: MlspPolarity) -> *mut MlspBuilder {
    let builder = NetworkBuilder::new().polarity(polarity_of(polarity));
    Box::into_raw(Box::new(MlspBuilder(builder)))
}

#[no_mangle]
pub unsafe extern "C" fn mlsp_builder_free(builder: *mut MlspBuilder) {
    if !builder.is_null() {
        drop(Box::from_raw(builder));
    }
}

#[no_mangle]
pub unsafe extern "C" fn mlsp_builder_add_layer(
    builder: *mut MlspBuilder,
    label: *const c_char,
    out_layer: *mut u16,
) -> MlspStatus {
    guard(|| {
        let b = deref_mut(builder)?;
        let out = deref_mut(out_layer)?;
        *out = b.0.add_layer(c_str(label)?).status()?.0;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn mlsp_builder_add_node(builder: *mut MlspBuilder, id: u64) -> MlspStatus {
    guard(|| {
        deref_mut(builder)?.0.add_node(id);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn mlsp_builder_add_edge(
    builder: *mut MlspBuilder,
    src: u64,
    dst: u64,
    layer: u16,
    weight: f64,
) -> MlspStatus {
    guard(|| {
        let b = deref_mut(builder)?;
        b.0.add_edge(LayeredEdge::new(src, dst, LayerId(layer), weight)).status()
    })
}

/// Seals the builder into a network. The builder is consumed even on failure.
#[no_mangle]
pub unsafe extern "C" fn mlsp_builder_seal(
    builder: *mut MlspBuilder,
    out_network: *mut *mut MlspNetwork,
) -> MlspStatus {
    guard(|| {
        let out = deref_mut(out_network)?;
        if builder.is_null() {
            return Err(fail(MlspStatus::NullPointer, "null builder"));
        }
        let b = Box::from_raw(builder);
        let net = b.0.seal().status()?;
        *out = Box::into_raw(Box::new(MlspNetwork(net)));
        Ok(())
    })
}

/// Loads a `src,dst,layer,weight` CSV edge list.
#[no_mangle]
pub unsafe extern "C" fn mlsp_network_load_csv(
    path: *const c_char,
    polarity: MlspPolarity,
    keep_max_duplicates: bool,
    out_network: *mut *mut MlspNetwork,
) -> MlspStatus {
    guard(|| {
        let out = deref_mut(out_network)?;
        let options = LoadOptions {
            polarity: polarity_of(polarity),
            on_duplicate: if keep_max_duplicates {
                DuplicatePolicy::KeepMax
            } else {
                DuplicatePolicy::Error
            },
        };
        let net = load_edge_list(c_str(path)?, &options).status()?;
        *out = Box::into_raw(Box::new(MlspNetwork(net)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn mlsp_network_free(network: *mut MlspNetwork) {
    if !network.is_null() {
        drop(Box::from_raw(network));
    }
}

/// Node count, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn mlsp_network_node_count(network: *const MlspNetwork) -> usize {
    network.as_ref().map_or(0, |n| n.0.node_count())
}

#[no_mangle]
pub unsafe extern "C" fn mlsp_network_layer_count(network: *const MlspNetwork) -> usize {
    network.as_ref().map_or(0, |n| n.0.layer_count())
}

/// Total layered edge count, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn mlsp_network_edge_count(network: *const MlspNetwork) -> usize {
    network.as_ref().map_or(0, |n| n.0.edge_count())
}

/// Node ids in ascending order.
#[no_mangle]
pub unsafe extern "C" fn mlsp_network_node_ids(
    network: *const MlspNetwork,
    buf: *mut u64,
    capacity: usize,
    out_len: *mut usize,
) -> MlspStatus {
    guard(|| {
        let ids: Vec<u64> = deref(network)?.0.node_ids().iter().map(|n| n.0).collect();
        fill(&ids, buf, capacity, out_len)
    })
}

/// Nodes reached from `node` on at least `alpha` layers, ascending.
#[no_mangle]
pub unsafe extern "C" fn mlsp_network_multi_neighborhood(
    network: *const MlspNetwork,
    node: u64,
    alpha: u32,
    buf: *mut u64,
    capacity: usize,
    out_len: *mut usize,
) -> MlspStatus {
    guard(|| {
        let net = &deref(network)?.0;
        let ids: Vec<u64> = net
            .multi_neighborhood_out(NodeId(node), alpha)
            .status()?
            .into_iter()
            .map(|n| n.0)
            .collect();
        fill(&ids, buf, capacity, out_len)
    })
}

/// Layer-averaged distance between two distinct nodes.
#[no_mangle]
pub unsafe extern "C" fn mlsp_distance(
    network: *const MlspNetwork,
    src: u64,
    dst: u64,
    out_distance: *mut f64,
) -> MlspStatus {
    guard(|| {
        let net = &deref(network)?.0;
        let out = deref_mut(out_distance)?;
        *out = distance(net, NodeId(src), NodeId(dst)).status()?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn mlsp_sssp(
    network: *const MlspNetwork,
    source: u64,
    params: *const MlspParams,
    algorithm: MlspAlgorithm,
    out_paths: *mut *mut MlspPaths,
) -> MlspStatus {
    guard(|| {
        let net = &deref(network)?.0;
        let params = params_of(deref(params)?)?;
        let out = deref_mut(out_paths)?;
        let algorithm = match algorithm {
            MlspAlgorithm::Dap => Algorithm::Dap,
            MlspAlgorithm::Mda => Algorithm::Mda,
        };
        let result = algorithm.run(net, NodeId(source), &params).status()?;
        *out = Box::into_raw(Box::new(MlspPaths(result)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn mlsp_paths_free(paths: *mut MlspPaths) {
    if !paths.is_null() {
        drop(Box::from_raw(paths));
    }
}

/// Shortest length to `target`. Unreachable targets give `false` in
/// `out_reachable` and infinity in `out_length`.
#[no_mangle]
pub unsafe extern "C" fn mlsp_paths_length(
    paths: *const MlspPaths,
    target: u64,
    out_length: *mut f64,
    out_reachable: *mut bool,
) -> MlspStatus {
    guard(|| {
        let r = &deref(paths)?.0;
        let (len, reach) = (deref_mut(out_length)?, deref_mut(out_reachable)?);
        let l = r.length(NodeId(target)).status()?;
        *reach = l.is_some();
        *len = l.unwrap_or(f64::INFINITY);
        Ok(())
    })
}

/// Node ids from the source to `target`; empty when unreachable.
#[no_mangle]
pub unsafe extern "C" fn mlsp_paths_path(
    paths: *const MlspPaths,
    target: u64,
    buf: *mut u64,
    capacity: usize,
    out_len: *mut usize,
) -> MlspStatus {
    guard(|| {
        let r = &deref(paths)?.0;
        let ids: Vec<u64> = r.path_to(NodeId(target)).status()?.into_iter().map(|n| n.0).collect();
        fill(&ids, buf, capacity, out_len)
    })
}

/// Route statistics of a result; `network` must be the one it was computed on.
#[no_mangle]
pub unsafe extern "C" fn mlsp_paths_stats(
    paths: *const MlspPaths,
    network: *const MlspNetwork,
    out_stats: *mut MlspPathStats,
) -> MlspStatus {
    guard(|| {
        let r = &deref(paths)?.0;
        let net = &deref(network)?.0;
        let out = deref_mut(out_stats)?;
        let s = path_stats(r, net, r.params()).status()?;
        *out = MlspPathStats {
            source: s.source.0,
            alpha: s.alpha,
            beta: s.beta,
            num_routes: s.num_routes,
            avg_len: s.avg_len,
            min_len: s.min_len,
            max_len: s.max_len,
            avg_handshakes: s.avg_handshakes,
            num_neighbors: s.num_neighbors,
            pct_connected: s.pct_connected,
        };
        Ok(())
    })
}

/// All-pairs lengths as a row-major `n x n` matrix over ascending node ids.
/// Unreachable entries are infinity. Refuses networks above `max_nodes`.
#[no_mangle]
pub unsafe extern "C" fn mlsp_apsp(
    network: *const MlspNetwork,
    params: *const MlspParams,
    strategy: MlspApspStrategy,
    max_nodes: usize,
    buf: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> MlspStatus {
    guard(|| {
        let net = &deref(network)?.0;
        let params = params_of(deref(params)?)?;
        deref_mut(out_len)?;
        let n = net.node_count();
        if n > max_nodes {
            return Err(fail(
                MlspStatus::SizeGuard,
                format!("network has {n} nodes, above the limit of {max_nodes}"),
            ));
        }
        if n * n > capacity {
            *out_len = n * n;
            return Err(fail(
                MlspStatus::BufferTooSmall,
                format!("buffer holds {capacity} values, {} needed", n * n),
            ));
        }
        let m = match strategy {
            MlspApspStrategy::FloydWarshall => ml_floyd_warshall(net, &params, max_nodes),
            MlspApspStrategy::RepeatedDijkstra => repeated_dijkstra_apsp(net, &params, max_nodes),
        }
        .status()?;
        let flat: Vec<f64> = (0..n)
            .flat_map(|i| m.row(i))
            .map(|v| v.unwrap_or(f64::INFINITY))
            .collect();
        fill(&flat, buf, capacity, out_len)
    })
}
