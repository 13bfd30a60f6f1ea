//! C ABI over the `diffasym` simulator.
//!
//! Objects cross the boundary as opaque handles created by constructor
//! functions and released with the matching `da_*_free`. Every fallible call
//! returns a [`DaStatus`]; on failure [`da_last_error_message`] describes the
//! most recent error on the calling thread. Panics never unwind into C.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use diffasym::algorithms::{cost_lec, cost_llc, cost_qqc, step_bound, AlgorithmKind, AlgorithmSpec};
use diffasym::config::ExperimentConfig;
use diffasym::experiment::{run, RunOutput, RunStatus};
use diffasym::metrics::complexity_table;
use diffasym::topology::{build_probability_graph, build_radius_graph, NetworkTopology};
use diffasym::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Disconnected = 4,
    AllDiverged = 5,
    Io = 6,
    BufferTooSmall = 7,
    Utf8 = 8,
    Internal = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DaAlgorithm {
    Dlms = 0,
    Dselms = 1,
    Dllad = 2,
    Dllclms = 3,
    Dqqclms = 4,
    Dleclms = 5,
}

impl From<DaAlgorithm> for AlgorithmKind {
    fn from(a: DaAlgorithm) -> Self {
        match a {
            DaAlgorithm::Dlms => AlgorithmKind::Dlms,
            DaAlgorithm::Dselms => AlgorithmKind::Dselms,
            DaAlgorithm::Dllad => AlgorithmKind::Dllad,
            DaAlgorithm::Dllclms => AlgorithmKind::Dllclms,
            DaAlgorithm::Dqqclms => AlgorithmKind::Dqqclms,
            DaAlgorithm::Dleclms => AlgorithmKind::Dleclms,
        }
    }
}

impl From<AlgorithmKind> for DaAlgorithm {
    fn from(k: AlgorithmKind) -> Self {
        match k {
            AlgorithmKind::Dlms => DaAlgorithm::Dlms,
            AlgorithmKind::Dselms => DaAlgorithm::Dselms,
            AlgorithmKind::Dllad => DaAlgorithm::Dllad,
            AlgorithmKind::Dllclms => DaAlgorithm::Dllclms,
            AlgorithmKind::Dqqclms => DaAlgorithm::Dqqclms,
            AlgorithmKind::Dleclms => DaAlgorithm::Dleclms,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DaCost {
    Llc = 0,
    Qqc = 1,
    Lec = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DaComplexityKind {
    DselmsAdaptation = 0,
    DlladAdaptation = 1,
    DllclmsAdaptation = 2,
    DqqclmsAdaptation = 3,
    DleclmsAdaptation = 4,
    Combination = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DaComplexityRow {
    pub kind: DaComplexityKind,
    pub multiplications: u64,
    pub additions: u64,
    pub sign_ops: u64,
    pub exp_ops: u64,
    pub abs_ops: u64,
}

/// Parsed and validated experiment config.
pub struct DaConfig {
    inner: ExperimentConfig,
}

/// Result of a run: curves, CSV and manifest.
pub struct DaRunResult {
    inner: RunOutput,
    iterations: usize,
    csv: CString,
    manifest: CString,
}

pub struct DaTopology {
    inner: NetworkTopology,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: DaStatus, msg: impl AsRef<str>) -> DaStatus {
    set_error(msg.as_ref());
    status
}

fn from_error(e: Error) -> DaStatus {
    let status = match &e {
        Error::InvalidParameter { .. } | Error::DimensionMismatch { .. } | Error::MissingChiV(_) => {
            DaStatus::InvalidArgument
        }
        Error::Disconnected { .. } => DaStatus::Disconnected,
        Error::AllDiverged { .. } | Error::Diverged { .. } => DaStatus::AllDiverged,
        Error::Config(_) => DaStatus::Config,
        Error::Io(_) => DaStatus::Io,
        Error::Malformed(_) => DaStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), DaStatus>) -> DaStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::default());
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DaStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(DaStatus::Internal, "internal panic"),
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), DaStatus> {
    if p.is_null() {
        Err(fail(DaStatus::NullPointer, format!("`{name}` is null")))
    } else {
        Ok(())
    }
}

/// Message for the last failed call on this thread; empty after success.
/// The pointer stays valid until the next `da_*` call on the same thread.
#[no_mangle]
pub extern "C" fn da_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn da_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Static NUL-terminated name such as `"DLECLMS"`.
#[no_mangle]
pub extern "C" fn da_algorithm_name(algorithm: DaAlgorithm) -> *const c_char {
    let name: &'static [u8] = match algorithm {
        DaAlgorithm::Dlms => b"DLMS\0",
        DaAlgorithm::Dselms => b"DSELMS\0",
        DaAlgorithm::Dllad => b"DLLAD\0",
        DaAlgorithm::Dllclms => b"DLLCLMS\0",
        DaAlgorithm::Dqqclms => b"DQQCLMS\0",
        DaAlgorithm::Dleclms => b"DLECLMS\0",
    };
    name.as_ptr().cast()
}

/// Evaluates an asymmetric cost at error `e`. `exp_clamp` only affects LEC.
///
/// # Safety
/// `out` must be a valid pointer to a `double`.
#[no_mangle]
pub unsafe extern "C" fn da_cost(cost: DaCost, e: f64, a: f64, b: f64, exp_clamp: f64, out: *mut f64) -> DaStatus {
    guard(|| {
        non_null(out, "out")?;
        let v = match cost {
            DaCost::Llc => cost_llc(e, a, b),
            DaCost::Qqc => cost_qqc(e, a, b),
            DaCost::Lec => cost_lec(e, a, b, exp_clamp),
        };
        *out = v;
        Ok(())
    })
}

/// Mean-stability step-size limits. Pass `NaN` for `chi_v` when it is
/// unknown. `*has_limits` is 0 for algorithms without a limit.
///
/// # Safety
/// `positive`, `negative` and `has_limits` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn da_step_bound(
    algorithm: DaAlgorithm,
    mu: f64,
    a: f64,
    b: f64,
    rho_max: f64,
    chi_v: f64,
    positive: *mut f64,
    negative: *mut f64,
    has_limits: *mut i32,
) -> DaStatus {
    guard(|| {
        non_null(positive, "positive")?;
        non_null(negative, "negative")?;
        non_null(has_limits, "has_limits")?;
        let spec = AlgorithmSpec::new(algorithm.into(), mu, a, b).map_err(from_error)?;
        let chi = (!chi_v.is_nan()).then_some(chi_v);
        let bound = step_bound(&spec, rho_max, chi).map_err(from_error)?;
        match bound.limits {
            Some(l) => {
                *positive = l.positive;
                *negative = l.negative;
                *has_limits = 1;
            }
            None => {
                *positive = f64::INFINITY;
                *negative = f64::INFINITY;
                *has_limits = 0;
            }
        }
        Ok(())
    })
}

/// Fills up to `capacity` rows of the operation-count table for `taps` and
/// `nodes`. `*count` receives the full row count even when `rows` is too
/// small, in which case `DA_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `rows` must point to `capacity` writable rows (or be null with
/// `capacity == 0`); `count` must be valid.
#[no_mangle]
pub unsafe extern "C" fn da_complexity(
    taps: u64,
    nodes: u64,
    rows: *mut DaComplexityRow,
    capacity: usize,
    count: *mut usize,
) -> DaStatus {
    guard(|| {
        non_null(count, "count")?;
        if taps == 0 || nodes == 0 {
            return Err(fail(DaStatus::InvalidArgument, "taps and nodes must be at least 1"));
        }
        let table = complexity_table(taps, nodes);
        *count = table.len();
        if capacity < table.len() {
            return Err(fail(DaStatus::BufferTooSmall, format!("need {} rows", table.len())));
        }
        non_null(rows, "rows")?;
        let kinds = [
            DaComplexityKind::DselmsAdaptation,
            DaComplexityKind::DlladAdaptation,
            DaComplexityKind::DllclmsAdaptation,
            DaComplexityKind::DqqclmsAdaptation,
            DaComplexityKind::DleclmsAdaptation,
            DaComplexityKind::Combination,
        ];
        for (i, (row, kind)) in table.iter().zip(kinds).enumerate() {
            *rows.add(i) = DaComplexityRow {
                kind,
                multiplications: row.multiplications,
                additions: row.additions,
                sign_ops: row.sign_ops,
                exp_ops: row.exp_ops,
                abs_ops: row.abs_ops,
            };
        }
        Ok(())
    })
}

/// Parses a TOML config. When `has_seed` is nonzero, `seed` replaces
/// `run.master_seed`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn da_config_parse(
    text: *const c_char,
    has_seed: i32,
    seed: u64,
    out: *mut *mut DaConfig,
) -> DaStatus {
    guard(|| {
        non_null(text, "text")?;
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| fail(DaStatus::Utf8, e.to_string()))?;
        let inner = ExperimentConfig::parse(text, (has_seed != 0).then_some(seed))
            .map_err(|e| fail(DaStatus::Config, e.to_string()))?;
        *out = Box::into_raw(Box::new(DaConfig { inner }));
        Ok(())
    })
}

/// # Safety
/// `config` must come from [`da_config_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn da_config_free(config: *mut DaConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Runs the experiment. A run where some algorithm diverged in every trial
/// still succeeds; query it with [`da_run_is_partial`].
///
/// # Safety
/// `config` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn da_run(config: *const DaConfig, out: *mut *mut DaRunResult) -> DaStatus {
    guard(|| {
        non_null(config, "config")?;
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let iterations = (*config).inner.run.iterations;
        let inner = run(&(*config).inner).map_err(from_error)?;
        let csv = CString::new(inner.csv.clone()).map_err(|e| fail(DaStatus::Internal, e.to_string()))?;
        let manifest =
            CString::new(inner.manifest_json()).map_err(|e| fail(DaStatus::Internal, e.to_string()))?;
        *out = Box::into_raw(Box::new(DaRunResult {
            inner,
            iterations,
            csv,
            manifest,
        }));
        Ok(())
    })
}

/// # Safety
/// `result` must come from [`da_run`] or be null.
#[no_mangle]
pub unsafe extern "C" fn da_run_free(result: *mut DaRunResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Number of algorithms, or 0 for a null handle.
///
/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn da_run_algorithm_count(result: *const DaRunResult) -> usize {
    result.as_ref().map_or(0, |r| r.inner.curves.len())
}

/// Iterations per curve, or 0 for a null handle.
///
/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn da_run_iterations(result: *const DaRunResult) -> usize {
    result.as_ref().map_or(0, |r| r.iterations)
}

/// 1 if some algorithm diverged in every trial, 0 otherwise.
///
/// # Safety
/// `result` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn da_run_is_partial(result: *const DaRunResult) -> i32 {
    result
        .as_ref()
        .map_or(0, |r| i32::from(r.inner.status() == RunStatus::Partial))
}

/// Algorithm of series `index`.
///
/// # Safety
/// `result` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn da_run_algorithm(result: *const DaRunResult, index: usize, out: *mut DaAlgorithm) -> DaStatus {
    guard(|| {
        non_null(result, "result")?;
        non_null(out, "out")?;
        let r = &*result;
        let summary = r
            .inner
            .manifest
            .algorithms
            .get(index)
            .ok_or_else(|| fail(DaStatus::InvalidArgument, format!("index {index} out of range")))?;
        let kind: AlgorithmKind = summary.name.parse().map_err(from_error)?;
        *out = kind.into();
        Ok(())
    })
}

/// Copies the MSD curve (dB) of series `index` into `values`, which must
/// hold [`da_run_iterations`] doubles. Fails with `DA_STATUS_ALL_DIVERGED`
/// when the series has no finite curve.
///
/// # Safety
/// `result` must be a live handle; `values` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn da_run_curve(
    result: *const DaRunResult,
    index: usize,
    values: *mut f64,
    len: usize,
) -> DaStatus {
    guard(|| {
        non_null(result, "result")?;
        let r = &*result;
        let curve = r
            .inner
            .curves
            .get(index)
            .ok_or_else(|| fail(DaStatus::InvalidArgument, format!("index {index} out of range")))?
            .as_ref()
            .ok_or_else(|| fail(DaStatus::AllDiverged, format!("series {index} diverged in every trial")))?;
        if len < curve.values_db.len() {
            return Err(fail(DaStatus::BufferTooSmall, format!("need {} values", curve.values_db.len())));
        }
        non_null(values, "values")?;
        ptr::copy_nonoverlapping(curve.values_db.as_ptr(), values, curve.values_db.len());
        Ok(())
    })
}

/// The run's CSV. Owned by the handle.
///
/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn da_run_csv(result: *const DaRunResult) -> *const c_char {
    result.as_ref().map_or(ptr::null(), |r| r.csv.as_ptr())
}

/// The run manifest as JSON. Owned by the handle.
///
/// # Safety
/// `result` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn da_run_manifest_json(result: *const DaRunResult) -> *const c_char {
    result.as_ref().map_or(ptr::null(), |r| r.manifest.as_ptr())
}

/// Connected random graph with edge probability `p`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn da_topology_probability(
    nodes: usize,
    p: f64,
    seed: u64,
    out: *mut *mut DaTopology,
) -> DaStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let inner = build_probability_graph(nodes, p, seed).map_err(from_error)?;
        *out = Box::into_raw(Box::new(DaTopology { inner }));
        Ok(())
    })
}

/// Connected random geometric graph on the unit square.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn da_topology_radius(nodes: usize, radius: f64, seed: u64, out: *mut *mut DaTopology) -> DaStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let inner = build_radius_graph(nodes, radius, seed).map_err(from_error)?;
        *out = Box::into_raw(Box::new(DaTopology { inner }));
        Ok(())
    })
}

/// # Safety
/// `topology` must come from a `da_topology_*` constructor or be null.
#[no_mangle]
pub unsafe extern "C" fn da_topology_free(topology: *mut DaTopology) {
    if !topology.is_null() {
        drop(Box::from_raw(topology));
    }
}

/// # Safety
/// `topology` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn da_topology_node_count(topology: *const DaTopology) -> usize {
    topology.as_ref().map_or(0, |t| t.inner.node_count())
}

/// Neighbourhood size including the node itself; 0 for bad arguments.
///
/// # Safety
/// `topology` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn da_topology_degree(topology: *const DaTopology, node: usize) -> usize {
    match topology.as_ref() {
        Some(t) if node < t.inner.node_count() => t.inner.degree(node),
        _ => 0,
    }
}

/// 1 when `l` and `n` are neighbours (every node neighbours itself).
///
/// # Safety
/// `topology` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn da_topology_is_neighbor(topology: *const DaTopology, l: usize, n: usize) -> i32 {
    match topology.as_ref() {
        Some(t) if l < t.inner.node_count() && n < t.inner.node_count() => i32::from(t.inner.is_neighbor(l, n)),
        _ => 0,
    }
}
