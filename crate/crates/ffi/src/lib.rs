//! C ABI over the `mqo` optimizer.
//!
//! Every fallible function returns an [`MqoStatus`]. On failure a message is
//! kept per thread and can be read with [`mqo_last_error`]. Handles are
//! opaque and must be released with their matching `*_free` function.
//! Strings returned through out-parameters are owned by the caller and must
//! be released with [`mqo_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mqo::optimize::{run, Algorithm, Outcome, RunOptions};
use mqo::setfn::Subset;
use mqo::workload::{PreparedWorkload, Workload};
use mqo::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MqoStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Json = 3,
    Workload = 4,
    InvalidArgument = 5,
    MissingCost = 6,
    TooLarge = 7,
    Domain = 8,
    Io = 9,
    OutOfRange = 10,
    Internal = 11,
}

/// Algorithm codes accepted by [`mqo_optimize`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MqoAlgorithm {
    Marginal = 0,
    Lazy = 1,
    Roy = 2,
    Exhaustive = 3,
    NoMaterialization = 4,
}

impl MqoAlgorithm {
    fn from_code(code: u32) -> Option<Algorithm> {
        Some(match code {
            0 => Algorithm::Marginal,
            1 => Algorithm::Lazy,
            2 => Algorithm::Roy,
            3 => Algorithm::Exhaustive,
            4 => Algorithm::None,
            _ => return None,
        })
    }
}

/// A parsed and validated workload.
pub struct MqoWorkload {
    workload: Workload,
    prepared: PreparedWorkload,
}

/// The outcome of one optimization run.
pub struct MqoResult {
    outcome: Outcome,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).expect("nul bytes were removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

struct Failure(MqoStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let status = match &err {
            Error::Json(_) => MqoStatus::Json,
            Error::Workload { .. } => MqoStatus::Workload,
            Error::MissingCost { .. } => MqoStatus::MissingCost,
            Error::TooLarge { .. } => MqoStatus::TooLarge,
            Error::Domain(_) => MqoStatus::Domain,
            Error::Io { .. } => MqoStatus::Io,
            Error::InvalidArgument(_) | Error::ElementInSet { .. } | Error::NotNormalized { .. } => {
                MqoStatus::InvalidArgument
            }
        };
        Failure(status, err.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(MqoStatus::NullArgument, format!("{what} is null"))
}

/// Runs `body`, turning errors and panics into a status plus message.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> MqoStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MqoStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal error: the library panicked".into());
            MqoStatus::Internal
        }
    }
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(MqoStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("nul bytes were removed")
        .into_raw()
}

fn new_workload(workload: Workload, handle: &mut *mut MqoWorkload) -> Result<(), Failure> {
    let prepared = workload.prepare()?;
    *handle = Box::into_raw(Box::new(MqoWorkload { workload, prepared }));
    Ok(())
}

/// Message of the last failed call on this thread, or null after a success.
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn mqo_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mqo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a workload from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `handle` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mqo_workload_from_json(json: *const c_char, handle: *mut *mut MqoWorkload) -> MqoStatus {
    guard(|| {
        let handle = out(handle, "handle")?;
        *handle = ptr::null_mut();
        new_workload(Workload::from_json(text(json, "json")?)?, handle)
    })
}

/// Reads a workload from a JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `handle` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mqo_workload_from_path(path: *const c_char, handle: *mut *mut MqoWorkload) -> MqoStatus {
    guard(|| {
        let handle = out(handle, "handle")?;
        *handle = ptr::null_mut();
        new_workload(Workload::from_path(text(path, "path")?)?, handle)
    })
}

/// The bundled two-query example workload.
///
/// # Safety
/// `handle` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mqo_workload_example(handle: *mut *mut MqoWorkload) -> MqoStatus {
    guard(|| {
        let handle = out(handle, "handle")?;
        *handle = ptr::null_mut();
        new_workload(Workload::example_one(), handle)
    })
}

/// Releases a workload. Null is ignored.
///
/// # Safety
/// `workload` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mqo_workload_free(workload: *mut MqoWorkload) {
    if !workload.is_null() {
        drop(Box::from_raw(workload));
    }
}

/// Number of shareable nodes, the candidates for materialization.
///
/// # Safety
/// `workload` must be a live handle and `count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mqo_workload_shareable_count(workload: *const MqoWorkload, count: *mut usize) -> MqoStatus {
    guard(|| {
        let w = workload.as_ref().ok_or_else(|| null("workload"))?;
        *out(count, "count")? = w.prepared.benefit.universe().len();
        Ok(())
    })
}

/// Label of shareable node `index`, such as `B⋈C`. The caller frees the string.
///
/// # Safety
/// `workload` must be a live handle and `label` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mqo_workload_shareable_label(
    workload: *const MqoWorkload,
    index: usize,
    label: *mut *mut c_char,
) -> MqoStatus {
    guard(|| {
        let w = workload.as_ref().ok_or_else(|| null("workload"))?;
        let label = out(label, "label")?;
        let labels = w.prepared.benefit.labels();
        let text = labels.get(index).ok_or_else(|| {
            Failure(
                MqoStatus::OutOfRange,
                format!("index {index} out of range for {} shareable nodes", labels.len()),
            )
        })?;
        *label = owned_string(text.clone());
        Ok(())
    })
}

/// Best combined plan cost when the listed shareable nodes are materialized.
/// `indices` may be null when `len` is 0.
///
/// # Safety
/// `indices` must point to `len` values, `workload` must be a live handle and
/// `cost` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mqo_workload_best_cost(
    workload: *const MqoWorkload,
    indices: *const usize,
    len: usize,
    cost: *mut f64,
) -> MqoStatus {
    guard(|| {
        let w = workload.as_ref().ok_or_else(|| null("workload"))?;
        let cost = out(cost, "cost")?;
        let indices: &[usize] = if len == 0 {
            &[]
        } else if indices.is_null() {
            return Err(null("indices"));
        } else {
            std::slice::from_raw_parts(indices, len)
        };
        let n = w.prepared.benefit.universe().len();
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Failure(
                MqoStatus::OutOfRange,
                format!("index {bad} out of range for {n} shareable nodes"),
            ));
        }
        let set = Subset::from_ids(n, indices.iter().copied());
        *cost = w.prepared.benefit.report(&set)?.total;
        Ok(())
    })
}

/// Runs one algorithm on a fresh copy of the workload's oracle, so call
/// counts do not depend on earlier runs. `k` = 0 means no cardinality cap.
///
/// # Safety
/// `workload` must be a live handle and `result` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mqo_optimize(
    workload: *const MqoWorkload,
    algorithm: u32,
    k: usize,
    prune: bool,
    result: *mut *mut MqoResult,
) -> MqoStatus {
    guard(|| {
        let w = workload.as_ref().ok_or_else(|| null("workload"))?;
        let result = out(result, "result")?;
        *result = ptr::null_mut();
        let algorithm = MqoAlgorithm::from_code(algorithm).ok_or_else(|| {
            Failure(
                MqoStatus::InvalidArgument,
                format!("unknown algorithm code {algorithm}"),
            )
        })?;
        let opts = RunOptions {
            k: (k > 0).then_some(k),
            prune,
        };
        let outcome = run(&w.workload.prepare()?, algorithm, opts)?;
        *result = Box::into_raw(Box::new(MqoResult { outcome }));
        Ok(())
    })
}

/// Releases a result. Null is ignored.
///
/// # Safety
/// `result` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mqo_result_free(result: *mut MqoResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Plan cost with the chosen nodes materialized.
///
/// # Safety
/// `result` must be a live handle and `cost` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mqo_result_plan_cost(result: *const MqoResult, cost: *mut f64) -> MqoStatus {
    guard(|| {
        let r = result.as_ref().ok_or_else(|| null("result"))?;
        *out(cost, "cost")? = r.outcome.bc_chosen;
        Ok(())
    })
}

/// Plan cost without any materialization.
///
/// # Safety
/// `result` must be a live handle and `cost` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mqo_result_baseline_cost(result: *const MqoResult, cost: *mut f64) -> MqoStatus {
    guard(|| {
        let r = result.as_ref().ok_or_else(|| null("result"))?;
        *out(cost, "cost")? = r.outcome.bc_empty;
        Ok(())
    })
}

/// Number of materialized nodes.
///
/// # Safety
/// `result` must be a live handle and `count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mqo_result_materialized_count(result: *const MqoResult, count: *mut usize) -> MqoStatus {
    guard(|| {
        let r = result.as_ref().ok_or_else(|| null("result"))?;
        *out(count, "count")? = r.outcome.labels.len();
        Ok(())
    })
}

/// Label of the `index`-th materialized node. The caller frees the string.
///
/// # Safety
/// `result` must be a live handle and `label` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mqo_result_materialized_label(
    result: *const MqoResult,
    index: usize,
    label: *mut *mut c_char,
) -> MqoStatus {
    guard(|| {
        let r = result.as_ref().ok_or_else(|| null("result"))?;
        let label = out(label, "label")?;
        let labels = &r.outcome.labels;
        let text = labels.get(index).ok_or_else(|| {
            Failure(
                MqoStatus::OutOfRange,
                format!("index {index} out of range for {} materialized nodes", labels.len()),
            )
        })?;
        *label = owned_string(text.clone());
        Ok(())
    })
}

/// Number of distinct materialized sets whose cost the run requested.
///
/// # Safety
/// `result` must be a live handle and `calls` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mqo_result_oracle_calls(result: *const MqoResult, calls: *mut usize) -> MqoStatus {
    guard(|| {
        let r = result.as_ref().ok_or_else(|| null("result"))?;
        *out(calls, "calls")? = r.outcome.oracle_calls;
        Ok(())
    })
}

/// The full outcome as JSON. The caller frees the string.
///
/// # Safety
/// `result` must be a live handle and `json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mqo_result_to_json(result: *const MqoResult, json: *mut *mut c_char) -> MqoStatus {
    guard(|| {
        let r = result.as_ref().ok_or_else(|| null("result"))?;
        let json = out(json, "json")?;
        let text = serde_json::to_string_pretty(&r.outcome).map_err(|e| Failure(MqoStatus::Internal, e.to_string()))?;
        *json = owned_string(text);
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mqo_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
