//! C bindings for the `udisc` library: opaque problem and report handles,
//! integer status codes, and the same JSON documents as the CLI.
//!
//! Matrices cross the boundary as row-major `double` buffers with
//! interleaved real and imaginary parts, so entry `(i, j)` of a `dim`-sized
//! matrix occupies indices `2*(i*dim + j)` and `2*(i*dim + j) + 1`. Every
//! function tolerates null pointers; failures return a status code and set
//! a thread-local message readable through [`ud_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use udisc::cli::{problem_file_from_json, report_file, ProblemFile, ReportFile};
use udisc::oracle::{oracle_maximize, OracleConfig};
use udisc::{build_problem, solve, CMatrix, C64};
use udisc::{DensityMatrix, DiscriminationProblem, Priors};

/// Density-matrix validation tolerance used when the caller passes a value
/// at or below zero; matches the CLI default.
const DEFAULT_TOL: f64 = 1e-10;

/// Status code returned by every fallible binding.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UdStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was outside its documented range.
    InvalidArgument = 2,
    /// The input was not a valid problem document.
    ParseError = 3,
    /// The states or priors failed validation.
    InvalidProblem = 4,
    /// Solving or maximizing failed.
    SolveFailed = 5,
    /// An output buffer was shorter than the data.
    BufferTooSmall = 6,
}

/// A validated discrimination instance, reduced to the span of the
/// supports. Create with [`ud_problem_from_json`] or
/// [`ud_problem_from_arrays`]; destroy with [`ud_problem_free`].
pub struct UdProblem {
    file: ProblemFile,
    problem: DiscriminationProblem,
}

/// A solved instance: bounds, method, canonical angles, and the
/// measurement lifted back to the input dimension. Destroy with
/// [`ud_report_free`].
pub struct UdReport {
    file: ReportFile,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("nul bytes were removed");
    });
}

fn fail(status: UdStatus, message: &str) -> UdStatus {
    set_error(message);
    status
}

/// Message describing the most recent failure on the calling thread; the
/// empty string when none has occurred. The pointer stays valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ud_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parses a problem JSON document (a report document is also accepted and
/// its embedded problem used) and builds the reduced instance. `tol` is
/// the density-matrix validation tolerance; any value at or below zero
/// selects the default `1e-10`.
///
/// # Safety
/// `json` must point to a nul-terminated string and `out` to writable
/// storage for one pointer. On success `*out` owns the instance.
#[no_mangle]
pub unsafe extern "C" fn ud_problem_from_json(
    json: *const c_char,
    tol: f64,
    out: *mut *mut UdProblem,
) -> UdStatus {
    let Some(slot) = (unsafe { out.as_mut() }) else {
        return fail(UdStatus::NullPointer, "output pointer is null");
    };
    *slot = ptr::null_mut();
    if json.is_null() {
        return fail(UdStatus::NullPointer, "json pointer is null");
    }
    let text = match unsafe { CStr::from_ptr(json) }.to_str() {
        Ok(text) => text,
        Err(_) => return fail(UdStatus::ParseError, "json is not valid UTF-8"),
    };
    let file = match problem_file_from_json(text) {
        Ok(file) => file,
        Err(message) => return fail(UdStatus::ParseError, &message),
    };
    let tol = if tol > 0.0 { tol } else { DEFAULT_TOL };
    match file.to_problem(tol) {
        Ok(problem) => {
            *slot = Box::into_raw(Box::new(UdProblem { file, problem }));
            UdStatus::Ok
        }
        Err(e) => fail(UdStatus::InvalidProblem, &e.to_string()),
    }
}

unsafe fn matrix_from_interleaved(dim: usize, data: *const f64) -> CMatrix {
    let raw = unsafe { std::slice::from_raw_parts(data, 2 * dim * dim) };
    CMatrix::from_fn(dim, dim, |i, j| {
        let k = 2 * (i * dim + j);
        C64::new(raw[k], raw[k + 1])
    })
}

/// Builds the reduced instance from two `dim`-sized density matrices in
/// the interleaved layout described at the top of the header and prior
/// probabilities `p0`, `p1`. `tol` behaves as in
/// [`ud_problem_from_json`].
///
/// # Safety
/// `rho0` and `rho1` must each point to `2*dim*dim` doubles and `out` to
/// writable storage for one pointer. On success `*out` owns the instance.
#[no_mangle]
pub unsafe extern "C" fn ud_problem_from_arrays(
    dim: usize,
    rho0: *const f64,
    rho1: *const f64,
    p0: f64,
    p1: f64,
    tol: f64,
    out: *mut *mut UdProblem,
) -> UdStatus {
    let Some(slot) = (unsafe { out.as_mut() }) else {
        return fail(UdStatus::NullPointer, "output pointer is null");
    };
    *slot = ptr::null_mut();
    if rho0.is_null() || rho1.is_null() {
        return fail(UdStatus::NullPointer, "state pointer is null");
    }
    if dim == 0 {
        return fail(UdStatus::InvalidArgument, "dimension is zero");
    }
    let tol = if tol > 0.0 { tol } else { DEFAULT_TOL };
    let build = || -> udisc::Result<(ProblemFile, DiscriminationProblem)> {
        let rho0 = DensityMatrix::new(&unsafe { matrix_from_interleaved(dim, rho0) }, tol)?;
        let rho1 = DensityMatrix::new(&unsafe { matrix_from_interleaved(dim, rho1) }, tol)?;
        let priors = Priors::new(p0, p1)?;
        let file = ProblemFile::from_states(&rho0, &rho1, &priors);
        let problem = build_problem(&rho0, &rho1, priors)?;
        Ok((file, problem))
    };
    match build() {
        Ok((file, problem)) => {
            *slot = Box::into_raw(Box::new(UdProblem { file, problem }));
            UdStatus::Ok
        }
        Err(e) => fail(UdStatus::InvalidProblem, &e.to_string()),
    }
}

/// Releases a problem handle; null is ignored.
///
/// # Safety
/// `problem` must be a pointer returned by a constructor and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn ud_problem_free(problem: *mut UdProblem) {
    if !problem.is_null() {
        drop(unsafe { Box::from_raw(problem) });
    }
}

/// Dimension of the input states; 0 when `problem` is null.
///
/// # Safety
/// `problem` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ud_problem_dim(problem: *const UdProblem) -> usize {
    unsafe { problem.as_ref() }.map_or(0, |handle| handle.problem.original_dim())
}

/// Dimension after reduction to the span of the supports; 0 when
/// `problem` is null.
///
/// # Safety
/// `problem` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ud_problem_reduced_dim(problem: *const UdProblem) -> usize {
    unsafe { problem.as_ref() }.map_or(0, |handle| handle.problem.dim())
}

/// Solves the instance: certified bounds, exactness, canonical angles, and
/// an explicit zero-error measurement.
///
/// # Safety
/// `problem` must be a live handle and `out` writable storage for one
/// pointer. On success `*out` owns the report.
#[no_mangle]
pub unsafe extern "C" fn ud_problem_solve(
    problem: *const UdProblem,
    out: *mut *mut UdReport,
) -> UdStatus {
    let Some(slot) = (unsafe { out.as_mut() }) else {
        return fail(UdStatus::NullPointer, "output pointer is null");
    };
    *slot = ptr::null_mut();
    let Some(handle) = (unsafe { problem.as_ref() }) else {
        return fail(UdStatus::NullPointer, "problem pointer is null");
    };
    match solve(&handle.problem) {
        Ok(report) => {
            let file = report_file(&handle.file, &handle.problem, &report);
            *slot = Box::into_raw(Box::new(UdReport { file }));
            UdStatus::Ok
        }
        Err(e) => fail(UdStatus::SolveFailed, &e.to_string()),
    }
}

/// Runs the independent numerical maximizer and writes the value it
/// reached to `p_star` and, when `converged` is non-null, whether every
/// stage finished within its budget. `restarts` of 0 selects the default
/// of 20.
///
/// # Safety
/// `problem` must be a live handle and `p_star` writable; `converged` may
/// be null.
#[no_mangle]
pub unsafe extern "C" fn ud_problem_oracle(
    problem: *const UdProblem,
    seed: u64,
    restarts: usize,
    p_star: *mut f64,
    converged: *mut bool,
) -> UdStatus {
    let Some(handle) = (unsafe { problem.as_ref() }) else {
        return fail(UdStatus::NullPointer, "problem pointer is null");
    };
    let Some(p_star) = (unsafe { p_star.as_mut() }) else {
        return fail(UdStatus::NullPointer, "p_star pointer is null");
    };
    let config = OracleConfig {
        seed,
        restarts: if restarts == 0 { OracleConfig::default().restarts } else { restarts },
        ..OracleConfig::default()
    };
    match oracle_maximize(&handle.problem, &config) {
        Ok(result) => {
            *p_star = result.p_star;
            if let Some(converged) = unsafe { converged.as_mut() } {
                *converged = result.converged;
            }
            UdStatus::Ok
        }
        Err(e) => fail(UdStatus::SolveFailed, &e.to_string()),
    }
}

/// Releases a report handle; null is ignored.
///
/// # Safety
/// `report` must be a pointer returned by [`ud_problem_solve`] and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn ud_report_free(report: *mut UdReport) {
    if !report.is_null() {
        drop(unsafe { Box::from_raw(report) });
    }
}

unsafe fn report_field<T>(report: *const UdReport, missing: T, get: impl Fn(&ReportFile) -> T) -> T {
    unsafe { report.as_ref() }.map_or(missing, |handle| get(&handle.file))
}

/// Certified lower bound on the success probability; NaN when `report` is
/// null.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ud_report_p_lower(report: *const UdReport) -> f64 {
    unsafe { report_field(report, f64::NAN, |file| file.p_lower) }
}

/// Certified upper bound on the success probability; NaN when `report` is
/// null.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ud_report_p_upper(report: *const UdReport) -> f64 {
    unsafe { report_field(report, f64::NAN, |file| file.p_upper) }
}

/// Width of the bound bracket; NaN when `report` is null.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ud_report_gap(report: *const UdReport) -> f64 {
    unsafe { report_field(report, f64::NAN, |file| file.gap) }
}

/// Fidelity of the two input states; NaN when `report` is null.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ud_report_fidelity(report: *const UdReport) -> f64 {
    unsafe { report_field(report, f64::NAN, |file| file.fidelity) }
}

/// True when the bounds coincide and the solution is exact; false when
/// `report` is null.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ud_report_exact(report: *const UdReport) -> bool {
    unsafe { report_field(report, false, |file| file.exact) }
}

/// Dimension of the input states; 0 when `report` is null.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ud_report_dim(report: *const UdReport) -> usize {
    unsafe { report_field(report, 0, |file| file.dim) }
}

/// Dimension after reduction to the span of the supports; 0 when `report`
/// is null.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ud_report_reduced_dim(report: *const UdReport) -> usize {
    unsafe { report_field(report, 0, |file| file.reduced_dim) }
}

/// Name of the solution method; null when `report` is null. Free with
/// [`ud_string_free`].
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ud_report_method(report: *const UdReport) -> *mut c_char {
    unsafe { report.as_ref() }.map_or(ptr::null_mut(), |handle| {
        CString::new(handle.file.method.as_str()).expect("method names contain no nul").into_raw()
    })
}

/// Number of canonical angles between the kernels; 0 when `report` is
/// null.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ud_report_angle_count(report: *const UdReport) -> usize {
    unsafe { report_field(report, 0, |file| file.canonical_angles.len()) }
}

/// Copies the canonical angles, ascending, into `out`. `len` must be at
/// least [`ud_report_angle_count`].
///
/// # Safety
/// `report` must be a live handle and `out` must point to `len` writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn ud_report_angles(
    report: *const UdReport,
    out: *mut f64,
    len: usize,
) -> UdStatus {
    let Some(handle) = (unsafe { report.as_ref() }) else {
        return fail(UdStatus::NullPointer, "report pointer is null");
    };
    if out.is_null() {
        return fail(UdStatus::NullPointer, "output pointer is null");
    }
    let angles = &handle.file.canonical_angles;
    if len < angles.len() {
        return fail(UdStatus::BufferTooSmall, "angle buffer is too short");
    }
    let out = unsafe { std::slice::from_raw_parts_mut(out, len) };
    out[..angles.len()].copy_from_slice(angles);
    UdStatus::Ok
}

/// Copies one measurement operator, lifted to the input dimension, into
/// `out` in the interleaved layout: `element` 0 detects the first state,
/// 1 the second, 2 is the inconclusive outcome. `len` must be at least
/// `2*dim*dim` with `dim` from [`ud_report_dim`].
///
/// # Safety
/// `report` must be a live handle and `out` must point to `len` writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn ud_report_povm_element(
    report: *const UdReport,
    element: usize,
    out: *mut f64,
    len: usize,
) -> UdStatus {
    let Some(handle) = (unsafe { report.as_ref() }) else {
        return fail(UdStatus::NullPointer, "report pointer is null");
    };
    if out.is_null() {
        return fail(UdStatus::NullPointer, "output pointer is null");
    }
    let rows = match element {
        0 => &handle.file.povm.e0,
        1 => &handle.file.povm.e1,
        2 => &handle.file.povm.e_fail,
        _ => return fail(UdStatus::InvalidArgument, "element must be 0, 1, or 2"),
    };
    let dim = handle.file.dim;
    if len < 2 * dim * dim {
        return fail(UdStatus::BufferTooSmall, "operator buffer is too short");
    }
    let out = unsafe { std::slice::from_raw_parts_mut(out, len) };
    for (i, row) in rows.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            let k = 2 * (i * dim + j);
            out[k] = entry[0];
            out[k + 1] = entry[1];
        }
    }
    UdStatus::Ok
}

/// Serializes the full report as the same JSON document the CLI's machine
/// format prints; null when `report` is null. Free with
/// [`ud_string_free`].
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ud_report_to_json(report: *const UdReport) -> *mut c_char {
    unsafe { report.as_ref() }.map_or(ptr::null_mut(), |handle| {
        let text = serde_json::to_string_pretty(&handle.file).expect("report serializes");
        CString::new(text).expect("json contains no nul").into_raw()
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must be a pointer returned by [`ud_report_method`] or
/// [`ud_report_to_json`] and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ud_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
