//! C interface to `cone_poisson`.
//!
//! Surfaces are opaque `CpSurface` handles created by `cp_surface_from_json`
//! and released with `cp_surface_free`. Every fallible call returns a
//! `CpStatus`; on failure `cp_last_error` describes the cause for the calling
//! thread until its next failing call. Output arrays are caller-allocated and
//! their capacity is passed alongside them.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cone_poisson::delaunay::make_delaunay;
use cone_poisson::poisson::{angle_gradients, eta_matrix, jacobi_check, radical_check};
use cone_poisson::sl2::elliptic_product_trace;
use cone_poisson::surface::ConeSurface;
use cone_poisson::Error;
use libc::{c_char, size_t};

/// Opaque surface handle.
pub struct CpSurface {
    inner: ConeSurface,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed or geometrically invalid input.
    Input = 3,
    /// A cone angle at or near a positive multiple of 2 pi.
    Wall = 4,
    Numerical = 5,
    /// The output array is too small; `cp_last_error` states the needed length.
    BufferTooSmall = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    let c = CString::new(text).expect("interior nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CpStatus {
    match e {
        Error::WallAngle { .. } => CpStatus::Wall,
        Error::NumericalCollapse(_)
        | Error::NoSolution(_)
        | Error::UnflippableConfiguration(_)
        | Error::NonTermination(_)
        | Error::InvalidDeterminant(_)
        | Error::NoBranch
        | Error::NotSemisimple
        | Error::NotElliptic
        | Error::NotHyperbolic
        | Error::CoincidentFixedPoints
        | Error::DegenerateDirection => CpStatus::Numerical,
        _ => CpStatus::Input,
    }
}

fn fail(status: CpStatus, msg: impl Into<String>) -> CpStatus {
    set_error(msg);
    status
}

fn guard<F: FnOnce() -> Result<(), CpStatus>>(f: F) -> CpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CpStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(CpStatus::Panic, "internal panic"),
    }
}

fn lib_err(e: Error) -> CpStatus {
    fail(status_of(&e), e.to_string())
}

unsafe fn surface<'a>(s: *const CpSurface) -> Result<&'a ConeSurface, CpStatus> {
    // SAFETY: the caller passes a handle from cp_surface_from_json or null.
    unsafe { s.as_ref() }.map(|h| &h.inner).ok_or_else(|| fail(CpStatus::NullPointer, "null surface handle"))
}

unsafe fn write_out(values: &[f64], out: *mut f64, len: size_t) -> Result<(), CpStatus> {
    if out.is_null() {
        return Err(fail(CpStatus::NullPointer, "null output array"));
    }
    if len < values.len() {
        return Err(fail(
            CpStatus::BufferTooSmall,
            format!("output needs {} entries, got {len}", values.len()),
        ));
    }
    // SAFETY: out points to at least len >= values.len() doubles.
    unsafe { ptr::copy_nonoverlapping(values.as_ptr(), out, values.len()) };
    Ok(())
}

fn into_handle(s: ConeSurface, out: *mut *mut CpSurface) {
    let h = Box::into_raw(Box::new(CpSurface { inner: s }));
    // SAFETY: checked non-null by callers.
    unsafe { *out = h };
}

/// Parses a surface description. On success `*out` owns a new handle.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cp_surface_from_json(json: *const c_char, out: *mut *mut CpSurface) -> CpStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return Err(fail(CpStatus::NullPointer, "null argument"));
        }
        // SAFETY: json is nul-terminated per the contract.
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|_| fail(CpStatus::InvalidUtf8, "input is not valid UTF-8"))?;
        let s = ConeSurface::from_json(text).map_err(lib_err)?;
        into_handle(s, out);
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cp_surface_free(s: *mut CpSurface) {
    if !s.is_null() {
        // SAFETY: s was produced by Box::into_raw in into_handle.
        drop(unsafe { Box::from_raw(s) });
    }
}

/// Genus, number of cone points and number of edges. Any out-pointer may be null.
///
/// # Safety
/// `s` must be a valid handle; non-null out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_surface_counts(
    s: *const CpSurface,
    genus: *mut size_t,
    vertices: *mut size_t,
    edges: *mut size_t,
) -> CpStatus {
    guard(|| {
        let s = unsafe { surface(s) }?;
        for (p, v) in [(genus, s.genus()), (vertices, s.num_vertices()), (edges, s.num_edges())] {
            if !p.is_null() {
                // SAFETY: non-null out-pointer, writable per the contract.
                unsafe { *p = v };
            }
        }
        Ok(())
    })
}

/// Cone angles, one per vertex.
///
/// # Safety
/// `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cp_surface_cone_angles(s: *const CpSurface, out: *mut f64, len: size_t) -> CpStatus {
    guard(|| {
        let s = unsafe { surface(s) }?;
        let theta: Vec<f64> = (0..s.num_vertices()).map(|v| s.cone_angle(v)).collect();
        unsafe { write_out(&theta, out, len) }
    })
}

/// Edge lengths in edge-id order.
///
/// # Safety
/// `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cp_surface_lengths(s: *const CpSurface, out: *mut f64, len: size_t) -> CpStatus {
    guard(|| {
        let s = unsafe { surface(s) }?;
        unsafe { write_out(&s.lengths(), out, len) }
    })
}

/// Canonical JSON of the surface. Free the result with `cp_string_free`.
/// Returns null on failure.
///
/// # Safety
/// `s` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn cp_surface_to_json(s: *const CpSurface) -> *mut c_char {
    let mut result = ptr::null_mut();
    guard(|| {
        let s = unsafe { surface(s) }?;
        let c = CString::new(s.to_canonical_json()).map_err(|_| fail(CpStatus::Numerical, "nul in output"))?;
        result = c.into_raw();
        Ok(())
    });
    result
}

/// # Safety
/// `p` must come from `cp_surface_to_json` or be null.
#[no_mangle]
pub unsafe extern "C" fn cp_string_free(p: *mut c_char) {
    if !p.is_null() {
        // SAFETY: p was produced by CString::into_raw.
        drop(unsafe { CString::from_raw(p) });
    }
}

/// The Poisson matrix, row-major, `edges * edges` entries in edge-id order.
///
/// # Safety
/// `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cp_eta_matrix(s: *const CpSurface, out: *mut f64, len: size_t) -> CpStatus {
    guard(|| {
        let s = unsafe { surface(s) }?;
        let p = eta_matrix(s).map_err(lib_err)?;
        let n = p.dim();
        let flat: Vec<f64> = (0..n * n).map(|k| p.get(k / n, k % n)).collect();
        unsafe { write_out(&flat, out, len) }
    })
}

/// Normalized `|P grad theta_v|`, one per vertex.
///
/// # Safety
/// `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cp_radical_residuals(s: *const CpSurface, out: *mut f64, len: size_t) -> CpStatus {
    guard(|| {
        let s = unsafe { surface(s) }?;
        let p = eta_matrix(s).map_err(lib_err)?;
        let r = radical_check(&p, &angle_gradients(s)).map_err(lib_err)?;
        unsafe { write_out(&r, out, len) }
    })
}

/// Finite-difference Jacobi residual using `jobs` threads.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_jacobi_residual(s: *const CpSurface, jobs: size_t, out: *mut f64) -> CpStatus {
    guard(|| {
        let s = unsafe { surface(s) }?;
        let r = jacobi_check(s, jobs).map_err(lib_err)?;
        unsafe { write_out(&[r], out, 1) }
    })
}

/// Flips to a Delaunay triangulation. `*out` receives a new handle and
/// `*flips` (if non-null) the number of flips.
///
/// # Safety
/// `out` must be writable; `flips` writable or null.
#[no_mangle]
pub unsafe extern "C" fn cp_make_delaunay(s: *const CpSurface, out: *mut *mut CpSurface, flips: *mut size_t) -> CpStatus {
    guard(|| {
        let s = unsafe { surface(s) }?;
        if out.is_null() {
            return Err(fail(CpStatus::NullPointer, "null output handle"));
        }
        let (d, moves) = make_delaunay(s).map_err(lib_err)?;
        if !flips.is_null() {
            // SAFETY: non-null, writable per the contract.
            unsafe { *flips = moves.len() };
        }
        into_handle(d, out);
        Ok(())
    })
}

/// `|Tr(S_h S_j)|` for rotations by `theta_h`, `theta_j` about points at distance `d`.
#[no_mangle]
pub extern "C" fn cp_elliptic_product_trace(theta_h: f64, theta_j: f64, d: f64) -> f64 {
    elliptic_product_trace(theta_h, theta_j, d)
}

/// Message for the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn cp_status_string(status: CpStatus) -> *const c_char {
    let s: &'static CStr = match status {
        CpStatus::Ok => c"ok",
        CpStatus::NullPointer => c"null pointer",
        CpStatus::InvalidUtf8 => c"invalid utf-8",
        CpStatus::Input => c"invalid input",
        CpStatus::Wall => c"cone angle on a wall",
        CpStatus::Numerical => c"numerical failure",
        CpStatus::BufferTooSmall => c"buffer too small",
        CpStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}
