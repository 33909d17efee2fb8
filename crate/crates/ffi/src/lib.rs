//! C interface to `uipq-core`.
//!
//! Objects are opaque handles created by `uipq_*_new`/`uipq_*_sample`
//! functions and released with the matching `uipq_*_free`. Every fallible
//! function returns a [`UipqStatus`] and writes its result through an out
//! pointer; on failure `uipq_last_error` describes what went wrong on the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use uipq_core::bridge::{detect_event, sample_bridge, DiscreteBridge};
use uipq_core::exactlaws::series::rat_to_string;
use uipq_core::exactlaws::{approx, hull_perimeter_law, n_trees_law_eps, theta_law};
use uipq_core::skeleton::{count_max_height_trees, HullVariant, PlaneForest, SkeletonSampler};
use uipq_core::{Error, LawTable, RngStream};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum UipqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    CutoffExceeded = 4,
    CapExceeded = 5,
    Unavailable = 6,
    InvariantViolation = 7,
    BufferTooSmall = 8,
    OutOfRange = 9,
    Internal = 10,
}

/// Exact probability table.
pub struct UipqLawTable(LawTable);
/// Seeded random stream.
pub struct UipqRng(RngStream);
/// Ordered forest of plane trees.
pub struct UipqForest(PlaneForest);
/// Cyclic discrete bridge.
pub struct UipqBridge(DiscreteBridge);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn status_of(e: &Error) -> UipqStatus {
    match e {
        Error::Invalid(_) | Error::CapMismatch { .. } => UipqStatus::InvalidArgument,
        Error::Domain(_) => UipqStatus::Domain,
        Error::CutoffExceeded { .. } => UipqStatus::CutoffExceeded,
        Error::CapExceeded { .. } => UipqStatus::CapExceeded,
        Error::Infeasible(_) | Error::CountsUnavailable(_) => UipqStatus::Unavailable,
        Error::InvariantViolation(_)
        | Error::BoundaryMismatch { .. }
        | Error::MissingFill(_)
        | Error::NoCycle(_)
        | Error::TreeNotMaximal(_) => UipqStatus::InvariantViolation,
        Error::Io(_) | Error::Json(_) | Error::Csv(_) => UipqStatus::Internal,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (UipqStatus, String)>) -> UipqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UipqStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            UipqStatus::Internal
        }
    }
}

fn core<T>(r: uipq_core::Result<T>) -> Result<T, (UipqStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (UipqStatus, String) {
    (UipqStatus::NullPointer, "null pointer argument".into())
}

unsafe fn obj<'a, T>(p: *const T) -> Result<&'a T, (UipqStatus, String)> {
    p.as_ref().ok_or_else(null)
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), (UipqStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

unsafe fn put_box<T>(out: *mut *mut T, v: T) -> Result<(), (UipqStatus, String)> {
    put(out, Box::into_raw(Box::new(v)))
}

/// Copies `s` plus a terminating NUL into `buf`. `needed` (optional)
/// receives the required capacity including the NUL.
unsafe fn put_str(s: &str, buf: *mut c_char, cap: usize, needed: *mut usize) -> Result<(), (UipqStatus, String)> {
    let len = s.len() + 1;
    if !needed.is_null() {
        needed.write(len);
    }
    if buf.is_null() || cap < len {
        return Err((UipqStatus::BufferTooSmall, format!("buffer needs {len} bytes")));
    }
    ptr::copy_nonoverlapping(s.as_ptr().cast::<c_char>(), buf, s.len());
    buf.add(s.len()).write(0);
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn uipq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, copied into `buf`.
///
/// # Safety
/// `buf` must point to `cap` writable bytes; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn uipq_last_error(buf: *mut c_char, cap: usize, needed: *mut usize) -> UipqStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().to_string_lossy().into_owned());
    guard(|| put_str(&msg, buf, cap, needed))
}

// ---- random streams ----

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uipq_rng_new(seed: u64, out: *mut *mut UipqRng) -> UipqStatus {
    guard(|| put_box(out, UipqRng(RngStream::new(seed))))
}

/// # Safety
/// `rng` must come from `uipq_rng_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn uipq_rng_free(rng: *mut UipqRng) {
    if !rng.is_null() {
        drop(Box::from_raw(rng));
    }
}

// ---- law tables ----

/// Offspring law `theta(0..=kmax)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uipq_law_theta(kmax: usize, out: *mut *mut UipqLawTable) -> UipqStatus {
    guard(|| put_box(out, UipqLawTable(core(theta_law(kmax))?)))
}

/// Law of the hull perimeter at radius `r`, cut at remaining mass `tail_eps`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uipq_law_hull_perimeter(r: usize, tail_eps: f64, out: *mut *mut UipqLawTable) -> UipqStatus {
    guard(|| put_box(out, UipqLawTable(core(hull_perimeter_law(r, tail_eps))?)))
}

/// Law of the number of maximal-height trees between radii `u < w`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uipq_law_n_trees(
    u: usize,
    w: usize,
    tail_eps: f64,
    out: *mut *mut UipqLawTable,
) -> UipqStatus {
    guard(|| put_box(out, UipqLawTable(core(n_trees_law_eps(u, w, tail_eps))?.2)))
}

/// Number of stored masses (cutoff + 1).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uipq_law_len(t: *const UipqLawTable, out: *mut usize) -> UipqStatus {
    guard(|| put(out, obj(t)?.0.masses().len()))
}

/// Mass at `k` as a double.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uipq_law_mass_f64(t: *const UipqLawTable, k: usize, out: *mut f64) -> UipqStatus {
    guard(|| {
        let t = obj(t)?;
        let m = t.0.masses().get(k).ok_or((UipqStatus::OutOfRange, format!("index {k} beyond the table")))?;
        put(out, approx(m))
    })
}

/// Exact mass at `k` as `"num/den"`.
///
/// # Safety
/// `buf` must point to `cap` writable bytes; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn uipq_law_mass_exact(
    t: *const UipqLawTable,
    k: usize,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> UipqStatus {
    guard(|| {
        let t = obj(t)?;
        let m = t.0.masses().get(k).ok_or((UipqStatus::OutOfRange, format!("index {k} beyond the table")))?;
        put_str(&rat_to_string(m), buf, cap, needed)
    })
}

/// Mass left out of the table, as a double.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uipq_law_tail_bound(t: *const UipqLawTable, out: *mut f64) -> UipqStatus {
    guard(|| put(out, approx(obj(t)?.0.tail_bound())))
}

/// # Safety
/// `t` must come from a `uipq_law_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn uipq_law_free(t: *mut UipqLawTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

// ---- forests ----

/// Samples the hull skeleton of radius `r`; `rotated` selects the uniformly
/// rotated variant, otherwise the spine tree comes first and is marked.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uipq_forest_sample_hull(
    r: usize,
    rotated: bool,
    rng: *mut UipqRng,
    out: *mut *mut UipqForest,
) -> UipqStatus {
    guard(|| {
        let rng = rng.as_mut().ok_or_else(null)?;
        let variant = if rotated { HullVariant::Rotated } else { HullVariant::Rooted };
        let f = core(SkeletonSampler::new().hull_skeleton(r, variant, &mut rng.0))?;
        put_box(out, UipqForest(f))
    })
}

/// Samples the annulus skeleton between radii `u < w`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uipq_forest_sample_annulus(
    u: usize,
    w: usize,
    rng: *mut UipqRng,
    out: *mut *mut UipqForest,
) -> UipqStatus {
    guard(|| {
        let rng = rng.as_mut().ok_or_else(null)?;
        let f = core(SkeletonSampler::new().annulus_skeleton(u, w, &mut rng.0))?;
        put_box(out, UipqForest(f))
    })
}

/// Number of trees.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uipq_forest_trees(f: *const UipqForest, out: *mut usize) -> UipqStatus {
    guard(|| put(out, obj(f)?.0.q()))
}

/// Number of vertices at the height cap.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uipq_forest_top_size(f: *const UipqForest, out: *mut usize) -> UipqStatus {
    guard(|| put(out, obj(f)?.0.p()))
}

/// Number of trees reaching the height cap.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uipq_forest_max_height_trees(f: *const UipqForest, out: *mut usize) -> UipqStatus {
    guard(|| put(out, count_max_height_trees(&obj(f)?.0)))
}

/// JSON encoding of the forest.
///
/// # Safety
/// `buf` must point to `cap` writable bytes; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn uipq_forest_to_json(
    f: *const UipqForest,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> UipqStatus {
    guard(|| put_str(&core(obj(f)?.0.to_json())?, buf, cap, needed))
}

/// # Safety
/// `f` must come from a forest constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn uipq_forest_free(f: *mut UipqForest) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

// ---- bridges ----

/// Uniform bridge with `2 big_k` steps.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uipq_bridge_sample(big_k: usize, rng: *mut UipqRng, out: *mut *mut UipqBridge) -> UipqStatus {
    guard(|| {
        let rng = rng.as_mut().ok_or_else(null)?;
        put_box(out, UipqBridge(core(sample_bridge(big_k, &mut rng.0))?))
    })
}

/// Bridge from `2K + 1` values starting and ending at 0 with unit steps.
///
/// # Safety
/// `values` must point to `len` readable integers.
#[no_mangle]
pub unsafe extern "C" fn uipq_bridge_from_values(
    values: *const i64,
    len: usize,
    out: *mut *mut UipqBridge,
) -> UipqStatus {
    guard(|| {
        if values.is_null() {
            return Err(null());
        }
        let v = std::slice::from_raw_parts(values, len).to_vec();
        put_box(out, UipqBridge(core(DiscreteBridge::from_values(v))?))
    })
}

/// Cactus distance between positions `i` and `j`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uipq_bridge_cactus_distance(
    b: *const UipqBridge,
    i: usize,
    j: usize,
    out: *mut u64,
) -> UipqStatus {
    guard(|| {
        let b = obj(b)?;
        let n = b.0.positions();
        if i >= n || j >= n {
            return Err((UipqStatus::OutOfRange, format!("positions must be below {n}")));
        }
        put(out, b.0.cactus_distance(i, j))
    })
}

/// Whether `k` well-spaced positions lie within cactus distance `5 r`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uipq_bridge_detect_event(
    b: *const UipqBridge,
    k: usize,
    r: usize,
    c: f64,
    out: *mut bool,
) -> UipqStatus {
    guard(|| {
        if r == 0 || !(c > 0.0) {
            return Err((UipqStatus::InvalidArgument, "need r >= 1 and c > 0".into()));
        }
        put(out, detect_event(&obj(b)?.0, k, r, c))
    })
}

/// # Safety
/// `b` must come from a bridge constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn uipq_bridge_free(b: *mut UipqBridge) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}
