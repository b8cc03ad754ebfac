//! C ABI over `cylrev`.
//!
//! Handles are opaque and owned by the caller once returned; each has a
//! matching `_free`. Every fallible call returns a [`CylrevStatus`] and, on
//! failure, leaves a message for [`cylrev_last_error`] on the calling thread.
//! Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cylrev::gf2::inverse_rule;
use cylrev::spectrum::{compute_spectrum, Method, Spectrum, DEFAULT_ORACLE_CAP};
use cylrev::{Error, PositionCollection};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CylrevStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// A span or bound exceeds what the selected method accepts.
    Capacity = 3,
    NotInvertible = 4,
    /// The output buffer is shorter than the result; the needed length is reported.
    BufferTooSmall = 5,
    Panic = 6,
}

pub struct CylrevCollection(PositionCollection);

pub struct CylrevSpectrum {
    collection: PositionCollection,
    spectrum: Spectrum,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: CylrevStatus, msg: impl Into<String>) -> CylrevStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> CylrevStatus {
    let status = match e {
        Error::OverOracleCap { .. } | Error::OverCap { .. } | Error::NeedsPeriodBound { .. } => {
            CylrevStatus::Capacity
        }
        _ => CylrevStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> CylrevStatus) -> CylrevStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == CylrevStatus::Ok {
                LAST_ERROR.with(|e| *e.borrow_mut() = None);
            }
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(CylrevStatus::Panic, msg)
        }
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn cylrev_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a collection from `len` strictly increasing positions.
///
/// # Safety
/// `positions` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cylrev_collection_new(
    positions: *const usize,
    len: usize,
    out: *mut *mut CylrevCollection,
) -> CylrevStatus {
    guard(|| {
        if positions.is_null() || out.is_null() {
            return fail(CylrevStatus::NullPointer, "null argument");
        }
        let p = std::slice::from_raw_parts(positions, len).to_vec();
        match PositionCollection::new(p) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(CylrevCollection(c)));
                CylrevStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Parses positions such as `"1,2,4"` or `"(1, 2, 4)"`.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cylrev_collection_parse(
    text: *const c_char,
    out: *mut *mut CylrevCollection,
) -> CylrevStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(CylrevStatus::NullPointer, "null argument");
        }
        let Ok(s) = CStr::from_ptr(text).to_str() else {
            return fail(CylrevStatus::InvalidArgument, "text is not UTF-8");
        };
        match s.parse::<PositionCollection>() {
            Ok(c) => {
                *out = Box::into_raw(Box::new(CylrevCollection(c)));
                CylrevStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `c` must come from a `cylrev_collection_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cylrev_collection_free(c: *mut CylrevCollection) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Exact-period spectrum. `t_max = 0` searches completely (brute force for
/// small spans, polynomial method otherwise); a positive `t_max` bounds the
/// polynomial search for large spans.
///
/// # Safety
/// `c` must be a live collection handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cylrev_spectrum_compute(
    c: *const CylrevCollection,
    t_max: u64,
    out: *mut *mut CylrevSpectrum,
) -> CylrevStatus {
    guard(|| {
        if c.is_null() || out.is_null() {
            return fail(CylrevStatus::NullPointer, "null argument");
        }
        let collection = (*c).0.clone();
        let bound = (t_max > 0).then_some(t_max);
        match compute_spectrum(&collection, Method::Auto, bound, DEFAULT_ORACLE_CAP) {
            Ok(spectrum) => {
                *out = Box::into_raw(Box::new(CylrevSpectrum {
                    collection,
                    spectrum,
                }));
                CylrevStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

unsafe fn copy_out(values: &[u64], buf: *mut u64, cap: usize, len: *mut usize) -> CylrevStatus {
    if len.is_null() {
        return fail(CylrevStatus::NullPointer, "null length pointer");
    }
    *len = values.len();
    if cap < values.len() {
        return fail(
            CylrevStatus::BufferTooSmall,
            format!("buffer holds {cap}, need {}", values.len()),
        );
    }
    if !values.is_empty() {
        if buf.is_null() {
            return fail(CylrevStatus::NullPointer, "null buffer");
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    }
    CylrevStatus::Ok
}

/// Writes the exact periods, descending, into `buf`. `*len` receives the
/// number of periods even when the buffer is too small.
///
/// # Safety
/// `s` must be a live spectrum; `buf` must hold `cap` values; `len` writable.
#[no_mangle]
pub unsafe extern "C" fn cylrev_spectrum_periods(
    s: *const CylrevSpectrum,
    buf: *mut u64,
    cap: usize,
    len: *mut usize,
) -> CylrevStatus {
    guard(|| {
        if s.is_null() {
            return fail(CylrevStatus::NullPointer, "null spectrum");
        }
        copy_out(&(*s).spectrum.periods_desc(), buf, cap, len)
    })
}

/// Writes the kernel, descending, into `buf`; same conventions as the periods.
///
/// # Safety
/// As for [`cylrev_spectrum_periods`].
#[no_mangle]
pub unsafe extern "C" fn cylrev_spectrum_kernel(
    s: *const CylrevSpectrum,
    buf: *mut u64,
    cap: usize,
    len: *mut usize,
) -> CylrevStatus {
    guard(|| {
        if s.is_null() {
            return fail(CylrevStatus::NullPointer, "null spectrum");
        }
        copy_out(&(*s).spectrum.kernel_desc(), buf, cap, len)
    })
}

/// Bound up to which every exact period was searched; 0 for a NULL handle.
///
/// # Safety
/// `s` must be NULL or a live spectrum.
#[no_mangle]
pub unsafe extern "C" fn cylrev_spectrum_complete_up_to(s: *const CylrevSpectrum) -> u64 {
    if s.is_null() {
        0
    } else {
        (*s).spectrum.complete_up_to()
    }
}

/// JSON form of the spectrum; free the result with [`cylrev_string_free`].
///
/// # Safety
/// `s` must be a live spectrum; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cylrev_spectrum_to_json(
    s: *const CylrevSpectrum,
    out: *mut *mut c_char,
) -> CylrevStatus {
    guard(|| {
        if s.is_null() || out.is_null() {
            return fail(CylrevStatus::NullPointer, "null argument");
        }
        let s = &*s;
        let text = serde_json::to_string(&s.spectrum.to_json(&s.collection)).expect("serializable");
        *out = into_c_string(text);
        CylrevStatus::Ok
    })
}

/// # Safety
/// `s` must come from [`cylrev_spectrum_compute`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cylrev_spectrum_free(s: *mut CylrevSpectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Reversibility of the collection's rule on a cylinder of `n` cells.
///
/// # Safety
/// `c` must be a live collection; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cylrev_is_reversible(
    c: *const CylrevCollection,
    n: u64,
    out: *mut bool,
) -> CylrevStatus {
    guard(|| {
        if c.is_null() || out.is_null() {
            return fail(CylrevStatus::NullPointer, "null argument");
        }
        match cylrev::is_reversible(&(*c).0, n) {
            Ok(r) => {
                *out = r;
                CylrevStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Inverse rule on `n` cells as a 01 string, position 0 first. Free the
/// result with [`cylrev_string_free`].
///
/// # Safety
/// `c` must be a live collection; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cylrev_inverse_rule(
    c: *const CylrevCollection,
    n: u64,
    out: *mut *mut c_char,
) -> CylrevStatus {
    guard(|| {
        if c.is_null() || out.is_null() {
            return fail(CylrevStatus::NullPointer, "null argument");
        }
        let c = &(*c).0;
        if n <= c.last() as u64 {
            return from_error(Error::CylinderTooSmall { n, last: c.last() });
        }
        let v = match c.rule(n as usize) {
            Ok(v) => v,
            Err(e) => return from_error(e),
        };
        match inverse_rule(&v) {
            Some(w) => {
                *out = into_c_string(w.to_string());
                CylrevStatus::Ok
            }
            None => fail(
                CylrevStatus::NotInvertible,
                format!("{v} is irreversible on n = {n}"),
            ),
        }
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cylrev_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
