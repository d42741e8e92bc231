//! C ABI over `clo-core`.
//!
//! Bundles are opaque heap handles released with [`clo_bundle_free`]. Every
//! fallible call returns a [`CloStatus`]; on failure a message is available
//! from [`clo_last_error`] on the same thread. Strings handed out by the
//! library are released with [`clo_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use clo_core::circuits::{emit_bundle, parse_bundle_str, verify_separation, Bundle};
use clo_core::constructions::Construction;
use clo_core::math::format_rational;
use clo_core::rectangles::{locality_exact, locality_mc};
use clo_core::testsets::TestSuite;
use clo_core::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CloStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Input = 3,
    Range = 4,
    ScaleCap = 5,
    Schema = 6,
    Circuit = 7,
    MissingOracle = 8,
    Precondition = 9,
    Internal = 10,
    Io = 11,
    Panic = 12,
}

/// Opaque circuit bundle: a circuit and its rectangle family.
pub struct CloBundle {
    inner: Bundle,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes removed"));
}

fn status_of(err: &Error) -> CloStatus {
    match err {
        Error::Input(_) | Error::SideMismatch(_) => CloStatus::Input,
        Error::Range(_) => CloStatus::Range,
        Error::ScaleCap(_) => CloStatus::ScaleCap,
        Error::Schema { .. } => CloStatus::Schema,
        Error::Circuit(_) => CloStatus::Circuit,
        Error::MissingOracle(_) => CloStatus::MissingOracle,
        Error::Precondition(_) => CloStatus::Precondition,
        Error::Invariant(_) => CloStatus::Internal,
        Error::Io(_) => CloStatus::Io,
    }
}

enum Failure {
    Status(CloStatus, String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CloStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CloStatus::Ok,
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("panic inside clo-ffi");
            CloStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure::Status(CloStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    // SAFETY: caller promises a nul-terminated string that outlives the call.
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Status(CloStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn bundle_ref<'a>(b: *const CloBundle) -> Result<&'a CloBundle, Failure> {
    // SAFETY: caller promises a live handle from this library or null.
    b.as_ref().ok_or_else(|| null("bundle"))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null, caller promises it is writable.
    out.write(value);
    Ok(())
}

/// Message of the last failure on this thread; empty if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn clo_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn clo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a bundle from JSON text with an embedded family.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn clo_bundle_from_json(json: *const c_char, out: *mut *mut CloBundle) -> CloStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let inner = parse_bundle_str(text)?;
        put(out, Box::into_raw(Box::new(CloBundle { inner })), "out")
    })
}

/// Builds a named construction (`single-oracle`, `triangle`, `trivial-dnf`,
/// `lex`). `ell` is used only by `lex`; pass 0 otherwise.
///
/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn clo_bundle_construct(
    name: *const c_char,
    n: usize,
    k: usize,
    ell: usize,
    out: *mut *mut CloBundle,
) -> CloStatus {
    guard(|| {
        let c: Construction = read_str(name, "name")?.parse()?;
        let inner = c.build(n, k, (ell > 0).then_some(ell))?;
        put(out, Box::into_raw(Box::new(CloBundle { inner })), "out")
    })
}

/// Releases a bundle. Null is ignored.
///
/// # Safety
/// `bundle` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn clo_bundle_free(bundle: *mut CloBundle) {
    if !bundle.is_null() {
        // SAFETY: allocated by Box::into_raw above.
        drop(Box::from_raw(bundle));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn clo_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by CString::into_raw.
        drop(CString::from_raw(s));
    }
}

/// Writes `n` and `k` of the bundle.
///
/// # Safety
/// `bundle` must be a live handle; `n` and `k` must be writable.
#[no_mangle]
pub unsafe extern "C" fn clo_bundle_params(bundle: *const CloBundle, n: *mut usize, k: *mut usize) -> CloStatus {
    guard(|| {
        let b = bundle_ref(bundle)?;
        put(n, b.inner.n, "n")?;
        put(k, b.inner.k, "k")
    })
}

/// Circuit size: reachable gates plus distinct leaves.
///
/// # Safety
/// `bundle` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn clo_bundle_size(bundle: *const CloBundle, out: *mut usize) -> CloStatus {
    guard(|| {
        let b = bundle_ref(bundle)?;
        put(out, b.inner.circuit.size(), "out")
    })
}

/// Canonical JSON of the bundle; free with [`clo_string_free`].
///
/// # Safety
/// `bundle` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn clo_bundle_to_json(bundle: *const CloBundle, out: *mut *mut c_char) -> CloStatus {
    guard(|| {
        let b = bundle_ref(bundle)?;
        put(out, into_c_string(emit_bundle(&b.inner)), "out")
    })
}

/// Checks the bundle on every clique and multipartite graph. `passed`
/// receives 1 or 0. If `report_json` is non-null it receives the full
/// report, to be freed with [`clo_string_free`].
///
/// # Safety
/// `bundle` must be a live handle; `passed` must be writable; `report_json`
/// must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn clo_bundle_verify(
    bundle: *const CloBundle,
    passed: *mut i32,
    report_json: *mut *mut c_char,
) -> CloStatus {
    guard(|| {
        let b = bundle_ref(bundle)?;
        if passed.is_null() {
            return Err(null("passed"));
        }
        let suite = TestSuite::new(b.inner.n, b.inner.k)?;
        let r = verify_separation(&b.inner.circuit, &b.inner.family, &suite)?;
        put(passed, i32::from(r.passed()), "passed")?;
        if !report_json.is_null() {
            let text = serde_json::to_string(&r).map_err(|e| Failure::Status(CloStatus::Internal, e.to_string()))?;
            put(report_json, into_c_string(text), "report_json")?;
        }
        Ok(())
    })
}

/// Exact locality of the bundle's rectangles as `"num/den"`; free with
/// [`clo_string_free`].
///
/// # Safety
/// `bundle` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn clo_bundle_locality_exact(bundle: *const CloBundle, out: *mut *mut c_char) -> CloStatus {
    guard(|| {
        let b = bundle_ref(bundle)?;
        let suite = TestSuite::new(b.inner.n, b.inner.k)?;
        let v = locality_exact(&b.inner.family, &suite)?;
        put(out, into_c_string(format_rational(&v)), "out")
    })
}

/// Monte-Carlo locality estimate and its 99% half-width. Deterministic for
/// fixed `(samples, seed, workers)`.
///
/// # Safety
/// `bundle` must be a live handle; `estimate` and `half_width` must be writable.
#[no_mangle]
pub unsafe extern "C" fn clo_bundle_locality_mc(
    bundle: *const CloBundle,
    samples: u64,
    seed: u64,
    workers: usize,
    estimate: *mut f64,
    half_width: *mut f64,
) -> CloStatus {
    guard(|| {
        let b = bundle_ref(bundle)?;
        if estimate.is_null() || half_width.is_null() {
            return Err(null("estimate or half_width"));
        }
        let r = locality_mc(&b.inner.family, samples, seed, workers)?;
        put(estimate, r.estimate, "estimate")?;
        put(half_width, r.half_width_99.unwrap_or(0.0), "half_width")
    })
}
