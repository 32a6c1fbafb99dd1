//! C interface to `homalg`.
//!
//! Objects are opaque handles created by `*_from_json`, `*_fixture` or
//! `homalg_trivial_extension` and released with the matching `*_free`.
//! Every fallible call returns a `HomalgStatus`; on failure
//! `homalg_last_error` describes the error on the calling thread.
//! Strings returned through `char **` are owned by the caller and released
//! with `homalg_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use homalg::algebra::Algebra;
use homalg::cli::exit_code_for;
use homalg::cli::input;
use homalg::dg::{trivial_extension, DGRing};
use homalg::duality::{
    build_da_dualizing, is_dualizing, verify_bass_suite, verify_dualizing_suite, verify_lifting_suite,
    verify_trivial_ext_gorenstein,
};
use homalg::error::Error;
use homalg::homdim::{dg_flat_dim, dg_inj_dim, dg_proj_dim, flat_dim, inj_dim, proj_dim, ExtDim, Verdict};
use homalg::linalg::Field;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomalgStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    /// A certification window was exhausted; retry with a larger cutoff.
    Inconclusive = 4,
    /// The input violates an algebra, module or complex axiom.
    InvalidStructure = 5,
    /// Any other library error.
    Error = 6,
    Panic = 7,
}

/// Which homological dimension to compute.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomalgDimKind {
    Projective = 0,
    Injective = 1,
    Flat = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomalgDimTag {
    Finite = 0,
    /// The dimension is at least `value`.
    ExceedsCutoff = 1,
    /// The object is acyclic.
    MinusInfinity = 2,
}

/// A certified dimension: `value` is the dimension or the cutoff it exceeds.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomalgDim {
    pub tag: HomalgDimTag,
    pub value: i64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomalgSuite {
    Dualizing = 0,
    Gorenstein = 1,
    Lifting = 2,
    Bass = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomalgVerdict {
    Verified = 0,
    Inconclusive = 1,
    Violation = 2,
}

/// A finite-dimensional algebra with its structure data.
pub struct HomalgAlgebra {
    inner: Arc<Algebra>,
}

/// A non-positive DG-ring.
pub struct HomalgDGRing {
    inner: Arc<DGRing>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

enum Fail {
    Status(HomalgStatus, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn status_for(e: &Error) -> HomalgStatus {
    match (e, exit_code_for(e)) {
        (Error::Parse(_) | Error::Io(_), _) => HomalgStatus::ParseError,
        (_, 2) => HomalgStatus::Inconclusive,
        (_, 3) => HomalgStatus::InvalidStructure,
        _ => HomalgStatus::Error,
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HomalgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            HomalgStatus::Ok
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(format!("{}: {e}", e.name()));
            status_for(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            HomalgStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Status(HomalgStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Status(HomalgStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail::Status(HomalgStatus::NullArgument, format!("{what} is null")))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Status(HomalgStatus::NullArgument, "output pointer is null".into()));
    }
    out.write(v);
    Ok(())
}

unsafe fn write_handle<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    write_out(out, ptr::null_mut())?;
    out.write(Box::into_raw(Box::new(v)));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    write_out(out, ptr::null_mut())?;
    out.write(c_string(s));
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

fn parse(text: &str) -> Result<serde_json::Value, Fail> {
    Ok(input::parse_json(text, "argument")?)
}

fn dim_out(d: ExtDim) -> HomalgDim {
    match d {
        ExtDim::Finite(n) => HomalgDim { tag: HomalgDimTag::Finite, value: n },
        ExtDim::ExceedsCutoff(c) => HomalgDim { tag: HomalgDimTag::ExceedsCutoff, value: c as i64 },
        ExtDim::MinusInfinity => HomalgDim { tag: HomalgDimTag::MinusInfinity, value: 0 },
    }
}

fn verdict_out(v: Verdict) -> HomalgVerdict {
    match v {
        Verdict::Verified => HomalgVerdict::Verified,
        Verdict::Inconclusive => HomalgVerdict::Inconclusive,
        Verdict::Violation => HomalgVerdict::Violation,
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn homalg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn homalg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` is null or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn homalg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Reads an algebra or quiver document; quivers without a field are over ℚ.
///
/// # Safety
/// `json` is a NUL-terminated string and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn homalg_algebra_from_json(json: *const c_char, out: *mut *mut HomalgAlgebra) -> HomalgStatus {
    guard(|| {
        let v = parse(str_arg(json, "json")?)?;
        let a = input::algebra_from_value(&v, Field::Rationals)?;
        write_handle(out, HomalgAlgebra { inner: a })
    })
}

/// One of the bundled fixtures, such as `"a2-q"` or `"square-f5"`.
///
/// # Safety
/// `name` is a NUL-terminated string and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn homalg_algebra_fixture(name: *const c_char, out: *mut *mut HomalgAlgebra) -> HomalgStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        let f = input::fixture(name)
            .ok_or_else(|| Fail::Status(HomalgStatus::ParseError, format!("no bundled fixture named {name}")))?;
        write_handle(out, HomalgAlgebra { inner: f.algebra()? })
    })
}

/// # Safety
/// `a` is null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn homalg_algebra_free(a: *mut HomalgAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// # Safety
/// `a` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn homalg_algebra_dim(a: *const HomalgAlgebra, out: *mut usize) -> HomalgStatus {
    guard(|| write_out(out, ref_arg(a, "algebra")?.inner.dim()))
}

/// The algebra document; free the string with `homalg_string_free`.
///
/// # Safety
/// `a` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn homalg_algebra_to_json(a: *const HomalgAlgebra, out: *mut *mut c_char) -> HomalgStatus {
    guard(|| {
        let s = serde_json::to_string(&ref_arg(a, "algebra")?.inner.to_json()).expect("JSON values serialize");
        write_string(out, s)
    })
}

/// Dimension of a named target (`regular`, `dual`, `simple:i`, `projective:i`,
/// `injective:i`, optionally suffixed `@n`) or of a complex document.
///
/// # Safety
/// `a` is a live handle, `target` a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn homalg_algebra_dim_of(
    a: *const HomalgAlgebra,
    target: *const c_char,
    kind: HomalgDimKind,
    cutoff: usize,
    out: *mut HomalgDim,
) -> HomalgStatus {
    guard(|| {
        let a = &ref_arg(a, "algebra")?.inner;
        let c = input::target_complex(a, str_arg(target, "target")?)?;
        let r = match kind {
            HomalgDimKind::Projective => proj_dim(&c, cutoff)?,
            HomalgDimKind::Injective => inj_dim(&c, cutoff)?,
            HomalgDimKind::Flat => flat_dim(&c, cutoff)?,
        };
        write_out(out, dim_out(r.value))
    })
}

/// Whether `DA` placed in degree `degree` is certified dualizing.
///
/// # Safety
/// `a` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn homalg_da_is_dualizing(
    a: *const HomalgAlgebra,
    degree: i32,
    cutoff: usize,
    out: *mut bool,
) -> HomalgStatus {
    guard(|| {
        let a = &ref_arg(a, "algebra")?.inner;
        let cert = is_dualizing(a, &build_da_dualizing(a, degree), cutoff)?;
        write_out(out, cert.is_valid())
    })
}

/// Runs one theorem suite. When `report` is not null it receives the JSON
/// report, to be freed with `homalg_string_free`.
///
/// # Safety
/// `a` is a live handle, `out` is writable and `report` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn homalg_verify(
    a: *const HomalgAlgebra,
    suite: HomalgSuite,
    max_dim: usize,
    cutoff: usize,
    out: *mut HomalgVerdict,
    report: *mut *mut c_char,
) -> HomalgStatus {
    guard(|| {
        let a = &ref_arg(a, "algebra")?.inner;
        let name = "ffi";
        let r = match suite {
            HomalgSuite::Dualizing => verify_dualizing_suite(a, name, cutoff)?,
            HomalgSuite::Gorenstein => verify_trivial_ext_gorenstein(a, name, cutoff)?,
            HomalgSuite::Lifting => verify_lifting_suite(a, name, max_dim, cutoff)?,
            HomalgSuite::Bass => verify_bass_suite(a, name, max_dim, cutoff)?,
        };
        write_out(out, verdict_out(r.verdict))?;
        if !report.is_null() {
            report.write(c_string(r.to_json().to_string()));
        }
        Ok(())
    })
}

/// `A ⋉ DA[-degree]`, with `DA` in the negative degree `degree`.
///
/// # Safety
/// `a` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn homalg_trivial_extension(
    a: *const HomalgAlgebra,
    degree: i32,
    out: *mut *mut HomalgDGRing,
) -> HomalgStatus {
    guard(|| {
        let a = &ref_arg(a, "algebra")?.inner;
        if degree >= 0 {
            return Err(Error::SupPositive { degree }.into());
        }
        let b = trivial_extension(a, &build_da_dualizing(a, degree))?;
        write_handle(out, HomalgDGRing { inner: b })
    })
}

/// Reads a DG-ring document.
///
/// # Safety
/// `json` is a NUL-terminated string and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn homalg_dgring_from_json(json: *const c_char, out: *mut *mut HomalgDGRing) -> HomalgStatus {
    guard(|| {
        let v = parse(str_arg(json, "json")?)?;
        let b = input::dgring_from_value(&v, Field::Rationals)?;
        write_handle(out, HomalgDGRing { inner: b })
    })
}

/// # Safety
/// `b` is null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn homalg_dgring_free(b: *mut HomalgDGRing) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Total dimension over the ground field.
///
/// # Safety
/// `b` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn homalg_dgring_dim(b: *const HomalgDGRing, out: *mut usize) -> HomalgStatus {
    guard(|| write_out(out, ref_arg(b, "dgring")?.inner.dim()))
}

/// `H⁰` of the DG-ring as a new algebra handle.
///
/// # Safety
/// `b` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn homalg_dgring_h0(b: *const HomalgDGRing, out: *mut *mut HomalgAlgebra) -> HomalgStatus {
    guard(|| {
        let h0 = ref_arg(b, "dgring")?.inner.h0().clone();
        write_handle(out, HomalgAlgebra { inner: h0 })
    })
}

/// The DG-ring document; free the string with `homalg_string_free`.
///
/// # Safety
/// `b` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn homalg_dgring_to_json(b: *const HomalgDGRing, out: *mut *mut c_char) -> HomalgStatus {
    guard(|| {
        let s = serde_json::to_string(&ref_arg(b, "dgring")?.inner.to_json()).expect("JSON values serialize");
        write_string(out, s)
    })
}

/// Dimension of a DG-module target (`regular`, `simple:i`, ... or a document).
///
/// # Safety
/// `b` is a live handle, `target` a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn homalg_dgring_dim_of(
    b: *const HomalgDGRing,
    target: *const c_char,
    kind: HomalgDimKind,
    cutoff: usize,
    out: *mut HomalgDim,
) -> HomalgStatus {
    guard(|| {
        let b = &ref_arg(b, "dgring")?.inner;
        let x = input::target_dgmodule(b, str_arg(target, "target")?)?;
        let r = match kind {
            HomalgDimKind::Projective => dg_proj_dim(&x, cutoff)?,
            HomalgDimKind::Injective => dg_inj_dim(&x, cutoff)?,
            HomalgDimKind::Flat => dg_flat_dim(&x, cutoff)?,
        };
        write_out(out, dim_out(r.value))
    })
}
