//! C interface to the `pframe` library.
//!
//! Objects cross the boundary as opaque handles owned by the caller and released with
//! the matching `*_free`. Every fallible call returns a `PfStatus`; on failure the
//! message is kept per thread and read with `pf_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pframe::certify::{build_600cell_certificate, build_tight_certificate, Certificate, Verdict};
use pframe::configurations::{catalog_get, design_strength, WeightedConfiguration};
use pframe::energy::energy_value;
use pframe::kernels::Kernel;
use pframe::lpbound::{default_degree, lp_lower_bound};
use pframe::spaces::SpaceDescriptor;
use pframe::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownEntry = 3,
    Parse = 4,
    Unsupported = 5,
    Numerical = 6,
    NotTight = 7,
    Io = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PfVerdict {
    Verified = 0,
    Falsified = 1,
    Inconclusive = 2,
}

/// Weighted point configuration.
pub struct PfConfiguration(WeightedConfiguration);

/// Optimality certificate.
pub struct PfCertificate(Certificate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PfStatus {
    match e {
        Error::InvalidParameter(_) | Error::Mismatch(_) | Error::Domain(_) | Error::Constraint(_) => PfStatus::InvalidArgument,
        Error::UnknownEntry(_) => PfStatus::UnknownEntry,
        Error::Parse(_) | Error::Json(_) => PfStatus::Parse,
        Error::Unsupported(_) => PfStatus::Unsupported,
        Error::Numerical(_) | Error::Singular(_) => PfStatus::Numerical,
        Error::NotTight(_) => PfStatus::NotTight,
        Error::Io(_) => PfStatus::Io,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PfStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            PfStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            PfStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure::Lib(Error::Parse(format!("{what} is not UTF-8"))))
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn pf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn pf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_config_from_catalog(name: *const c_char, out: *mut *mut PfConfiguration) -> PfStatus {
    guard(|| {
        let name = read_str(name, "name")?;
        let cfg = catalog_get(name)?;
        write_out(out, Box::into_raw(Box::new(PfConfiguration(cfg))), "out")
    })
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_config_from_json(json: *const c_char, out: *mut *mut PfConfiguration) -> PfStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let v: serde_json::Value = serde_json::from_str(text).map_err(Error::from)?;
        let cfg = WeightedConfiguration::from_json(&v)?;
        write_out(out, Box::into_raw(Box::new(PfConfiguration(cfg))), "out")
    })
}

/// # Safety
/// `cfg` must come from a `pf_config_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pf_config_free(cfg: *mut PfConfiguration) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// # Safety
/// `cfg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_config_len(cfg: *const PfConfiguration, out: *mut usize) -> PfStatus {
    guard(|| write_out(out, deref(cfg, "cfg")?.0.len(), "out"))
}

/// p-frame energy of the configuration.
///
/// # Safety
/// `cfg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_energy(cfg: *const PfConfiguration, p: f64, out: *mut f64) -> PfStatus {
    guard(|| {
        let cfg = deref(cfg, "cfg")?;
        let e = energy_value(&cfg.0, &Kernel::pframe(p)?)?;
        write_out(out, e, "out")
    })
}

/// Largest `t <= max_t` for which the configuration is a weighted design.
///
/// # Safety
/// `cfg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_design_strength(cfg: *const PfConfiguration, max_t: usize, out: *mut usize) -> PfStatus {
    guard(|| {
        let cfg = deref(cfg, "cfg")?;
        write_out(out, design_strength(&cfg.0, max_t).strength, "out")
    })
}

fn boxed(cert: Certificate) -> *mut PfCertificate {
    Box::into_raw(Box::new(PfCertificate(cert)))
}

/// Tight-design certificate for the p-frame kernel.
///
/// # Safety
/// `cfg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_certificate_tight(cfg: *const PfConfiguration, p: f64, out: *mut *mut PfCertificate) -> PfStatus {
    guard(|| {
        let cfg = deref(cfg, "cfg")?;
        let cert = build_tight_certificate(&cfg.0, &Kernel::pframe(p)?)?;
        write_out(out, boxed(cert), "out")
    })
}

/// 600-cell certificate for `p` in `[8, 10]`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_certificate_600cell(p: f64, out: *mut *mut PfCertificate) -> PfStatus {
    guard(|| write_out(out, boxed(build_600cell_certificate(p)?), "out"))
}

/// Certified LP lower bound; `degree == 0` picks the default for `p`.
///
/// # Safety
/// `space` must be a NUL-terminated string such as `"rp:3"` and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_certificate_lp(
    space: *const c_char,
    p: f64,
    degree: usize,
    out: *mut *mut PfCertificate,
) -> PfStatus {
    guard(|| {
        let space: SpaceDescriptor = read_str(space, "space")?.parse()?;
        let degree = if degree == 0 { default_degree(p) } else { degree };
        let cert = lp_lower_bound(space, &Kernel::pframe(p)?, degree)?;
        write_out(out, boxed(cert), "out")
    })
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_certificate_from_json(json: *const c_char, out: *mut *mut PfCertificate) -> PfStatus {
    guard(|| {
        let cert = Certificate::from_json(read_str(json, "json")?)?;
        write_out(out, boxed(cert), "out")
    })
}

/// Re-runs all checks; `cfg` may be null, which skips the interpolation check.
///
/// # Safety
/// `cert` must be a live handle, `cfg` null or live, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_certificate_verify(
    cert: *mut PfCertificate,
    cfg: *const PfConfiguration,
    out: *mut PfVerdict,
) -> PfStatus {
    guard(|| {
        let cert = cert.as_mut().ok_or(Failure::Null("cert"))?;
        let cfg = cfg.as_ref().map(|c| &c.0);
        let v = match cert.0.verify_in_place(cfg)? {
            Verdict::Verified => PfVerdict::Verified,
            Verdict::Falsified => PfVerdict::Falsified,
            Verdict::Inconclusive => PfVerdict::Inconclusive,
        };
        write_out(out, v, "out")
    })
}

/// Rigorous bound: the lower end of the constant coefficient minus the sweep slack
/// for lower bounds.
///
/// # Safety
/// `cert` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_certificate_bound(cert: *const PfCertificate, out: *mut f64) -> PfStatus {
    guard(|| write_out(out, deref(cert, "cert")?.0.rigorous_bound(), "out"))
}

/// Serialized certificate; release with `pf_string_free`.
///
/// # Safety
/// `cert` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_certificate_to_json(cert: *const PfCertificate, out: *mut *mut c_char) -> PfStatus {
    guard(|| {
        let text = deref(cert, "cert")?.0.to_json()?;
        let c = CString::new(text).map_err(|e| Error::Parse(e.to_string()))?;
        write_out(out, c.into_raw(), "out")
    })
}

/// # Safety
/// `cert` must come from a `pf_certificate_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pf_certificate_free(cert: *mut PfCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
