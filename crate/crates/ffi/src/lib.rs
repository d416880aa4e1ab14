//! C interface to `fpmc`.
//!
//! Configurations live behind an opaque [`FpmcConfig`] handle. Every function
//! returns an [`FpmcStatus`]; on failure a message is available from
//! [`fpmc_last_error`] on the same thread. Strings handed out by the library
//! must be released with [`fpmc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fpmc::cli;
use fpmc::fixtures::FixtureParams;
use fpmc::io::parse_config;
use fpmc::report::Report;
use fpmc::{certify_fpmc, CurveConfiguration, Error};

/// Result codes. The first four match the exit codes of the command line
/// tool.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FpmcStatus {
    Ok = 0,
    /// The computation ran and the answer is negative (refuted, failed,
    /// inconsistent data).
    Negative = 1,
    InputInvalid = 2,
    Unsupported = 3,
    NullPointer = 10,
    InvalidUtf8 = 11,
    UnknownCommand = 12,
    Panic = 13,
}

impl FpmcStatus {
    fn from_exit_code(code: i32) -> Self {
        match code {
            0 => FpmcStatus::Ok,
            1 => FpmcStatus::Negative,
            2 => FpmcStatus::InputInvalid,
            _ => FpmcStatus::Unsupported,
        }
    }
}

/// Opaque handle to a validated curve configuration.
pub struct FpmcConfig {
    inner: CurveConfiguration,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: FpmcStatus, msg: impl Into<String>) -> FpmcStatus {
    set_error(msg);
    status
}

fn from_error(e: &Error) -> FpmcStatus {
    fail(FpmcStatus::from_exit_code(e.exit_code()), format!("{}: {e}", e.kind()))
}

/// Runs `f`, turning a panic into [`FpmcStatus::Panic`].
fn guard(f: impl FnOnce() -> FpmcStatus) -> FpmcStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(FpmcStatus::Panic, format!("panic: {msg}"))
        }
    }
}

/// # Safety
/// `p` is null or points to a NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, FpmcStatus> {
    if p.is_null() {
        return Err(fail(FpmcStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(FpmcStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior NUL").into_raw()
}

/// Parses a configuration from JSON text and stores a new handle in `*out`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fpmc_config_from_json(
    json: *const c_char,
    out: *mut *mut FpmcConfig,
) -> FpmcStatus {
    guard(|| {
        if out.is_null() {
            return fail(FpmcStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let text = match read_str(json, "json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_config(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(FpmcConfig { inner }));
                FpmcStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Releases a handle. Null is accepted.
///
/// # Safety
/// `config` must come from [`fpmc_config_from_json`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn fpmc_config_free(config: *mut FpmcConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Number of curves in the configuration.
///
/// # Safety
/// `config` is a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fpmc_config_len(config: *const FpmcConfig, out: *mut usize) -> FpmcStatus {
    guard(|| {
        if config.is_null() || out.is_null() {
            return fail(FpmcStatus::NullPointer, "null argument");
        }
        *out = (*config).inner.len();
        FpmcStatus::Ok
    })
}

/// Picard-type invariants: number of curves, maximal `-E^2` and maximal
/// genus.
///
/// # Safety
/// `config` is a live handle and the outputs are valid pointers.
#[no_mangle]
pub unsafe extern "C" fn fpmc_config_invariants(
    config: *const FpmcConfig,
    rho: *mut u64,
    delta_e: *mut u64,
    p_e: *mut u64,
) -> FpmcStatus {
    guard(|| {
        if config.is_null() || rho.is_null() || delta_e.is_null() || p_e.is_null() {
            return fail(FpmcStatus::NullPointer, "null argument");
        }
        let t = (*config).inner.invariants();
        *rho = t.rho as u64;
        *delta_e = t.delta_e;
        *p_e = t.p_e;
        FpmcStatus::Ok
    })
}

/// Runs the light-cone certification. `*certified` is 1 when certified and 0
/// when refuted; the status is `Ok` in both cases.
///
/// # Safety
/// `config` is a live handle and `certified` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fpmc_certify(config: *const FpmcConfig, certified: *mut i32) -> FpmcStatus {
    guard(|| {
        if config.is_null() || certified.is_null() {
            return fail(FpmcStatus::NullPointer, "null argument");
        }
        match certify_fpmc(&(*config).inner) {
            Ok(c) => {
                *certified = i32::from(c.is_certified());
                FpmcStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

fn dispatch(command: &str, input: &str) -> Option<Report> {
    Some(match command {
        "analyze" => cli::analyze(input),
        "certify" => cli::certify(input),
        "ample" => cli::ample(input, false, false),
        "ample-minimal" => cli::ample(input, true, false),
        "ample-reider" => cli::ample(input, false, true),
        "roots" => cli::roots(input),
        "case2b" => cli::case2b(input),
        "blowup" => cli::blowup(input),
        "mw" => cli::mw_fibers(input),
        "mw-verify-table" => cli::mw_verify_table(),
        "fixtures" => cli::fixtures_cmd(Some(input), false, FixtureParams::default()),
        "fixture-export" => cli::fixtures_cmd(Some(input), true, FixtureParams::default()),
        _ => return None,
    })
}

/// Runs a command on JSON input and stores the JSON report in `*out`.
///
/// Commands: `analyze`, `certify`, `ample`, `ample-minimal`, `ample-reider`,
/// `roots`, `case2b` and `blowup` take configuration or script JSON; `mw`
/// takes a fiber list such as `"E7~+A1~"`; `mw-verify-table` ignores its
/// input; `fixtures` and `fixture-export` take a fixture id. The status
/// mirrors the report's exit code, and a report is produced even when the
/// status is not `Ok`.
///
/// # Safety
/// `command` and `input` are NUL-terminated strings and `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn fpmc_run(
    command: *const c_char,
    input: *const c_char,
    out: *mut *mut c_char,
) -> FpmcStatus {
    guard(|| {
        if out.is_null() {
            return fail(FpmcStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let (command, input) = match (read_str(command, "command"), read_str(input, "input")) {
            (Ok(c), Ok(i)) => (c, i),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let Some(report) = dispatch(command, input) else {
            return fail(FpmcStatus::UnknownCommand, format!("unknown command `{command}`"));
        };
        *out = into_c_string(report.to_json());
        let status = FpmcStatus::from_exit_code(report.exit_code);
        if status != FpmcStatus::Ok {
            set_error(format!("{} finished with exit code {}", command, report.exit_code));
        }
        status
    })
}

/// Releases a string returned by this library. Null is accepted.
///
/// # Safety
/// `s` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn fpmc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn fpmc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn fpmc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
