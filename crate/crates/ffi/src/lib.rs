//! C ABI over the `moebius` library.
//!
//! Tables and Axer instances are opaque handles released with their `_free`
//! function. Every call returns a [`MoebiusStatus`]; on failure the message is
//! available from [`moebius_last_error`]. Strings returned by the library are
//! released with [`moebius_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use moebius::axer::{self, AxerInstance};
use moebius::cli::{self, Identity};
use moebius::mobius::{self, MuTable};
use moebius::report::Report;
use moebius::{arith, Error};

/// Opaque sieved table of μ(n) and M(n).
pub struct MoebiusTable(MuTable);

/// Opaque f_α instance.
pub struct MoebiusAxer(AxerInstance);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoebiusStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    Overflow = 4,
    Io = 5,
    CacheFormat = 6,
    Numeric = 7,
    Panic = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> MoebiusStatus {
    match e {
        Error::OutOfRange { .. } | Error::ExactCapExceeded { .. } | Error::KOutOfRange { .. } => MoebiusStatus::OutOfRange,
        Error::Overflow(_) | Error::DuplicateKey(_) | Error::Resource(_) => MoebiusStatus::Overflow,
        Error::Io(_) => MoebiusStatus::Io,
        Error::CacheFormat(_) => MoebiusStatus::CacheFormat,
        Error::Quadrature { .. } | Error::Divergent { .. } | Error::Singular(_) | Error::ZeroToNegativePower => {
            MoebiusStatus::Numeric
        }
        _ => MoebiusStatus::InvalidArgument,
    }
}

/// Runs `f`, records any error or panic, and maps it to a status.
fn guard<F: FnOnce() -> Result<(), MoebiusStatus>>(f: F) -> MoebiusStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MoebiusStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            MoebiusStatus::Panic
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, MoebiusStatus>;
}

impl<T> OrStatus<T> for moebius::Result<T> {
    fn or_status(self) -> Result<T, MoebiusStatus> {
        self.map_err(|e| {
            set_error(e.to_string());
            status_of(&e)
        })
    }
}

fn null_error(what: &str) -> MoebiusStatus {
    set_error(format!("null pointer: {what}"));
    MoebiusStatus::NullPointer
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, MoebiusStatus> {
    p.as_ref().ok_or_else(|| null_error(what))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), MoebiusStatus> {
    if out.is_null() {
        return Err(null_error("out"));
    }
    out.write(v);
    Ok(())
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, MoebiusStatus> {
    if s.is_null() {
        return Err(null_error(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error(format!("{what} is not valid UTF-8"));
        MoebiusStatus::InvalidArgument
    })
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn moebius_status_message(status: MoebiusStatus) -> *const c_char {
    let s: &'static CStr = match status {
        MoebiusStatus::Ok => c"ok",
        MoebiusStatus::NullPointer => c"null pointer argument",
        MoebiusStatus::InvalidArgument => c"invalid argument",
        MoebiusStatus::OutOfRange => c"argument out of range",
        MoebiusStatus::Overflow => c"integer overflow",
        MoebiusStatus::Io => c"i/o error",
        MoebiusStatus::CacheFormat => c"malformed sieve cache",
        MoebiusStatus::Numeric => c"numerical failure",
        MoebiusStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Message of the last failed call on this thread, or NULL. Free with
/// `moebius_string_free`.
#[no_mangle]
pub extern "C" fn moebius_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map(|c| c.clone().into_raw()).unwrap_or(ptr::null_mut()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn moebius_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Sieves μ and M up to `limit`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn moebius_table_build(limit: u64, out: *mut *mut MoebiusTable) -> MoebiusStatus {
    guard(|| {
        let t = mobius::build_mu_sieve(limit).or_status()?;
        write_out(out, Box::into_raw(Box::new(MoebiusTable(t))))
    })
}

/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn moebius_table_load(path: *const c_char, out: *mut *mut MoebiusTable) -> MoebiusStatus {
    guard(|| {
        let p = read_str(path, "path")?;
        let t = mobius::load_table(Path::new(p)).or_status()?;
        write_out(out, Box::into_raw(Box::new(MoebiusTable(t))))
    })
}

/// # Safety
/// `table` must come from this library; `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn moebius_table_save(table: *const MoebiusTable, path: *const c_char) -> MoebiusStatus {
    guard(|| {
        let t = deref(table, "table")?;
        let p = read_str(path, "path")?;
        mobius::save_table(&t.0, Path::new(p)).or_status()
    })
}

/// # Safety
/// `table` must be NULL or come from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn moebius_table_free(table: *mut MoebiusTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// # Safety
/// `table` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn moebius_table_limit(table: *const MoebiusTable, out: *mut u64) -> MoebiusStatus {
    guard(|| write_out(out, deref(table, "table")?.0.limit()))
}

/// μ(n) for 1 ≤ n ≤ limit.
///
/// # Safety
/// `table` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn moebius_mu(table: *const MoebiusTable, n: u64, out: *mut i8) -> MoebiusStatus {
    guard(|| {
        let t = &deref(table, "table")?.0;
        if n == 0 || n > t.limit() {
            set_error(format!("n = {n} outside 1..={}", t.limit()));
            return Err(MoebiusStatus::OutOfRange);
        }
        write_out(out, t.mu(n))
    })
}

/// M(x).
///
/// # Safety
/// `table` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn moebius_mertens(table: *const MoebiusTable, x: f64, out: *mut i64) -> MoebiusStatus {
    guard(|| {
        let t = &deref(table, "table")?.0;
        write_out(out, mobius::mertens(t, x).or_status()?)
    })
}

/// m(x) = Σ_{n ≤ x} μ(n)/n.
///
/// # Safety
/// `table` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn moebius_m_log(table: *const MoebiusTable, x: f64, out: *mut f64) -> MoebiusStatus {
    guard(|| {
        let t = &deref(table, "table")?.0;
        write_out(out, mobius::m_log_f64(t, x).or_status()?)
    })
}

/// m₁(x) = m(x) - M(x)/x.
///
/// # Safety
/// `table` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn moebius_m1(table: *const MoebiusTable, x: f64, out: *mut f64) -> MoebiusStatus {
    guard(|| {
        let t = &deref(table, "table")?.0;
        write_out(out, mobius::m1_f64(t, x).or_status()?)
    })
}

/// ∫_1^x |M(t)| t^weight dt.
///
/// # Safety
/// `table` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn moebius_abs_mertens_integral(
    table: *const MoebiusTable,
    x: f64,
    weight: i32,
    out: *mut f64,
) -> MoebiusStatus {
    guard(|| {
        let t = &deref(table, "table")?.0;
        write_out(out, mobius::abs_mertens_integral(t, x, weight).or_status()?)
    })
}

/// Runs the named verification (`meissel`, `macleod`, `gram`, `vonmangoldt`,
/// `id19-20`, `prop3`, `prop7`, `prop10`, `prop6`, `prop9`, `eq5`) up to
/// `x_max`. `k <= 0` selects the default order. Writes whether every report
/// passed and, when `out_json` is not NULL, the JSON array of reports.
///
/// # Safety
/// `table` may be NULL only for identities that do not need it; `name` must
/// be NUL-terminated; `out_passed` must be valid; `out_json` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn moebius_verify(
    table: *const MoebiusTable,
    name: *const c_char,
    x_max: f64,
    k: i32,
    seed: u64,
    out_passed: *mut bool,
    out_json: *mut *mut c_char,
) -> MoebiusStatus {
    guard(|| {
        let name = read_str(name, "name")?;
        let id = Identity::from_name(name).ok_or_else(|| {
            set_error(format!("unknown identity {name:?}"));
            MoebiusStatus::InvalidArgument
        })?;
        if !x_max.is_finite() || x_max < 1.0 {
            set_error(format!("x_max must be >= 1, got {x_max}"));
            return Err(MoebiusStatus::InvalidArgument);
        }
        let t = table.as_ref().map(|t| &t.0);
        let k = (k > 0).then_some(k as usize);
        let reports = cli::verify_named(id, t, x_max.floor() as u64, k, None, seed).or_status()?;
        write_out(out_passed, reports.iter().all(Report::passed))?;
        if !out_json.is_null() {
            let json = serde_json::to_string(&reports).map_err(Error::from).or_status()?;
            out_json.write(into_c_string(json));
        }
        Ok(())
    })
}

/// λ_1..λ_k, c_k and the Δ_k checks for one k, as a JSON report.
///
/// # Safety
/// `out_passed` and `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn moebius_lambda_json(k: u32, out_passed: *mut bool, out_json: *mut *mut c_char) -> MoebiusStatus {
    guard(|| {
        let r = cli::lambda_report(k as usize).or_status()?;
        write_out(out_passed, r.passed())?;
        let json = serde_json::to_string(&r).map_err(Error::from).or_status()?;
        write_out(out_json, into_c_string(json))
    })
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn moebius_axer_build(alpha_inv: u64, j_max: u32, out: *mut *mut MoebiusAxer) -> MoebiusStatus {
    guard(|| {
        let a = axer::build_axer(alpha_inv, j_max).or_status()?;
        write_out(out, Box::into_raw(Box::new(MoebiusAxer(a))))
    })
}

/// # Safety
/// `a` must be NULL or come from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn moebius_axer_free(a: *mut MoebiusAxer) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Number of support points.
///
/// # Safety
/// `a` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn moebius_axer_support_len(a: *const MoebiusAxer, out: *mut u64) -> MoebiusStatus {
    guard(|| write_out(out, deref(a, "axer")?.0.support().len() as u64))
}

/// F_α(x).
///
/// # Safety
/// `a` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn moebius_axer_f(a: *const MoebiusAxer, x: f64, out: *mut f64) -> MoebiusStatus {
    guard(|| {
        let a = &deref(a, "axer")?.0;
        write_out(out, arith::to_f64(&a.f_alpha(x).or_status()?))
    })
}

/// G_α(x).
///
/// # Safety
/// `a` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn moebius_axer_g(a: *const MoebiusAxer, x: f64, out: *mut f64) -> MoebiusStatus {
    guard(|| {
        let a = &deref(a, "axer")?.0;
        write_out(out, arith::to_f64(&a.g_alpha(x).or_status()?))
    })
}

/// H_α(x), evaluated exactly at the rational value of x.
///
/// # Safety
/// `a` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn moebius_axer_h(a: *const MoebiusAxer, x: f64, out: *mut f64) -> MoebiusStatus {
    guard(|| {
        let a = &deref(a, "axer")?.0;
        write_out(out, a.h_alpha(x).or_status()?)
    })
}
