use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use moebius_ffi::*;

fn build(limit: u64) -> *mut MoebiusTable {
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { moebius_table_build(limit, &mut t) }, MoebiusStatus::Ok);
    assert!(!t.is_null());
    t
}

fn last_error() -> String {
    let p = moebius_last_error();
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { moebius_string_free(p) };
    s
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { moebius_string_free(p) };
    s
}

#[test]
fn table_queries() {
    let t = build(1000);
    unsafe {
        let mut limit = 0;
        assert_eq!(moebius_table_limit(t, &mut limit), MoebiusStatus::Ok);
        assert_eq!(limit, 1000);
        let mut mu = 0i8;
        assert_eq!(moebius_mu(t, 30, &mut mu), MoebiusStatus::Ok);
        assert_eq!(mu, -1);
        assert_eq!(moebius_mu(t, 12, &mut mu), MoebiusStatus::Ok);
        assert_eq!(mu, 0);
        let mut m = 0i64;
        assert_eq!(moebius_mertens(t, 10.5, &mut m), MoebiusStatus::Ok);
        assert_eq!(m, -1);
        let mut v = 0.0;
        assert_eq!(moebius_m_log(t, 3.0, &mut v), MoebiusStatus::Ok);
        assert!((v - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(moebius_m1(t, 3.0, &mut v), MoebiusStatus::Ok);
        assert!((v - 0.5).abs() < 1e-15);
        // ∫_1^3 |M| dt = 1 + 0
        assert_eq!(moebius_abs_mertens_integral(t, 3.0, 0, &mut v), MoebiusStatus::Ok);
        assert!((v - 1.0).abs() < 1e-15);
        moebius_table_free(t);
    }
}

#[test]
fn errors_carry_messages() {
    let t = build(100);
    unsafe {
        let mut mu = 0i8;
        assert_eq!(moebius_mu(t, 101, &mut mu), MoebiusStatus::OutOfRange);
        assert!(last_error().contains("101"));
        let mut v = 0.0;
        assert_eq!(moebius_m_log(t, 1e6, &mut v), MoebiusStatus::OutOfRange);
        assert_eq!(moebius_mu(ptr::null(), 1, &mut mu), MoebiusStatus::NullPointer);
        assert_eq!(moebius_mu(t, 1, ptr::null_mut()), MoebiusStatus::NullPointer);
        let mut none = ptr::null_mut();
        assert_eq!(moebius_table_build(0, &mut none), MoebiusStatus::InvalidArgument);
        moebius_table_free(t);
        moebius_table_free(ptr::null_mut());
        let msg = CStr::from_ptr(moebius_status_message(MoebiusStatus::OutOfRange));
        assert_eq!(msg.to_str().unwrap(), "argument out of range");
    }
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("mu.bin").to_str().unwrap()).unwrap();
    let t = build(5000);
    unsafe {
        assert_eq!(moebius_table_save(t, path.as_ptr()), MoebiusStatus::Ok);
        let mut u = ptr::null_mut();
        assert_eq!(moebius_table_load(path.as_ptr(), &mut u), MoebiusStatus::Ok);
        let (mut a, mut b) = (0i64, 0i64);
        moebius_mertens(t, 5000.0, &mut a);
        moebius_mertens(u, 5000.0, &mut b);
        assert_eq!(a, b);
        let missing = CString::new(dir.path().join("none.bin").to_str().unwrap()).unwrap();
        let mut w = ptr::null_mut();
        assert_eq!(moebius_table_load(missing.as_ptr(), &mut w), MoebiusStatus::Io);
        moebius_table_free(t);
        moebius_table_free(u);
    }
}

#[test]
fn verify_by_name() {
    let t = build(2000);
    unsafe {
        let name = CString::new("meissel").unwrap();
        let mut passed = false;
        let mut json = ptr::null_mut();
        assert_eq!(moebius_verify(t, name.as_ptr(), 2000.0, 0, 1, &mut passed, &mut json), MoebiusStatus::Ok);
        assert!(passed);
        let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(v[0]["identity"], "meissel");
        assert_eq!(v[0]["verdict"], "pass");

        let name = CString::new("prop7").unwrap();
        assert_eq!(moebius_verify(t, name.as_ptr(), 500.0, 0, 1, &mut passed, ptr::null_mut()), MoebiusStatus::Ok);
        assert!(passed);

        let name = CString::new("eq5").unwrap();
        assert_eq!(moebius_verify(ptr::null(), name.as_ptr(), 1.0, 4, 1, &mut passed, ptr::null_mut()), MoebiusStatus::Ok);
        assert!(passed);

        let name = CString::new("gram").unwrap();
        assert_eq!(
            moebius_verify(ptr::null(), name.as_ptr(), 100.0, 0, 1, &mut passed, ptr::null_mut()),
            MoebiusStatus::InvalidArgument
        );
        let name = CString::new("nope").unwrap();
        assert_eq!(moebius_verify(t, name.as_ptr(), 100.0, 0, 1, &mut passed, ptr::null_mut()), MoebiusStatus::InvalidArgument);
        assert!(last_error().contains("nope"));
        let name = CString::new("meissel").unwrap();
        assert_eq!(moebius_verify(t, name.as_ptr(), 1e6, 0, 1, &mut passed, ptr::null_mut()), MoebiusStatus::OutOfRange);
        moebius_table_free(t);
    }
}

#[test]
fn lambda_json() {
    unsafe {
        let mut passed = false;
        let mut json = ptr::null_mut();
        assert_eq!(moebius_lambda_json(2, &mut passed, &mut json), MoebiusStatus::Ok);
        assert!(passed);
        let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(v["details"]["lambdas"], serde_json::json!(["3", "-2"]));
        assert_eq!(moebius_lambda_json(0, &mut passed, &mut json), MoebiusStatus::InvalidArgument);
    }
}

#[test]
fn axer_handle() {
    unsafe {
        let mut a = ptr::null_mut();
        assert_eq!(moebius_axer_build(2, 1, &mut a), MoebiusStatus::Ok);
        let mut n = 0;
        assert_eq!(moebius_axer_support_len(a, &mut n), MoebiusStatus::Ok);
        assert_eq!(n, 4);
        let mut v = 0.0;
        assert_eq!(moebius_axer_f(a, 8.0, &mut v), MoebiusStatus::Ok);
        assert_eq!(v, 4.0);
        assert_eq!(moebius_axer_f(a, 9.0, &mut v), MoebiusStatus::Ok);
        assert_eq!(v, 0.0);
        assert_eq!(moebius_axer_g(a, 9.0, &mut v), MoebiusStatus::Ok);
        assert_eq!(v, 8.0);
        assert_eq!(moebius_axer_h(a, 10.0, &mut v), MoebiusStatus::Ok);
        assert!((v - 5.0 / 9.0).abs() < 1e-15);
        assert_eq!(moebius_axer_f(a, 1e9, &mut v), MoebiusStatus::OutOfRange);
        moebius_axer_free(a);
        let mut b = ptr::null_mut();
        assert_eq!(moebius_axer_build(16, 30, &mut b), MoebiusStatus::Overflow);
        assert!(b.is_null());
    }
}

#[test]
fn header_declares_every_export() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/moebius.h")).unwrap();
    let src = std::fs::read_to_string(dir.join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .filter_map(|rest| rest.split('(').next())
        .collect();
    assert!(exports.len() >= 20, "{exports:?}");
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("MOEBIUS_STATUS_OUT_OF_RANGE = 3"));
}

#[test]
fn header_compiles_as_c() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let Ok(status) = Command::new("cc")
        .args(["-std=c99", "-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(dir.join("include/moebius.h"))
        .status()
    else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(status.success());
}

/// Links tests/c/smoke.c against the static library when a C compiler and
/// the archive are both present.
#[test]
fn c_program_links_and_runs() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let Some(profile_dir) = exe.parent().and_then(Path::parent) else {
        return;
    };
    let archive = profile_dir.join("libmoebius_ffi.a");
    if !archive.exists() {
        eprintln!("{} not built; skipped", archive.display());
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let bin = tmp.path().join("smoke");
    let Ok(status) = Command::new("cc")
        .arg("-std=c99")
        .arg("-I")
        .arg(dir.join("include"))
        .arg(dir.join("tests/c/smoke.c"))
        .arg(&archive)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
    else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
