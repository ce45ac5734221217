use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use pframe_ffi::*;

fn last_error() -> String {
    let p = pf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn energy_and_strength() {
    let name = CString::new("icosahedron").unwrap();
    let mut cfg = ptr::null_mut();
    unsafe {
        assert_eq!(pf_config_from_catalog(name.as_ptr(), &mut cfg), PfStatus::Ok);
        let mut n = 0;
        assert_eq!(pf_config_len(cfg, &mut n), PfStatus::Ok);
        assert_eq!(n, 6);
        let mut e = 0.0;
        assert_eq!(pf_energy(cfg, 3.0, &mut e), PfStatus::Ok);
        assert!((e - 0.241202265916660).abs() < 1e-12);
        let mut t = 0;
        assert_eq!(pf_design_strength(cfg, 4, &mut t), PfStatus::Ok);
        assert_eq!(t, 2);
        pf_config_free(cfg);
    }
}

#[test]
fn error_codes() {
    let bad = CString::new("no-such-entry").unwrap();
    let mut cfg = ptr::null_mut();
    unsafe {
        assert_eq!(pf_config_from_catalog(bad.as_ptr(), &mut cfg), PfStatus::UnknownEntry);
        assert!(cfg.is_null());
        assert!(last_error().contains("no-such-entry"));
        assert_eq!(pf_config_from_catalog(ptr::null(), &mut cfg), PfStatus::NullPointer);
        let mut e = 0.0;
        assert_eq!(pf_energy(ptr::null(), 3.0, &mut e), PfStatus::NullPointer);
        let junk = CString::new("{").unwrap();
        assert_eq!(pf_config_from_json(junk.as_ptr(), &mut cfg), PfStatus::Parse);
        let name = CString::new("24-cell").unwrap();
        assert_eq!(pf_config_from_catalog(name.as_ptr(), &mut cfg), PfStatus::Ok);
        let mut cert = ptr::null_mut();
        assert_eq!(pf_certificate_tight(cfg, 5.0, &mut cert), PfStatus::NotTight);
        assert_eq!(pf_energy(cfg, -1.0, &mut e), PfStatus::InvalidArgument);
        pf_config_free(cfg);
        pf_config_free(ptr::null_mut());
    }
}

#[test]
fn certificates_round_trip() {
    let name = CString::new("e8-roots").unwrap();
    unsafe {
        let mut cfg = ptr::null_mut();
        assert_eq!(pf_config_from_catalog(name.as_ptr(), &mut cfg), PfStatus::Ok);
        let mut cert = ptr::null_mut();
        assert_eq!(pf_certificate_tight(cfg, 5.0, &mut cert), PfStatus::Ok);
        let mut b = 0.0;
        assert_eq!(pf_certificate_bound(cert, &mut b), PfStatus::Ok);
        assert!((b - 0.022916666666667).abs() < 1e-10);
        let mut json = ptr::null_mut();
        assert_eq!(pf_certificate_to_json(cert, &mut json), PfStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(pf_certificate_from_json(json, &mut again), PfStatus::Ok);
        let mut v = PfVerdict::Inconclusive;
        assert_eq!(pf_certificate_verify(again, cfg, &mut v), PfStatus::Ok);
        assert_eq!(v, PfVerdict::Verified);
        pf_string_free(json);
        pf_certificate_free(again);
        pf_certificate_free(cert);
        pf_config_free(cfg);

        let space = CString::new("rp:3").unwrap();
        let mut lp = ptr::null_mut();
        assert_eq!(pf_certificate_lp(space.as_ptr(), 3.0, 0, &mut lp), PfStatus::Ok);
        assert_eq!(pf_certificate_verify(lp, ptr::null(), &mut v), PfStatus::Ok);
        assert_eq!(v, PfVerdict::Verified);
        pf_certificate_free(lp);

        let mut c600 = ptr::null_mut();
        assert_eq!(pf_certificate_600cell(7.0, &mut c600), PfStatus::InvalidArgument);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(pf_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <math.h>
#include "pframe.h"

int main(void) {
    PfConfiguration *cfg = NULL;
    if (pf_config_from_catalog("kissing-e8", &cfg) != PF_STATUS_OK) return 10;
    double e = 0.0;
    if (pf_energy(cfg, 3.0, &e) != PF_STATUS_OK) return 11;
    if (fabs(e - 1.0 / 14.0) > 1e-12) return 12;
    PfCertificate *cert = NULL;
    if (pf_certificate_tight(cfg, 3.0, &cert) != PF_STATUS_OK) return 13;
    PfVerdict v = PF_VERDICT_INCONCLUSIVE;
    if (pf_certificate_verify(cert, cfg, &v) != PF_STATUS_OK || v != PF_VERDICT_VERIFIED) return 14;
    if (pf_config_from_catalog("nope", &cfg) != PF_STATUS_UNKNOWN_ENTRY || pf_last_error() == NULL) return 15;
    pf_certificate_free(cert);
    printf("ok %.15f\n", e);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_static_library() {
    let lib = target_dir().join("libpframe_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let dir = std::env::temp_dir().join(format!("pframe-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let exe = dir.join("main");
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok 0.071428571428571"));
    std::fs::remove_dir_all(&dir).unwrap();
}
