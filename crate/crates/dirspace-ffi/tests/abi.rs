use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use dirspace_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn parse(doc: &str) -> *mut DsSpace {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ds_space_parse(cs(doc).as_ptr(), &mut s) }, DsStatus::Ok);
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ds_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn spaces_through_handles() {
    let w1 = parse(r#"{"schema":1,"space":{"poset":{"kind":"omega_plus_one"},"topology":"scott"}}"#);
    let mut k = DsKind::NotDirected;
    assert_eq!(unsafe { ds_space_classify(w1, 64, &mut k) }, DsStatus::Ok);
    assert_eq!(k, DsKind::Algebraic);
    let mut wb = true;
    assert_eq!(unsafe { ds_space_way_below(w1, cs("\"top\"").as_ptr(), cs("\"top\"").as_ptr(), 64, &mut wb) }, DsStatus::Ok);
    assert!(!wb);
    assert_eq!(unsafe { ds_space_way_below(w1, cs("3").as_ptr(), cs("\"top\"").as_ptr(), 64, &mut wb) }, DsStatus::Ok);
    assert!(wb);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { ds_space_adjunction(w1, 64, &mut r) }, DsStatus::Ok);
    assert_eq!(unsafe { ds_report_passed(r) }, 1);
    let j = unsafe { ds_report_json(r) };
    let v: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(j) }.to_str().unwrap()).unwrap();
    assert_eq!(v["subject"], "adjunction ⇓ ⊣ sup");
    unsafe {
        ds_string_free(j);
        ds_report_free(r);
        ds_space_free(w1);
    }
}

#[test]
fn powerspaces_and_preservation() {
    let v = parse(r#"{"schema":1,"poset":{"kind":"antichain","n":2}}"#);
    for t in [DsTheory::Lower, DsTheory::Upper, DsTheory::Convex] {
        let mut r = ptr::null_mut();
        assert_eq!(unsafe { ds_powerspace(v, t, 1 << 20, &mut r) }, DsStatus::Ok);
        assert_eq!(unsafe { ds_report_passed(r) }, 1);
        unsafe { ds_report_free(r) };
        assert_eq!(unsafe { ds_preservation(v, t, 64, &mut r) }, DsStatus::Ok);
        assert_eq!(unsafe { ds_report_passed(r) }, 1);
        unsafe { ds_report_free(r) };
    }
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { ds_powerspace(v, DsTheory::Convex, 1, &mut r) }, DsStatus::Ok);
    assert_eq!(unsafe { ds_report_passed(r) }, 0);
    unsafe {
        ds_report_free(r);
        ds_space_free(v);
    }
    let w = parse(r#"{"schema":1,"poset":{"kind":"omega"}}"#);
    assert_eq!(unsafe { ds_powerspace(w, DsTheory::Lower, 1 << 20, &mut r) }, DsStatus::Unsupported);
    unsafe { ds_space_free(w) };
}

#[test]
fn error_codes() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ds_space_parse(ptr::null(), &mut s) }, DsStatus::NullArgument);
    assert_eq!(unsafe { ds_space_parse(cs(r#"{"poset":{"kind":"chain","n":2}}"#).as_ptr(), &mut s) }, DsStatus::Parse);
    assert!(last_error().contains("schema"), "{}", last_error());
    let bad = [0x7bu8, 0xff, 0x00];
    assert_eq!(unsafe { ds_space_parse(bad.as_ptr().cast(), &mut s) }, DsStatus::InvalidUtf8);
    let c2 = parse(r#"{"schema":1,"poset":{"kind":"chain","n":2}}"#);
    assert!(last_error().is_empty());
    let mut wb = false;
    assert_eq!(unsafe { ds_space_way_below(c2, cs("7").as_ptr(), cs("0").as_ptr(), 64, &mut wb) }, DsStatus::Domain);
    let mut k = DsKind::NotDirected;
    assert_eq!(unsafe { ds_space_classify(c2, 0, &mut k) }, DsStatus::Domain);
    assert_eq!(unsafe { ds_space_classify(ptr::null(), 64, &mut k) }, DsStatus::NullArgument);
    assert_eq!(unsafe { ds_report_passed(ptr::null()) }, -1);
    assert!(unsafe { ds_report_json(ptr::null()) }.is_null());
    let mut code = 0;
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { ds_suite_run(cs("nope").as_ptr(), 0, 1, &mut code, &mut json) }, DsStatus::Parse);
    unsafe { ds_space_free(c2) };
}

#[test]
fn quick_suite() {
    let mut code = -1;
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { ds_suite_run(cs("quick").as_ptr(), 0, 1, &mut code, &mut json) }, DsStatus::Ok);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(json) }.to_str().unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 5);
    unsafe { ds_string_free(json) };
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "dirspace.h"

int main(void) {
    DsSpace *s = NULL;
    if (ds_space_parse("{\"schema\":1,\"poset\":{\"kind\":\"chain\",\"n\":3}}", &s) != DS_STATUS_OK) return 10;
    DsKind k;
    if (ds_space_classify(s, 64, &k) != DS_STATUS_OK || k != DS_KIND_ALGEBRAIC) return 11;
    DsReport *r = NULL;
    if (ds_powerspace(s, DS_THEORY_CONVEX, 1 << 20, &r) != DS_STATUS_OK) return 12;
    if (ds_report_passed(r) != 1) return 13;
    char *j = ds_report_json(r);
    printf("%s\n", j);
    ds_string_free(j);
    ds_report_free(r);
    ds_space_free(s);
    if (ds_space_parse("{}", &s) != DS_STATUS_PARSE) return 14;
    printf("%s\n", ds_last_error());
    return 0;
}
"#;

#[test]
fn header_compiles_and_links_from_c() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include = manifest.join("include");
    assert!(include.join("dirspace.h").exists());
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libdirspace_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"subject\":\"convex powerspace\""), "{text}");
    assert!(text.contains("schema"), "{text}");
}
