use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use starsylv_ffi::*;

const FIXTURE: &str = "field Q\nstar T\ndims 1 1 1\nA 1\n3\nB 1\n1\nC 1\n4\n";

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn take_string(p: *mut c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { ss_string_free(p) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ss_last_error_message()) }
        .to_str()
        .unwrap()
        .to_string()
}

fn parse(text: &str) -> *mut SsSystem {
    let mut sys = ptr::null_mut();
    assert_eq!(
        unsafe { ss_system_parse(c(text).as_ptr(), false, &mut sys) },
        SsStatus::Ok
    );
    sys
}

#[test]
fn parse_serialize_round_trip() {
    let sys = parse(FIXTURE);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { ss_system_to_text(sys, &mut text) }, SsStatus::Ok);
    assert_eq!(take_string(text), FIXTURE);
    let (mut m, mut n, mut ell) = (0, 0, 0);
    assert_eq!(
        unsafe { ss_system_dims(sys, &mut m, &mut n, &mut ell) },
        SsStatus::Ok
    );
    assert_eq!((m, n, ell), (1, 1, 1));
    unsafe { ss_system_free(sys) };
}

#[test]
fn errors_set_status_and_message() {
    let mut sys = ptr::null_mut();
    let status =
        unsafe { ss_system_parse(c("field Q\nstar T\ndims 1 x 1\n").as_ptr(), false, &mut sys) };
    assert_eq!(status, SsStatus::Syntax);
    assert!(sys.is_null());
    assert!(last_error().contains("line 3"));
    let status = unsafe {
        ss_system_parse(
            c(&FIXTURE.replace("field Q", "field GF 2")).as_ptr(),
            false,
            &mut sys,
        )
    };
    assert_eq!(status, SsStatus::Char2Rejected);
    let status = unsafe {
        ss_system_parse(
            c(&FIXTURE.replace("star T", "star H")).as_ptr(),
            false,
            &mut sys,
        )
    };
    assert_eq!(status, SsStatus::InvalidStarMode);
    assert_eq!(
        unsafe { ss_system_parse(ptr::null(), false, &mut sys) },
        SsStatus::NullPointer
    );
    assert_eq!(
        unsafe { ss_system_parse(c(FIXTURE).as_ptr(), false, ptr::null_mut()) },
        SsStatus::NullPointer
    );
    let bad = [0xffu8, 0];
    assert_eq!(
        unsafe { ss_system_parse(bad.as_ptr().cast(), false, &mut sys) },
        SsStatus::InvalidUtf8
    );
    assert_eq!(
        unsafe { ss_solve(ptr::null(), ptr::null_mut(), ptr::null_mut()) },
        SsStatus::NullPointer
    );
    unsafe {
        ss_system_free(ptr::null_mut());
        ss_matrix_free(ptr::null_mut());
        ss_string_free(ptr::null_mut());
    }
}

#[test]
fn solve_witness_verify_extract() {
    let sys = parse(FIXTURE);
    let mut x = ptr::null_mut();
    let mut dim = usize::MAX;
    assert_eq!(unsafe { ss_solve(sys, &mut x, &mut dim) }, SsStatus::Ok);
    assert_eq!(dim, 0);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { ss_matrix_to_text(x, &mut text) }, SsStatus::Ok);
    assert_eq!(take_string(text), "matrix 1 1\n2\n");

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ss_witness(sys, x, &mut s) }, SsStatus::Ok);
    assert_eq!(unsafe { ss_verify(sys, s) }, SsStatus::Ok);
    let (mut r, mut cc) = (0, 0);
    assert_eq!(unsafe { ss_matrix_dims(s, &mut r, &mut cc) }, SsStatus::Ok);
    assert_eq!((r, cc), (2, 2));

    let mut id = ptr::null_mut();
    assert_eq!(
        unsafe { ss_matrix_parse(sys, c("matrix 2 2\n1 0\n0 1\n").as_ptr(), &mut id) },
        SsStatus::Ok
    );
    assert_eq!(unsafe { ss_verify(sys, id) }, SsStatus::Rejected);
    let mut s_bad = ptr::null_mut();
    assert_eq!(
        unsafe { ss_witness(sys, id, &mut s_bad) },
        SsStatus::ShapeMismatch
    );

    let mut extracted = ptr::null_mut();
    assert_eq!(unsafe { ss_extract(sys, &mut extracted) }, SsStatus::Ok);
    assert_eq!(
        unsafe { ss_matrix_to_text(extracted, &mut text) },
        SsStatus::Ok
    );
    assert_eq!(take_string(text), "matrix 1 1\n2\n");

    let mut report = SsClaimReport::default();
    assert_eq!(
        unsafe { ss_check_claims(sys, s, &mut report) },
        SsStatus::Ok
    );
    assert_eq!((report.claim_i, report.twist_ok), (1, 1));
    assert!(report.claim_ii && report.claim_iii && report.claim_iv && report.target_in_image_d);
    assert_eq!(
        unsafe { ss_check_claims(sys, ptr::null(), &mut report) },
        SsStatus::Ok
    );
    assert_eq!((report.claim_i, report.twist_ok), (-1, -1));
    assert_eq!(
        unsafe { ss_check_claims(sys, id, &mut report) },
        SsStatus::InvalidWitness
    );

    unsafe {
        for m in [x, s, id, extracted] {
            ss_matrix_free(m);
        }
        ss_system_free(sys);
    }
}

#[test]
fn inconsistent_verdicts() {
    let sys = parse("field QI\nstar H\ndims 1 1 1\nA 1\n1\nB 1\n1\nC 1\n1\n");
    let mut x = ptr::null_mut();
    assert_eq!(
        unsafe { ss_solve(sys, &mut x, ptr::null_mut()) },
        SsStatus::Inconsistent
    );
    assert!(x.is_null());
    assert_eq!(unsafe { ss_extract(sys, &mut x) }, SsStatus::Inconsistent);
    assert!(x.is_null());
    unsafe { ss_system_free(sys) };
}

#[test]
fn generator_is_deterministic_and_gated() {
    let gen = |seed: u64| {
        let (mut sys, mut x) = (ptr::null_mut(), ptr::null_mut());
        let status = unsafe {
            ss_gen(
                c("GF 3").as_ptr(),
                c("T").as_ptr(),
                2,
                2,
                2,
                seed,
                9,
                false,
                false,
                &mut sys,
                &mut x,
            )
        };
        assert_eq!(status, SsStatus::Ok);
        let mut text = ptr::null_mut();
        unsafe { ss_system_to_text(sys, &mut text) };
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { ss_witness(sys, x, &mut s) }, SsStatus::Ok);
        unsafe {
            ss_matrix_free(s);
            ss_matrix_free(x);
            ss_system_free(sys);
        }
        take_string(text)
    };
    assert_eq!(gen(7), gen(7));
    assert_ne!(gen(7), gen(8));
    let mut sys = ptr::null_mut();
    let status = unsafe {
        ss_gen(
            c("GF 2").as_ptr(),
            c("T").as_ptr(),
            1,
            1,
            1,
            0,
            9,
            false,
            false,
            &mut sys,
            ptr::null_mut(),
        )
    };
    assert_eq!(status, SsStatus::Char2Rejected);
    let status = unsafe {
        ss_gen(
            c("GF 2").as_ptr(),
            c("T").as_ptr(),
            1,
            1,
            1,
            0,
            9,
            false,
            true,
            &mut sys,
            ptr::null_mut(),
        )
    };
    assert_eq!(status, SsStatus::Ok);
    let mut x = ptr::null_mut();
    assert_eq!(
        unsafe { ss_extract(sys, &mut x) },
        SsStatus::Char2Unsupported
    );
    unsafe { ss_system_free(sys) };
    let mut x2 = ptr::null_mut();
    let status = unsafe {
        ss_gen(
            c("Q").as_ptr(),
            c("T").as_ptr(),
            1,
            1,
            1,
            0,
            9,
            true,
            false,
            &mut sys,
            &mut x2,
        )
    };
    assert_eq!(status, SsStatus::OtherError);
    let status = unsafe {
        ss_gen(
            c("Q").as_ptr(),
            c("H").as_ptr(),
            1,
            1,
            1,
            0,
            9,
            false,
            false,
            &mut sys,
            ptr::null_mut(),
        )
    };
    assert_eq!(status, SsStatus::InvalidStarMode);
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(ss_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn have_cc() -> bool {
    Command::new("cc")
        .arg("--version")
        .output()
        .is_ok_and(|o| o.status.success())
}

#[test]
fn header_is_valid_c_and_cxx() {
    if !have_cc() {
        eprintln!("cc not found; header check skipped");
        return;
    }
    let header = crate_dir().join("include/starsylv.h");
    for lang in ["c", "c++"] {
        let out = Command::new("cc")
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang])
            .arg(&header)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{lang}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

/// `target/<profile>` holding the static library built alongside this test.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let lib = artifact_dir().join("libstarsylv_ffi.a");
    if !have_cc() || !lib.exists() {
        eprintln!("cc or {} missing; C smoke test skipped", lib.display());
        return;
    }
    let dir = tempfile_dir();
    let exe = dir.join("smoke");
    let out = Command::new("cc")
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "link: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let run = Command::new(&exe).output().unwrap();
    assert!(
        run.status.success(),
        "run: {}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
    let _ = std::fs::remove_dir_all(dir);
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("starsylv-ffi-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
