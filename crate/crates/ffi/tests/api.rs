use std::ffi::{CStr, CString};
use std::ptr;

use factored_sets_ffi::*;

const EX1: &str = "set 4
labels 00 01 10 11
factor X { 00 01 | 10 11 }
factor V { 00 11 | 01 10 }
partition Y { 00 10 | 01 11 }
";

const EX1_DB: &str = "omega 4
labels 00 01 10 11
partition X { 00 01 | 10 11 }
partition V { 00 11 | 01 10 }
partition Y { 00 10 | 01 11 }
orthogonal X V | _
dependent V V | _
";

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = ffs_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

struct Set(*mut FfsFactoredSet);

impl Set {
    fn parse(text: &str) -> Set {
        let mut p = ptr::null_mut();
        assert_eq!(
            unsafe { ffs_factored_set_parse(c(text).as_ptr(), &mut p) },
            FfsStatus::Ok
        );
        Set(p)
    }
}

impl Drop for Set {
    fn drop(&mut self) {
        unsafe { ffs_factored_set_free(self.0) }
    }
}

#[test]
fn counting() {
    let mut n = 0;
    assert_eq!(unsafe { ffs_count_factorizations(6, &mut n) }, FfsStatus::Ok);
    assert_eq!(n, 61);
    assert_eq!(unsafe { ffs_count_factorizations(40, &mut n) }, FfsStatus::TooLarge);
    assert_eq!(
        unsafe { ffs_count_factorizations(4, ptr::null_mut()) },
        FfsStatus::NullPointer
    );
}

#[test]
fn histories_and_names() {
    let set = Set::parse(EX1);
    unsafe {
        assert_eq!(ffs_factored_set_size(set.0), 4);
        assert_eq!(ffs_factored_set_dim(set.0), 2);
        let mut mask = 0;
        assert_eq!(ffs_history(set.0, c("Y").as_ptr(), &mut mask), FfsStatus::Ok);
        assert_eq!(mask, 0b11);
        assert_eq!(ffs_history(set.0, c("_").as_ptr(), &mut mask), FfsStatus::Ok);
        assert_eq!(mask, 0);
        assert_eq!(ffs_history(set.0, c("V").as_ptr(), &mut mask), FfsStatus::Ok);
        let bit = mask.trailing_zeros() as usize;
        let mut name = ptr::null_mut();
        assert_eq!(ffs_factor_name(set.0, bit, &mut name), FfsStatus::Ok);
        assert_eq!(CStr::from_ptr(name).to_str().unwrap(), "V");
        ffs_string_free(name);
        assert_eq!(ffs_factor_name(set.0, 5, &mut name), FfsStatus::InvalidArgument);
    }
}

#[test]
fn orthogonality_and_time() {
    let set = Set::parse(EX1);
    unsafe {
        let mut orth = false;
        assert_eq!(
            ffs_orthogonal(set.0, c("X").as_ptr(), c("V").as_ptr(), ptr::null(), &mut orth),
            FfsStatus::Ok
        );
        assert!(orth);
        assert_eq!(
            ffs_orthogonal(set.0, c("X").as_ptr(), c("Y").as_ptr(), ptr::null(), &mut orth),
            FfsStatus::Ok
        );
        assert!(!orth);
        // conditioning on X makes X trivial on each block
        assert_eq!(
            ffs_orthogonal(set.0, c("X").as_ptr(), c("Y").as_ptr(), c("X").as_ptr(), &mut orth),
            FfsStatus::Ok
        );
        assert!(orth);
        let mut rel = FfsTemporalRelation::Incomparable;
        assert_eq!(
            ffs_before(set.0, c("X").as_ptr(), c("Y").as_ptr(), &mut rel),
            FfsStatus::Ok
        );
        assert_eq!(rel, FfsTemporalRelation::StrictlyBefore);
        assert_eq!(
            ffs_before(set.0, c("Y").as_ptr(), c("X").as_ptr(), &mut rel),
            FfsStatus::Ok
        );
        assert_eq!(rel, FfsTemporalRelation::StrictlyAfter);
        assert_eq!(
            ffs_before(set.0, c("X").as_ptr(), c("V").as_ptr(), &mut rel),
            FfsStatus::Ok
        );
        assert_eq!(rel, FfsTemporalRelation::Incomparable);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(
            ffs_factored_set_parse(c("set 4\nfactor A { 0 1 | 2 }").as_ptr(), &mut p),
            FfsStatus::Parse
        );
        assert!(p.is_null());
        assert!(last_error().contains("<ffi>:2"), "{}", last_error());
        assert_eq!(ffs_factored_set_parse(ptr::null(), &mut p), FfsStatus::NullPointer);
        let bad = [0xffu8, 0];
        assert_eq!(
            ffs_factored_set_parse(bad.as_ptr().cast(), &mut p),
            FfsStatus::InvalidUtf8
        );
        let set = Set::parse(EX1);
        let mut mask = 0;
        assert_eq!(ffs_history(set.0, c("W").as_ptr(), &mut mask), FfsStatus::UnknownName);
        assert!(last_error().contains('W'));
        assert_eq!(
            ffs_history(ptr::null(), c("X").as_ptr(), &mut mask),
            FfsStatus::NullPointer
        );
        ffs_factored_set_free(ptr::null_mut());
        ffs_database_free(ptr::null_mut());
        ffs_string_free(ptr::null_mut());
    }
}

#[test]
fn inference() {
    let mut db = ptr::null_mut();
    unsafe {
        assert_eq!(ffs_database_parse(c(EX1_DB).as_ptr(), &mut db), FfsStatus::Ok);
        let (mut verdict, mut models) = (FfsVerdict::Vacuous, 0);
        let st = ffs_infer_before(db, c("X").as_ptr(), c("Y").as_ptr(), 6, true, &mut verdict, &mut models);
        assert_eq!(st, FfsStatus::Ok);
        assert_eq!(verdict, FfsVerdict::HoldsUpToBound);
        assert!(models >= 1);
        let st = ffs_infer_before(db, c("Y").as_ptr(), c("X").as_ptr(), 4, true, &mut verdict, &mut models);
        assert_eq!((st, verdict, models), (FfsStatus::Ok, FfsVerdict::Refuted, 0));
        let st = ffs_infer_before(db, c("X").as_ptr(), c("Y").as_ptr(), 0, true, &mut verdict, &mut models);
        assert_eq!(st, FfsStatus::InvalidArgument);
        let (mut ok, mut size) = (false, 0);
        assert_eq!(ffs_is_consistent(db, 4, &mut ok, &mut size), FfsStatus::Ok);
        assert!(ok && (1..=4).contains(&size));
        ffs_database_free(db);
    }
}

#[test]
fn header_lists_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/factored_sets.h")).unwrap();
    for f in [
        "ffs_last_error_message",
        "ffs_count_factorizations",
        "ffs_factored_set_parse",
        "ffs_factored_set_free",
        "ffs_factor_name",
        "ffs_string_free",
        "ffs_history",
        "ffs_orthogonal",
        "ffs_before",
        "ffs_database_parse",
        "ffs_database_free",
        "ffs_infer_before",
        "ffs_is_consistent",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f}");
    }
}

/// Compiles and runs a C program against the header and the static library
/// when a C compiler and the archive are available.
#[test]
fn c_program_links_and_runs() {
    let manifest = env!("CARGO_MANIFEST_DIR");
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let archive = profile_dir.join("libfactored_sets_ffi.a");
    if !archive.exists() || std::process::Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library at {}", archive.display());
        return;
    }
    let out_dir = tempfile::tempdir().unwrap();
    let bin = out_dir.path().join("smoke");
    let status = std::process::Command::new("cc")
        .arg(format!("{manifest}/tests/c/smoke.c"))
        .arg(format!("-I{manifest}/include"))
        .arg(&archive)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let run = std::process::Command::new(&bin).output().unwrap();
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stdout));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
