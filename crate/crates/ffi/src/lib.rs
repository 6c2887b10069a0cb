//! C ABI over `factored-sets`.
//!
//! Every fallible function returns an [`FfsStatus`] and writes its result
//! through an out-pointer. On failure the message is kept per thread and can
//! be read with [`ffs_last_error_message`]. Handles are opaque and must be
//! released with the matching `*_free` function.
//!
//! Safety contract for every `unsafe` export: pointer arguments are either
//! null or valid for the access their type implies, strings are
//! nul-terminated, and handles come from the matching `*_parse` function and
//! are not used after being freed. Null pointers are reported as
//! `FFS_STATUS_NULL_POINTER` rather than dereferenced.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use factored_sets::factored_set::count_factorizations;
use factored_sets::format::{self, FactoredSetDoc};
use factored_sets::inference::{self, InferenceVerdict, OrthogonalityDatabase, SearchBounds, TemporalQuery};
use factored_sets::structure::{self, TemporalRelation};
use factored_sets::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FfsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    UnknownName = 4,
    InvalidArgument = 5,
    TooLarge = 6,
    Panic = 7,
}

/// How two histories compare, as returned by [`ffs_before`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FfsTemporalRelation {
    EqualHistory = 0,
    StrictlyBefore = 1,
    StrictlyAfter = 2,
    Incomparable = 3,
}

/// Outcome of a bounded temporal inference.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FfsVerdict {
    /// Some model within bounds violates the relation.
    Refuted = 0,
    /// Every model within bounds satisfies the relation.
    HoldsUpToBound = 1,
    /// No model of the database exists within bounds.
    Vacuous = 2,
}

/// A parsed factored set together with its factor and partition names.
pub struct FfsFactoredSet(FactoredSetDoc);

/// A parsed orthogonality database.
pub struct FfsDatabase(OrthogonalityDatabase);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(FfsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse { .. } => FfsStatus::Parse,
            Error::UnknownPartition(_) => FfsStatus::UnknownName,
            Error::CapExceeded { .. } => FfsStatus::TooLarge,
            _ => FfsStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FfsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FfsStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            FfsStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(FfsStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(FfsStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(FfsStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(FfsStatus::NullPointer, "output pointer is null".into()))
}

/// Message for the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ffs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Number of factorizations of an `n`-element set. `n` is limited to 16.
#[no_mangle]
pub unsafe extern "C" fn ffs_count_factorizations(n: u32, out_count: *mut u64) -> FfsStatus {
    guard(|| {
        let slot = out(out_count)?;
        if n > 16 {
            return Err(Failure(FfsStatus::TooLarge, format!("n = {n} exceeds 16")));
        }
        *slot = count_factorizations(n as usize);
        Ok(())
    })
}

/// Parses a factored set in the text format read by the `ffs` tool.
#[no_mangle]
pub unsafe extern "C" fn ffs_factored_set_parse(source: *const c_char, out_set: *mut *mut FfsFactoredSet) -> FfsStatus {
    guard(|| {
        let slot = out(out_set)?;
        *slot = ptr::null_mut();
        let doc = format::parse_factored_set(text(source, "source")?, "<ffi>")?;
        *slot = Box::into_raw(Box::new(FfsFactoredSet(doc)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ffs_factored_set_free(set: *mut FfsFactoredSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Number of elements. Returns 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ffs_factored_set_size(set: *const FfsFactoredSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.factored.size())
}

/// Number of factors. Returns 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ffs_factored_set_dim(set: *const FfsFactoredSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.factored.dim())
}

/// Name of factor `index`; bit `index` of a history mask refers to it.
/// The string is owned by the caller and released with [`ffs_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ffs_factor_name(
    set: *const FfsFactoredSet,
    index: usize,
    out_name: *mut *mut c_char,
) -> FfsStatus {
    guard(|| {
        let doc = &handle(set, "set")?.0;
        let slot = out(out_name)?;
        let name = doc
            .factor_names
            .get(index)
            .ok_or_else(|| Failure(FfsStatus::InvalidArgument, format!("no factor {index}")))?;
        *slot = CString::new(name.as_str()).expect("names have no nul").into_raw();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ffs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// History of a factor or named partition (`_` and `!` are accepted) as a
/// bit mask over factor indices.
#[no_mangle]
pub unsafe extern "C" fn ffs_history(
    set: *const FfsFactoredSet,
    partition: *const c_char,
    out_mask: *mut u64,
) -> FfsStatus {
    guard(|| {
        let doc = &handle(set, "set")?.0;
        let slot = out(out_mask)?;
        let x = doc.resolve(text(partition, "partition")?)?;
        *slot = structure::history(&doc.factored, &x)?.bits();
        Ok(())
    })
}

/// `X ⊥ Y`, or `X ⊥ Y | Z` when `given` is not null.
#[no_mangle]
pub unsafe extern "C" fn ffs_orthogonal(
    set: *const FfsFactoredSet,
    x: *const c_char,
    y: *const c_char,
    given: *const c_char,
    out_orthogonal: *mut bool,
) -> FfsStatus {
    guard(|| {
        let doc = &handle(set, "set")?.0;
        let slot = out(out_orthogonal)?;
        let px = doc.resolve(text(x, "x")?)?;
        let py = doc.resolve(text(y, "y")?)?;
        *slot = if given.is_null() {
            structure::orthogonal(&doc.factored, &px, &py)?
        } else {
            let pz = doc.resolve(text(given, "given")?)?;
            structure::cond_orthogonal(&doc.factored, &px, &py, &pz)?
        };
        Ok(())
    })
}

/// How the histories of `x` and `y` compare.
#[no_mangle]
pub unsafe extern "C" fn ffs_before(
    set: *const FfsFactoredSet,
    x: *const c_char,
    y: *const c_char,
    out_relation: *mut FfsTemporalRelation,
) -> FfsStatus {
    guard(|| {
        let doc = &handle(set, "set")?.0;
        let slot = out(out_relation)?;
        let px = doc.resolve(text(x, "x")?)?;
        let py = doc.resolve(text(y, "y")?)?;
        *slot = match structure::before(&doc.factored, &px, &py)?.relation {
            TemporalRelation::EqualHistory => FfsTemporalRelation::EqualHistory,
            TemporalRelation::StrictlyBefore => FfsTemporalRelation::StrictlyBefore,
            TemporalRelation::StrictlyAfter => FfsTemporalRelation::StrictlyAfter,
            TemporalRelation::Incomparable => FfsTemporalRelation::Incomparable,
        };
        Ok(())
    })
}

/// Parses an orthogonality database in the text format read by the `ffs` tool.
#[no_mangle]
pub unsafe extern "C" fn ffs_database_parse(source: *const c_char, out_db: *mut *mut FfsDatabase) -> FfsStatus {
    guard(|| {
        let slot = out(out_db)?;
        *slot = ptr::null_mut();
        let db = format::parse_database(text(source, "source")?, "<ffi>")?;
        *slot = Box::into_raw(Box::new(FfsDatabase(db)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ffs_database_free(db: *mut FfsDatabase) {
    if !db.is_null() {
        drop(Box::from_raw(db));
    }
}

/// Bounded check that `x` is before `y` in every model of the database with
/// at most `max_size` elements; strict unless `strict` is false.
/// `out_models` receives the number of models checked, or 0 when refuted.
#[no_mangle]
pub unsafe extern "C" fn ffs_infer_before(
    db: *const FfsDatabase,
    x: *const c_char,
    y: *const c_char,
    max_size: usize,
    strict: bool,
    out_verdict: *mut FfsVerdict,
    out_models: *mut u64,
) -> FfsStatus {
    guard(|| {
        let db = &handle(db, "database")?.0;
        let verdict = out(out_verdict)?;
        let models = out(out_models)?;
        let query = if strict {
            TemporalQuery::StrictlyBefore
        } else {
            TemporalQuery::Before
        };
        let inf = inference::infer_temporal(db, text(x, "x")?, text(y, "y")?, query, &SearchBounds::new(max_size))?;
        (*verdict, *models) = match inf.verdict {
            InferenceVerdict::Refuted { .. } => (FfsVerdict::Refuted, 0),
            InferenceVerdict::HoldsUpToBound { models } => (FfsVerdict::HoldsUpToBound, models),
            InferenceVerdict::Vacuous => (FfsVerdict::Vacuous, 0),
        };
        Ok(())
    })
}

/// Whether some model with at most `max_size` elements exists. On success
/// `out_witness_size` is the witness's size, or 0 if there is none.
#[no_mangle]
pub unsafe extern "C" fn ffs_is_consistent(
    db: *const FfsDatabase,
    max_size: usize,
    out_consistent: *mut bool,
    out_witness_size: *mut usize,
) -> FfsStatus {
    guard(|| {
        let db = &handle(db, "database")?.0;
        let consistent = out(out_consistent)?;
        let size = out(out_witness_size)?;
        let c = inference::is_consistent_up_to_bound(db, &SearchBounds::new(max_size))?;
        *consistent = c.consistent();
        *size = c.witness.as_ref().map_or(0, |m| m.factored().size());
        Ok(())
    })
}
