//! C interface to `pcb-core`.
//!
//! Problems and mass functions are opaque handles created from JSON and
//! released with their `_free` function. Every call returns a [`PcbStatus`];
//! on failure [`pcb_last_error_message`] describes the error on the calling
//! thread. Strings returned through `out` pointers are owned by the caller
//! and must be released with [`pcb_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::{c_char, size_t};
use pcb_core::belief::{dempster_combine, to_commonality, walley_combine, MassFunction, Subset};
use pcb_core::cli::{cmd_compare, cmd_evaluate, Format, Overrides};
use pcb_core::pcb::decompose;
use pcb_core::problem::{DecisionProblem, ProblemFile};
use pcb_core::rules::pignistic;
use pcb_core::utility::{t_apply, BinaryUtility, TFunction};
use pcb_core::{Error, ErrorKind};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    Validation = 5,
    Structure = 6,
    Conflict = 7,
    Numeric = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcbCombineRule {
    Dempster = 0,
    Walley = 1,
}

/// A validated decision problem.
pub struct PcbProblem(DecisionProblem);

/// A mass function on a finite frame.
pub struct PcbMass(MassFunction);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> PcbStatus {
    match e.kind() {
        ErrorKind::Io => PcbStatus::Io,
        ErrorKind::Parse => PcbStatus::Parse,
        ErrorKind::Validation => PcbStatus::Validation,
        ErrorKind::Structure => PcbStatus::Structure,
        ErrorKind::Conflict => PcbStatus::Conflict,
        ErrorKind::Numeric => PcbStatus::Numeric,
    }
}

struct Failure(PcbStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(PcbStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status and recording the
/// message for [`pcb_last_error_message`].
fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> PcbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            clear_error();
            PcbStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PcbStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(PcbStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|e| Failure(PcbStatus::Validation, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = v;
    Ok(())
}

/// Message for the last failed call on this thread, or null after a
/// successful call. Valid until the next call into this library.
#[no_mangle]
pub extern "C" fn pcb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pcb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates a problem document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pcb_problem_from_json(
    json: *const c_char,
    out: *mut *mut PcbProblem,
) -> PcbStatus {
    guard(|| {
        let src = read_str(json, "json")?;
        let p = DecisionProblem::from_json(src)?;
        write(out, Box::into_raw(Box::new(PcbProblem(p))))
    })
}

/// # Safety
/// `p` must be null or a handle from [`pcb_problem_from_json`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pcb_problem_free(p: *mut PcbProblem) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Mixed utilities and ranking as JSON. `attitude_c` overrides the problem's
/// attitude unless it is NaN.
///
/// # Safety
/// `p` must be a live problem handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pcb_problem_evaluate_json(
    p: *const PcbProblem,
    attitude_c: f64,
    out: *mut *mut c_char,
) -> PcbStatus {
    guard(|| {
        let p = handle(p, "problem")?;
        let o = Overrides {
            attitude_c: (!attitude_c.is_nan()).then_some(attitude_c),
            alpha: None,
        };
        write_string(out, cmd_evaluate(&p.0.to_json(), o, Format::Structured)?)
    })
}

/// Every act under every rule as JSON.
///
/// # Safety
/// `p` must be a live problem handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pcb_problem_compare_json(
    p: *const PcbProblem,
    out: *mut *mut c_char,
) -> PcbStatus {
    guard(|| {
        let p = handle(p, "problem")?;
        write_string(
            out,
            cmd_compare(&p.0.to_json(), Overrides::default(), Format::Structured)?,
        )
    })
}

/// The problem's mass function as a new handle.
///
/// # Safety
/// `p` must be a live problem handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pcb_problem_mass(
    p: *const PcbProblem,
    out: *mut *mut PcbMass,
) -> PcbStatus {
    guard(|| {
        let p = handle(p, "problem")?;
        write(out, Box::into_raw(Box::new(PcbMass(p.0.mass().clone()))))
    })
}

/// Reads the uncertainty of a problem document; other sections are validated
/// and dropped.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pcb_mass_from_json(
    json: *const c_char,
    out: *mut *mut PcbMass,
) -> PcbStatus {
    guard(|| {
        let p = DecisionProblem::from_json(read_str(json, "json")?)?;
        write(out, Box::into_raw(Box::new(PcbMass(p.mass().clone()))))
    })
}

/// # Safety
/// `m` must be null or a mass handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pcb_mass_free(m: *mut PcbMass) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of outcomes in the frame, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live mass handle.
#[no_mangle]
pub unsafe extern "C" fn pcb_mass_frame_size(m: *const PcbMass) -> size_t {
    m.as_ref().map_or(0, |m| m.0.frame().len())
}

fn subset(m: &MassFunction, mask: u64) -> Result<Subset, Failure> {
    let s = Subset::from_bits(mask);
    if !s.is_subset_of(m.frame().full()) {
        return Err(Failure(
            PcbStatus::Validation,
            format!(
                "mask {mask:#x} has bits outside a frame of {}",
                m.frame().len()
            ),
        ));
    }
    Ok(s)
}

unsafe fn set_value(
    m: *const PcbMass,
    mask: u64,
    out: *mut f64,
    f: fn(&MassFunction, Subset) -> f64,
) -> PcbStatus {
    guard(|| {
        let m = handle(m, "mass")?;
        write(out, f(&m.0, subset(&m.0, mask)?))
    })
}

/// `Bel(A)` for the subset whose bit `i` marks outcome `i`.
///
/// # Safety
/// `m` must be a live mass handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pcb_mass_belief(m: *const PcbMass, mask: u64, out: *mut f64) -> PcbStatus {
    set_value(m, mask, out, MassFunction::belief)
}

/// # Safety
/// `m` must be a live mass handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pcb_mass_plausibility(
    m: *const PcbMass,
    mask: u64,
    out: *mut f64,
) -> PcbStatus {
    set_value(m, mask, out, MassFunction::plausibility)
}

/// # Safety
/// `m` must be a live mass handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pcb_mass_commonality(
    m: *const PcbMass,
    mask: u64,
    out: *mut f64,
) -> PcbStatus {
    set_value(m, mask, out, MassFunction::commonality)
}

/// Combines two mass functions on the same frame into a new handle.
///
/// # Safety
/// `a` and `b` must be live mass handles and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pcb_mass_combine(
    a: *const PcbMass,
    b: *const PcbMass,
    rule: PcbCombineRule,
    out: *mut *mut PcbMass,
) -> PcbStatus {
    guard(|| {
        let (a, b) = (handle(a, "first mass")?, handle(b, "second mass")?);
        let m = match rule {
            PcbCombineRule::Dempster => dempster_combine(&a.0, &b.0)?,
            PcbCombineRule::Walley => {
                walley_combine(&to_commonality(&a.0)?, &to_commonality(&b.0)?)?.to_mass()?
            }
        };
        write(out, Box::into_raw(Box::new(PcbMass(m))))
    })
}

/// Writes the pignistic probabilities of each outcome into `out[0..len]`.
/// `len` must be at least the frame size.
///
/// # Safety
/// `m` must be a live mass handle and `out` point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn pcb_mass_pignistic(
    m: *const PcbMass,
    out: *mut f64,
    len: size_t,
) -> PcbStatus {
    guard(|| {
        let m = handle(m, "mass")?;
        let n = m.0.frame().len();
        if out.is_null() {
            return Err(null("out"));
        }
        if len < n {
            return Err(Failure(
                PcbStatus::BufferTooSmall,
                format!("buffer holds {len} values, frame has {n}"),
            ));
        }
        let p = pignistic(&m.0);
        let dst = std::slice::from_raw_parts_mut(out, n);
        for (i, d) in dst.iter_mut().enumerate() {
            *d = p.mass(Subset::singleton(i));
        }
        Ok(())
    })
}

/// The mass function as a problem document in the `bpa` form.
///
/// # Safety
/// `m` must be a live mass handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pcb_mass_to_json(m: *const PcbMass, out: *mut *mut c_char) -> PcbStatus {
    guard(|| {
        let m = handle(m, "mass")?;
        write_string(out, ProblemFile::from_mass(&m.0).to_json())
    })
}

/// Block probabilities and possibilities as a problem document in the `pcb`
/// form. Fails with `Structure` if the mass function is not partially
/// consonant.
///
/// # Safety
/// `m` must be a live mass handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pcb_mass_decompose_json(
    m: *const PcbMass,
    out: *mut *mut c_char,
) -> PcbStatus {
    guard(|| {
        let m = handle(m, "mass")?;
        let d = decompose(&m.0)?;
        write_string(out, ProblemFile::from_decomposition(&d).to_json())
    })
}

/// The parametric t with attitude `c` at the scale value `<lambda, rho>`.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pcb_t_apply(c: f64, lambda: f64, rho: f64, out: *mut f64) -> PcbStatus {
    guard(|| {
        let t = TFunction::parametric(c)?;
        let b = BinaryUtility::new(lambda, rho)?;
        write(out, t_apply(&t, b))
    })
}
