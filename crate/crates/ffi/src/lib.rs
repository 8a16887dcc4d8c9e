//! C ABI for parsing, classifying, translating and evaluating formulas.
//!
//! Formulas and assignments are opaque handles owned by the caller and
//! released with their `_free` function. Every function returns an
//! [`FcimcStatus`]; on failure [`fcimc_last_error_message`] describes the
//! error. Strings returned through out-parameters are released with
//! [`fcimc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fcimc::semantics::{eval_default, Assignment, LStruct, WStruct};
use fcimc::transforms;
use fcimc::{classify, parse, Class, Error, FciSet, FinSet, Formula, Signature};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FcimcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidValue = 4,
    SignatureMismatch = 5,
    FragmentError = 6,
    EvalError = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FcimcSignature {
    W = 0,
    L = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FcimcClass {
    QuantifierFree = 0,
    Existential = 1,
    PositiveExistential = 2,
    Other = 3,
}

/// A parsed formula together with its signature.
pub struct FcimcFormula {
    formula: Formula,
    sig: Signature,
}

/// Variable bindings for one signature.
pub struct FcimcAssignment {
    values: Values,
}

enum Values {
    W(Assignment<FinSet>),
    L(Assignment<FciSet>),
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(FcimcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Syntax { .. } => FcimcStatus::ParseError,
            Error::InvalidValue { .. } => FcimcStatus::InvalidValue,
            Error::Signature(_) => FcimcStatus::SignatureMismatch,
            Error::Fragment(_) => FcimcStatus::FragmentError,
            _ => FcimcStatus::EvalError,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(FcimcStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FcimcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            FcimcStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("internal panic: {msg}"));
            FcimcStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(FcimcStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn formula_arg<'a>(p: *const FcimcFormula) -> Result<&'a FcimcFormula, Failure> {
    p.as_ref().ok_or_else(|| null("formula"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_formula(out: *mut *mut FcimcFormula, formula: Formula, sig: Signature) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(Box::into_raw(Box::new(FcimcFormula { formula, sig })));
    Ok(())
}

fn to_c_string(s: &str) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("nul bytes removed")
        .into_raw()
}

fn signature(s: FcimcSignature) -> Signature {
    match s {
        FcimcSignature::W => Signature::W,
        FcimcSignature::L => Signature::L,
    }
}

fn require(f: &FcimcFormula, sig: Signature) -> Result<(), Failure> {
    if f.sig == sig {
        Ok(())
    } else {
        Err(Failure(
            FcimcStatus::SignatureMismatch,
            format!("expected a formula in signature {}, got {}", sig.name(), f.sig.name()),
        ))
    }
}

/// Message for the last failed call on this thread, or the empty string. The
/// pointer stays valid until the next call into this library on the thread.
#[no_mangle]
pub extern "C" fn fcimc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses `text` in signature `sig` into a new formula handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fcimc_parse(
    text: *const c_char,
    sig: FcimcSignature,
    out: *mut *mut FcimcFormula,
) -> FcimcStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let sig = signature(sig);
        write_formula(out, parse(text, sig)?, sig)
    })
}

/// Releases a formula. Null is ignored.
///
/// # Safety
/// `f` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fcimc_formula_free(f: *mut FcimcFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fcimc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The canonical text of a formula, to be released with [`fcimc_string_free`].
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fcimc_formula_print(
    f: *const FcimcFormula,
    out: *mut *mut c_char,
) -> FcimcStatus {
    guard(|| {
        let f = formula_arg(f)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        out.write(to_c_string(&f.formula.to_string()));
        Ok(())
    })
}

/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fcimc_formula_signature(
    f: *const FcimcFormula,
    out: *mut FcimcSignature,
) -> FcimcStatus {
    guard(|| {
        let sig = match formula_arg(f)?.sig {
            Signature::W => FcimcSignature::W,
            Signature::L => FcimcSignature::L,
        };
        write_out(out, sig)
    })
}

/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fcimc_formula_classify(
    f: *const FcimcFormula,
    out: *mut FcimcClass,
) -> FcimcStatus {
    guard(|| {
        let class = match classify(&formula_arg(f)?.formula) {
            Class::QuantifierFree => FcimcClass::QuantifierFree,
            Class::Existential => FcimcClass::Existential,
            Class::PositiveExistential => FcimcClass::PositiveExistential,
            Class::Other => FcimcClass::Other,
        };
        write_out(out, class)
    })
}

/// Positive existential W-formula equivalent to an existential W-formula.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fcimc_to_positive_existential(
    f: *const FcimcFormula,
    out: *mut *mut FcimcFormula,
) -> FcimcStatus {
    guard(|| {
        let f = formula_arg(f)?;
        require(f, Signature::W)?;
        write_formula(out, transforms::to_positive_existential(&f.formula)?, Signature::W)
    })
}

/// Existential L-formula agreeing with a positive existential W-formula on
/// finite sets.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fcimc_translate_w_to_l(
    f: *const FcimcFormula,
    out: *mut *mut FcimcFormula,
) -> FcimcStatus {
    guard(|| {
        let f = formula_arg(f)?;
        require(f, Signature::W)?;
        write_formula(out, transforms::translate_w_to_l(&f.formula)?, Signature::L)
    })
}

/// W-formula about endpoint pairs equivalent to an L-formula. Each free
/// variable `X` becomes a pair of W-variables; when `coordinates` is not null
/// it receives one line `X X_left X_right` per free variable, to be released
/// with [`fcimc_string_free`].
///
/// # Safety
/// `f` must be a live handle, `out` writable and `coordinates` null or writable.
#[no_mangle]
pub unsafe extern "C" fn fcimc_translate_l_to_w(
    f: *const FcimcFormula,
    out: *mut *mut FcimcFormula,
    coordinates: *mut *mut c_char,
) -> FcimcStatus {
    guard(|| {
        let f = formula_arg(f)?;
        require(f, Signature::L)?;
        let t = transforms::translate_l_to_w(&f.formula)?;
        let lines: String = t
            .coords
            .iter()
            .map(|(x, p)| format!("{x} {} {}\n", p.left, p.right))
            .collect();
        write_formula(out, t.formula, Signature::W)?;
        if !coordinates.is_null() {
            coordinates.write(to_c_string(&lines));
        }
        Ok(())
    })
}

/// Existential L-formula equivalent to an L-formula in the supported
/// fragment; `FCIMC_STATUS_FRAGMENT_ERROR` otherwise.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fcimc_pipeline(
    f: *const FcimcFormula,
    out: *mut *mut FcimcFormula,
) -> FcimcStatus {
    guard(|| {
        let f = formula_arg(f)?;
        require(f, Signature::L)?;
        write_formula(out, transforms::pipeline(&f.formula)?, Signature::L)
    })
}

/// An empty assignment for signature `sig`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fcimc_assignment_new(
    sig: FcimcSignature,
    out: *mut *mut FcimcAssignment,
) -> FcimcStatus {
    guard(|| {
        let values = match sig {
            FcimcSignature::W => Values::W(Assignment::new()),
            FcimcSignature::L => Values::L(Assignment::new()),
        };
        write_out(out, Box::into_raw(Box::new(FcimcAssignment { values })))
    })
}

/// Binds `var` to the set written `value` (`{0, 1/2}` for finite sets,
/// `[0,1]+{2}+[3,*)` or `empty` for interval unions).
///
/// # Safety
/// `a` must be a live handle; `var` and `value` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn fcimc_assignment_bind(
    a: *mut FcimcAssignment,
    var: *const c_char,
    value: *const c_char,
) -> FcimcStatus {
    guard(|| {
        let a = a.as_mut().ok_or_else(|| null("assignment"))?;
        let var = str_arg(var, "variable")?.to_string();
        let value = str_arg(value, "value")?;
        match &mut a.values {
            Values::W(m) => m.insert(var, value.parse()?).map(drop),
            Values::L(m) => m.insert(var, value.parse()?).map(drop),
        };
        Ok(())
    })
}

/// Releases an assignment. Null is ignored.
///
/// # Safety
/// `a` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fcimc_assignment_free(a: *mut FcimcAssignment) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Truth of `f` under `a`, quantifiers ranging over the default witness pool.
///
/// # Safety
/// `f` and `a` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fcimc_eval(
    f: *const FcimcFormula,
    a: *const FcimcAssignment,
    out: *mut bool,
) -> FcimcStatus {
    guard(|| {
        let f = formula_arg(f)?;
        let a = a.as_ref().ok_or_else(|| null("assignment"))?;
        let value = match &a.values {
            Values::W(m) => {
                require(f, Signature::W)?;
                eval_default::<WStruct>(&f.formula, m)?
            }
            Values::L(m) => {
                require(f, Signature::L)?;
                eval_default::<LStruct>(&f.formula, m)?
            }
        };
        write_out(out, value)
    })
}
