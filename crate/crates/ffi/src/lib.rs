//! C ABI for the typetwo workbench: opaque handles, status codes and
//! decimal-string numerics, so other languages can parse second-order
//! polynomials, evaluate them, synthesize witnesses and counterexamples,
//! and drive the clocked machine interpreter.
//!
//! Conventions: every constructor writes through an out-pointer and
//! returns a [`TtStatus`]; on any failure the thread-local message from
//! [`tt_last_error_message`] explains it. Strings returned by the
//! library are freed with [`tt_string_free`], handles with their `_free`
//! functions. Words are C strings over the characters '0', '1', '2'.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;
use typetwo::funcspace::{compile_to_name, fs_eval, name_to_text, FuncName};
use typetwo::otm::{
    phi_machine, run_clocked, run_machine, universal_run, MachineDesc, RunResult, DEFAULT_FUEL,
};
use typetwo::regfn::{parse_regfn, RegFn, Word};
use typetwo::sopoly::{
    degree_of, dominates_monomial, eval_sop, monomial, parse_monfn, parse_sop,
    separate_monomials, synth_witness, MonFn, SOPoly, TypeTag,
};

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl std::fmt::Display) {
    let s = CString::new(msg.to_string()).unwrap_or_else(|_| CString::new("error").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum TtStatus {
    Ok = 0,
    ParseError = 1,
    DomainError = 2,
    Aborted = 3,
    NullArgument = 4,
    InternalError = 5,
}

/// A second-order polynomial (opaque).
pub struct TtSop(SOPoly);
/// A strictly monotone function on the naturals (opaque).
pub struct TtMonFn(MonFn);
/// A regular string function (opaque).
pub struct TtRegFn(RegFn);
/// A machine description (opaque).
pub struct TtMachine(MachineDesc);
/// A function-space name (opaque).
pub struct TtName(FuncName);

/// Outcome of a machine run. `output` is null when the run aborted; a
/// non-null output is freed with `tt_string_free`.
#[repr(C)]
pub struct TtRunResult {
    pub aborted: bool,
    pub steps: u64,
    pub oracle_calls: u64,
    pub meta_probes: u64,
    pub output: *mut c_char,
}

/// The last error message on this thread, or null. Free with
/// `tt_string_free`.
#[no_mangle]
pub extern "C" fn tt_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        Some(s) => s.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Free a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned by this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn tt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, TtStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(TtStatus::NullArgument);
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|e| {
        set_error(format!("invalid UTF-8: {e}"));
        TtStatus::ParseError
    })
}

fn out_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, TtStatus> {
    if p.is_null() {
        set_error("null handle");
        Err(TtStatus::NullArgument)
    } else {
        Ok(unsafe { &*p })
    }
}

/// Free a polynomial handle.
///
/// # Safety
/// The handle must originate from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tt_sop_free(p: *mut TtSop) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Free a monotone-function handle.
///
/// # Safety
/// The handle must originate from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tt_monfn_free(p: *mut TtMonFn) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Free a regular-function handle.
///
/// # Safety
/// The handle must originate from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tt_regfn_free(p: *mut TtRegFn) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Free a machine handle.
///
/// # Safety
/// The handle must originate from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tt_machine_free(p: *mut TtMachine) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Free a name handle.
///
/// # Safety
/// The handle must originate from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tt_name_free(p: *mut TtName) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Parse a second-order polynomial, e.g. "L(L(n)) + 2*n".
///
/// # Safety
/// `text` must be a valid C string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tt_sop_parse(text: *const c_char, out: *mut *mut TtSop) -> TtStatus {
    let text = match unsafe { read_str(text) } {
        Ok(t) => t,
        Err(s) => return s,
    };
    match parse_sop(text) {
        Ok(q) => {
            unsafe { *out = Box::into_raw(Box::new(TtSop(q))) };
            TtStatus::Ok
        }
        Err(e) => {
            set_error(e);
            TtStatus::ParseError
        }
    }
}

/// The canonical monomial `P_n`.
#[no_mangle]
pub extern "C" fn tt_sop_monomial(n: u32) -> *mut TtSop {
    Box::into_raw(Box::new(TtSop(monomial(n))))
}

/// Canonical fully parenthesized rendering.
///
/// # Safety
/// `q` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn tt_sop_print(q: *const TtSop) -> *mut c_char {
    match unsafe { deref(q) } {
        Ok(q) => out_string(q.0.to_string()),
        Err(_) => ptr::null_mut(),
    }
}

/// Degree and type tag ('a' or 'm').
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tt_sop_degree(
    q: *const TtSop,
    degree: *mut u32,
    type_tag: *mut c_char,
) -> TtStatus {
    let q = match unsafe { deref(q) } {
        Ok(q) => q,
        Err(s) => return s,
    };
    let info = degree_of(&q.0);
    unsafe {
        *degree = info.degree;
        *type_tag = if info.type_tag == TypeTag::A { b'a' } else { b'm' } as c_char;
    }
    TtStatus::Ok
}

/// Exact evaluation; the value is returned as a decimal string.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tt_sop_eval(
    q: *const TtSop,
    p: *const TtMonFn,
    k: u64,
    value: *mut *mut c_char,
) -> TtStatus {
    let (q, p) = match (unsafe { deref(q) }, unsafe { deref(p) }) {
        (Ok(q), Ok(p)) => (q, p),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    let v = eval_sop(&q.0, &p.0, &BigUint::from(k));
    unsafe { *value = out_string(v.to_string()) };
    TtStatus::Ok
}

/// Does the polynomial lie in the dominance class of the m-th monomial
/// (m >= 1)?
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tt_sop_dominates_monomial(
    q: *const TtSop,
    m: u32,
    out: *mut bool,
) -> TtStatus {
    let q = match unsafe { deref(q) } {
        Ok(q) => q,
        Err(s) => return s,
    };
    match dominates_monomial(&q.0, m) {
        Ok(v) => {
            unsafe { *out = v };
            TtStatus::Ok
        }
        Err(e) => {
            set_error(e);
            TtStatus::DomainError
        }
    }
}

/// Synthesize a grid-verified dominance witness (q, k).
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tt_sop_witness(
    q: *const TtSop,
    witness_q: *mut *mut TtMonFn,
    witness_k: *mut u32,
) -> TtStatus {
    let q = match unsafe { deref(q) } {
        Ok(q) => q,
        Err(s) => return s,
    };
    match synth_witness(&q.0) {
        Ok(w) => {
            unsafe {
                *witness_q = Box::into_raw(Box::new(TtMonFn(w.q)));
                *witness_k = w.k;
            }
            TtStatus::Ok
        }
        Err(e) => {
            set_error(e);
            TtStatus::InternalError
        }
    }
}

/// A verified counterexample to `P_{m+1}` dominance against `P_m` under
/// the scale `q` and exponent `k`: returns the table function and the
/// argument.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tt_sop_separate_monomials(
    m: u32,
    q: *const TtMonFn,
    k: u32,
    cex_p: *mut *mut TtMonFn,
    cex_n: *mut u64,
) -> TtStatus {
    let q = match unsafe { deref(q) } {
        Ok(q) => q,
        Err(s) => return s,
    };
    let cex = separate_monomials(m, &q.0, k);
    let n = cex.n.to_u64().unwrap_or(u64::MAX);
    unsafe {
        *cex_p = Box::into_raw(Box::new(TtMonFn(MonFn::table(cex.p))));
        *cex_n = n;
    }
    TtStatus::Ok
}

/// Parse a monotone function: "id", "poly: 2*x^2 + 1" or
/// "table: [1,3,7] tail+1".
///
/// # Safety
/// `text` must be a valid C string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tt_monfn_parse(text: *const c_char, out: *mut *mut TtMonFn) -> TtStatus {
    let text = match unsafe { read_str(text) } {
        Ok(t) => t,
        Err(s) => return s,
    };
    match parse_monfn(text) {
        Ok(f) => {
            unsafe { *out = Box::into_raw(Box::new(TtMonFn(f))) };
            TtStatus::Ok
        }
        Err(e) => {
            set_error(e);
            TtStatus::ParseError
        }
    }
}

/// Render a monotone function in its textual form.
///
/// # Safety
/// `f` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn tt_monfn_print(f: *const TtMonFn) -> *mut c_char {
    match unsafe { deref(f) } {
        Ok(f) => out_string(f.0.to_string()),
        Err(_) => ptr::null_mut(),
    }
}

/// Exact application, returned as a decimal string.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tt_monfn_apply(
    f: *const TtMonFn,
    i: u64,
    value: *mut *mut c_char,
) -> TtStatus {
    let f = match unsafe { deref(f) } {
        Ok(f) => f,
        Err(s) => return s,
    };
    unsafe { *value = out_string(f.0.apply_u64(i).to_string()) };
    TtStatus::Ok
}

/// Parse a regular function: `pad g=<monfn>`, `lift "<word>"`,
/// `pair(<regfn>,<regfn>)` or `table {1:"0"} extend=repeat`.
///
/// # Safety
/// `text` must be a valid C string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tt_regfn_parse(text: *const c_char, out: *mut *mut TtRegFn) -> TtStatus {
    let text = match unsafe { read_str(text) } {
        Ok(t) => t,
        Err(s) => return s,
    };
    match parse_regfn(text) {
        Ok(f) => {
            unsafe { *out = Box::into_raw(Box::new(TtRegFn(f))) };
            TtStatus::Ok
        }
        Err(e) => {
            set_error(e);
            TtStatus::ParseError
        }
    }
}

/// Apply a regular function to a word over {0,1,2}.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tt_regfn_apply(
    f: *const TtRegFn,
    word: *const c_char,
    out: *mut *mut c_char,
) -> TtStatus {
    let f = match unsafe { deref(f) } {
        Ok(f) => f,
        Err(s) => return s,
    };
    let word = match unsafe { read_str(word) }.and_then(|t| {
        Word::parse(t).map_err(|e| {
            set_error(e);
            TtStatus::ParseError
        })
    }) {
        Ok(w) => w,
        Err(s) => return s,
    };
    match f.0.apply(&word) {
        Ok(v) => {
            unsafe { *out = out_string(v.to_string()) };
            TtStatus::Ok
        }
        Err(e) => {
            set_error(e);
            TtStatus::DomainError
        }
    }
}

/// The size `|f|(i)`, returned as a decimal string.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tt_regfn_size_at(
    f: *const TtRegFn,
    i: u64,
    value: *mut *mut c_char,
) -> TtStatus {
    let f = match unsafe { deref(f) } {
        Ok(f) => f,
        Err(s) => return s,
    };
    match f.0.size_at(&BigUint::from(i)) {
        Ok(v) => {
            unsafe { *value = out_string(v.to_string()) };
            TtStatus::Ok
        }
        Err(e) => {
            set_error(e);
            TtStatus::DomainError
        }
    }
}

/// Parse the line-oriented machine text format.
///
/// # Safety
/// `text` must be a valid C string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tt_machine_parse_text(
    text: *const c_char,
    out: *mut *mut TtMachine,
) -> TtStatus {
    let text = match unsafe { read_str(text) } {
        Ok(t) => t,
        Err(s) => return s,
    };
    match MachineDesc::parse_text(text) {
        Ok(m) => {
            unsafe { *out = Box::into_raw(Box::new(TtMachine(m))) };
            TtStatus::Ok
        }
        Err(e) => {
            set_error(e);
            TtStatus::ParseError
        }
    }
}

/// Canonical machine text.
///
/// # Safety
/// `m` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn tt_machine_print(m: *const TtMachine) -> *mut c_char {
    match unsafe { deref(m) } {
        Ok(m) => out_string(m.0.to_string()),
        Err(_) => ptr::null_mut(),
    }
}

/// The canonical index word (over {0,1,2}) of a machine.
///
/// # Safety
/// `m` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn tt_machine_encode(m: *const TtMachine) -> *mut c_char {
    match unsafe { deref(m) } {
        Ok(m) => out_string(m.0.encode().to_string()),
        Err(_) => ptr::null_mut(),
    }
}

/// Decode an index word back into a machine.
///
/// # Safety
/// `index` must be a valid C string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tt_machine_decode(
    index: *const c_char,
    out: *mut *mut TtMachine,
) -> TtStatus {
    let index = match unsafe { read_str(index) }.and_then(|t| {
        Word::parse(t).map_err(|e| {
            set_error(e);
            TtStatus::ParseError
        })
    }) {
        Ok(w) => w,
        Err(s) => return s,
    };
    match MachineDesc::decode(&index) {
        Ok(m) => {
            unsafe { *out = Box::into_raw(Box::new(TtMachine(m))) };
            TtStatus::Ok
        }
        Err(e) => {
            set_error(e);
            TtStatus::ParseError
        }
    }
}

/// The machine computing n-fold oracle application.
#[no_mangle]
pub extern "C" fn tt_machine_phi(n: u32) -> *mut TtMachine {
    Box::into_raw(Box::new(TtMachine(phi_machine(n))))
}

fn fill_result(out: *mut TtRunResult, r: &RunResult) {
    unsafe {
        (*out).aborted = r.aborted;
        (*out).steps = r.steps;
        (*out).oracle_calls = r.oracle_calls;
        (*out).meta_probes = r.meta_probes;
        (*out).output = match &r.output {
            Some(w) => out_string(w.to_string()),
            None => ptr::null_mut(),
        };
    }
}

unsafe fn oracle_or_default(oracle: *const TtRegFn) -> RegFn {
    if oracle.is_null() {
        RegFn::lift(Word::empty())
    } else {
        unsafe { &*oracle }.0.clone()
    }
}

/// Run a machine under a hard fuel cap (0 selects the default cap). A
/// null oracle means the constant empty-word function.
///
/// # Safety
/// All non-null pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tt_run(
    m: *const TtMachine,
    oracle: *const TtRegFn,
    input: *const c_char,
    fuel: u64,
    out: *mut TtRunResult,
) -> TtStatus {
    let m = match unsafe { deref(m) } {
        Ok(m) => m,
        Err(s) => return s,
    };
    let input = match unsafe { read_str(input) }.and_then(|t| {
        Word::parse(t).map_err(|e| {
            set_error(e);
            TtStatus::ParseError
        })
    }) {
        Ok(w) => w,
        Err(s) => return s,
    };
    let phi = unsafe { oracle_or_default(oracle) };
    let fuel = if fuel == 0 { DEFAULT_FUEL } else { fuel };
    match run_machine(&m.0, &phi, &input, fuel) {
        Ok(r) => {
            fill_result(out, &r);
            TtStatus::Ok
        }
        Err(e) => {
            set_error(e);
            TtStatus::DomainError
        }
    }
}

/// Run a machine under the clock `P(|oracle|)(|input|)`.
///
/// # Safety
/// All non-null pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tt_run_clocked(
    m: *const TtMachine,
    p: *const TtSop,
    oracle: *const TtRegFn,
    input: *const c_char,
    out: *mut TtRunResult,
) -> TtStatus {
    let (m, p) = match (unsafe { deref(m) }, unsafe { deref(p) }) {
        (Ok(m), Ok(p)) => (m, p),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    let input = match unsafe { read_str(input) }.and_then(|t| {
        Word::parse(t).map_err(|e| {
            set_error(e);
            TtStatus::ParseError
        })
    }) {
        Ok(w) => w,
        Err(s) => return s,
    };
    let phi = unsafe { oracle_or_default(oracle) };
    match run_clocked(&m.0, &p.0, &phi, &input) {
        Ok(r) => {
            fill_result(out, &r);
            TtStatus::Ok
        }
        Err(e) => {
            set_error(e);
            TtStatus::DomainError
        }
    }
}

/// Run the clocked universal machine at level `m` on an index word.
///
/// # Safety
/// All non-null pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tt_universal_run(
    m: u32,
    index: *const c_char,
    oracle: *const TtRegFn,
    l: u32,
    input: *const c_char,
    out: *mut TtRunResult,
) -> TtStatus {
    let index = match unsafe { read_str(index) }.and_then(|t| {
        Word::parse(t).map_err(|e| {
            set_error(e);
            TtStatus::ParseError
        })
    }) {
        Ok(w) => w,
        Err(s) => return s,
    };
    let input = match unsafe { read_str(input) }.and_then(|t| {
        Word::parse(t).map_err(|e| {
            set_error(e);
            TtStatus::ParseError
        })
    }) {
        Ok(w) => w,
        Err(s) => return s,
    };
    let phi = unsafe { oracle_or_default(oracle) };
    match universal_run(m, &index, &phi, l, &input) {
        Ok(r) => {
            fill_result(out, &r);
            TtStatus::Ok
        }
        Err(e) => {
            set_error(e);
            TtStatus::DomainError
        }
    }
}

/// Compile a machine with a promised second-order polynomial bound into
/// a function-space name.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tt_compile_to_name(
    m: *const TtMachine,
    p: *const TtSop,
    out: *mut *mut TtName,
) -> TtStatus {
    let (m, p) = match (unsafe { deref(m) }, unsafe { deref(p) }) {
        (Ok(m), Ok(p)) => (m, p),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    match compile_to_name(&m.0, &p.0) {
        Ok(name) => {
            unsafe { *out = Box::into_raw(Box::new(TtName(name))) };
            TtStatus::Ok
        }
        Err(e) => {
            set_error(e);
            TtStatus::DomainError
        }
    }
}

/// The level of a name.
///
/// # Safety
/// `f` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn tt_name_level(f: *const TtName) -> u32 {
    unsafe { deref(f) }.map(|f| f.0.level).unwrap_or(0)
}

/// The textual container for a name (level, exponent, advice, machine).
///
/// # Safety
/// `f` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn tt_name_to_text(f: *const TtName) -> *mut c_char {
    match unsafe { deref(f) } {
        Ok(f) => match name_to_text(&f.0) {
            Ok(t) => out_string(t),
            Err(e) => {
                set_error(e);
                ptr::null_mut()
            }
        },
        Err(_) => ptr::null_mut(),
    }
}

/// Evaluate a name at a point name and an input word; a clock abort is
/// reported as `TT_STATUS_ABORTED`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tt_name_eval(
    f: *const TtName,
    x: *const TtRegFn,
    input: *const c_char,
    out: *mut *mut c_char,
) -> TtStatus {
    let (f, x) = match (unsafe { deref(f) }, unsafe { deref(x) }) {
        (Ok(f), Ok(x)) => (f, x),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    let input = match unsafe { read_str(input) }.and_then(|t| {
        Word::parse(t).map_err(|e| {
            set_error(e);
            TtStatus::ParseError
        })
    }) {
        Ok(w) => w,
        Err(s) => return s,
    };
    match fs_eval(&f.0, &x.0).apply(&input) {
        Ok(v) => {
            unsafe { *out = out_string(v.to_string()) };
            TtStatus::Ok
        }
        Err(e @ typetwo::regfn::RegFnError::Aborted { .. }) => {
            set_error(e);
            TtStatus::Aborted
        }
        Err(e) => {
            set_error(e);
            TtStatus::DomainError
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take_string(p: *mut c_char) -> String {
        assert!(!p.is_null());
        let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
        unsafe { tt_string_free(p) };
        s
    }

    #[test]
    fn parse_eval_degree_through_abi() {
        unsafe {
            let mut sop: *mut TtSop = ptr::null_mut();
            let text = c("L(L(n*n)) + L(L(n)*L(n)) + L(n) + 4");
            assert!(tt_sop_parse(text.as_ptr(), &mut sop) == TtStatus::Ok);
            let mut deg = 0u32;
            let mut tag: c_char = 0;
            assert!(tt_sop_degree(sop, &mut deg, &mut tag) == TtStatus::Ok);
            assert_eq!((deg, tag as u8), (3, b'a'));

            let mut p: *mut TtMonFn = ptr::null_mut();
            let ptext = c("poly: x^2");
            assert!(tt_monfn_parse(ptext.as_ptr(), &mut p) == TtStatus::Ok);
            let mut value: *mut c_char = ptr::null_mut();
            assert!(tt_sop_eval(sop, p, 2, &mut value) == TtStatus::Ok);
            assert_eq!(take_string(value), "520");

            tt_monfn_free(p);
            tt_sop_free(sop);
        }
    }

    #[test]
    fn parse_error_reports_message() {
        unsafe {
            let mut sop: *mut TtSop = ptr::null_mut();
            let text = c("L()");
            assert!(tt_sop_parse(text.as_ptr(), &mut sop) == TtStatus::ParseError);
            let msg = take_string(tt_last_error_message());
            assert!(msg.contains("syntax error"), "{msg}");
        }
    }

    #[test]
    fn witness_and_separation_through_abi() {
        unsafe {
            let mut sop: *mut TtSop = ptr::null_mut();
            let text = c("L(n)");
            assert!(tt_sop_parse(text.as_ptr(), &mut sop) == TtStatus::Ok);
            let mut q: *mut TtMonFn = ptr::null_mut();
            let mut k = 0u32;
            assert!(tt_sop_witness(sop, &mut q, &mut k) == TtStatus::Ok);
            assert_eq!(k, 1);
            tt_sop_free(sop);

            let mut p: *mut TtMonFn = ptr::null_mut();
            let mut n = 0u64;
            assert!(tt_sop_separate_monomials(1, q, 1, &mut p, &mut n) == TtStatus::Ok);
            assert_eq!(n, 1);
            let rendered = take_string(tt_monfn_print(p));
            assert!(rendered.starts_with("table"), "{rendered}");
            tt_monfn_free(p);
            tt_monfn_free(q);
        }
    }

    #[test]
    fn machine_roundtrip_and_run() {
        unsafe {
            let phi2 = tt_machine_phi(2);
            let index = take_string(tt_machine_encode(phi2));
            let mut decoded: *mut TtMachine = ptr::null_mut();
            let index_c = c(&index);
            assert!(tt_machine_decode(index_c.as_ptr(), &mut decoded) == TtStatus::Ok);
            let a = take_string(tt_machine_print(phi2));
            let b = take_string(tt_machine_print(decoded));
            assert_eq!(a, b);

            let mut oracle: *mut TtRegFn = ptr::null_mut();
            let otext = c("pad g=poly: x + 1");
            assert!(tt_regfn_parse(otext.as_ptr(), &mut oracle) == TtStatus::Ok);
            let mut result = TtRunResult {
                aborted: false,
                steps: 0,
                oracle_calls: 0,
                meta_probes: 0,
                output: ptr::null_mut(),
            };
            let input = c("11");
            assert!(tt_run(phi2, oracle, input.as_ptr(), 0, &mut result) == TtStatus::Ok);
            assert!(!result.aborted);
            assert_eq!(take_string(result.output), "0000");
            assert_eq!(result.oracle_calls, 2);

            // the universal run at level 2 completes on the same index
            let mut uresult = TtRunResult {
                aborted: false,
                steps: 0,
                oracle_calls: 0,
                meta_probes: 0,
                output: ptr::null_mut(),
            };
            assert!(
                tt_universal_run(2, index_c.as_ptr(), oracle, 1, input.as_ptr(), &mut uresult)
                    == TtStatus::Ok
            );
            assert!(!uresult.aborted);
            assert_eq!(take_string(uresult.output), "0000");

            tt_regfn_free(oracle);
            tt_machine_free(decoded);
            tt_machine_free(phi2);
        }
    }

    #[test]
    fn name_eval_through_abi() {
        unsafe {
            let phi1 = tt_machine_phi(1);
            let mut bound: *mut TtSop = ptr::null_mut();
            let btext = c("L(n)");
            assert!(tt_sop_parse(btext.as_ptr(), &mut bound) == TtStatus::Ok);
            let mut name: *mut TtName = ptr::null_mut();
            assert!(tt_compile_to_name(phi1, bound, &mut name) == TtStatus::Ok);
            assert_eq!(tt_name_level(name), 1);
            let text = take_string(tt_name_to_text(name));
            assert!(text.starts_with("fsname"), "{text}");

            let mut x: *mut TtRegFn = ptr::null_mut();
            let xtext = c("pad g=poly: 2*x + 1");
            assert!(tt_regfn_parse(xtext.as_ptr(), &mut x) == TtStatus::Ok);
            let mut out: *mut c_char = ptr::null_mut();
            let input = c("1");
            assert!(tt_name_eval(name, x, input.as_ptr(), &mut out) == TtStatus::Ok);
            assert_eq!(take_string(out), "000");

            tt_regfn_free(x);
            tt_name_free(name);
            tt_sop_free(bound);
            tt_machine_free(phi1);
        }
    }

    #[test]
    fn generated_header_exists() {
        let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("include")
            .join("typetwo.h");
        let text = std::fs::read_to_string(header).expect("header generated by build script");
        assert!(text.contains("tt_sop_parse"));
        assert!(text.contains("TtRunResult"));
    }
}
