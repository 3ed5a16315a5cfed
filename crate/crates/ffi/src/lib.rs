//! C ABI over the `causal-query` workbench.
//!
//! Every entry point returns a [`CqStatus`]; on anything but `CQ_STATUS_OK`
//! the message is kept per thread and read with [`cq_last_error_message`].
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `_free` function. Strings returned through
//! out-parameters are released with [`cq_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use causal_query::boolean::{
    certificate_complexity, degree, deterministic_query_complexity, parse_truth_table, BooleanFunction,
};
use causal_query::cli::{builtin_function, builtin_process};
use causal_query::process::{computes, is_causally_definite, validate_process, ProcessFile, SampleSpec, TableProcess};
use causal_query::quantum::{measure_and_decode, run_f6q, Completion};
use causal_query::sdp::{build_sdp, export_sdpa, parse_sdpa, render_sdpa, verify_solution, SdpInstance, Solution};
use causal_query::Error;
use libc::c_char;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Parse = 4,
    BudgetExceeded = 5,
    Io = 6,
    /// A Rust panic was caught at the boundary.
    Internal = 7,
}

/// Boolean function handle.
pub struct CqFunction(BooleanFunction);

/// Table-backed process function handle.
pub struct CqProcess(TableProcess);

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CqMeasures {
    pub arity: usize,
    /// Fourier (multilinear) degree.
    pub degree: usize,
    pub certificate: usize,
    /// Deterministic decision-tree depth.
    pub depth: usize,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CqQuantumOutcome {
    pub bit: bool,
    pub probability: f64,
    pub purity: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CqSdpReport {
    pub feasible: bool,
    pub epsilon: f64,
    pub max_residual: f64,
    pub min_eigenvalue: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(CqStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } | Error::Json(_) | Error::MalformedProcess(_) => CqStatus::Parse,
            Error::BudgetExceeded { .. } | Error::ArityOverBudget { .. } => CqStatus::BudgetExceeded,
            Error::Io(_) => CqStatus::Io,
            _ => CqStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CqStatus::NullPointer, format!("`{what}` is null"))
}

/// Runs `body`, records any failure, and converts panics to `Internal`.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CqStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CqStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("internal error: {msg}"));
            CqStatus::Internal
        }
    }
}

/// # Safety
/// `s` is null or a NUL-terminated string valid for the call.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure(CqStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

/// # Safety
/// `out` is null or valid for one write.
unsafe fn write<T>(out: *mut T, what: &str, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("interior NULs removed").into_raw()
}

/// # Safety
/// `bits` is null or points to `len` readable bytes.
unsafe fn read_bits(bits: *const u8, len: usize) -> Result<Vec<bool>, Failure> {
    if bits.is_null() && len > 0 {
        return Err(null("bits"));
    }
    let slice: &[u8] = if len == 0 { &[] } else { std::slice::from_raw_parts(bits, len) };
    slice
        .iter()
        .map(|&b| match b {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(Failure(CqStatus::InvalidArgument, format!("bit value {other} is not 0 or 1"))),
        })
        .collect()
}

/// Message of the last failed call on this thread, or null after a success.
/// The caller frees it with [`cq_string_free`].
#[no_mangle]
pub extern "C" fn cq_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// # Safety
/// `s` is null or a string returned by this library that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn cq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builtin function by name (`f6c`, `f6q`, `and`, `or`, `xor`, `const0`,
/// `const1`). `n` is the arity for the parametrised ones and ignored otherwise.
///
/// # Safety
/// `name` is a NUL-terminated string; `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cq_function_builtin(name: *const c_char, n: usize, out: *mut *mut CqFunction) -> CqStatus {
    guard(|| {
        let f = builtin_function(read_str(name, "name")?, Some(n))?;
        write(out, "out", Box::into_raw(Box::new(CqFunction(f))))
    })
}

/// Function from truth-table text: `n=<k>` then `2^k` bits, `x1` most significant.
///
/// # Safety
/// `text` is a NUL-terminated string; `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cq_function_from_table(text: *const c_char, out: *mut *mut CqFunction) -> CqStatus {
    guard(|| {
        let f = parse_truth_table(read_str(text, "text")?)?;
        write(out, "out", Box::into_raw(Box::new(CqFunction(f))))
    })
}

/// # Safety
/// `f` is null or a handle from this library that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cq_function_free(f: *mut CqFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `f` is a live handle; `bits` points to `len` bytes each 0 or 1.
#[no_mangle]
pub unsafe extern "C" fn cq_function_eval(
    f: *const CqFunction,
    bits: *const u8,
    len: usize,
    out: *mut bool,
) -> CqStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("f"))?;
        let x = read_bits(bits, len)?;
        write(out, "out", f.0.eval(&x)?)
    })
}

/// Degree, certificate complexity and decision-tree depth.
///
/// # Safety
/// `f` is a live handle; `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cq_function_analyze(f: *const CqFunction, out: *mut CqMeasures) -> CqStatus {
    guard(|| {
        let f = &f.as_ref().ok_or_else(|| null("f"))?.0;
        let m = CqMeasures {
            arity: f.arity(),
            degree: degree(f)?,
            certificate: certificate_complexity(f)?,
            depth: deterministic_query_complexity(f)?.0,
        };
        write(out, "out", m)
    })
}

/// Builtin process by name (`lugano`, `lugano_bar`).
///
/// # Safety
/// `name` is a NUL-terminated string; `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cq_process_builtin(name: *const c_char, out: *mut *mut CqProcess) -> CqStatus {
    guard(|| {
        let w = builtin_process(read_str(name, "name")?)?;
        write(out, "out", Box::into_raw(Box::new(CqProcess(w))))
    })
}

/// Process from its JSON table description.
///
/// # Safety
/// `json` is a NUL-terminated string; `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cq_process_from_json(json: *const c_char, out: *mut *mut CqProcess) -> CqStatus {
    guard(|| {
        let w = ProcessFile::parse(read_str(json, "json")?)?;
        write(out, "out", Box::into_raw(Box::new(CqProcess(w))))
    })
}

/// # Safety
/// `w` is a live handle; `out` is valid for one write. Free the string with [`cq_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cq_process_to_json(w: *const CqProcess, out: *mut *mut c_char) -> CqStatus {
    guard(|| {
        let w = w.as_ref().ok_or_else(|| null("w"))?;
        write(out, "out", into_c_string(ProcessFile::render(&w.0)?))
    })
}

/// # Safety
/// `w` is null or a handle from this library that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cq_process_free(w: *mut CqProcess) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Unique fixed point for every past value and operation tuple. A budget of 0
/// uses the library default.
///
/// # Safety
/// `w` is a live handle; `valid` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cq_process_validate(w: *const CqProcess, budget: u64, valid: *mut bool) -> CqStatus {
    guard(|| {
        let w = w.as_ref().ok_or_else(|| null("w"))?;
        let budget = if budget == 0 { causal_query::process::DEFAULT_VALIDATION_BUDGET } else { budget as u128 };
        write(valid, "valid", validate_process(&w.0, budget)?.valid)
    })
}

/// # Safety
/// `w` is a live handle; `definite` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cq_process_is_definite(w: *const CqProcess, budget: u64, definite: *mut bool) -> CqStatus {
    guard(|| {
        let w = w.as_ref().ok_or_else(|| null("w"))?;
        let budget = if budget == 0 { causal_query::process::DEFAULT_VALIDATION_BUDGET as u64 } else { budget };
        write(definite, "definite", is_causally_definite(&w.0, budget)?)
    })
}

/// Whether `w` computes `f` on copies of its oracle: exhaustively for small
/// arity, else on `samples` seeded random inputs.
///
/// # Safety
/// `w` and `f` are live handles; `holds` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cq_process_computes(
    w: *const CqProcess,
    f: *const CqFunction,
    samples: usize,
    seed: u64,
    holds: *mut bool,
) -> CqStatus {
    guard(|| {
        let w = w.as_ref().ok_or_else(|| null("w"))?;
        let f = f.as_ref().ok_or_else(|| null("f"))?;
        let spec = SampleSpec { samples, seed, ..SampleSpec::default() };
        write(holds, "holds", computes(&w.0, &f.0, &spec)?.holds)
    })
}

/// Runs the three-query supermap on the phase oracle of `x` (six bytes, each
/// 0 or 1) and decodes the output. `random_completion` selects a seeded random
/// extension of the Hadamard-like gates instead of Gram-Schmidt.
///
/// # Safety
/// `x` points to 6 bytes; `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cq_run_f6q(
    x: *const u8,
    random_completion: bool,
    seed: u64,
    out: *mut CqQuantumOutcome,
) -> CqStatus {
    guard(|| {
        let x = read_bits(x, 6)?;
        let completion = if random_completion { Completion::Random(seed) } else { Completion::GramSchmidt };
        let rho = run_f6q(&x, completion)?;
        let d = measure_and_decode(&rho)?;
        write(out, "out", CqQuantumOutcome { bit: d.bit, probability: d.probability, purity: rho.purity() })
    })
}

/// SDPA sparse text of the sequential-query program for `(f, queries)`.
///
/// # Safety
/// `f` is a live handle; `out` is valid for one write. Free the string with [`cq_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cq_sdp_export(f: *const CqFunction, queries: usize, out: *mut *mut c_char) -> CqStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("f"))?;
        let inst = build_sdp(&f.0, queries)?;
        write(out, "out", into_c_string(render_sdpa(&export_sdpa(&inst))))
    })
}

/// Checks a solution (JSON) against an SDPA instance at tolerance `tol`.
///
/// # Safety
/// `instance` and `solution` are NUL-terminated strings; `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cq_sdp_verify(
    instance: *const c_char,
    solution: *const c_char,
    tol: f64,
    out: *mut CqSdpReport,
) -> CqStatus {
    guard(|| {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(Failure(
                CqStatus::InvalidArgument,
                format!("tolerance {tol} is not a finite non-negative number"),
            ));
        }
        let inst = SdpInstance::from_sdpa(&parse_sdpa(read_str(instance, "instance")?)?)?;
        let sol = Solution::from_json(read_str(solution, "solution")?)?;
        let r = verify_solution(&inst, &sol, tol)?;
        let report = CqSdpReport {
            feasible: r.feasible,
            epsilon: r.epsilon,
            max_residual: r.max_residual,
            min_eigenvalue: r.min_eigenvalue,
        };
        write(out, "out", report)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_kinds_map_to_statuses() {
        let status = |e: Error| Failure::from(e).0;
        assert_eq!(status(Error::Precondition("x".into())), CqStatus::InvalidArgument);
        assert_eq!(status(Error::BudgetExceeded { what: "t", needed: 2, budget: 1 }), CqStatus::BudgetExceeded);
        assert_eq!(status(Error::MalformedProcess("x".into())), CqStatus::Parse);
    }

    #[test]
    fn panics_become_internal_errors() {
        let prev = std::panic::take_hook();
        std::panic::set_hook(Box::new(|_| {}));
        let status = guard(|| panic!("boom"));
        std::panic::set_hook(prev);
        assert_eq!(status, CqStatus::Internal);
        let msg = cq_last_error_message();
        let text = unsafe { CStr::from_ptr(msg) }.to_str().unwrap().to_owned();
        unsafe { cq_string_free(msg) };
        assert!(text.contains("boom"));
    }
}
