//! C ABI for `ksverify`.
//!
//! Models and data sets are opaque handles created by `*_from_*` functions
//! and released with the matching `*_free`. Every fallible call returns a
//! [`KsvStatus`]; on anything but `KSV_STATUS_OK` the thread-local message
//! from [`ksv_last_error_message`] describes the failure. Strings returned
//! through out-parameters are owned by the caller and released with
//! [`ksv_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ksverify::bound::{classical_bound_constrained, classical_bound_parallel, reduce, BoundError};
use ksverify::catalog::{self, CatalogError};
use ksverify::equivalence::inequalities_equivalent;
use ksverify::expdata::{fidelity, mermin_value, DataSet, ErrorMode};
use ksverify::feasibility::ks_feasible;
use ksverify::modelfile::{load_model, ModelFile};
use ksverify::pauli::{commutes, multiply, PauliWord};
use ksverify::state::{bell_value, spectral_max};
use ksverify::{BellOperator, KsModel};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KsvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    UnknownModel = 3,
    Parse = 4,
    Domain = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KsvErrorMode {
    Linear = 0,
    Quadrature = 1,
    Poisson = 2,
}

/// A value with its standard uncertainty.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsvValue {
    pub value: f64,
    pub sigma: f64,
}

/// A noncontextual model together with its Bell operator.
pub struct KsvModel {
    model: KsModel,
    op: BellOperator,
}

/// Parsed measurement statistics.
pub struct KsvDataSet {
    data: DataSet,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: KsvStatus,
    message: String,
}

impl Failure {
    fn new(status: KsvStatus, message: impl Into<String>) -> Failure {
        Failure { status, message: message.into() }
    }

    fn domain(e: impl ToString) -> Failure {
        Failure::new(KsvStatus::Domain, e.to_string())
    }
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> KsvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            KsvStatus::Ok
        }
        Ok(Err(fail)) => {
            set_last_error(&fail.message);
            fail.status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("internal panic: {msg}"));
            KsvStatus::Panic
        }
    }
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::new(KsvStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure::new(KsvStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `p` must be null or point to a live value of `T`.
unsafe fn read_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::new(KsvStatus::NullPointer, format!("{what} is null")))
}

/// # Safety
/// `out` must be null or valid for writes.
unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(KsvStatus::NullPointer, "output pointer is null"));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(|_| Failure::domain("string contains NUL"))
}

/// Message for the last failed call on this thread, or null after a
/// successful call. Valid until the next call into this library on the same
/// thread.
#[no_mangle]
pub extern "C" fn ksv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ksv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ksv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads a built-in model (`mermin-ghz3`, `pentagram`, `square-b`,
/// `square-c`, `ghz-mermin-<n>`).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ksv_model_from_catalog(name: *const c_char, out: *mut *mut KsvModel) -> KsvStatus {
    guard(|| {
        let name = read_str(name, "name")?;
        let entry = catalog::get(name).map_err(|e| match e {
            CatalogError::UnknownName(_) | CatalogError::OutOfRange(_) => Failure::new(KsvStatus::UnknownModel, e.to_string()),
            other => Failure::domain(other),
        })?;
        let handle = Box::new(KsvModel { model: entry.model, op: entry.bell_operator });
        write_out(out, Box::into_raw(handle))
    })
}

/// Builds a model from model-file JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ksv_model_from_json(json: *const c_char, out: *mut *mut KsvModel) -> KsvStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let model = load_model(text).map_err(|e| Failure::new(KsvStatus::Parse, e.to_string()))?;
        let op = model.bell_operator();
        write_out(out, Box::into_raw(Box::new(KsvModel { model, op })))
    })
}

/// # Safety
/// `model` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ksv_model_free(model: *mut KsvModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Serializes the model in the model file format.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ksv_model_to_json(model: *const KsvModel, out: *mut *mut c_char) -> KsvStatus {
    guard(|| {
        let m = read_ref(model, "model")?;
        let s = into_c_string(ModelFile::from_model(&m.model).to_json(false))?;
        write_out(out, s)
    })
}

/// Number of contexts and distinct assignment symbols.
///
/// # Safety
/// `model` must be a live handle; the out-pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ksv_model_shape(model: *const KsvModel, contexts: *mut usize, symbols: *mut usize) -> KsvStatus {
    guard(|| {
        let m = read_ref(model, "model")?;
        write_out(contexts, m.model.contexts().len())?;
        write_out(symbols, m.model.symbols().len())
    })
}

/// Whether a noncontextual ±1 assignment exists.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ksv_model_ks_feasible(model: *const KsvModel, out: *mut bool) -> KsvStatus {
    guard(|| {
        let m = read_ref(model, "model")?;
        write_out(out, ks_feasible(&m.model).feasible)
    })
}

/// Exact classical bound using up to `threads` workers (0 means 1).
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ksv_model_classical_bound(model: *const KsvModel, threads: u32, out: *mut f64) -> KsvStatus {
    guard(|| {
        let m = read_ref(model, "model")?;
        let r = classical_bound_parallel(&m.op, threads.max(1) as usize).map_err(Failure::domain)?;
        write_out(out, r.bound)
    })
}

/// `<B>` on the model's state. Fails with `KSV_STATUS_DOMAIN` for
/// state-independent models.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ksv_model_quantum_value(model: *const KsvModel, out: *mut f64) -> KsvStatus {
    guard(|| {
        let m = read_ref(model, "model")?;
        let state = m.model.state().ok_or_else(|| Failure::domain("model has no state"))?;
        write_out(out, bell_value(&m.op, state).map_err(Failure::domain)?)
    })
}

/// Largest eigenvalue of the Bell operator.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ksv_model_spectral_max(model: *const KsvModel, out: *mut f64) -> KsvStatus {
    guard(|| {
        let m = read_ref(model, "model")?;
        write_out(out, spectral_max(&m.op).map_err(Failure::domain)?)
    })
}

/// Bound of the reduced operator under the removed terms' identities, and
/// its term count.
///
/// # Safety
/// `model` must be a live handle; the out-pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ksv_model_reduced_bound(model: *const KsvModel, out_bound: *mut f64, out_terms: *mut usize) -> KsvStatus {
    guard(|| {
        let m = read_ref(model, "model")?;
        let red = reduce(&m.model, &m.op).map_err(Failure::domain)?;
        let bound = match classical_bound_constrained(&red.reduced, &red.constraints) {
            Ok(r) => r.bound,
            Err(BoundError::Infeasible) => return Err(Failure::domain("removed identities admit no assignment")),
            Err(e) => return Err(Failure::domain(e)),
        };
        write_out(out_bound, bound)?;
        write_out(out_terms, red.reduced.terms.len())
    })
}

/// Whether the reduced Bell operators of two models are equivalent.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ksv_equivalent(a: *const KsvModel, b: *const KsvModel, out: *mut bool) -> KsvStatus {
    guard(|| {
        let a = read_ref(a, "a")?;
        let b = read_ref(b, "b")?;
        let ra = reduce(&a.model, &a.op).map_err(Failure::domain)?;
        let rb = reduce(&b.model, &b.op).map_err(Failure::domain)?;
        write_out(out, inequalities_equivalent(&ra.reduced, &rb.reduced).equivalent)
    })
}

/// Parses CSV (or the JSON mirror) measurement data. `mode` is a
/// [`KsvErrorMode`] value.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ksv_dataset_from_csv(text: *const c_char, mode: u32, out: *mut *mut KsvDataSet) -> KsvStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let mode = match mode {
            m if m == KsvErrorMode::Linear as u32 => ErrorMode::Linear,
            m if m == KsvErrorMode::Quadrature as u32 => ErrorMode::Quadrature,
            m if m == KsvErrorMode::Poisson as u32 => ErrorMode::Poisson,
            other => return Err(Failure::new(KsvStatus::Parse, format!("unknown error mode {other}"))),
        };
        let data = DataSet::parse(text, mode).map_err(|e| Failure::new(KsvStatus::Parse, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(KsvDataSet { data })))
    })
}

/// # Safety
/// `data` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ksv_dataset_free(data: *mut KsvDataSet) {
    if !data.is_null() {
        drop(Box::from_raw(data));
    }
}

/// GHZ-Mermin value with its uncertainty.
///
/// # Safety
/// `data` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ksv_dataset_mermin(data: *const KsvDataSet, out: *mut KsvValue) -> KsvStatus {
    guard(|| {
        let d = read_ref(data, "data")?;
        let v = mermin_value(&d.data).map_err(Failure::domain)?;
        write_out(out, KsvValue { value: v.value, sigma: v.sigma })
    })
}

/// GHZ fidelity with its uncertainty.
///
/// # Safety
/// `data` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ksv_dataset_fidelity(data: *const KsvDataSet, out: *mut KsvValue) -> KsvStatus {
    guard(|| {
        let d = read_ref(data, "data")?;
        let f = fidelity(&d.data).map_err(Failure::domain)?.fidelity;
        write_out(out, KsvValue { value: f.value, sigma: f.sigma })
    })
}

fn parse_word(s: &str) -> Result<PauliWord, Failure> {
    s.parse().map_err(|e: ksverify::pauli::PauliError| Failure::new(KsvStatus::Parse, e.to_string()))
}

/// Product of two words in text form, e.g. `"XY" * "YX" = "ZZ"`.
///
/// # Safety
/// `a` and `b` must be NUL-terminated strings; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ksv_pauli_multiply(a: *const c_char, b: *const c_char, out: *mut *mut c_char) -> KsvStatus {
    guard(|| {
        let a = parse_word(read_str(a, "a")?)?;
        let b = parse_word(read_str(b, "b")?)?;
        let p = multiply(&a, &b).map_err(Failure::domain)?;
        write_out(out, into_c_string(p.to_string())?)
    })
}

/// # Safety
/// `a` and `b` must be NUL-terminated strings; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ksv_pauli_commutes(a: *const c_char, b: *const c_char, out: *mut bool) -> KsvStatus {
    guard(|| {
        let a = parse_word(read_str(a, "a")?)?;
        let b = parse_word(read_str(b, "b")?)?;
        write_out(out, commutes(&a, &b).map_err(Failure::domain)?)
    })
}
