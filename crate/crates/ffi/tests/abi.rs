use std::ffi::{CStr, CString};
use std::ptr;

use ksverify_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = ksv_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn load(name: &str) -> *mut KsvModel {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ksv_model_from_catalog(cs(name).as_ptr(), &mut m) }, KsvStatus::Ok);
    m
}

#[test]
fn catalog_models_through_the_abi() {
    for (name, bound, quantum) in [("mermin-ghz3", 2.0, 4.0), ("square-b", 3.0, 5.0), ("square-c", 3.0, 5.0)] {
        let m = load(name);
        let mut feasible = true;
        let mut b = 0.0;
        let mut q = 0.0;
        let mut rb = 0.0;
        let mut terms = 0usize;
        unsafe {
            assert_eq!(ksv_model_ks_feasible(m, &mut feasible), KsvStatus::Ok);
            assert_eq!(ksv_model_classical_bound(m, 2, &mut b), KsvStatus::Ok);
            assert_eq!(ksv_model_quantum_value(m, &mut q), KsvStatus::Ok);
            assert_eq!(ksv_model_reduced_bound(m, &mut rb, &mut terms), KsvStatus::Ok);
            ksv_model_free(m);
        }
        assert!(!feasible);
        assert_eq!(b, bound);
        assert!((q - quantum).abs() < 1e-9);
        assert_eq!((rb, terms), (2.0, 4));
    }
}

#[test]
fn state_independent_model() {
    let m = load("pentagram");
    let mut q = 0.0;
    let mut top = 0.0;
    let (mut contexts, mut symbols) = (0usize, 0usize);
    unsafe {
        assert_eq!(ksv_model_quantum_value(m, &mut q), KsvStatus::Domain);
        assert!(last_error().contains("no state"));
        assert_eq!(ksv_model_spectral_max(m, &mut top), KsvStatus::Ok);
        assert!(ksv_last_error_message().is_null());
        assert_eq!(ksv_model_shape(m, &mut contexts, &mut symbols), KsvStatus::Ok);
        ksv_model_free(m);
    }
    assert!((top - 5.0).abs() < 1e-9);
    assert_eq!((contexts, symbols), (5, 10));
}

#[test]
fn json_round_trip_and_equivalence() {
    let a = load("square-b");
    let mut json = ptr::null_mut();
    let mut b = ptr::null_mut();
    let mut eq = false;
    unsafe {
        assert_eq!(ksv_model_to_json(a, &mut json), KsvStatus::Ok);
        assert_eq!(ksv_model_from_json(json, &mut b), KsvStatus::Ok);
        ksv_string_free(json);
        let c = load("mermin-ghz3");
        assert_eq!(ksv_equivalent(b, c, &mut eq), KsvStatus::Ok);
        ksv_model_free(a);
        ksv_model_free(b);
        ksv_model_free(c);
    }
    assert!(eq);
}

#[test]
fn errors_are_reported() {
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(ksv_model_from_catalog(cs("nope").as_ptr(), &mut m), KsvStatus::UnknownModel);
        assert!(last_error().contains("nope"));
        assert_eq!(ksv_model_from_catalog(ptr::null(), &mut m), KsvStatus::NullPointer);
        let bad = cs(r#"{"n": 1, "contexts": [{"label": "c", "members": ["X", "Z"]}]}"#);
        assert_eq!(ksv_model_from_json(bad.as_ptr(), &mut m), KsvStatus::Parse);
        assert!(last_error().contains("context 0 (c)"));
        let mut f = 0.0;
        assert_eq!(ksv_model_spectral_max(ptr::null(), &mut f), KsvStatus::NullPointer);
        let mut d = ptr::null_mut();
        assert_eq!(ksv_dataset_from_csv(cs("setting,outcome,value,sigma,kind\n").as_ptr(), 7, &mut d), KsvStatus::Parse);
        let invalid = [0xffu8, 0];
        assert_eq!(ksv_model_from_catalog(invalid.as_ptr().cast(), &mut m), KsvStatus::InvalidUtf8);
        ksv_model_free(ptr::null_mut());
        ksv_dataset_free(ptr::null_mut());
        ksv_string_free(ptr::null_mut());
    }
}

#[test]
fn dataset_values() {
    let text = cs(include_str!("../../core/data/table1.csv"));
    let mut d = ptr::null_mut();
    let mut m = KsvValue { value: 0.0, sigma: 0.0 };
    let mut f = m;
    unsafe {
        assert_eq!(ksv_dataset_from_csv(text.as_ptr(), KsvErrorMode::Linear as u32, &mut d), KsvStatus::Ok);
        assert_eq!(ksv_dataset_mermin(d, &mut m), KsvStatus::Ok);
        assert_eq!(ksv_dataset_fidelity(d, &mut f), KsvStatus::Ok);
        ksv_dataset_free(d);
    }
    assert!((m.value - 3.498).abs() < 1e-9 && (m.sigma - 0.130).abs() < 1e-9);
    assert!((f.value - 0.89975).abs() < 1e-9);
}

#[test]
fn pauli_helpers() {
    let mut out = ptr::null_mut();
    let mut c = false;
    unsafe {
        assert_eq!(ksv_pauli_multiply(cs("XY").as_ptr(), cs("YX").as_ptr(), &mut out), KsvStatus::Ok);
        assert_eq!(CStr::from_ptr(out).to_str().unwrap(), "ZZ");
        ksv_string_free(out);
        assert_eq!(ksv_pauli_commutes(cs("XI").as_ptr(), cs("ZI").as_ptr(), &mut c), KsvStatus::Ok);
        assert!(!c);
        assert_eq!(ksv_pauli_multiply(cs("X").as_ptr(), cs("XX").as_ptr(), &mut out), KsvStatus::Domain);
        assert_eq!(ksv_pauli_commutes(cs("Q").as_ptr(), cs("X").as_ptr(), &mut c), KsvStatus::Parse);
    }
    let v = unsafe { CStr::from_ptr(ksv_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let header = include_str!("../include/ksverify.h");
    for item in [
        "typedef struct KsvModel KsvModel;",
        "typedef struct KsvDataSet KsvDataSet;",
        "KSV_STATUS_OK = 0",
        "KSV_STATUS_PANIC = 6",
        "KSV_ERROR_MODE_POISSON = 2",
        "enum KsvStatus ksv_model_from_catalog(const char *name, struct KsvModel **out);",
        "enum KsvStatus ksv_dataset_mermin(const struct KsvDataSet *data, struct KsvValue *out);",
        "const char *ksv_last_error_message(void);",
        "void ksv_model_free(struct KsvModel *model);",
    ] {
        assert!(header.contains(item), "missing {item}");
    }
}
