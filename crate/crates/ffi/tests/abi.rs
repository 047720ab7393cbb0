use std::ffi::{CStr, CString};
use std::ptr;

use mqo_ffi::*;

fn example() -> *mut MqoWorkload {
    let mut w = ptr::null_mut();
    assert_eq!(unsafe { mqo_workload_example(&mut w) }, MqoStatus::Ok);
    assert!(!w.is_null());
    w
}

fn last_error() -> String {
    let p = mqo_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { mqo_string_free(p) };
    s
}

#[test]
fn optimizes_the_bundled_example() {
    let w = example();
    for algo in [
        MqoAlgorithm::Marginal,
        MqoAlgorithm::Lazy,
        MqoAlgorithm::Roy,
        MqoAlgorithm::Exhaustive,
    ] {
        let mut r = ptr::null_mut();
        assert_eq!(unsafe { mqo_optimize(w, algo as u32, 0, false, &mut r) }, MqoStatus::Ok);
        let (mut cost, mut base, mut count, mut calls) = (0.0, 0.0, 0, 0);
        unsafe {
            assert_eq!(mqo_result_plan_cost(r, &mut cost), MqoStatus::Ok);
            assert_eq!(mqo_result_baseline_cost(r, &mut base), MqoStatus::Ok);
            assert_eq!(mqo_result_materialized_count(r, &mut count), MqoStatus::Ok);
            assert_eq!(mqo_result_oracle_calls(r, &mut calls), MqoStatus::Ok);
        }
        assert_eq!((cost, base, count, calls), (370.0, 460.0, 1, 2), "{algo:?}");
        let mut label = ptr::null_mut();
        assert_eq!(
            unsafe { mqo_result_materialized_label(r, 0, &mut label) },
            MqoStatus::Ok
        );
        assert_eq!(take_string(label), "B⋈C");
        let mut json = ptr::null_mut();
        assert_eq!(unsafe { mqo_result_to_json(r, &mut json) }, MqoStatus::Ok);
        let value: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(value["bc_chosen"], 370.0);
        unsafe { mqo_result_free(r) };
    }
    unsafe { mqo_workload_free(w) };
}

#[test]
fn best_cost_by_shareable_index() {
    let w = example();
    let mut n = 0;
    assert_eq!(unsafe { mqo_workload_shareable_count(w, &mut n) }, MqoStatus::Ok);
    assert_eq!(n, 1);
    let mut label = ptr::null_mut();
    assert_eq!(unsafe { mqo_workload_shareable_label(w, 0, &mut label) }, MqoStatus::Ok);
    assert_eq!(take_string(label), "B⋈C");
    let mut cost = 0.0;
    assert_eq!(
        unsafe { mqo_workload_best_cost(w, ptr::null(), 0, &mut cost) },
        MqoStatus::Ok
    );
    assert_eq!(cost, 460.0);
    assert_eq!(
        unsafe { mqo_workload_best_cost(w, [0usize].as_ptr(), 1, &mut cost) },
        MqoStatus::Ok
    );
    assert_eq!(cost, 370.0);
    assert_eq!(
        unsafe { mqo_workload_best_cost(w, [3usize].as_ptr(), 1, &mut cost) },
        MqoStatus::OutOfRange
    );
    assert!(last_error().contains("index 3"));
    unsafe { mqo_workload_free(w) };
}

#[test]
fn errors_carry_status_and_message() {
    let mut w = ptr::null_mut();
    let bad = CString::new(r#"{"relations":[],"queries":[]}"#).unwrap();
    assert_eq!(
        unsafe { mqo_workload_from_json(bad.as_ptr(), &mut w) },
        MqoStatus::Workload
    );
    assert!(w.is_null());
    assert!(!last_error().is_empty());

    let broken = CString::new("{").unwrap();
    assert_eq!(
        unsafe { mqo_workload_from_json(broken.as_ptr(), &mut w) },
        MqoStatus::Json
    );
    assert_eq!(
        unsafe { mqo_workload_from_json(ptr::null(), &mut w) },
        MqoStatus::NullArgument
    );
    let missing = CString::new("/nonexistent/w.json").unwrap();
    assert_eq!(
        unsafe { mqo_workload_from_path(missing.as_ptr(), &mut w) },
        MqoStatus::Io
    );

    let w = example();
    let mut r = ptr::null_mut();
    assert_eq!(
        unsafe { mqo_optimize(w, 99, 0, false, &mut r) },
        MqoStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { mqo_optimize(w, MqoAlgorithm::Roy as u32, 1, false, &mut r) },
        MqoStatus::InvalidArgument
    );
    assert!(r.is_null());
    assert_eq!(
        unsafe { mqo_optimize(ptr::null(), 0, 0, false, &mut r) },
        MqoStatus::NullArgument
    );
    assert_eq!(
        unsafe { mqo_optimize(w, MqoAlgorithm::NoMaterialization as u32, 0, false, &mut r) },
        MqoStatus::Ok
    );
    assert!(mqo_last_error().is_null());
    let mut cost = 0.0;
    assert_eq!(unsafe { mqo_result_plan_cost(r, &mut cost) }, MqoStatus::Ok);
    assert_eq!(cost, 460.0);
    unsafe {
        mqo_result_free(r);
        mqo_workload_free(w);
        mqo_workload_free(ptr::null_mut());
        mqo_result_free(ptr::null_mut());
        mqo_string_free(ptr::null_mut());
    }
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(mqo_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
