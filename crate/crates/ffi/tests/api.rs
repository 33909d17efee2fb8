use std::ffi::{c_char, CStr};
use std::ptr;

use uipq_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    unsafe {
        assert_eq!(uipq_last_error(buf.as_mut_ptr(), buf.len(), ptr::null_mut()), UipqStatus::Ok);
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

#[test]
fn version_matches_the_core_crate() {
    let v = unsafe { CStr::from_ptr(uipq_version()) };
    assert_eq!(v.to_str().unwrap(), uipq_core::VERSION);
}

#[test]
fn hull_law_exact_and_float_masses() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(uipq_law_hull_perimeter(1, 1e-12, &mut t), UipqStatus::Ok);
        let mut buf = [0 as c_char; 64];
        let mut needed = 0;
        assert_eq!(uipq_law_mass_exact(t, 2, buf.as_mut_ptr(), buf.len(), &mut needed), UipqStatus::Ok);
        assert_eq!(CStr::from_ptr(buf.as_ptr()).to_str().unwrap(), "140/729");
        assert_eq!(needed, 8);
        let mut x = 0.0;
        assert_eq!(uipq_law_mass_f64(t, 1, &mut x), UipqStatus::Ok);
        assert!((x - 5.0 / 27.0).abs() < 1e-15);
        let mut len = 0;
        assert_eq!(uipq_law_len(t, &mut len), UipqStatus::Ok);
        assert_eq!(uipq_law_mass_f64(t, len, &mut x), UipqStatus::OutOfRange);
        let mut tail = 1.0;
        assert_eq!(uipq_law_tail_bound(t, &mut tail), UipqStatus::Ok);
        assert!(tail < 1e-12);
        uipq_law_free(t);
    }
}

#[test]
fn small_buffers_report_the_needed_size() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(uipq_law_n_trees(1, 2, 1e-12, &mut t), UipqStatus::Ok);
        let mut buf = [0 as c_char; 4];
        let mut needed = 0;
        assert_eq!(uipq_law_mass_exact(t, 1, buf.as_mut_ptr(), buf.len(), &mut needed), UipqStatus::BufferTooSmall);
        assert_eq!(needed, "7/20".len() + 1);
        uipq_law_free(t);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(uipq_law_n_trees(2, 2, 1e-12, &mut t), UipqStatus::InvalidArgument);
        assert!(t.is_null());
        assert!(last_error().contains("u < w"), "{}", last_error());
        assert_eq!(uipq_law_theta(3, ptr::null_mut()), UipqStatus::NullPointer);
        let mut n = 0;
        assert_eq!(uipq_forest_trees(ptr::null(), &mut n), UipqStatus::NullPointer);
        uipq_law_free(ptr::null_mut());
    }
}

#[test]
fn forests_are_reproducible_from_the_seed() {
    let json = |seed| unsafe {
        let mut rng = ptr::null_mut();
        assert_eq!(uipq_rng_new(seed, &mut rng), UipqStatus::Ok);
        let mut f = ptr::null_mut();
        assert_eq!(uipq_forest_sample_annulus(2, 4, rng, &mut f), UipqStatus::Ok);
        let (mut q, mut p, mut m) = (0, 0, 0);
        assert_eq!(uipq_forest_trees(f, &mut q), UipqStatus::Ok);
        assert_eq!(uipq_forest_top_size(f, &mut p), UipqStatus::Ok);
        assert_eq!(uipq_forest_max_height_trees(f, &mut m), UipqStatus::Ok);
        assert!(1 <= m && m <= q && p >= 1);
        let mut needed = 0;
        assert_eq!(uipq_forest_to_json(f, ptr::null_mut(), 0, &mut needed), UipqStatus::BufferTooSmall);
        let mut buf = vec![0 as c_char; needed];
        assert_eq!(uipq_forest_to_json(f, buf.as_mut_ptr(), needed, ptr::null_mut()), UipqStatus::Ok);
        uipq_forest_free(f);
        uipq_rng_free(rng);
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    };
    assert_eq!(json(9), json(9));
    let f = uipq_core::skeleton::PlaneForest::from_json(&json(9)).unwrap();
    assert_eq!(f.height_cap, 2);
}

#[test]
fn bridge_distances_and_event() {
    unsafe {
        let values = [0i64, 1, 0];
        let mut b = ptr::null_mut();
        assert_eq!(uipq_bridge_from_values(values.as_ptr(), values.len(), &mut b), UipqStatus::Ok);
        let mut d = 9;
        assert_eq!(uipq_bridge_cactus_distance(b, 0, 1, &mut d), UipqStatus::Ok);
        assert_eq!(d, 1);
        assert_eq!(uipq_bridge_cactus_distance(b, 0, 5, &mut d), UipqStatus::OutOfRange);
        let mut hit = false;
        assert_eq!(uipq_bridge_detect_event(b, 2, 1, 1.0, &mut hit), UipqStatus::Ok);
        assert!(hit);
        assert_eq!(uipq_bridge_detect_event(b, 2, 0, 1.0, &mut hit), UipqStatus::InvalidArgument);
        uipq_bridge_free(b);

        let bad = [0i64, 2, 0];
        assert_eq!(uipq_bridge_from_values(bad.as_ptr(), bad.len(), &mut b), UipqStatus::InvalidArgument);

        let mut rng = ptr::null_mut();
        uipq_rng_new(4, &mut rng);
        assert_eq!(uipq_bridge_sample(10, rng, &mut b), UipqStatus::Ok);
        assert_eq!(uipq_bridge_cactus_distance(b, 3, 3, &mut d), UipqStatus::Ok);
        assert_eq!(d, 0);
        uipq_bridge_free(b);
        uipq_rng_free(rng);
    }
}
