//! Exercises the C ABI from Rust: status codes, out-pointer contracts,
//! determinism, and the generated header's presence.

use std::ffi::{CStr, CString};

use grasspoly_ffi::*;

#[test]
fn stream_lifecycle_and_determinism() {
    unsafe {
        let a = gsp_stream_new(42, 0);
        let b = gsp_stream_new(42, 0);
        let mut pa = [0.0; 3];
        let mut pb = [0.0; 3];
        assert_eq!(gsp_sample_sphere(a, pa.as_mut_ptr()), GspStatus::Ok);
        assert_eq!(gsp_sample_sphere(b, pb.as_mut_ptr()), GspStatus::Ok);
        assert_eq!(pa, pb);
        let mut counter = 0u64;
        assert_eq!(gsp_stream_counter(a, &mut counter), GspStatus::Ok);
        assert_eq!(counter, 1);
        gsp_stream_free(a);
        gsp_stream_free(b);
        gsp_stream_free(std::ptr::null_mut());
    }
}

#[test]
fn null_pointers_are_reported() {
    unsafe {
        assert_eq!(
            gsp_sample_sphere(std::ptr::null_mut(), std::ptr::null_mut()),
            GspStatus::NullPointer
        );
        let mut counter = 0u64;
        assert_eq!(
            gsp_stream_counter(std::ptr::null(), &mut counter),
            GspStatus::NullPointer
        );
        let mut out = 0.0f64;
        assert_eq!(gsp_convex_fraction_exact(2, &mut out), GspStatus::InvalidArgument);
    }
}

#[test]
fn frame_sampling_round_trips_through_plucker() {
    unsafe {
        let s = gsp_stream_new(7, 3);
        let mut u = [0.0; 5];
        let mut v = [0.0; 5];
        assert_eq!(gsp_sample_frame(s, 5, u.as_mut_ptr(), v.as_mut_ptr()), GspStatus::Ok);
        let mut upper = [0.0; 10];
        assert_eq!(
            gsp_plucker_from_frame(5, u.as_ptr(), v.as_ptr(), upper.as_mut_ptr()),
            GspStatus::Ok
        );
        let frob: f64 = 2.0 * upper.iter().map(|x| x * x).sum::<f64>();
        assert!((frob - 2.0).abs() < 1e-10);
        assert_eq!(
            gsp_sample_frame(s, 2, u.as_mut_ptr(), v.as_mut_ptr()),
            GspStatus::InvalidArgument
        );
        gsp_stream_free(s);
    }
}

#[test]
fn triangle_pipeline() {
    unsafe {
        let s = gsp_stream_new(9, 0);
        let mut xyz = [0.0; 3];
        assert_eq!(gsp_sample_sphere(s, xyz.as_mut_ptr()), GspStatus::Ok);
        let mut abc = [0.0; 3];
        assert_eq!(gsp_triangle_sides(xyz.as_ptr(), abc.as_mut_ptr()), GspStatus::Ok);
        assert!((abc.iter().sum::<f64>() - 2.0).abs() < 1e-12);
        let mut q = std::mem::zeroed::<GspTriangleQuantities>();
        assert_eq!(gsp_triangle_quantities(abc[0], abc[1], abc[2], &mut q), GspStatus::Ok);
        assert!(q.area > 0.0);
        assert!((q.inradius - q.area).abs() < 1e-15);
        gsp_stream_free(s);

        // Degenerate input: quantities NaN, classification degenerate.
        let mut q = std::mem::zeroed::<GspTriangleQuantities>();
        assert_eq!(gsp_triangle_quantities(1.0, 1.0, 0.0, &mut q), GspStatus::Ok);
        assert_eq!(q.classification, GspTriangleClass::Degenerate);
        assert!(q.circumcurvature.is_nan());

        // Perimeter off 2 is invalid.
        let mut q = std::mem::zeroed::<GspTriangleQuantities>();
        assert_eq!(gsp_triangle_quantities(1.0, 1.0, 1.0, &mut q), GspStatus::InvalidArgument);
    }
}

#[test]
fn polygon_classification_by_edges() {
    unsafe {
        let square = [0.5, 0.0, 0.0, 0.5, -0.5, 0.0, 0.0, -0.5];
        let mut class = GspPolygonClass::Degenerate;
        assert_eq!(
            gsp_classify_polygon(square.as_ptr(), 4, 0.0, &mut class),
            GspStatus::Ok
        );
        assert_eq!(class, GspPolygonClass::Convex);

        let open = [1.0, 0.0, 0.0, 1.0, 0.5, 0.5];
        assert_eq!(
            gsp_classify_polygon(open.as_ptr(), 3, 0.0, &mut class),
            GspStatus::InvalidArgument
        );
    }
}

#[test]
fn exact_constants() {
    unsafe {
        assert!((gsp_obtuse_probability_exact() - 0.8380931995420452).abs() < 1e-15);
        let mut fraction = 0.0;
        assert_eq!(gsp_convex_fraction_exact(5, &mut fraction), GspStatus::Ok);
        assert!((fraction - 1.0 / 12.0).abs() < 1e-15);
        let mut chambers = 0u64;
        assert_eq!(gsp_chamber_count(4, &mut chambers), GspStatus::Ok);
        assert_eq!(chambers, 24);
        assert_eq!(gsp_chamber_count(40, &mut chambers), GspStatus::Overflow);
    }
}

#[test]
fn estimate_json_round_trip() {
    unsafe {
        let name = CString::new("quad-classes").unwrap();
        let mut json: *mut std::ffi::c_char = std::ptr::null_mut();
        let status = gsp_estimate_json(name.as_ptr(), 0, 20_000, 7, 0, 2, &mut json);
        assert_eq!(status, GspStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        gsp_string_free(json);
        let reports: serde_json::Value = serde_json::from_str(&text).unwrap();
        let arr = reports.as_array().unwrap();
        assert_eq!(arr.len(), 3);
        for r in arr {
            assert_eq!(r["schema"], "grasspoly/1");
            assert!(r["z_score"].as_f64().unwrap().abs() < 4.0);
        }

        let bogus = CString::new("bogus").unwrap();
        let mut json: *mut std::ffi::c_char = std::ptr::null_mut();
        assert_eq!(
            gsp_estimate_json(bogus.as_ptr(), 0, 20_000, 7, 0, 1, &mut json),
            GspStatus::InvalidArgument
        );
    }
}

#[test]
fn verify_json_runs_group_suite() {
    unsafe {
        let suite = CString::new("group").unwrap();
        let mut json: *mut std::ffi::c_char = std::ptr::null_mut();
        assert_eq!(gsp_verify_json(suite.as_ptr(), 7, &mut json), GspStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        gsp_string_free(json);
        let results: serde_json::Value = serde_json::from_str(&text).unwrap();
        let arr = results.as_array().unwrap();
        assert_eq!(arr.len(), 1);
        assert_eq!(arr[0]["name"], "b4-exhaustive");
        assert_eq!(arr[0]["passed"], true);
    }
}

#[test]
fn generated_header_exists_with_expected_symbols() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/grasspoly.h");
    let text = std::fs::read_to_string(header).expect("header generated at build time");
    for symbol in [
        "GspStatus",
        "typedef struct GspStream GspStream",
        "gsp_stream_new",
        "gsp_sample_frame",
        "gsp_estimate_json",
        "gsp_string_free",
        "GSP_STATUS_OK",
    ] {
        assert!(text.contains(symbol), "header is missing {symbol}");
    }
}
