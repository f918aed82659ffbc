//! C ABI for the grasspoly library.
//!
//! Conventions: objects with state live behind opaque handles created and
//! freed here; every fallible call returns a [`GspStatus`] and writes its
//! result through out-pointers; structured results (estimate reports, verify
//! outcomes) come back as JSON strings that the caller releases with
//! [`gsp_string_free`]. The header is generated into include/grasspoly.h at
//! build time.

use std::ffi::{c_char, CStr, CString};

use grasspoly::estimators::{estimate, ExperimentId};
use grasspoly::grassmann::{Frame, PluckerMatrix};
use grasspoly::polygon::{classify_polygon, convex_fraction_exact, PolygonClass, PolygonShape};
use grasspoly::sampling::SampleStream;
use grasspoly::triangle::{
    classify_sides, TriangleClass, TriangleQuantities, TriangleShape,
};
use grasspoly::verify::{run_suite, Suite};

/// Result codes shared by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GspStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Degenerate = 3,
    Exhausted = 4,
    Overflow = 5,
}

/// Triangle classification, mirroring the library enum.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GspTriangleClass {
    Acute = 0,
    Right = 1,
    Obtuse = 2,
    Degenerate = 3,
}

impl From<TriangleClass> for GspTriangleClass {
    fn from(c: TriangleClass) -> Self {
        match c {
            TriangleClass::Acute => GspTriangleClass::Acute,
            TriangleClass::Right => GspTriangleClass::Right,
            TriangleClass::Obtuse => GspTriangleClass::Obtuse,
            TriangleClass::Degenerate => GspTriangleClass::Degenerate,
        }
    }
}

/// Polygon classification, mirroring the library enum.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GspPolygonClass {
    Convex = 0,
    Reflex = 1,
    SelfIntersecting = 2,
    Degenerate = 3,
}

impl From<PolygonClass> for GspPolygonClass {
    fn from(c: PolygonClass) -> Self {
        match c {
            PolygonClass::Convex => GspPolygonClass::Convex,
            PolygonClass::Reflex => GspPolygonClass::Reflex,
            PolygonClass::SelfIntersecting => GspPolygonClass::SelfIntersecting,
            PolygonClass::Degenerate => GspPolygonClass::Degenerate,
        }
    }
}

/// Derived triangle quantities. Exradii and circumcurvature are NaN when the
/// triangle is degenerate.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GspTriangleQuantities {
    pub area: f64,
    pub inradius: f64,
    pub exradius_a: f64,
    pub exradius_b: f64,
    pub exradius_c: f64,
    pub circumcurvature: f64,
    pub classification: GspTriangleClass,
}

/// Opaque reproducible sample stream; see `gsp_stream_new`.
pub struct GspStream {
    inner: SampleStream,
}

/// Creates a sample stream keyed by (seed, stream_id). Never fails; free
/// with [`gsp_stream_free`].
#[no_mangle]
pub extern "C" fn gsp_stream_new(seed: u64, stream_id: u64) -> *mut GspStream {
    Box::into_raw(Box::new(GspStream { inner: SampleStream::new(seed, stream_id) }))
}

/// Releases a stream created by [`gsp_stream_new`]. NULL is a no-op.
///
/// # Safety
/// `stream` must have come from [`gsp_stream_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gsp_stream_free(stream: *mut GspStream) {
    if !stream.is_null() {
        drop(unsafe { Box::from_raw(stream) });
    }
}

/// Writes the number of samples the stream has emitted.
///
/// # Safety
/// `stream` and `out_counter` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gsp_stream_counter(
    stream: *const GspStream,
    out_counter: *mut u64,
) -> GspStatus {
    if stream.is_null() || out_counter.is_null() {
        return GspStatus::NullPointer;
    }
    unsafe { *out_counter = (*stream).inner.counter() };
    GspStatus::Ok
}

/// Draws a uniform point on S²; writes (x, y, z) to `out_xyz[0..3]`.
///
/// # Safety
/// `stream` must be a live stream handle; `out_xyz` must point to 3 f64.
#[no_mangle]
pub unsafe extern "C" fn gsp_sample_sphere(
    stream: *mut GspStream,
    out_xyz: *mut f64,
) -> GspStatus {
    if stream.is_null() || out_xyz.is_null() {
        return GspStatus::NullPointer;
    }
    let p = unsafe { &mut *stream }.inner.sphere();
    let coords = p.coords();
    unsafe { std::ptr::copy_nonoverlapping(coords.as_ptr(), out_xyz, 3) };
    GspStatus::Ok
}

/// Draws a uniform frame on V₂(ℝⁿ); writes the two orthonormal columns to
/// `out_u[0..n]` and `out_v[0..n]`.
///
/// # Safety
/// `stream` must be live; `out_u`, `out_v` must each point to n f64.
#[no_mangle]
pub unsafe extern "C" fn gsp_sample_frame(
    stream: *mut GspStream,
    n: usize,
    out_u: *mut f64,
    out_v: *mut f64,
) -> GspStatus {
    if stream.is_null() || out_u.is_null() || out_v.is_null() {
        return GspStatus::NullPointer;
    }
    if n < 3 {
        return GspStatus::InvalidArgument;
    }
    let f = unsafe { &mut *stream }.inner.frame(n);
    unsafe {
        std::ptr::copy_nonoverlapping(f.u().as_ptr(), out_u, n);
        std::ptr::copy_nonoverlapping(f.v().as_ptr(), out_v, n);
    }
    GspStatus::Ok
}

/// Draws a frame and writes its polygon's edges interleaved as
/// (e1x, e1y, e2x, e2y, …) to `out_edges[0..2n]`.
///
/// # Safety
/// `stream` must be live; `out_edges` must point to 2n f64.
#[no_mangle]
pub unsafe extern "C" fn gsp_sample_polygon(
    stream: *mut GspStream,
    n: usize,
    out_edges: *mut f64,
) -> GspStatus {
    if stream.is_null() || out_edges.is_null() {
        return GspStatus::NullPointer;
    }
    if n < 3 {
        return GspStatus::InvalidArgument;
    }
    let poly = PolygonShape::from_frame(&unsafe { &mut *stream }.inner.frame(n));
    for (k, e) in poly.edges().iter().enumerate() {
        unsafe {
            *out_edges.add(2 * k) = e[0];
            *out_edges.add(2 * k + 1) = e[1];
        }
    }
    GspStatus::Ok
}

/// Sidelengths (a, b, c) = (1 − x², 1 − y², 1 − z²) of the triangle of a
/// unit vector `xyz`; rejects points off the sphere by more than 1e-9.
///
/// # Safety
/// `xyz` must point to 3 f64 and `out_abc` to 3 f64.
#[no_mangle]
pub unsafe extern "C" fn gsp_triangle_sides(
    xyz: *const f64,
    out_abc: *mut f64,
) -> GspStatus {
    if xyz.is_null() || out_abc.is_null() {
        return GspStatus::NullPointer;
    }
    let (x, y, z) = unsafe { (*xyz, *xyz.add(1), *xyz.add(2)) };
    let p = match grasspoly::triangle::SpherePoint::new(x, y, z) {
        Ok(p) => p,
        Err(_) => return GspStatus::InvalidArgument,
    };
    let t = TriangleShape::from_sphere(&p);
    unsafe {
        *out_abc = t.a();
        *out_abc.add(1) = t.b();
        *out_abc.add(2) = t.c();
    }
    GspStatus::Ok
}

/// Classification plus derived quantities of the triangle with sides
/// (a, b, c); the perimeter must equal 2 within 1e-12.
///
/// # Safety
/// `out` must point to a [`GspTriangleQuantities`].
#[no_mangle]
pub unsafe extern "C" fn gsp_triangle_quantities(
    a: f64,
    b: f64,
    c: f64,
    out: *mut GspTriangleQuantities,
) -> GspStatus {
    if out.is_null() {
        return GspStatus::NullPointer;
    }
    let shape = match TriangleShape::new(a, b, c) {
        Ok(s) => s,
        Err(_) => return GspStatus::InvalidArgument,
    };
    let q = TriangleQuantities::from_shape(&shape);
    let [ra, rb, rc] = q.exradii.unwrap_or([f64::NAN; 3]);
    unsafe {
        *out = GspTriangleQuantities {
            area: q.area,
            inradius: q.inradius,
            exradius_a: ra,
            exradius_b: rb,
            exradius_c: rc,
            circumcurvature: q.circumcurvature.unwrap_or(f64::NAN),
            classification: q.class.into(),
        };
    }
    GspStatus::Ok
}

/// Classification of the triangle with sides (a, b, c) alone.
///
/// # Safety
/// `out_class` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gsp_triangle_classify(
    a: f64,
    b: f64,
    c: f64,
    out_class: *mut GspTriangleClass,
) -> GspStatus {
    if out_class.is_null() {
        return GspStatus::NullPointer;
    }
    unsafe { *out_class = classify_sides(a, b, c).into() };
    GspStatus::Ok
}

/// Classifies a closed polygon given edges interleaved as (e1x, e1y, …).
/// Closure is required within 1e-10.
///
/// # Safety
/// `edges` must point to 2n f64; `out_class` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gsp_classify_polygon(
    edges: *const f64,
    n: usize,
    epsilon: f64,
    out_class: *mut GspPolygonClass,
) -> GspStatus {
    if edges.is_null() || out_class.is_null() {
        return GspStatus::NullPointer;
    }
    if n < 3 {
        return GspStatus::InvalidArgument;
    }
    let edge_vec: Vec<[f64; 2]> =
        (0..n).map(|k| unsafe { [*edges.add(2 * k), *edges.add(2 * k + 1)] }).collect();
    let poly = match PolygonShape::new(edge_vec) {
        Ok(p) => p,
        Err(_) => return GspStatus::InvalidArgument,
    };
    unsafe { *out_class = classify_polygon(&poly, epsilon).into() };
    GspStatus::Ok
}

/// Strict upper triangle of the Plücker matrix of the frame (u, v), written
/// row-major to `out_upper[0 .. n(n−1)/2]`. The columns must be orthonormal
/// within 1e-9.
///
/// # Safety
/// `u`, `v` must point to n f64; `out_upper` to n(n−1)/2 f64.
#[no_mangle]
pub unsafe extern "C" fn gsp_plucker_from_frame(
    n: usize,
    u: *const f64,
    v: *const f64,
    out_upper: *mut f64,
) -> GspStatus {
    if u.is_null() || v.is_null() || out_upper.is_null() {
        return GspStatus::NullPointer;
    }
    if n < 3 {
        return GspStatus::InvalidArgument;
    }
    let uv = unsafe { std::slice::from_raw_parts(u, n).to_vec() };
    let vv = unsafe { std::slice::from_raw_parts(v, n).to_vec() };
    let frame = match Frame::new(uv, vv) {
        Ok(f) => f,
        Err(_) => return GspStatus::InvalidArgument,
    };
    let p = PluckerMatrix::from_frame(&frame);
    unsafe { std::ptr::copy_nonoverlapping(p.upper().as_ptr(), out_upper, p.upper().len()) };
    GspStatus::Ok
}

/// Exact obtuse-triangle probability 3/2 − 3 ln 2 / π.
#[no_mangle]
pub extern "C" fn gsp_obtuse_probability_exact() -> f64 {
    grasspoly::triangle::obtuse_probability_exact()
}

/// Exact convex fraction 2/(n−1)! for n-gons.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gsp_convex_fraction_exact(n: usize, out: *mut f64) -> GspStatus {
    if out.is_null() {
        return GspStatus::NullPointer;
    }
    match convex_fraction_exact(n) {
        Ok(v) => {
            unsafe { *out = v };
            GspStatus::Ok
        }
        Err(_) => GspStatus::InvalidArgument,
    }
}

/// Number of sign chambers 2^{n−2}·(n−1)!; fails with Overflow past u64.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gsp_chamber_count(n: usize, out: *mut u64) -> GspStatus {
    if out.is_null() {
        return GspStatus::NullPointer;
    }
    if n < 3 {
        return GspStatus::InvalidArgument;
    }
    match grasspoly::hyperoctahedral::count_chambers(n).and_then(|c| u64::try_from(c).ok()) {
        Some(v) => {
            unsafe { *out = v };
            GspStatus::Ok
        }
        None => GspStatus::Overflow,
    }
}

fn string_out(text: String, out: *mut *mut c_char) -> GspStatus {
    match CString::new(text) {
        Ok(cstr) => {
            unsafe { *out = cstr.into_raw() };
            GspStatus::Ok
        }
        Err(_) => GspStatus::InvalidArgument,
    }
}

/// Runs a registered experiment and returns the reports as a JSON array.
/// `name` is one of obtuse, area, circumcurvature, convex-fraction,
/// quad-classes, cell-occupancy; `n` feeds convex-fraction (0 = default 4).
/// Free the string with [`gsp_string_free`].
///
/// # Safety
/// `name` must be a NUL-terminated string; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gsp_estimate_json(
    name: *const c_char,
    n: usize,
    n_samples: u64,
    seed: u64,
    stream_id: u64,
    workers: usize,
    out_json: *mut *mut c_char,
) -> GspStatus {
    if name.is_null() || out_json.is_null() {
        return GspStatus::NullPointer;
    }
    let name = match unsafe { CStr::from_ptr(name) }.to_str() {
        Ok(s) => s,
        Err(_) => return GspStatus::InvalidArgument,
    };
    let id = match ExperimentId::parse(name, if n == 0 { None } else { Some(n) }) {
        Ok(id) => id,
        Err(_) => return GspStatus::InvalidArgument,
    };
    match estimate(id, n_samples, &SampleStream::new(seed, stream_id), workers.max(1)) {
        Ok(reports) => {
            let json = serde_json::to_string(&reports).expect("serializable reports");
            string_out(json, out_json)
        }
        Err(_) => GspStatus::InvalidArgument,
    }
}

/// Runs an acceptance suite (all, triangles, quads, group, cells, algebra)
/// and returns the per-criterion results as JSON. Status Ok means the suite
/// ran; inspect the "passed" fields for outcomes.
///
/// # Safety
/// `suite` must be a NUL-terminated string; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gsp_verify_json(
    suite: *const c_char,
    seed: u64,
    out_json: *mut *mut c_char,
) -> GspStatus {
    if suite.is_null() || out_json.is_null() {
        return GspStatus::NullPointer;
    }
    let suite: Suite = match unsafe { CStr::from_ptr(suite) }.to_str() {
        Ok(s) => match s.parse() {
            Ok(suite) => suite,
            Err(_) => return GspStatus::InvalidArgument,
        },
        Err(_) => return GspStatus::InvalidArgument,
    };
    let results = run_suite(suite, seed);
    let json = serde_json::to_string(&results).expect("serializable results");
    string_out(json, out_json)
}

/// Releases a string returned by the *_json functions. NULL is a no-op.
///
/// # Safety
/// `s` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gsp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
