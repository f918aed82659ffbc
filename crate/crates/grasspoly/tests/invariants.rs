//! Cross-module invariants: measure symmetries of the samplers, geometric
//! consistency of the triangle constructions, wall semantics of the sign
//! cells, and the frozen orbit-trace regression.

// The golden table keeps full f64 precision on purpose, and its theta
// column happens to hold multiples of pi/8 as literals.
#![allow(clippy::excessive_precision, clippy::approx_constant)]

use std::collections::HashMap;

use grasspoly::grassmann::{Frame, PluckerMatrix, ProjectionMatrix, SignSignature, SignatureMode};
use grasspoly::hyperoctahedral::SignedPermutation;
use grasspoly::polygon::{
    classify_polygon, is_positive_grassmannian, is_semicircular_lift, PolygonClass, PolygonShape,
};
use grasspoly::sampling::SampleStream;
use grasspoly::triangle::{
    canonical_triangle, classify_sides, right_boundary_curve, rotation_orbit_trace, SpherePoint,
    TriangleClass, TriangleShape,
};

fn dist(p: [f64; 2], q: [f64; 2]) -> f64 {
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
}

/// Orbit of the equilateral point about the axis ∝ (−1, 1, −√2), 16 steps;
/// columns are (theta, Ax, Ay, Bx, By, Cx, Cy). Regenerate with
/// `grasspoly trace --steps 16 --format csv`.
const GOLDEN_ORBIT: [[f64; 7]; 16] = [
    [0.00000000000000000e0, -3.33333333333333259e-1, 0.0, 3.33333333333333259e-1, 0.0, 1.04083408558608456e-17, -5.77350269189626175e-1],
    [3.92699081698724139e-1, -4.44077016607945907e-1, 0.0, 4.44077016607945907e-1, 0.0, 2.76903661331830808e-1, -2.89994645932691697e-1],
    [7.85398163397448279e-1, -4.96425565098878974e-1, 0.0, 4.96425565098878974e-1, 0.0, 4.32922573437902802e-1, -4.31886890107138419e-2],
    [1.17809724509617242e0, -4.90987693996176700e-1, 0.0, 4.90987693996176700e-1, 0.0, 5.08762012644764949e-1, -4.20973819650493231e-3],
    [1.57079632679489656e0, -4.58333333333333315e-1, 0.0, 4.58333333333333315e-1, 0.0, 4.17835825246596348e-1, -1.83702358378517366e-1],
    [1.96349540849362070e0, -4.36917135859267058e-1, 0.0, 4.36917135859267058e-1, 0.0, 7.77737383861497045e-2, -3.51793692873088260e-1],
    [2.35619449019234484e0, -4.47610028629970236e-1, 0.0, 4.47610028629970236e-1, 0.0, -3.20998552484948574e-1, -2.63433291435443251e-1],
    [2.74889357189106898e0, -4.80205808495402453e-1, 0.0, 4.80205808495402453e-1, 0.0, -5.02606852739408749e-1, -5.07419812230258255e-2],
    [3.14159265358979312e0, -5.00000000000000000e-1, 0.0, 5.00000000000000000e-1, 0.0, -4.71404520791031678e-1, 3.70074341541718703e-17],
    [3.53429173528851726e0, -4.70495794571463843e-1, 0.0, 4.70495794571463843e-1, 0.0, -3.42719833196393320e-1, -1.85170517438500326e-1],
    [3.92699081698724139e0, -3.78574434901121137e-1, 0.0, 3.78574434901121137e-1, 0.0, -1.20195209472028261e-1, -4.83493427224625905e-1],
    [4.31968989868596509e0, -2.46808421886596241e-1, 0.0, 2.46808421886596241e-1, 0.0, 2.82550329963276059e-1, -6.59636894598745527e-1],
    [4.71238898038468967e0, -1.24999999999999944e-1, 0.0, 1.24999999999999944e-1, 0.0, 8.24957911384306186e-1, -2.88675134594813698e-1],
    [5.10508806208341426e0, -6.51767196279897654e-2, 0.0, 6.51767196279897654e-2, 0.0, 3.29682633290239668e-1, 8.72630659360401406e-1],
    [5.49778714378213795e0, -9.40566380366963384e-2, 0.0, 9.40566380366963384e-2, 0.0, -9.00036353172234516e-1, 1.02727546403280343e-1],
    [5.89048622548086165e0, -1.98664742288491125e-1, 0.0, 1.98664742288491125e-1, 0.0, -4.80022677417919430e-1, -6.21619768294531805e-1],
];

#[test]
fn golden_orbit_trace_of_equilateral_point() {
    let r = 1.0 / 3f64.sqrt();
    let p = SpherePoint::new(r, r, r).unwrap();
    let norm = 2.0;
    let axis = [-1.0 / norm, 1.0 / norm, -2f64.sqrt() / norm];
    let trace = rotation_orbit_trace(&p, axis, 16).unwrap();
    assert_eq!(trace.len(), 16);
    for (sample, golden) in trace.iter().zip(&GOLDEN_ORBIT) {
        assert!((sample.theta - golden[0]).abs() < 1e-12);
        let v = sample.vertices.expect("orbit avoids the degenerate locus");
        for (k, vertex) in v.iter().enumerate() {
            assert!(
                dist(*vertex, [golden[1 + 2 * k], golden[2 + 2 * k]]) < 1e-9,
                "vertex {k} at theta = {}",
                golden[0]
            );
        }
    }
}

#[test]
fn orbit_about_z_axis_traces_the_ellipse() {
    let z: f64 = 0.62;
    let p = SpherePoint::new((1.0 - z * z).sqrt(), 0.0, z).unwrap();
    let trace = rotation_orbit_trace(&p, [0.0, 0.0, 1.0], 64).unwrap();
    for sample in &trace {
        let v = sample.vertices.unwrap();
        let expected = grasspoly::triangle::vertex_c_of_orbit(z, sample.theta).unwrap();
        assert!(dist(v[2], expected) < 1e-10);
        // A and B stay pinned at ∓(1−z²)/2.
        assert!((v[0][0] + (1.0 - z * z) / 2.0).abs() < 1e-12);
        assert!((v[1][0] - (1.0 - z * z) / 2.0).abs() < 1e-12);
    }
}

#[test]
fn canonical_triangle_reproduces_sidelengths() {
    let mut s = SampleStream::new(101, 0);
    let mut checked = 0;
    while checked < 10_000 {
        let p = s.sphere();
        if (1.0 - p.z() * p.z()).abs() <= 1e-3 {
            continue;
        }
        let t = TriangleShape::from_sphere(&p);
        let [a, b, c] = canonical_triangle(&p).unwrap();
        assert!((dist(b, c) - t.a()).abs() < 1e-9);
        assert!((dist(c, a) - t.b()).abs() < 1e-9);
        assert!((dist(a, b) - t.c()).abs() < 1e-9);
        checked += 1;
    }
}

#[test]
fn right_boundary_grid_classifies_right() {
    for k in 1..1_000 {
        let y = k as f64 / 1_000.0;
        for flip in [[false; 3], [true, false, true], [false, true, false]] {
            let p = right_boundary_curve(y, flip).unwrap();
            let t = TriangleShape::from_sphere(&p);
            assert_eq!(
                classify_sides(t.a(), t.b(), t.c()),
                TriangleClass::Right,
                "y = {y}, flip = {flip:?}"
            );
        }
    }
}

#[test]
fn sphere_and_frame_samplers_agree_at_n3() {
    // |Δ23|, |Δ13|, |Δ12| of a random 2-plane in R³ are the coordinates of a
    // uniform normal vector, so they match |x|, |y|, |z| in distribution.
    let n_points = 300_000;
    let mut sphere = SampleStream::new(41, 0);
    let mut frames = SampleStream::new(41, 1);
    let mut a: Vec<f64> = Vec::with_capacity(3 * n_points);
    let mut b: Vec<f64> = Vec::with_capacity(3 * n_points);
    for _ in 0..n_points {
        let p = sphere.sphere();
        a.extend_from_slice(&[p.x().abs(), p.y().abs(), p.z().abs()]);
        let f = frames.frame(3);
        let d = PluckerMatrix::from_frame(&f);
        b.extend_from_slice(&[d.get(1, 2).abs(), d.get(0, 2).abs(), d.get(0, 1).abs()]);
    }
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    // Two-sample Kolmogorov-Smirnov distance by merge walk.
    let (mut i, mut j) = (0usize, 0usize);
    let mut ks: f64 = 0.0;
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        ks = ks.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    assert!(ks < 0.005, "two-sample KS = {ks}");
}

#[test]
fn orthogonal_action_pushes_cell_occupancy_forward() {
    // A fixed permutation Q relabels the cells; occupancy of Q-transformed
    // fresh samples must match the Q-pushforward of plain occupancy within
    // 3σ per cell.
    let q = SignedPermutation::from_images(vec![2, 3, 4, 1]).unwrap();
    let n = 200_000u64;
    let mut plain = SampleStream::new(57, 0);
    let mut transformed = SampleStream::new(57, 1);
    let mut count_plain: HashMap<SignSignature, i64> = HashMap::new();
    let mut count_pushed: HashMap<SignSignature, i64> = HashMap::new();
    for _ in 0..n {
        let sig = SignSignature::of_frame(&plain.frame(4), 0.0);
        *count_plain.entry(q.act_on_signature(&sig).unwrap()).or_insert(0) += 1;
        let g = q.act_on_frame(&transformed.frame(4)).unwrap();
        *count_pushed.entry(SignSignature::of_frame(&g, 0.0)).or_insert(0) += 1;
    }
    for (sig, &expected) in &count_plain {
        let got = *count_pushed.get(sig).unwrap_or(&0);
        let p_hat = (expected + got) as f64 / (2.0 * n as f64);
        let sigma = (2.0 * n as f64 * p_hat * (1.0 - p_hat)).sqrt();
        assert!(
            ((expected - got).abs() as f64) <= 3.0 * sigma,
            "cell with {expected} vs {got} (3 sigma = {:.1})",
            3.0 * sigma
        );
    }
}

#[test]
fn edge_permutation_leaves_class_frequencies_invariant() {
    let n = 200_000u64;
    let mut s = SampleStream::new(58, 0);
    let perm = [2usize, 0, 3, 1];
    let mut counts = [0u64; 3];
    for _ in 0..n {
        let poly = PolygonShape::from_frame(&s.frame(4));
        let permuted = poly.permuted(&perm).unwrap();
        match classify_polygon(&permuted, 0.0) {
            PolygonClass::Convex => counts[0] += 1,
            PolygonClass::Reflex => counts[1] += 1,
            PolygonClass::SelfIntersecting => counts[2] += 1,
            PolygonClass::Degenerate => {}
        }
    }
    for (k, &c) in counts.iter().enumerate() {
        let p_hat = c as f64 / n as f64;
        let se = (p_hat * (1.0 - p_hat) / n as f64).sqrt();
        assert!(
            (p_hat - 1.0 / 3.0).abs() < 3.0 * se,
            "class {k}: {p_hat} vs 1/3"
        );
    }
}

#[test]
fn cell_frequencies_are_near_uniform() {
    let n = 1_000_000u64;
    let mut s = SampleStream::new(59, 0);
    let mut counts: HashMap<SignSignature, u64> = HashMap::new();
    for _ in 0..n {
        let sig = SignSignature::of_frame(&s.frame(4), 0.0);
        *counts.entry(sig).or_insert(0) += 1;
    }
    assert_eq!(counts.len(), 96);
    for &c in counts.values() {
        let freq = c as f64 / n as f64;
        assert!((freq - 1.0 / 96.0).abs() < 0.002, "freq = {freq}");
    }
}

#[test]
fn base_cell_acceptance_rate_is_one_in_96() {
    let base = SignSignature::base_cell_n4();
    let mut s = SampleStream::new(60, 0);
    let successes = 1_000u64;
    for _ in 0..successes {
        s.in_signature(4, &base, SignatureMode::Cell, 1_000_000).unwrap();
    }
    let rate = successes as f64 / s.counter() as f64;
    let relative = rate * 96.0;
    assert!(
        (relative - 1.0).abs() < 0.2,
        "acceptance rate {rate:.5} is {relative:.3}x the expected 1/96"
    );
}

#[test]
fn convex_fraction_n6_matches_formula() {
    let n = 1_000_000u64;
    let mut s = SampleStream::new(61, 0);
    let mut convex = 0u64;
    for _ in 0..n {
        let poly = PolygonShape::from_frame(&s.frame(6));
        if classify_polygon(&poly, 0.0) == PolygonClass::Convex {
            convex += 1;
        }
    }
    let p_hat = convex as f64 / n as f64;
    let exact = 2.0 / 120.0;
    let se = (p_hat * (1.0 - p_hat) / n as f64).sqrt();
    assert!(
        (p_hat - exact).abs() < 3.0 * se,
        "p = {p_hat} vs {exact} (3se = {:.2e})",
        3.0 * se
    );
}

#[test]
fn positive_grassmannian_frames_give_convex_polygons() {
    let mut s = SampleStream::new(62, 0);
    let mut seen = 0u64;
    for _ in 0..100_000 {
        let f = s.frame(4);
        if let Ok(true) = is_positive_grassmannian(&f) {
            seen += 1;
            assert_eq!(
                classify_polygon(&PolygonShape::from_frame(&f), 0.0),
                PolygonClass::Convex
            );
        }
    }
    // The positive chamber is 1 of 24, so expect ~4167 hits per 100k.
    assert!(seen > 3_800, "only {seen} positive frames in 100k samples");
}

#[test]
fn semicircular_lift_is_basis_independent() {
    let mut s = SampleStream::new(63, 0);
    for k in 0..200 {
        let f = s.frame(5);
        let base = is_semicircular_lift(&f).unwrap();
        let phi = 0.37 * k as f64;
        assert_eq!(base, is_semicircular_lift(&f.rotate_in_plane(phi)).unwrap());
    }
}

/// Builds an orthonormal 4×2 frame with rows at the given directions, when
/// the doubled directions admit a positive null combination; weights are
/// solved from the two closure equations.
fn frame_from_angles(angles: [f64; 4], w2: f64, w3: f64) -> Frame {
    let phi: Vec<f64> = angles.iter().map(|t| 2.0 * t).collect();
    // Σ wᵢ e^{iφᵢ} = 0 with w2, w3 given: a 2×2 solve for (w1, w4).
    let rc = -(w2 * phi[1].cos() + w3 * phi[2].cos());
    let rs = -(w2 * phi[1].sin() + w3 * phi[2].sin());
    let det = (phi[3] - phi[0]).sin();
    let w1 = (rc * phi[3].sin() - rs * phi[3].cos()) / det;
    let w4 = (phi[0].cos() * rs - phi[0].sin() * rc) / det;
    let mut w = [w1, w2, w3, w4];
    let total: f64 = w.iter().sum();
    for x in &mut w {
        *x *= 2.0 / total;
        assert!(*x > 0.0, "weights must stay positive: {w:?}");
    }
    let u = (0..4).map(|i| w[i].sqrt() * angles[i].cos()).collect();
    let v = (0..4).map(|i| w[i].sqrt() * angles[i].sin()).collect();
    Frame::new(u, v).unwrap()
}

#[test]
fn explicit_base_cell_frame_has_the_reference_signature() {
    // Rows at 0°, 30°, 80°, 110°: ascending within a half circle with
    // θ₃−θ₁ < 90° and θ₄−θ₂ < 90°, which pins the base sign cell.
    let f = frame_from_angles(
        [0.0, 30f64.to_radians(), 80f64.to_radians(), 110f64.to_radians()],
        0.3,
        0.6,
    );
    let sig = SignSignature::of_frame(&f, 0.0);
    assert_eq!(sig, SignSignature::base_cell_n4());
    // The two sign matrices entry by entry: Plücker all +1 above the
    // diagonal, projection +1 everywhere except (1, 4).
    for i in 0..4 {
        for j in i + 1..4 {
            assert_eq!(sig.plucker_sign(i, j), 1);
        }
    }
    for i in 0..4 {
        for j in 0..4 {
            let expected = if (i, j) == (0, 3) || (i, j) == (3, 0) { -1 } else { 1 };
            assert_eq!(sig.projection_sign(i, j), expected, "entry ({i}, {j})");
        }
    }
    assert!(is_semicircular_lift(&f).unwrap());
    assert!(is_positive_grassmannian(&f).unwrap());
}

#[test]
fn plucker_wall_means_parallel_edges() {
    // Rows 1 and 2 collinear: Δ₁₂ = 0 and the squared edges point the same
    // way.
    let f = frame_from_angles(
        [20f64.to_radians(), 20f64.to_radians(), 87.5f64.to_radians(), 132.5f64.to_radians()],
        0.4,
        0.5,
    );
    let d = PluckerMatrix::from_frame(&f);
    assert!(d.get(0, 1).abs() < 1e-12);
    let poly = PolygonShape::from_frame(&f);
    let (e0, e1) = (poly.edges()[0], poly.edges()[1]);
    let cross = e0[0] * e1[1] - e0[1] * e1[0];
    let dot = e0[0] * e1[0] + e0[1] * e1[1];
    let norm = |e: [f64; 2]| (e[0] * e[0] + e[1] * e[1]).sqrt();
    assert!(cross.abs() / (norm(e0) * norm(e1)) < 1e-10);
    assert!(dot > 0.0, "edges on a Plücker wall point the same way");
}

#[test]
fn projection_wall_means_antiparallel_edges() {
    // Rows 1 and 2 perpendicular: (AAᵀ)₁₂ = 0 and the squared edges oppose.
    let quarter = std::f64::consts::FRAC_PI_2;
    let angles = [0.1, 0.1 + quarter, 0.1 + quarter / 2.0, 0.1 + 1.5 * quarter];
    let w = (0.5f64).sqrt();
    let u: Vec<f64> = angles.iter().map(|t| w * t.cos()).collect();
    let v: Vec<f64> = angles.iter().map(|t| w * t.sin()).collect();
    let f = Frame::new(u, v).unwrap();
    let m = ProjectionMatrix::from_frame(&f);
    assert!(m.get(0, 1).abs() < 1e-12);
    let poly = PolygonShape::from_frame(&f);
    let (e0, e1) = (poly.edges()[0], poly.edges()[1]);
    let cross = e0[0] * e1[1] - e0[1] * e1[0];
    let dot = e0[0] * e1[0] + e0[1] * e1[1];
    let norm = |e: [f64; 2]| (e[0] * e[0] + e[1] * e[1]).sqrt();
    assert!(cross.abs() / (norm(e0) * norm(e1)) < 1e-10);
    assert!(dot < 0.0, "edges on a projection wall point opposite ways");
}

#[test]
fn frame_orthonormality_at_scale() {
    let mut s = SampleStream::new(65, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..100_000 {
        let f = s.frame(10);
        let nu: f64 = f.u().iter().map(|x| x * x).sum::<f64>();
        let nv: f64 = f.v().iter().map(|x| x * x).sum::<f64>();
        let uv: f64 = f.u().iter().zip(f.v()).map(|(a, b)| a * b).sum();
        worst = worst.max((nu - 1.0).abs()).max((nv - 1.0).abs()).max(uv.abs());
    }
    assert!(worst < 1e-12, "worst residual {worst:.2e}");
}

#[test]
fn frame_polygon_vs_triangle_side_mean() {
    // E[a] = 2/3 for the first side of a triangle sampled through frames.
    let n = 200_000;
    let mut s = SampleStream::new(64, 0);
    let mut sum = 0.0;
    for _ in 0..n {
        let poly = PolygonShape::from_frame(&s.frame(3));
        let e = poly.edges()[0];
        sum += (e[0] * e[0] + e[1] * e[1]).sqrt();
    }
    let mean = sum / n as f64;
    assert!((mean - 2.0 / 3.0).abs() < 0.003, "mean = {mean}");
}
