//! Planar polygons as edge lists: the squaring map from frames, convexity
//! and self-intersection classification by direct geometry, semicircular
//! lifts, and membership in the positive chamber.
//!
//! The squaring map sends frame row (uᵢ, vᵢ) to the edge (uᵢ + vᵢ·i)², so a
//! frame's polygon is closed with perimeter 2 exactly when the columns are
//! orthonormal.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grassmann::{upper_pairs, Frame, PluckerMatrix};

/// Closure tolerance on Σ eᵢ.
pub const CLOSURE_TOL: f64 = 1e-10;
/// Orientation-predicate tolerance for segment intersection tests.
pub const ORIENT_TOL: f64 = 1e-12;
/// Non-transversal (touching) intersections within this margin are degenerate.
pub const TOUCH_TOL: f64 = 1e-10;
/// Total turning must be ±2π within this tolerance for a convex verdict.
pub const TURNING_TOL: f64 = 1e-6;
/// Plücker entries smaller than this make positivity indeterminate.
pub const POSITIVITY_BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum PolygonError {
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("degenerate lift: frame row {row} has near-zero length")]
    DegenerateLift { row: usize },
    #[error("positivity indeterminate: |Δ({i}, {j})| < {POSITIVITY_BOUNDARY_TOL:e}")]
    BoundaryIndeterminate { i: usize, j: usize },
    #[error("domain error: {0}")]
    Domain(String),
}

/// A closed polygon, stored as its edge vectors with the first vertex at the
/// origin. Frame-derived polygons additionally have perimeter 2.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "PolygonRepr", into = "PolygonRepr")]
pub struct PolygonShape {
    edges: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PolygonRepr {
    edges: Vec<[f64; 2]>,
}

impl TryFrom<PolygonRepr> for PolygonShape {
    type Error = PolygonError;
    fn try_from(r: PolygonRepr) -> Result<Self, Self::Error> {
        PolygonShape::new(r.edges)
    }
}

impl From<PolygonShape> for PolygonRepr {
    fn from(p: PolygonShape) -> Self {
        PolygonRepr { edges: p.edges }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolygonClass {
    Convex,
    Reflex,
    SelfIntersecting,
    Degenerate,
}

impl PolygonClass {
    pub fn label(&self) -> &'static str {
        match self {
            PolygonClass::Convex => "convex",
            PolygonClass::Reflex => "reflex",
            PolygonClass::SelfIntersecting => "self_intersecting",
            PolygonClass::Degenerate => "degenerate",
        }
    }
}

impl PolygonShape {
    /// Validates n ≥ 3 and closure within [`CLOSURE_TOL`].
    pub fn new(edges: Vec<[f64; 2]>) -> Result<PolygonShape, PolygonError> {
        if edges.len() < 3 {
            return Err(PolygonError::InvalidPolygon(format!(
                "need at least 3 edges, got {}",
                edges.len()
            )));
        }
        let sum = edges.iter().fold([0.0, 0.0], |s, e| [s[0] + e[0], s[1] + e[1]]);
        let gap = (sum[0] * sum[0] + sum[1] * sum[1]).sqrt();
        if gap > CLOSURE_TOL {
            return Err(PolygonError::InvalidPolygon(format!(
                "edges do not close: |Σ eᵢ| = {gap:.3e}"
            )));
        }
        Ok(PolygonShape { edges })
    }

    /// The squaring map: eᵢ = (uᵢ² − vᵢ², 2 uᵢ vᵢ).
    pub fn from_frame(f: &Frame) -> PolygonShape {
        let edges = (0..f.n())
            .map(|i| {
                let (u, v) = f.row(i);
                [u * u - v * v, 2.0 * u * v]
            })
            .collect();
        PolygonShape { edges }
    }

    pub fn n(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[[f64; 2]] {
        &self.edges
    }

    pub fn perimeter(&self) -> f64 {
        self.edges.iter().map(|e| (e[0] * e[0] + e[1] * e[1]).sqrt()).sum()
    }

    /// Vertices v₀ = 0, vₖ = Σ_{i<k} eᵢ.
    pub fn vertices(&self) -> Vec<[f64; 2]> {
        let mut out = Vec::with_capacity(self.edges.len());
        let mut acc = [0.0, 0.0];
        for e in &self.edges {
            out.push(acc);
            acc = [acc[0] + e[0], acc[1] + e[1]];
        }
        out
    }

    /// Indices of edges shorter than epsilon (inclusive, so exact zeros are
    /// flagged even at epsilon 0).
    pub fn zero_edges(&self, epsilon: f64) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| (e[0] * e[0] + e[1] * e[1]).sqrt() <= epsilon)
            .map(|(i, _)| i)
            .collect()
    }

    /// Copy with every edge rotated by `phi`.
    pub fn rotated(&self, phi: f64) -> PolygonShape {
        let (s, c) = phi.sin_cos();
        let edges = self
            .edges
            .iter()
            .map(|e| [c * e[0] - s * e[1], s * e[0] + c * e[1]])
            .collect();
        PolygonShape { edges }
    }

    /// Copy with edges reflected across the x-axis.
    pub fn mirrored(&self) -> PolygonShape {
        let edges = self.edges.iter().map(|e| [e[0], -e[1]]).collect();
        PolygonShape { edges }
    }

    /// Copy with edges reordered by `perm`: output edge k is input edge `perm\[k\]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<PolygonShape, PolygonError> {
        if perm.len() != self.edges.len() {
            return Err(PolygonError::Domain("permutation length mismatch".into()));
        }
        let edges = perm.iter().map(|&i| self.edges[i]).collect();
        Ok(PolygonShape { edges })
    }

    pub fn classify(&self, epsilon: f64) -> PolygonClass {
        classify_polygon(self, epsilon)
    }

    /// Self-contained SVG polyline in a fixed 512×512 viewport, autoscaled.
    pub fn to_svg(&self) -> String {
        const VIEW: f64 = 512.0;
        const MARGIN: f64 = 24.0;
        let verts = self.vertices();
        let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in &verts {
            min_x = min_x.min(v[0]);
            max_x = max_x.max(v[0]);
            min_y = min_y.min(v[1]);
            max_y = max_y.max(v[1]);
        }
        let span = (max_x - min_x).max(max_y - min_y).max(1e-12);
        let scale = (VIEW - 2.0 * MARGIN) / span;
        let cx = (min_x + max_x) / 2.0;
        let cy = (min_y + max_y) / 2.0;
        let map = |v: &[f64; 2]| {
            // SVG's y axis points down.
            let x = VIEW / 2.0 + (v[0] - cx) * scale;
            let y = VIEW / 2.0 - (v[1] - cy) * scale;
            format!("{x:.3},{y:.3}")
        };
        let points: Vec<String> = verts.iter().map(map).collect();
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"512\" height=\"512\" \
             viewBox=\"0 0 512 512\">\n  <polygon points=\"{}\" fill=\"none\" \
             stroke=\"black\" stroke-width=\"2\"/>\n</svg>\n",
            points.join(" ")
        )
    }
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Classifies a closed polygon as convex, reflex (embedded but not convex),
/// self-intersecting, or degenerate.
///
/// Convex means all turn directions agree and the total turning is ±2π.
/// Edges shorter than epsilon, adjacent edges parallel or antiparallel
/// within epsilon (as an angle tolerance), or non-transversal touching
/// between non-adjacent edges all count as degenerate. Estimator paths pass
/// epsilon = 0 since sampled polygons miss these walls almost surely.
pub fn classify_polygon(poly: &PolygonShape, epsilon: f64) -> PolygonClass {
    let n = poly.n();
    let edges = poly.edges();

    let lengths: Vec<f64> = edges.iter().map(|e| (e[0] * e[0] + e[1] * e[1]).sqrt()).collect();
    if lengths.iter().any(|&l| l <= epsilon || l == 0.0) {
        return PolygonClass::Degenerate;
    }

    // Signed turn at each vertex between consecutive edges (cyclic).
    let mut crosses = Vec::with_capacity(n);
    let mut turning = 0.0;
    for i in 0..n {
        let j = (i + 1) % n;
        let c = cross(edges[i], edges[j]);
        let d = dot2(edges[i], edges[j]);
        if c.abs() <= epsilon * lengths[i] * lengths[j] && (epsilon > 0.0 || c == 0.0) {
            return PolygonClass::Degenerate;
        }
        crosses.push(c);
        turning += c.atan2(d);
    }

    let all_positive = crosses.iter().all(|&c| c > 0.0);
    let all_negative = crosses.iter().all(|&c| c < 0.0);
    if (all_positive || all_negative)
        && (turning.abs() - 2.0 * std::f64::consts::PI).abs() < TURNING_TOL
    {
        return PolygonClass::Convex;
    }

    match self_intersection_scan(poly) {
        Intersection::Touching => PolygonClass::Degenerate,
        Intersection::Crossing => PolygonClass::SelfIntersecting,
        Intersection::None => PolygonClass::Reflex,
    }
}

enum Intersection {
    None,
    Touching,
    Crossing,
}

/// O(n²) proper-intersection scan over non-adjacent closed segments.
fn self_intersection_scan(poly: &PolygonShape) -> Intersection {
    let n = poly.n();
    let verts = poly.vertices();
    let seg = |i: usize| -> ([f64; 2], [f64; 2]) {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        (a, b)
    };
    let orient = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| -> f64 {
        cross([b[0] - a[0], b[1] - a[1]], [c[0] - a[0], c[1] - a[1]])
    };

    let mut touching = false;
    let mut crossing = false;
    for i in 0..n {
        for j in i + 1..n {
            // Skip segments sharing a vertex, including the (0, n−1) wrap.
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (a, b) = seg(i);
            let (c, d) = seg(j);
            let o1 = orient(a, b, c);
            let o2 = orient(a, b, d);
            let o3 = orient(c, d, a);
            let o4 = orient(c, d, b);
            if o1 * o2 < -ORIENT_TOL && o3 * o4 < -ORIENT_TOL {
                crossing = true;
                continue;
            }
            // A near-zero orientation with bounding-box overlap is a touch.
            let near = [(o1, c), (o2, d), (o3, a), (o4, b)];
            for (o, p) in near {
                if o.abs() <= TOUCH_TOL && in_box(p, a, b, TOUCH_TOL) && in_box(p, c, d, TOUCH_TOL)
                {
                    touching = true;
                }
            }
        }
    }
    if touching {
        Intersection::Touching
    } else if crossing {
        Intersection::Crossing
    } else {
        Intersection::None
    }
}

fn in_box(p: [f64; 2], a: [f64; 2], b: [f64; 2], tol: f64) -> bool {
    let (lo_x, hi_x) = if a[0] <= b[0] { (a[0], b[0]) } else { (b[0], a[0]) };
    let (lo_y, hi_y) = if a[1] <= b[1] { (a[1], b[1]) } else { (b[1], a[1]) };
    p[0] >= lo_x - tol && p[0] <= hi_x + tol && p[1] >= lo_y - tol && p[1] <= hi_y + tol
}

/// Result of checking that rotating a frame in its plane by φ rotates its
/// polygon by 2φ.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RotationCheck {
    pub phi: f64,
    pub max_vertex_deviation: f64,
}

/// Compares the polygon of the φ-rotated frame against the original polygon
/// rotated by 2φ, vertex by vertex.
pub fn in_plane_rotation_check(frame: &Frame, phi: f64) -> RotationCheck {
    let rotated_frame_poly = PolygonShape::from_frame(&frame.rotate_in_plane(phi));
    let rotated_poly = PolygonShape::from_frame(frame).rotated(2.0 * phi);
    let a = rotated_frame_poly.vertices();
    let b = rotated_poly.vertices();
    let max_vertex_deviation = a
        .iter()
        .zip(&b)
        .map(|(p, q)| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt())
        .fold(0.0, f64::max);
    RotationCheck { phi, max_vertex_deviation }
}

/// True when every row direction lies in the counterclockwise half-circle
/// [0, π) anchored at row 1's direction.
pub fn is_semicircular_lift(frame: &Frame) -> Result<bool, PolygonError> {
    let n = frame.n();
    for i in 0..n {
        let (u, v) = frame.row(i);
        if (u * u + v * v).sqrt() <= 1e-12 {
            return Err(PolygonError::DegenerateLift { row: i });
        }
    }
    let first = frame.row(0);
    let a0 = [first.0, first.1];
    for i in 1..n {
        let (u, v) = frame.row(i);
        let ang = cross(a0, [u, v]).atan2(dot2(a0, [u, v]));
        if !(0.0..std::f64::consts::PI).contains(&ang) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True when the upper-triangle Plücker coordinates all share one strict
/// sign; either orientation is accepted. Entries within
/// [`POSITIVITY_BOUNDARY_TOL`] of zero make the answer indeterminate.
pub fn is_positive_grassmannian(frame: &Frame) -> Result<bool, PolygonError> {
    let p = PluckerMatrix::from_frame(frame);
    let mut signs = (true, true);
    for (i, j) in upper_pairs(frame.n()) {
        let d = p.get(i, j);
        if d.abs() < POSITIVITY_BOUNDARY_TOL {
            return Err(PolygonError::BoundaryIndeterminate { i, j });
        }
        if d < 0.0 {
            signs.0 = false;
        } else {
            signs.1 = false;
        }
    }
    Ok(signs.0 || signs.1)
}

/// Exact fraction of convex polygons among n-gons: 2/(n−1)!.
pub fn convex_fraction_exact(n: usize) -> Result<f64, PolygonError> {
    if n < 3 {
        return Err(PolygonError::Domain(format!("n = {n} < 3")));
    }
    let mut fact = 1.0;
    for k in 2..n {
        fact *= k as f64;
    }
    Ok(2.0 / fact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::SampleStream;

    fn square() -> PolygonShape {
        PolygonShape::new(vec![[0.5, 0.0], [0.0, 0.5], [-0.5, 0.0], [0.0, -0.5]]).unwrap()
    }

    #[test]
    fn frame_polygon_closes_with_perimeter_two() {
        let mut s = SampleStream::new(9, 0);
        for _ in 0..100 {
            let poly = PolygonShape::from_frame(&s.frame(6));
            let sum = poly.edges().iter().fold([0.0, 0.0], |acc, e| {
                [acc[0] + e[0], acc[1] + e[1]]
            });
            assert!(sum[0].abs() < 1e-12 && sum[1].abs() < 1e-12);
            assert!((poly.perimeter() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn nonclosed_input_is_rejected() {
        let err = PolygonShape::new(vec![[1.0, 0.0], [0.0, 1.0], [-0.5, -0.5]]);
        assert!(matches!(err, Err(PolygonError::InvalidPolygon(_))));
    }

    #[test]
    fn n3_frame_polygon_matches_sphere_sides() {
        // Complete p to an orthonormal basis; the frame rows square to the
        // triangle's edges, so |e_i| are the sphere-point sidelengths.
        let p = crate::triangle::SpherePoint::new(0.6, 0.64, 0.48).unwrap();
        let t = crate::triangle::canonical_triangle(&p).unwrap();
        let _ = t; // canonical triangle exists; build the frame directly
        let (x, y, z) = (p.x(), p.y(), p.z());
        let denom = (1.0 - z * z).sqrt();
        let u = vec![x * z / denom, y * z / denom, -(x * x + y * y) / denom];
        let v = vec![-y / denom, x / denom, 0.0];
        let f = Frame::new(u, v).unwrap();
        let poly = PolygonShape::from_frame(&f);
        let lens: Vec<f64> = poly
            .edges()
            .iter()
            .map(|e| (e[0] * e[0] + e[1] * e[1]).sqrt())
            .collect();
        let t = crate::triangle::TriangleShape::from_sphere(&p);
        assert!((lens[0] - t.a()).abs() < 1e-12);
        assert!((lens[1] - t.b()).abs() < 1e-12);
        assert!((lens[2] - t.c()).abs() < 1e-12);
    }

    #[test]
    fn square_is_convex() {
        assert_eq!(square().classify(0.0), PolygonClass::Convex);
    }

    #[test]
    fn crossing_quadrilateral_is_self_intersecting() {
        let raw = [[0.5, 0.0], [-0.5, 0.4], [0.5, 0.1], [-0.5, -0.5]];
        let perimeter: f64 = raw
            .iter()
            .map(|e: &[f64; 2]| (e[0] * e[0] + e[1] * e[1]).sqrt())
            .sum();
        let edges: Vec<[f64; 2]> =
            raw.iter().map(|e| [2.0 * e[0] / perimeter, 2.0 * e[1] / perimeter]).collect();
        let poly = PolygonShape::new(edges).unwrap();
        assert_eq!(poly.classify(0.0), PolygonClass::SelfIntersecting);
    }

    #[test]
    fn rounded_flag_mean_quadrilateral_is_convex() {
        // Edges rounded to two decimals; nudged to close exactly.
        let mut edges = vec![[0.33, -0.59], [-0.29, -0.13], [-0.30, 0.11], [0.26, 0.62]];
        let sum = edges.iter().fold([0.0, 0.0], |s, e| [s[0] + e[0], s[1] + e[1]]);
        for e in &mut edges {
            e[0] -= sum[0] / 4.0;
            e[1] -= sum[1] / 4.0;
        }
        let poly = PolygonShape::new(edges).unwrap();
        assert_eq!(poly.classify(0.0), PolygonClass::Convex);
    }

    #[test]
    fn antiparallel_adjacent_edges_are_degenerate() {
        let poly =
            PolygonShape::new(vec![[0.5, 0.0], [-0.5, 0.0], [0.25, 0.25], [-0.25, -0.25]])
                .unwrap();
        assert_eq!(poly.classify(0.0), PolygonClass::Degenerate);
    }

    #[test]
    fn reflex_quadrilateral() {
        // An embedded dart: one reflex vertex, no crossings.
        let poly =
            PolygonShape::new(vec![[1.0, 0.0], [-0.4, 0.8], [-0.2, -0.5], [-0.4, -0.3]]).unwrap();
        assert_eq!(poly.classify(0.0), PolygonClass::Reflex);
    }

    #[test]
    fn rotation_doubling() {
        let mut s = SampleStream::new(10, 0);
        let f = s.frame(6);
        for phi in [std::f64::consts::PI, std::f64::consts::FRAC_PI_2, 0.37, -1.1] {
            let check = in_plane_rotation_check(&f, phi);
            assert!(
                check.max_vertex_deviation < 1e-10,
                "phi = {phi}: deviation {}",
                check.max_vertex_deviation
            );
        }
    }

    // Rows at angles {a, a+90°, a+180°, a+270°} with equal weights always
    // give orthonormal columns (the doubled directions cancel in pairs).
    fn frame_from_angle_quadruple(a: f64, offset: [f64; 3]) -> Frame {
        let angles = [a, a + offset[0], a + offset[1], a + offset[2]];
        let w = (0.5f64).sqrt();
        let u = angles.iter().map(|t| w * t.cos()).collect();
        let v = angles.iter().map(|t| w * t.sin()).collect();
        Frame::new(u, v).unwrap()
    }

    #[test]
    fn semicircular_lift_by_angles() {
        let quarter = std::f64::consts::FRAC_PI_2;
        let f = frame_from_angle_quadruple(
            10f64.to_radians(),
            [quarter / 2.0, quarter, 1.5 * quarter],
        );
        // Rows at 10°, 55°, 100°, 145°: all within [10°, 190°).
        assert!(is_semicircular_lift(&f).unwrap());

        let g = frame_from_angle_quadruple(0.0, [quarter, 2.0 * quarter, 3.0 * quarter]);
        // Rows at 0°, 90°, 180°, 270°: 180° and 270° fall outside [0°, 180°).
        assert!(!is_semicircular_lift(&g).unwrap());
    }

    #[test]
    fn positive_frames_are_semicircular_and_convex() {
        let mut s = SampleStream::new(21, 0);
        let mut found = 0;
        while found < 20 {
            let f = s.frame(4);
            if let Ok(true) = is_positive_grassmannian(&f) {
                found += 1;
                let p = PluckerMatrix::from_frame(&f);
                // Use the correctly oriented basis for the lift test.
                let w = if p.get(0, 1) > 0.0 { f.clone() } else { f.column_swapped() };
                assert!(is_semicircular_lift(&w).unwrap());
                assert_eq!(
                    PolygonShape::from_frame(&f).classify(0.0),
                    PolygonClass::Convex
                );
                assert!(is_positive_grassmannian(&f.column_swapped()).unwrap());
            }
        }
    }

    #[test]
    fn sign_flips_preserve_polygon() {
        let mut s = SampleStream::new(31, 0);
        let f = s.frame(5);
        let base = PolygonShape::from_frame(&f);
        for mask in 0..32u32 {
            let u: Vec<f64> = f
                .u()
                .iter()
                .enumerate()
                .map(|(i, &x)| if mask >> i & 1 == 1 { -x } else { x })
                .collect();
            let v: Vec<f64> = f
                .v()
                .iter()
                .enumerate()
                .map(|(i, &x)| if mask >> i & 1 == 1 { -x } else { x })
                .collect();
            let g = Frame::new(u, v).unwrap();
            let poly = PolygonShape::from_frame(&g);
            for (e, e0) in poly.edges().iter().zip(base.edges()) {
                assert!((e[0] - e0[0]).abs() < 1e-15);
                assert!((e[1] - e0[1]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn convex_fraction_values() {
        assert_eq!(convex_fraction_exact(3).unwrap(), 1.0);
        assert_eq!(convex_fraction_exact(4).unwrap(), 1.0 / 3.0);
        assert_eq!(convex_fraction_exact(5).unwrap(), 1.0 / 12.0);
        assert!(convex_fraction_exact(2).is_err());
    }

    #[test]
    fn svg_output_is_well_formed() {
        let svg = square().to_svg();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("polygon points="));
        assert!(svg.contains("512"));
    }

    #[test]
    fn zero_edge_flagging() {
        let mut s = SampleStream::new(40, 0);
        let f = s.frame(4);
        let poly = PolygonShape::from_frame(&f);
        assert!(poly.zero_edges(0.0).is_empty());
        assert_eq!(poly.zero_edges(10.0).len(), 4);

        // A frame with an all-zero row squares to a zero edge, caught even
        // at epsilon 0.
        let f = Frame::new(vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 0.0]).unwrap();
        let poly = PolygonShape::from_frame(&f);
        assert_eq!(poly.edges()[1], [0.0, 0.0]);
        assert_eq!(poly.zero_edges(0.0), vec![1, 3]);
        assert_eq!(poly.classify(0.0), PolygonClass::Degenerate);
    }
}
