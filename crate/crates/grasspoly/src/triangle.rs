//! Triangle space as the unit sphere: sidelengths from sphere coordinates,
//! canonical planar realizations, classical triangle quantities, the
//! rotation action and its orbit traces, and the exact constants for the
//! obtuse-probability question.
//!
//! Throughout, a point (x, y, z) on S² corresponds to the perimeter-2
//! triangle with sides a = 1 − x², b = 1 − y², c = 1 − z². The split
//! semiperimeters are s_a = x², s_b = y², s_c = z², and the semiperimeter
//! is fixed at 1.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance for degeneracy and right-angle ties on squared sides.
pub const CLASSIFY_TOL: f64 = 1e-12;
/// Sidelength c below this makes the canonical triangle undefined.
pub const DEGENERATE_EDGE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum TriangleError {
    #[error("point not on the unit sphere: |x|² + |y|² + |z|² = {norm_sq}")]
    NotOnSphere { norm_sq: f64 },
    #[error("invalid triangle shape: {0}")]
    InvalidShape(String),
    #[error("degenerate edge: sidelength c = 1 − z² is {c:.3e}")]
    DegenerateEdge { c: f64 },
    #[error("domain error: {0}")]
    Domain(String),
}

/// A point on the unit sphere, parameterizing a perimeter-2 triangle.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(try_from = "RawPoint", into = "RawPoint")]
pub struct SpherePoint {
    x: f64,
    y: f64,
    z: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawPoint {
    x: f64,
    y: f64,
    z: f64,
}

impl TryFrom<RawPoint> for SpherePoint {
    type Error = TriangleError;
    fn try_from(r: RawPoint) -> Result<Self, Self::Error> {
        SpherePoint::new(r.x, r.y, r.z)
    }
}

impl From<SpherePoint> for RawPoint {
    fn from(p: SpherePoint) -> Self {
        RawPoint { x: p.x, y: p.y, z: p.z }
    }
}

impl SpherePoint {
    /// Accepts a vector within 1e-9 of unit norm and renormalizes it exactly.
    pub fn new(x: f64, y: f64, z: f64) -> Result<SpherePoint, TriangleError> {
        let norm_sq = x * x + y * y + z * z;
        if (norm_sq - 1.0).abs() > 1e-9 {
            return Err(TriangleError::NotOnSphere { norm_sq });
        }
        let n = norm_sq.sqrt();
        Ok(SpherePoint { x: x / n, y: y / n, z: z / n })
    }

    /// For callers that guarantee unit norm by construction.
    pub(crate) fn from_unit(x: f64, y: f64, z: f64) -> SpherePoint {
        debug_assert!((x * x + y * y + z * z - 1.0).abs() < 1e-12);
        SpherePoint { x, y, z }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// Sidelengths (a, b, c) with a + b + c = 2.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(try_from = "RawShape", into = "RawShape")]
pub struct TriangleShape {
    a: f64,
    b: f64,
    c: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawShape {
    a: f64,
    b: f64,
    c: f64,
}

impl TryFrom<RawShape> for TriangleShape {
    type Error = TriangleError;
    fn try_from(r: RawShape) -> Result<Self, Self::Error> {
        TriangleShape::new(r.a, r.b, r.c)
    }
}

impl From<TriangleShape> for RawShape {
    fn from(t: TriangleShape) -> Self {
        RawShape { a: t.a, b: t.b, c: t.c }
    }
}

impl TriangleShape {
    pub fn new(a: f64, b: f64, c: f64) -> Result<TriangleShape, TriangleError> {
        if a < 0.0 || b < 0.0 || c < 0.0 {
            return Err(TriangleError::InvalidShape(format!(
                "negative sidelength in ({a}, {b}, {c})"
            )));
        }
        if (a + b + c - 2.0).abs() > 1e-12 {
            return Err(TriangleError::InvalidShape(format!(
                "perimeter {} != 2",
                a + b + c
            )));
        }
        // s_i >= 0 up to roundoff is the triangle inequality at semiperimeter 1.
        for (s, name) in [(1.0 - a, "a"), (1.0 - b, "b"), (1.0 - c, "c")] {
            if s < -1e-12 {
                return Err(TriangleError::InvalidShape(format!(
                    "triangle inequality violated on side {name}"
                )));
            }
        }
        Ok(TriangleShape { a, b, c })
    }

    /// a = 1 − x², b = 1 − y², c = 1 − z².
    pub fn from_sphere(p: &SpherePoint) -> TriangleShape {
        TriangleShape {
            a: 1.0 - p.x * p.x,
            b: 1.0 - p.y * p.y,
            c: 1.0 - p.z * p.z,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn sides(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    /// Split semiperimeters (s_a, s_b, s_c) = (1 − a, 1 − b, 1 − c).
    pub fn split_semiperimeters(&self) -> [f64; 3] {
        [1.0 - self.a, 1.0 - self.b, 1.0 - self.c]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriangleClass {
    Acute,
    Right,
    Obtuse,
    Degenerate,
}

impl TriangleClass {
    pub fn label(&self) -> &'static str {
        match self {
            TriangleClass::Acute => "acute",
            TriangleClass::Right => "right",
            TriangleClass::Obtuse => "obtuse",
            TriangleClass::Degenerate => "degenerate",
        }
    }
}

/// Derived quantities of a triangle. Exradii and circumcurvature are absent
/// for degenerate shapes, where they are 0/0.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TriangleQuantities {
    pub area: f64,
    pub inradius: f64,
    /// Exradii opposite sides a, b, c respectively.
    pub exradii: Option<[f64; 3]>,
    pub circumcurvature: Option<f64>,
    pub class: TriangleClass,
}

impl TriangleQuantities {
    /// Heron with semiperimeter 1: area = √(s_a s_b s_c); inradius = area;
    /// exradius opposite side i is area / s_i; circumcurvature = 4·area/(abc).
    pub fn from_shape(t: &TriangleShape) -> TriangleQuantities {
        let [sa, sb, sc] = t.split_semiperimeters();
        let [a, b, c] = t.sides();
        let class = classify_sides(a, b, c);
        let area = (sa.max(0.0) * sb.max(0.0) * sc.max(0.0)).sqrt();
        if class == TriangleClass::Degenerate {
            return TriangleQuantities {
                area,
                inradius: area,
                exradii: None,
                circumcurvature: None,
                class,
            };
        }
        TriangleQuantities {
            area,
            inradius: area,
            exradii: Some([area / sa, area / sb, area / sc]),
            circumcurvature: Some(4.0 * area / (a * b * c)),
            class,
        }
    }

    /// Same quantities straight from the sphere coordinates: area = |xyz|,
    /// exradii |yz/x|, |xz/y|, |xy/z|.
    pub fn from_sphere(p: &SpherePoint) -> TriangleQuantities {
        Self::from_shape(&TriangleShape::from_sphere(p))
    }
}

/// Right/acute/obtuse on squared sides with an absolute 1e-12 tie band;
/// degenerate when a side or a split semiperimeter vanishes.
pub fn classify_sides(a: f64, b: f64, c: f64) -> TriangleClass {
    let sides = [a, b, c];
    let splits = [1.0 - a, 1.0 - b, 1.0 - c];
    if sides.iter().any(|&s| s <= CLASSIFY_TOL) || splits.iter().any(|&s| s <= CLASSIFY_TOL) {
        return TriangleClass::Degenerate;
    }
    let mut s = sides;
    s.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let gap = s[2] * s[2] - s[0] * s[0] - s[1] * s[1];
    if gap.abs() <= CLASSIFY_TOL {
        TriangleClass::Right
    } else if gap > 0.0 {
        TriangleClass::Obtuse
    } else {
        TriangleClass::Acute
    }
}

/// Planar vertices of the canonical triangle of p, with edge c centered at
/// the origin and pointing along +x. Requires c = 1 − z² away from zero.
pub fn canonical_triangle(p: &SpherePoint) -> Result<[[f64; 2]; 3], TriangleError> {
    let (x, y, z) = (p.x, p.y, p.z);
    let c = 1.0 - z * z;
    if c.abs() <= DEGENERATE_EDGE_TOL {
        return Err(TriangleError::DegenerateEdge { c });
    }
    let x2 = x * x;
    let y2 = y * y;
    let cx = (-x2 * x2 + 2.0 * x2 - 2.0 * y2 + y2 * y2) / (2.0 * c);
    let cy = -2.0 * x * y * z / c;
    Ok([[-0.5 * c, 0.0], [0.5 * c, 0.0], [cx, cy]])
}

/// Exact obtuse probability under the symmetric measure: 3/2 − 3 ln 2 / π.
pub fn obtuse_probability_exact() -> f64 {
    1.5 - 3.0 * std::f64::consts::LN_2 / std::f64::consts::PI
}

/// Complement of [`obtuse_probability_exact`].
pub fn acute_probability_exact() -> f64 {
    1.0 - obtuse_probability_exact()
}

/// Point on the right-triangle boundary quartic:
/// (±√((1−y²)/(1+y²)), ±y, ±y·√((1−y²)/(1+y²))) for 0 ≤ y ≤ 1.
///
/// `flip` negates the x, y, z components respectively.
pub fn right_boundary_curve(y: f64, flip: [bool; 3]) -> Result<SpherePoint, TriangleError> {
    if !(0.0..=1.0).contains(&y) {
        return Err(TriangleError::Domain(format!("y = {y} outside [0, 1]")));
    }
    let w = ((1.0 - y * y) / (1.0 + y * y)).sqrt();
    let sign = |f: bool| if f { -1.0 } else { 1.0 };
    SpherePoint::new(sign(flip[0]) * w, sign(flip[1]) * y, sign(flip[2]) * y * w)
}

/// Rotates p by angle theta about the z-axis.
pub fn rotate_about_z(p: &SpherePoint, theta: f64) -> SpherePoint {
    let (s, c) = theta.sin_cos();
    SpherePoint::from_unit(c * p.x - s * p.y, s * p.x + c * p.y, p.z)
}

/// Vertex C of the canonical triangle along the z-axis rotation orbit
/// starting from (√(1−z²), 0, z): the ellipse ((1+z²)/2·cos 2θ, −z·sin 2θ).
pub fn vertex_c_of_orbit(z: f64, theta: f64) -> Result<[f64; 2], TriangleError> {
    if z.abs() >= 1.0 {
        return Err(TriangleError::DegenerateEdge { c: 1.0 - z * z });
    }
    let (s, c) = (2.0 * theta).sin_cos();
    Ok([(1.0 + z * z) / 2.0 * c, -z * s])
}

/// One step of an orbit trace: the canonical triangle at rotation angle
/// theta, or a degeneracy marker where the canonical triangle is undefined.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitSample {
    pub theta: f64,
    pub vertices: Option<[[f64; 2]; 3]>,
}

impl OrbitSample {
    pub fn is_degenerate(&self) -> bool {
        self.vertices.is_none()
    }
}

/// Canonical triangles along the orbit of p under rotation about `axis`,
/// at `steps` equally spaced angles in [0, 2π).
///
/// Steps where the orbit passes through z² → 1 are emitted as degeneracy
/// markers rather than dropped, so row k always corresponds to angle
/// 2πk/steps.
pub fn rotation_orbit_trace(
    p: &SpherePoint,
    axis: [f64; 3],
    steps: usize,
) -> Result<Vec<OrbitSample>, TriangleError> {
    let axis_norm_sq: f64 = axis.iter().map(|a| a * a).sum();
    if (axis_norm_sq - 1.0).abs() > 1e-9 {
        return Err(TriangleError::Domain(format!(
            "axis must be unit length (|axis|² = {axis_norm_sq})"
        )));
    }
    if steps == 0 {
        return Err(TriangleError::Domain("steps must be positive".into()));
    }
    let mut out = Vec::with_capacity(steps);
    for k in 0..steps {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / steps as f64;
        let q = rotate_about_axis(p, axis, theta);
        out.push(OrbitSample { theta, vertices: canonical_triangle(&q).ok() });
    }
    Ok(out)
}

/// Rodrigues rotation of p about a unit axis.
pub fn rotate_about_axis(p: &SpherePoint, axis: [f64; 3], theta: f64) -> SpherePoint {
    let v = [p.x, p.y, p.z];
    let (s, c) = theta.sin_cos();
    let k = axis;
    let kv = [
        k[1] * v[2] - k[2] * v[1],
        k[2] * v[0] - k[0] * v[2],
        k[0] * v[1] - k[1] * v[0],
    ];
    let kdotv = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
    let mut r = [0.0; 3];
    for i in 0..3 {
        r[i] = v[i] * c + kv[i] * s + k[i] * kdotv * (1.0 - c);
    }
    let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    SpherePoint::from_unit(r[0] / norm, r[1] / norm, r[2] / norm)
}

/// Density of the pushforward of the uniform sphere measure on the simplex
/// of split semiperimeters: ψ(s_a, s_b) = (2π)⁻¹ (s_a s_b s_c)^{-1/2} with
/// s_c = 1 − s_a − s_b. Defined on the open simplex.
pub fn dirichlet_density(s_a: f64, s_b: f64) -> Result<f64, TriangleError> {
    let s_c = 1.0 - s_a - s_b;
    if s_a <= 0.0 || s_b <= 0.0 || s_c <= 0.0 {
        return Err(TriangleError::Domain(format!(
            "({s_a}, {s_b}) outside the open simplex"
        )));
    }
    Ok(1.0 / (2.0 * std::f64::consts::PI * (s_a * s_b * s_c).sqrt()))
}
