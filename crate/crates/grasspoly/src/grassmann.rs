//! Core linear-algebra objects: frames, Plücker matrices, projection
//! matrices, and the sign signatures that partition the space of 2-planes.
//!
//! A `Frame` is an n×2 matrix with orthonormal columns; it spans a 2-plane in
//! ℝⁿ. The Plücker matrix of a frame collects the 2×2 row minors and
//! determines the plane up to a scalar; its negated square recovers the
//! orthogonal projection onto the plane.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for accepting column norms / dot products at frame construction.
pub const ORTHONORMALITY_TOL: f64 = 1e-9;
/// Tolerance on exact matrix identities (idempotency, AAᵀ = −Δ²).
pub const IDENTITY_TOL: f64 = 1e-10;
/// Tolerance for plane recovery from Plücker coordinates.
pub const RECOVERY_TOL: f64 = 1e-9;
/// Singular values of a valid Plücker matrix must match {1, 1, 0, …} this closely.
pub const SINGULAR_VALUE_TOL: f64 = 1e-6;
/// Default threshold below which a signature entry is recorded as zero.
pub const SIGNATURE_EPSILON: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum GrassmannError {
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("not a plane: singular values deviate from (1, 1, 0, …) by {max_deviation:.3e}")]
    NotAPlane { max_deviation: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Index of entry (i, j), i < j, in a row-major strict upper triangle.
pub(crate) fn upper_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Number of strict-upper-triangle entries for an n×n matrix.
pub(crate) fn upper_len(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Iterator over (i, j) index pairs with i < j, row-major.
pub(crate) fn upper_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FrameRepr {
    n: usize,
    u: Vec<f64>,
    v: Vec<f64>,
}

/// Two orthonormal column vectors in ℝⁿ; a lift of a planar n-gon.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "FrameRepr", into = "FrameRepr")]
pub struct Frame {
    n: usize,
    u: Vec<f64>,
    v: Vec<f64>,
}

impl TryFrom<FrameRepr> for Frame {
    type Error = GrassmannError;
    fn try_from(r: FrameRepr) -> Result<Self, Self::Error> {
        if r.u.len() != r.n || r.v.len() != r.n {
            return Err(GrassmannError::InvalidFrame(format!(
                "declared n = {} but |u| = {}, |v| = {}",
                r.n,
                r.u.len(),
                r.v.len()
            )));
        }
        Frame::new(r.u, r.v)
    }
}

impl From<Frame> for FrameRepr {
    fn from(f: Frame) -> Self {
        FrameRepr { n: f.n, u: f.u, v: f.v }
    }
}

impl Frame {
    /// Builds a frame, checking n ≥ 3 and orthonormality within [`ORTHONORMALITY_TOL`].
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Result<Self, GrassmannError> {
        if u.len() != v.len() {
            return Err(GrassmannError::InvalidFrame(format!(
                "column lengths differ: {} vs {}",
                u.len(),
                v.len()
            )));
        }
        let n = u.len();
        if n < 3 {
            return Err(GrassmannError::InvalidFrame(format!("n = {n} < 3")));
        }
        let nu = norm(&u);
        let nv = norm(&v);
        let dot = dot(&u, &v);
        if (nu - 1.0).abs() > ORTHONORMALITY_TOL
            || (nv - 1.0).abs() > ORTHONORMALITY_TOL
            || dot.abs() > ORTHONORMALITY_TOL
        {
            return Err(GrassmannError::InvalidFrame(format!(
                "columns not orthonormal: |u| = {nu}, |v| = {nv}, u·v = {dot}"
            )));
        }
        Ok(Frame { n, u, v })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    /// Row i as the pair (uᵢ, vᵢ).
    pub fn row(&self, i: usize) -> (f64, f64) {
        (self.u[i], self.v[i])
    }

    /// Rotates the basis inside the plane it spans: z ↦ e^{iφ} z on rows.
    ///
    /// The plane (and hence Δ and AAᵀ) is unchanged; the associated polygon
    /// rotates by 2φ.
    pub fn rotate_in_plane(&self, phi: f64) -> Frame {
        let (c, s) = (phi.cos(), phi.sin());
        let u: Vec<f64> = (0..self.n).map(|i| c * self.u[i] - s * self.v[i]).collect();
        let v: Vec<f64> = (0..self.n).map(|i| s * self.u[i] + c * self.v[i]).collect();
        Frame { n: self.n, u, v }
    }

    /// Swaps the two basis columns; same plane, opposite orientation.
    pub fn column_swapped(&self) -> Frame {
        Frame { n: self.n, u: self.v.clone(), v: self.u.clone() }
    }

    /// Recovers a frame spanning the plane encoded by a Plücker matrix.
    ///
    /// The basis within the plane is not pinned down; only the plane is.
    /// Fails with [`GrassmannError::NotAPlane`] when the singular values are
    /// not {1, 1, 0, …} within [`SINGULAR_VALUE_TOL`].
    pub fn from_plucker(p: &PluckerMatrix) -> Result<Frame, GrassmannError> {
        let n = p.n;
        let svd = p.to_full().svd(true, false);
        let sv = &svd.singular_values;
        let mut max_dev: f64 = 0.0;
        for (k, &s) in sv.iter().enumerate() {
            let target = if k < 2 { 1.0 } else { 0.0 };
            max_dev = max_dev.max((s - target).abs());
        }
        if max_dev > SINGULAR_VALUE_TOL {
            return Err(GrassmannError::NotAPlane { max_deviation: max_dev });
        }
        let u_mat = svd.u.expect("left singular vectors requested");
        let u: Vec<f64> = (0..n).map(|i| u_mat[(i, 0)]).collect();
        let v: Vec<f64> = (0..n).map(|i| u_mat[(i, 1)]).collect();
        Frame::new(u, v)
    }

    /// Max-entry distance between the projection matrices of two frames;
    /// zero iff they span the same plane.
    pub fn plane_distance(&self, other: &Frame) -> f64 {
        ProjectionMatrix::from_frame(self).max_abs_diff(&ProjectionMatrix::from_frame(other))
    }
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PluckerRepr {
    n: usize,
    upper: Vec<(usize, usize, f64)>,
}

/// Skew-symmetric matrix of 2×2 row minors of a frame, stored as its strict
/// upper triangle. Determines the plane up to a scalar.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "PluckerRepr", into = "PluckerRepr")]
pub struct PluckerMatrix {
    n: usize,
    upper: Vec<f64>,
}

impl TryFrom<PluckerRepr> for PluckerMatrix {
    type Error = GrassmannError;
    fn try_from(r: PluckerRepr) -> Result<Self, Self::Error> {
        let mut upper = vec![0.0; upper_len(r.n)];
        for &(i, j, value) in &r.upper {
            if i >= j || j >= r.n {
                return Err(GrassmannError::InvalidFrame(format!(
                    "upper-triangle index ({i}, {j}) out of range for n = {}",
                    r.n
                )));
            }
            upper[upper_index(r.n, i, j)] = value;
        }
        PluckerMatrix::from_upper(r.n, upper)
    }
}

impl From<PluckerMatrix> for PluckerRepr {
    fn from(p: PluckerMatrix) -> Self {
        let upper = upper_pairs(p.n).map(|(i, j)| (i, j, p.get(i, j))).collect();
        PluckerRepr { n: p.n, upper }
    }
}

impl PluckerMatrix {
    /// Δᵢⱼ = uᵢvⱼ − uⱼvᵢ for i < j.
    pub fn from_frame(f: &Frame) -> PluckerMatrix {
        let n = f.n();
        let mut upper = vec![0.0; upper_len(n)];
        for (i, j) in upper_pairs(n) {
            upper[upper_index(n, i, j)] = f.u()[i] * f.v()[j] - f.u()[j] * f.v()[i];
        }
        PluckerMatrix { n, upper }
    }

    /// Builds from raw strict-upper-triangle entries (row-major).
    ///
    /// Shape is validated; the Plücker relations are not, so this admits
    /// skew matrices that do not come from planes. [`Frame::from_plucker`]
    /// rejects those.
    pub fn from_upper(n: usize, upper: Vec<f64>) -> Result<Self, GrassmannError> {
        if n < 3 {
            return Err(GrassmannError::InvalidFrame(format!("n = {n} < 3")));
        }
        if upper.len() != upper_len(n) {
            return Err(GrassmannError::DimensionMismatch {
                expected: upper_len(n),
                got: upper.len(),
            });
        }
        Ok(PluckerMatrix { n, upper })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Full-matrix view: skew-symmetric, zero diagonal.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.upper[upper_index(self.n, i, j)],
            Equal => 0.0,
            Greater => -self.upper[upper_index(self.n, j, i)],
        }
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Σ over all entries of Δᵢⱼ²; equals 2 for a frame-derived matrix.
    pub fn frobenius_sq(&self) -> f64 {
        2.0 * self.upper.iter().map(|x| x * x).sum::<f64>()
    }

    /// Rescaled copy with Frobenius norm² = 2, the unit-plane representative.
    pub fn normalized(&self) -> PluckerMatrix {
        let scale = (2.0 / self.frobenius_sq()).sqrt();
        self.scaled(scale)
    }

    pub fn scaled(&self, c: f64) -> PluckerMatrix {
        PluckerMatrix { n: self.n, upper: self.upper.iter().map(|x| c * x).collect() }
    }

    /// Largest residual |ΔᵢⱼΔₖₗ − ΔᵢₖΔⱼₗ + ΔᵢₗΔⱼₖ| over all quadruples i<j<k<l.
    pub fn max_relation_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in k + 1..n {
                        let r = self.get(i, j) * self.get(k, l) - self.get(i, k) * self.get(j, l)
                            + self.get(i, l) * self.get(j, k);
                        worst = worst.max(r.abs());
                    }
                }
            }
        }
        worst
    }

    /// −Δ²; equals the projection matrix of the plane for unit-scale Δ.
    pub fn projection(&self) -> ProjectionMatrix {
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc -= self.get(i, k) * self.get(k, j);
                }
                entries[i * n + j] = acc;
                entries[j * n + i] = acc;
            }
        }
        ProjectionMatrix { n, entries }
    }

    pub(crate) fn to_full(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }
}

/// Symmetric idempotent matrix AAᵀ projecting ℝⁿ onto the frame's plane.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectionMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl ProjectionMatrix {
    /// (AAᵀ)ᵢⱼ = (uᵢ, vᵢ) · (uⱼ, vⱼ).
    pub fn from_frame(f: &Frame) -> ProjectionMatrix {
        let n = f.n();
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = f.u()[i] * f.u()[j] + f.v()[i] * f.v()[j];
            }
        }
        ProjectionMatrix { n, entries }
    }

    pub(crate) fn from_entries(n: usize, entries: Vec<f64>) -> ProjectionMatrix {
        debug_assert_eq!(entries.len(), n * n);
        ProjectionMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry of |M² − M|.
    pub fn idempotency_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += self.get(i, k) * self.get(k, j);
                }
                worst = worst.max((acc - self.get(i, j)).abs());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &ProjectionMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Comparison scope for sign signatures: chambers look at Plücker signs only,
/// cells refine by the projection-matrix signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignatureMode {
    Chamber,
    Cell,
}

/// Entrywise signs of a Plücker matrix (strict upper triangle) and of a
/// projection matrix (upper triangle with diagonal), taken modulo the global
/// ±1 ambiguity of the Plücker coordinates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignSignature {
    n: usize,
    plucker: Vec<i8>,
    projection: Vec<i8>,
    canonical: bool,
}

fn sign_of(x: f64, eps: f64) -> i8 {
    if x > eps {
        1
    } else if x < -eps {
        -1
    } else {
        0
    }
}

/// Index of (i, j), i ≤ j, in a row-major upper triangle with diagonal.
fn sym_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < n);
    i * (2 * n - i + 1) / 2 + (j - i)
}

fn sym_len(n: usize) -> usize {
    n * (n + 1) / 2
}

impl SignSignature {
    /// Signature of a frame; entries with |value| ≤ epsilon are recorded as 0.
    pub fn of_frame(f: &Frame, epsilon: f64) -> SignSignature {
        let p = PluckerMatrix::from_frame(f);
        let m = ProjectionMatrix::from_frame(f);
        Self::of_parts(&p, &m, epsilon)
    }

    /// Signature of a Plücker matrix, with projection signs taken from −Δ².
    pub fn of_plucker(p: &PluckerMatrix, epsilon: f64) -> SignSignature {
        Self::of_parts(p, &p.normalized().projection(), epsilon)
    }

    fn of_parts(p: &PluckerMatrix, m: &ProjectionMatrix, epsilon: f64) -> SignSignature {
        let n = p.n();
        let plucker = upper_pairs(n).map(|(i, j)| sign_of(p.get(i, j), epsilon)).collect();
        let mut projection = vec![0i8; sym_len(n)];
        for i in 0..n {
            for j in i..n {
                projection[sym_index(n, i, j)] = sign_of(m.get(i, j), epsilon);
            }
        }
        let mut sig = SignSignature { n, plucker, projection, canonical: false };
        sig.canonicalize();
        sig
    }

    /// Builds from explicit sign triangles and canonicalizes.
    pub fn from_signs(
        n: usize,
        plucker: Vec<i8>,
        projection: Vec<i8>,
    ) -> Result<SignSignature, GrassmannError> {
        if plucker.len() != upper_len(n) {
            return Err(GrassmannError::DimensionMismatch {
                expected: upper_len(n),
                got: plucker.len(),
            });
        }
        if projection.len() != sym_len(n) {
            return Err(GrassmannError::DimensionMismatch {
                expected: sym_len(n),
                got: projection.len(),
            });
        }
        let mut sig = SignSignature { n, plucker, projection, canonical: false };
        sig.canonicalize();
        Ok(sig)
    }

    /// The all-positive Plücker chamber S⁰, with unconstrained projection part.
    pub fn positive_chamber(n: usize) -> SignSignature {
        SignSignature {
            n,
            plucker: vec![1; upper_len(n)],
            projection: vec![0; sym_len(n)],
            canonical: true,
        }
    }

    /// The base sign cell of G₂(ℝ⁴): all-positive Plücker signs, projection
    /// signs +1 except at (1, 4) and (4, 1).
    pub fn base_cell_n4() -> SignSignature {
        let n = 4;
        let mut projection = vec![1i8; sym_len(n)];
        projection[sym_index(n, 0, 3)] = -1;
        SignSignature { n, plucker: vec![1; upper_len(n)], projection, canonical: true }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// Plücker sign at (i, j) in full-matrix (antisymmetric) view.
    pub fn plucker_sign(&self, i: usize, j: usize) -> i8 {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.plucker[upper_index(self.n, i, j)],
            Equal => 0,
            Greater => -self.plucker[upper_index(self.n, j, i)],
        }
    }

    /// Projection sign at (i, j) in full-matrix (symmetric) view.
    pub fn projection_sign(&self, i: usize, j: usize) -> i8 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.projection[sym_index(self.n, i, j)]
    }

    pub(crate) fn plucker_raw(&self) -> &[i8] {
        &self.plucker
    }

    pub(crate) fn projection_raw(&self) -> &[i8] {
        &self.projection
    }

    pub(crate) fn from_raw(n: usize, plucker: Vec<i8>, projection: Vec<i8>) -> SignSignature {
        let mut sig = SignSignature { n, plucker, projection, canonical: false };
        sig.canonicalize();
        sig
    }

    /// True when no off-diagonal entry of either sign matrix is zero, i.e.
    /// the signature names an open cell away from all walls.
    pub fn is_open_cell(&self) -> bool {
        self.plucker.iter().all(|&s| s != 0)
            && upper_pairs(self.n).all(|(i, j)| self.projection[sym_index(self.n, i, j)] != 0)
    }

    /// Flips the Plücker part so its first nonzero entry is +1.
    pub fn canonicalize(&mut self) {
        if let Some(&first) = self.plucker.iter().find(|&&s| s != 0) {
            if first < 0 {
                for s in &mut self.plucker {
                    *s = -*s;
                }
            }
        }
        self.canonical = true;
    }

    /// Copy with the projection part zeroed; the chamber-level signature.
    pub fn chamber_only(&self) -> SignSignature {
        SignSignature {
            n: self.n,
            plucker: self.plucker.clone(),
            projection: vec![0; sym_len(self.n)],
            canonical: self.canonical,
        }
    }

    pub fn eq_in_mode(&self, other: &SignSignature, mode: SignatureMode) -> bool {
        match mode {
            SignatureMode::Chamber => self.chamber_key() == other.chamber_key(),
            SignatureMode::Cell => self == other,
        }
    }

    fn flip_factor(&self) -> i8 {
        match self.plucker.iter().find(|&&s| s != 0) {
            Some(&first) if first < 0 => -1,
            _ => 1,
        }
    }

    fn chamber_key(&self) -> Vec<i8> {
        let f = self.flip_factor();
        self.plucker.iter().map(|&s| f * s).collect()
    }
}

impl PartialEq for SignSignature {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.chamber_key() == other.chamber_key()
            && self.projection == other.projection
    }
}

impl Eq for SignSignature {}

impl std::hash::Hash for SignSignature {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        let f = self.flip_factor();
        for &s in &self.plucker {
            (f * s).hash(state);
        }
        self.projection.hash(state);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coordinate_frame(n: usize, a: usize, b: usize) -> Frame {
        let mut u = vec![0.0; n];
        let mut v = vec![0.0; n];
        u[a] = 1.0;
        v[b] = 1.0;
        Frame::new(u, v).unwrap()
    }

    #[test]
    fn plucker_of_coordinate_plane_n3() {
        let f = coordinate_frame(3, 0, 1);
        let p = PluckerMatrix::from_frame(&f);
        assert_eq!(p.get(0, 1), 1.0);
        assert_eq!(p.get(0, 2), 0.0);
        assert_eq!(p.get(1, 2), 0.0);
    }

    #[test]
    fn plucker_of_coordinate_plane_n4() {
        let f = coordinate_frame(4, 0, 2);
        let p = PluckerMatrix::from_frame(&f);
        for (i, j) in upper_pairs(4) {
            let expected = if (i, j) == (0, 2) { 1.0 } else { 0.0 };
            assert_eq!(p.get(i, j), expected, "entry ({i}, {j})");
        }
    }

    #[test]
    fn rejects_non_orthonormal_columns() {
        let err = Frame::new(vec![1.0, 0.0, 0.0], vec![0.5, 0.5, 0.0]);
        assert!(matches!(err, Err(GrassmannError::InvalidFrame(_))));
    }

    #[test]
    fn projection_of_coordinate_plane() {
        let f = coordinate_frame(3, 0, 1);
        let m = ProjectionMatrix::from_frame(&f);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j && i < 2 { 1.0 } else { 0.0 };
                assert_eq!(m.get(i, j), expected);
            }
        }
        assert!((m.trace() - 2.0).abs() < IDENTITY_TOL);
        assert!(m.idempotency_residual() < IDENTITY_TOL);
    }

    #[test]
    fn recover_frame_from_single_minor() {
        let mut upper = vec![0.0; upper_len(5)];
        upper[upper_index(5, 0, 1)] = 1.0;
        let p = PluckerMatrix::from_upper(5, upper).unwrap();
        let f = Frame::from_plucker(&p).unwrap();
        let m = ProjectionMatrix::from_frame(&f);
        for i in 0..5 {
            for j in 0..5 {
                let expected = if i == j && i < 2 { 1.0 } else { 0.0 };
                assert!((m.get(i, j) - expected).abs() < RECOVERY_TOL);
            }
        }
    }

    #[test]
    fn scaled_plucker_is_not_a_plane() {
        let f = coordinate_frame(4, 0, 2);
        let p = PluckerMatrix::from_frame(&f).scaled(0.5);
        assert!(matches!(
            Frame::from_plucker(&p),
            Err(GrassmannError::NotAPlane { .. })
        ));
    }

    #[test]
    fn signature_canonicalization_quotients_column_swap() {
        let f = coordinate_frame(4, 0, 2);
        let a = SignSignature::of_frame(&f, SIGNATURE_EPSILON);
        let b = SignSignature::of_frame(&f.column_swapped(), SIGNATURE_EPSILON);
        assert_eq!(a, b);
    }

    #[test]
    fn in_plane_rotation_fixes_plucker_and_projection() {
        let f = coordinate_frame(4, 1, 3);
        let g = f.rotate_in_plane(0.83);
        let (pf, pg) = (PluckerMatrix::from_frame(&f), PluckerMatrix::from_frame(&g));
        for (i, j) in upper_pairs(4) {
            assert!((pf.get(i, j) - pg.get(i, j)).abs() < 1e-12);
        }
        assert!(f.plane_distance(&g) < 1e-12);
    }

    #[test]
    fn serde_round_trip() {
        let f = coordinate_frame(4, 0, 2);
        let json = serde_json::to_string(&f).unwrap();
        let back: Frame = serde_json::from_str(&json).unwrap();
        assert_eq!(back.u(), f.u());
        let p = PluckerMatrix::from_frame(&f);
        let json = serde_json::to_string(&p).unwrap();
        let back: PluckerMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back.get(0, 2), 1.0);
    }

    #[test]
    fn base_cell_signature_is_open() {
        let sig = SignSignature::base_cell_n4();
        assert!(sig.is_open_cell());
        assert_eq!(sig.projection_sign(0, 3), -1);
        assert_eq!(sig.projection_sign(3, 0), -1);
        assert_eq!(sig.projection_sign(0, 2), 1);
        assert!(!SignSignature::positive_chamber(4).is_open_cell());
    }
}
