//! Quadrilateral-specific structure of G₂(ℝ⁴): the projection matrix written
//! in Plücker coordinates, logarithmic interpolation within a sign cell, the
//! flag mean, the 96-cell class table, and congruence classes of permutation
//! orbits.

use nalgebra::DMatrix;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::collections::HashMap;
use thiserror::Error;

use crate::grassmann::{
    upper_pairs, Frame, GrassmannError, PluckerMatrix, ProjectionMatrix, SignSignature,
    SignatureMode,
};
use crate::hyperoctahedral::{enumerate, s4_unsigned, SignedPermutation};
use crate::polygon::{PolygonClass, PolygonShape};
use crate::sampling::{SampleStream, SamplingError};

/// Interpolation samples must satisfy the Plücker relation this tightly.
pub const PATH_RELATION_TOL: f64 = 1e-10;
/// Smallest admissible gap between the 2nd and 3rd singular values of a
/// flag-mean concatenation.
pub const FLAG_MEAN_GAP_TOL: f64 = 1e-9;
/// Congruence comparisons of (length, turn) profiles use this tolerance.
pub const CONGRUENCE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum QuadCellError {
    #[error("operation requires n = 4, got n = {0}")]
    NotQuadDimension(usize),
    #[error("endpoints lie in different sign cells")]
    CellMismatch,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("flag mean is ill-defined: singular value gap {gap:.3e}")]
    DegenerateMean { gap: f64 },
    #[error("sign cell {0} received inconsistent polygon classes {1:?} and {2:?}")]
    InconsistentClass(String, PolygonClass, PolygonClass),
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error(transparent)]
    Group(#[from] crate::hyperoctahedral::GroupError),
}

/// Projection matrix of an n = 4 plane directly from its Plücker
/// coordinates: off-diagonal entries are the quadratic forms
///
/// ```text
/// M₁₂ =  Δ₁₃Δ₂₃ + Δ₁₄Δ₂₄    M₁₃ =  Δ₁₄Δ₃₄ − Δ₁₂Δ₂₃    M₁₄ = −Δ₁₂Δ₂₄ − Δ₁₃Δ₃₄
/// M₂₃ =  Δ₁₂Δ₁₃ + Δ₂₄Δ₃₄    M₂₄ =  Δ₁₂Δ₁₄ − Δ₂₃Δ₃₄    M₃₄ =  Δ₁₃Δ₁₄ + Δ₂₃Δ₂₄
/// ```
///
/// and the diagonal holds the squared row norms of Δ. Agrees with −Δ².
pub fn projection_from_plucker_n4(p: &PluckerMatrix) -> Result<ProjectionMatrix, QuadCellError> {
    if p.n() != 4 {
        return Err(QuadCellError::NotQuadDimension(p.n()));
    }
    let d = |i: usize, j: usize| p.get(i - 1, j - 1);
    let mut m = [[0.0f64; 4]; 4];
    m[0][1] = d(1, 3) * d(2, 3) + d(1, 4) * d(2, 4);
    m[0][2] = d(1, 4) * d(3, 4) - d(1, 2) * d(2, 3);
    m[0][3] = -d(1, 2) * d(2, 4) - d(1, 3) * d(3, 4);
    m[1][2] = d(1, 2) * d(1, 3) + d(2, 4) * d(3, 4);
    m[1][3] = d(1, 2) * d(1, 4) - d(2, 3) * d(3, 4);
    m[2][3] = d(1, 3) * d(1, 4) + d(2, 3) * d(2, 4);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = (0..4).map(|k| p.get(i, k) * p.get(i, k)).sum();
    }
    let mut entries = vec![0.0; 16];
    for i in 0..4 {
        for j in 0..4 {
            entries[i * 4 + j] = if i <= j { m[i][j] } else { m[j][i] };
        }
    }
    Ok(ProjectionMatrix::from_entries(4, entries))
}

/// A path of Plücker matrices joining two planes inside one sign cell.
#[derive(Debug, Clone, Serialize)]
pub struct CellPath {
    pub start: PluckerMatrix,
    pub end: PluckerMatrix,
    pub samples: Vec<(f64, PluckerMatrix)>,
}

/// Joins two planes of the same open sign cell by logarithmic interpolation
/// of Plücker coordinates, with Δ₂₄ recomputed from the Plücker relation at
/// every step so each sample is a genuine plane.
///
/// Endpoints are first carried into the all-positive chamber by a
/// hyperoctahedral element (the same one for both), interpolated there, and
/// carried back, so every sample keeps the endpoints' signature.
pub fn log_interpolate_cellpath(
    start: &PluckerMatrix,
    end: &PluckerMatrix,
    steps: usize,
) -> Result<CellPath, QuadCellError> {
    if start.n() != 4 || end.n() != 4 {
        return Err(QuadCellError::NotQuadDimension(start.n().max(end.n())));
    }
    if steps == 0 {
        return Err(QuadCellError::Domain("steps must be positive".into()));
    }
    let sig0 = SignSignature::of_plucker(start, 0.0);
    let sig1 = SignSignature::of_plucker(end, 0.0);
    if !sig0.is_open_cell() {
        return Err(QuadCellError::Domain(
            "start lies on a cell wall (zero sign entry)".into(),
        ));
    }
    if sig0 != sig1 {
        return Err(QuadCellError::CellMismatch);
    }

    // The identity comes first in the enumeration, so base-cell inputs are
    // interpolated in place.
    let (beta, flip, chart0) = positive_chart(start)?;
    let chart1 = oriented_positive(&beta.act_on_plucker(end)?)?;

    let pairs: Vec<(usize, usize)> = upper_pairs(4).collect();
    let beta_inv = beta.inverse();
    let mut samples = Vec::with_capacity(steps);
    for k in 0..steps {
        let t = if steps == 1 { 0.0 } else { k as f64 / (steps - 1) as f64 };
        let mut upper = vec![0.0; 6];
        for (idx, &(i, j)) in pairs.iter().enumerate() {
            if (i, j) == (1, 3) {
                continue;
            }
            upper[idx] =
                (chart0.get(i, j).ln() * (1.0 - t) + chart1.get(i, j).ln() * t).exp();
        }
        let interp = PluckerMatrix::from_upper(4, upper)?;
        // Δ₂₄ from the relation Δ₁₂Δ₃₄ − Δ₁₃Δ₂₄ + Δ₁₄Δ₂₃ = 0.
        let d24 = (interp.get(0, 1) * interp.get(2, 3) + interp.get(0, 3) * interp.get(1, 2))
            / interp.get(0, 2);
        let mut upper = interp.upper().to_vec();
        upper[crate::grassmann::upper_index(4, 1, 3)] = d24;
        // Undo the orientation flip so samples match the start endpoint
        // entrywise, not just as planes.
        let chart_sample = PluckerMatrix::from_upper(4, upper)?.normalized().scaled(flip);
        let sample = beta_inv.act_on_plucker(&chart_sample)?;
        samples.push((t, sample));
    }
    Ok(CellPath { start: start.clone(), end: end.clone(), samples })
}

/// Finds a hyperoctahedral element carrying Δ into the all-positive chamber.
/// Returns the element, the ±1 orientation factor applied after it, and the
/// transported strictly positive matrix.
fn positive_chart(
    p: &PluckerMatrix,
) -> Result<(SignedPermutation, f64, PluckerMatrix), QuadCellError> {
    for beta in enumerate(4) {
        let moved = beta.act_on_plucker(p)?;
        let first = moved.get(0, 1);
        if first == 0.0 {
            continue;
        }
        let flip = if first < 0.0 { -1.0 } else { 1.0 };
        let oriented = moved.scaled(flip);
        if oriented.upper().iter().all(|&x| x > 0.0) {
            return Ok((beta, flip, oriented));
        }
    }
    Err(QuadCellError::Domain(
        "no hyperoctahedral element carries the input into the positive chamber".into(),
    ))
}

/// Orients an already-chamber-positive matrix to strictly positive entries.
fn oriented_positive(p: &PluckerMatrix) -> Result<PluckerMatrix, QuadCellError> {
    let oriented = if p.get(0, 1) < 0.0 { p.scaled(-1.0) } else { p.clone() };
    if oriented.upper().iter().any(|&x| x <= 0.0) {
        return Err(QuadCellError::Domain(
            "endpoint is not strictly positive after normalization".into(),
        ));
    }
    Ok(oriented)
}

/// Flag mean of a family of planes: the top-2 left singular subspace of the
/// horizontal concatenation (A₁ … A_m), computed as the dominant eigenspace
/// of Σ AᵢAᵢᵀ. Invariant under input reordering and in-plane rotation of any
/// input.
pub fn flag_mean(frames: &[Frame]) -> Result<Frame, QuadCellError> {
    let first = frames
        .first()
        .ok_or_else(|| QuadCellError::Domain("flag mean of an empty list".into()))?;
    let n = first.n();
    let mut gram = DMatrix::<f64>::zeros(n, n);
    for f in frames {
        if f.n() != n {
            return Err(QuadCellError::Domain(format!(
                "mixed dimensions in flag mean: {} vs {n}",
                f.n()
            )));
        }
        for i in 0..n {
            let (ui, vi) = f.row(i);
            for j in 0..n {
                let (uj, vj) = f.row(j);
                gram[(i, j)] += ui * uj + vi * vj;
            }
        }
    }
    let eig = nalgebra::SymmetricEigen::new(gram);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    // Singular values of the concatenation are the square roots of these
    // eigenvalues; the gap condition is stated on the singular values.
    let sv = |k: usize| eig.eigenvalues[order[k]].max(0.0).sqrt();
    let gap = sv(1) - sv(2);
    if gap < FLAG_MEAN_GAP_TOL {
        return Err(QuadCellError::DegenerateMean { gap });
    }
    let u: Vec<f64> = (0..n).map(|i| eig.eigenvectors[(i, order[0])]).collect();
    let v: Vec<f64> = (0..n).map(|i| eig.eigenvectors[(i, order[1])]).collect();
    Ok(Frame::new(u, v)?)
}

/// One sign cell of G₂(ℝ⁴): its signature, constant polygon class, and a
/// representative frame.
#[derive(Debug, Clone)]
pub struct QuadCellEntry {
    pub signature: SignSignature,
    pub class: PolygonClass,
    pub representative: Frame,
}

impl Serialize for QuadCellEntry {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("QuadCellEntry", 4)?;
        s.serialize_field("signature", &self.signature)?;
        s.serialize_field("class", &self.class)?;
        s.serialize_field("representative", &self.representative)?;
        s.serialize_field("edges", PolygonShape::from_frame(&self.representative).edges())?;
        s.end()
    }
}

/// A quadrilateral in the S₄ orbit of the base-cell representative.
#[derive(Debug, Clone)]
pub struct OrbitQuad {
    pub permutation: SignedPermutation,
    pub polygon: PolygonShape,
    pub class: PolygonClass,
}

impl Serialize for OrbitQuad {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("OrbitQuad", 3)?;
        s.serialize_field("permutation", &self.permutation.to_cycle_string())?;
        s.serialize_field("edges", &self.polygon.edges())?;
        s.serialize_field("class", &self.class)?;
        s.end()
    }
}

/// The full 96-cell classification of G₂(ℝ⁴).
#[derive(Debug, Clone, Serialize)]
pub struct QuadCellTable {
    pub entries: Vec<QuadCellEntry>,
    /// The 24 quadrilaterals obtained by permuting the representative's
    /// edges; every cell's polygon is congruent to one of these.
    pub orbit24: Vec<OrbitQuad>,
}

impl QuadCellTable {
    /// (convex, reflex, self-intersecting) cell counts.
    pub fn class_counts(&self) -> (usize, usize, usize) {
        let count = |c: PolygonClass| self.entries.iter().filter(|e| e.class == c).count();
        (
            count(PolygonClass::Convex),
            count(PolygonClass::Reflex),
            count(PolygonClass::SelfIntersecting),
        )
    }

    pub fn lookup(&self, sig: &SignSignature) -> Option<&QuadCellEntry> {
        self.entries.iter().find(|e| &e.signature == sig)
    }

    /// Class map keyed by signature, for high-volume lookups.
    pub fn class_map(&self) -> HashMap<SignSignature, PolygonClass> {
        self.entries.iter().map(|e| (e.signature.clone(), e.class)).collect()
    }
}

/// The 24 quadrilaterals obtained by letting S₄ permute the edges of a
/// representative's polygon, each classified geometrically.
pub fn s4_orbit_quads(representative: &Frame) -> Vec<OrbitQuad> {
    s4_unsigned()
        .into_iter()
        .map(|sigma| {
            let frame = sigma
                .act_on_frame(representative)
                .expect("S4 elements match any n = 4 frame");
            let polygon = PolygonShape::from_frame(&frame);
            let class = polygon.classify(0.0);
            OrbitQuad { permutation: sigma, polygon, class }
        })
        .collect()
}

/// Builds the 96-cell table: take a base-cell representative (the flag mean
/// of `mean_samples` rejection samples), classify its 24 edge permutations
/// geometrically, and propagate classes along the full B₄ action. Errors if
/// any cell would receive two different classes or the counts are not
/// (32, 32, 32).
pub fn build_quad_cell_table(
    stream: &mut SampleStream,
    mean_samples: usize,
) -> Result<QuadCellTable, QuadCellError> {
    let base = SignSignature::base_cell_n4();
    let wanted = mean_samples.max(1);
    let mut samples = Vec::with_capacity(wanted);
    while samples.len() < wanted {
        samples.push(stream.in_signature(4, &base, SignatureMode::Cell, 1_000_000)?);
    }
    let mut representative = flag_mean(&samples)?;
    if SignSignature::of_frame(&representative, 0.0) != base {
        // The finite-sample mean can fall outside the open cell only for
        // tiny sample counts; any true cell member serves as representative.
        representative = samples[0].clone();
    }

    let orbit24 = s4_orbit_quads(&representative);
    let mut class_by_perm: HashMap<Vec<i32>, PolygonClass> = HashMap::new();
    for quad in &orbit24 {
        class_by_perm.insert(quad.permutation.images().to_vec(), quad.class);
    }

    let mut cells: HashMap<SignSignature, (PolygonClass, Frame)> = HashMap::new();
    for beta in enumerate(4) {
        let sig = beta.act_on_signature(&base)?;
        let unsigned = beta.unsigned();
        let class = class_by_perm[unsigned.images()];
        match cells.get(&sig) {
            None => {
                let frame = beta.act_on_frame(&representative)?;
                cells.insert(sig, (class, frame));
            }
            Some((existing, _)) if *existing != class => {
                return Err(QuadCellError::InconsistentClass(
                    format!("{:?}", sig),
                    *existing,
                    class,
                ));
            }
            Some(_) => {}
        }
    }
    let mut entries: Vec<QuadCellEntry> = cells
        .into_iter()
        .map(|(signature, (class, representative))| QuadCellEntry {
            signature,
            class,
            representative,
        })
        .collect();
    entries.sort_by_key(|e| {
        let mut key: Vec<i8> = e.signature.plucker_raw().to_vec();
        key.extend_from_slice(e.signature.projection_raw());
        key
    });

    let table = QuadCellTable { entries, orbit24 };
    let counts = table.class_counts();
    if table.entries.len() != 96 || counts != (32, 32, 32) {
        return Err(QuadCellError::Domain(format!(
            "cell census came out wrong: {} cells, counts {:?}",
            table.entries.len(),
            counts
        )));
    }
    Ok(table)
}

/// (length, turn-angle) profile of an edge sequence; rotation-invariant.
fn edge_profile(edges: &[[f64; 2]]) -> Vec<(f64, f64)> {
    let n = edges.len();
    (0..n)
        .map(|i| {
            let e = edges[i];
            let f = edges[(i + 1) % n];
            let len = (e[0] * e[0] + e[1] * e[1]).sqrt();
            let mut turn = (e[0] * f[1] - e[1] * f[0]).atan2(e[0] * f[0] + e[1] * f[1]);
            // Collapse the ±π ambiguity of antiparallel successors.
            if (turn + std::f64::consts::PI).abs() < 1e-12 {
                turn = std::f64::consts::PI;
            }
            (len, turn)
        })
        .collect()
}

fn profiles_match(a: &[(f64, f64)], b: &[(f64, f64)], tol: f64) -> bool {
    let n = a.len();
    (0..n).any(|shift| {
        (0..n).all(|k| {
            let (la, ta) = a[(k + shift) % n];
            let (lb, tb) = b[k];
            (la - lb).abs() <= tol && (ta - tb).abs() <= tol
        })
    })
}

/// True when two edge sequences are congruent: equal up to plane rotation,
/// reflection, cyclic relabeling, and order reversal.
pub fn congruent(p: &PolygonShape, q: &PolygonShape, tol: f64) -> bool {
    if p.n() != q.n() {
        return false;
    }
    let base = edge_profile(p.edges());
    let mut variants: Vec<Vec<[f64; 2]>> = Vec::with_capacity(4);
    let fwd = q.edges().to_vec();
    let rev: Vec<[f64; 2]> = q.edges().iter().rev().copied().collect();
    for edges in [fwd, rev] {
        let mirrored: Vec<[f64; 2]> = edges.iter().map(|e| [e[0], -e[1]]).collect();
        variants.push(edges);
        variants.push(mirrored);
    }
    variants
        .iter()
        .any(|edges| profiles_match(&base, &edge_profile(edges), tol))
}

/// Partitions a list of polygons into congruence classes; returns index sets.
pub fn congruence_classes_of_orbit(quads: &[PolygonShape]) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, q) in quads.iter().enumerate() {
        match classes
            .iter_mut()
            .find(|class| congruent(&quads[class[0]], q, CONGRUENCE_TOL))
        {
            Some(class) => class.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}

/// Rotates `edges` onto `target` with the least-squares optimal angle and
/// reports the largest per-component deviation. Mirrors first when the
/// orientations disagree.
pub fn align_to_target(edges: &[[f64; 2]], target: &[[f64; 2]]) -> (Vec<[f64; 2]>, f64) {
    let orientation = |es: &[[f64; 2]]| -> f64 {
        let n = es.len();
        (0..n)
            .map(|i| {
                let e = es[i];
                let f = es[(i + 1) % n];
                (e[0] * f[1] - e[1] * f[0]).atan2(e[0] * f[0] + e[1] * f[1])
            })
            .sum()
    };
    let mut working: Vec<[f64; 2]> = edges.to_vec();
    if orientation(edges) * orientation(target) < 0.0 {
        for e in &mut working {
            e[1] = -e[1];
        }
    }
    // Treat edges as complex numbers; the optimal rotation angle is the
    // argument of Σ target_k · conj(edge_k).
    let (mut re, mut im) = (0.0, 0.0);
    for (e, t) in working.iter().zip(target) {
        re += t[0] * e[0] + t[1] * e[1];
        im += t[1] * e[0] - t[0] * e[1];
    }
    let phi = im.atan2(re);
    let (s, c) = phi.sin_cos();
    let rotated: Vec<[f64; 2]> = working
        .iter()
        .map(|e| [c * e[0] - s * e[1], s * e[0] + c * e[1]])
        .collect();
    let dev = rotated
        .iter()
        .zip(target)
        .flat_map(|(e, t)| [(e[0] - t[0]).abs(), (e[1] - t[1]).abs()])
        .fold(0.0, f64::max);
    (rotated, dev)
}
