//! The signed-permutation group Bₙ and its action on frames, Plücker
//! matrices, and sign signatures; stabilizer scans and chamber counting.
//!
//! An element β is stored one-line on {1, …, n} with signed images, with
//! β(−i) = −β(i) implicit. Composition is pointwise, (β ∘ δ)(i) = β(δ(i)).
//! The matrix action on frames is row i of βA = sgn β(i) · row |β(i)| of A,
//! which makes act(β∘δ, F) = act(δ, act(β, F)); all functoriality tests are
//! stated against that identity.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::collections::{HashMap, HashSet, VecDeque};
use thiserror::Error;

use crate::grassmann::{upper_pairs, Frame, PluckerMatrix, SignSignature, SignatureMode};

/// Exhaustive scans enumerate 2ⁿ·n! elements; n = 8 is ~10.3M and the cap.
pub const MAX_EXHAUSTIVE_N: usize = 8;
/// Orbit closures store every signature reached; capped lower.
pub const MAX_ORBIT_N: usize = 6;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("invalid signed permutation: {0}")]
    InvalidPermutation(String),
    #[error("dimension mismatch: element acts on {element_n}, object has {object_n}")]
    DimensionMismatch { element_n: usize, object_n: usize },
    #[error("n = {n} exceeds exhaustive capacity {max}")]
    CapacityExceeded { n: usize, max: usize },
}

/// Element of the hyperoctahedral group Bₙ: a permutation β of
/// (−n, …, −1, 1, …, n) with β(−i) = −β(i).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    /// images[i] = β(i+1), a signed 1-based value.
    images: Vec<i32>,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> SignedPermutation {
        SignedPermutation { images: (1..=n as i32).collect() }
    }

    /// Validates that |images| is a bijection of {1, …, n}.
    pub fn from_images(images: Vec<i32>) -> Result<SignedPermutation, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &im in &images {
            let a = im.unsigned_abs() as usize;
            if im == 0 || a == 0 || a > n {
                return Err(GroupError::InvalidPermutation(format!(
                    "image {im} out of range for n = {n}"
                )));
            }
            if seen[a - 1] {
                return Err(GroupError::InvalidPermutation(format!(
                    "absolute image {a} repeated"
                )));
            }
            seen[a - 1] = true;
        }
        Ok(SignedPermutation { images })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// β applied to a signed 1-based index.
    pub fn map(&self, i: i32) -> i32 {
        debug_assert!(i != 0 && i.unsigned_abs() as usize <= self.n());
        if i > 0 {
            self.images[(i - 1) as usize]
        } else {
            -self.images[(-i - 1) as usize]
        }
    }

    pub fn images(&self) -> &[i32] {
        &self.images
    }

    /// Pointwise composition (self ∘ other)(i) = self(other(i)).
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        assert_eq!(self.n(), other.n());
        let images = (1..=self.n() as i32).map(|i| self.map(other.map(i))).collect();
        SignedPermutation { images }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let n = self.n();
        let mut images = vec![0i32; n];
        for i in 1..=n as i32 {
            let im = self.map(i);
            let slot = (im.unsigned_abs() - 1) as usize;
            images[slot] = if im > 0 { i } else { -i };
        }
        SignedPermutation { images }
    }

    /// The shift-with-flip generator: i ↦ i+1 for i < n, n ↦ −1. Its n-th
    /// power is the full sign flip, so it has order 2n.
    pub fn shift_with_flip(n: usize) -> SignedPermutation {
        let mut images: Vec<i32> = (2..=n as i32).collect();
        images.push(-1);
        SignedPermutation { images }
    }

    /// η: flips every sign; acts trivially on planes.
    pub fn full_flip(n: usize) -> SignedPermutation {
        SignedPermutation { images: (1..=n as i32).map(|i| -i).collect() }
    }

    /// γ: order reversal i ↦ n+1−i, no sign changes.
    pub fn reversal(n: usize) -> SignedPermutation {
        SignedPermutation { images: (1..=n as i32).rev().collect() }
    }

    /// Transposition of 1-based indices a and b.
    pub fn transposition(n: usize, a: usize, b: usize) -> SignedPermutation {
        let mut images: Vec<i32> = (1..=n as i32).collect();
        images.swap(a - 1, b - 1);
        SignedPermutation { images }
    }

    /// Sign flip on the single 1-based index a.
    pub fn sign_flip(n: usize, a: usize) -> SignedPermutation {
        let mut images: Vec<i32> = (1..=n as i32).collect();
        images[a - 1] = -(a as i32);
        SignedPermutation { images }
    }

    /// Unsigned permutation with the same index relocation, signs dropped.
    pub fn unsigned(&self) -> SignedPermutation {
        SignedPermutation { images: self.images.iter().map(|im| im.abs()).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| im == i as i32 + 1)
    }

    /// Row i of the output is sgn β(i+1) times row |β(i+1)| of the input.
    pub fn act_on_frame(&self, frame: &Frame) -> Result<Frame, GroupError> {
        let n = self.check_n(frame.n())?;
        let mut u = vec![0.0; n];
        let mut v = vec![0.0; n];
        for i in 0..n {
            let im = self.images[i];
            let src = (im.unsigned_abs() - 1) as usize;
            let s = if im > 0 { 1.0 } else { -1.0 };
            u[i] = s * frame.u()[src];
            v[i] = s * frame.v()[src];
        }
        Ok(Frame::new(u, v).expect("signed row permutation preserves orthonormality"))
    }

    /// Δ(βP)ᵢⱼ = sgn β(i) sgn β(j) Δ(P)_{|β(i)| |β(j)|}.
    pub fn act_on_plucker(&self, p: &PluckerMatrix) -> Result<PluckerMatrix, GroupError> {
        let n = self.check_n(p.n())?;
        let mut upper = vec![0.0; n * (n - 1) / 2];
        for (idx, (i, j)) in upper_pairs(n).enumerate() {
            let (bi, bj) = (self.images[i], self.images[j]);
            let s = (bi.signum() * bj.signum()) as f64;
            upper[idx] = s
                * p.get((bi.unsigned_abs() - 1) as usize, (bj.unsigned_abs() - 1) as usize);
        }
        Ok(PluckerMatrix::from_upper(n, upper).expect("shape preserved"))
    }

    /// Same index/sign action applied to both sign matrices; the result is
    /// re-canonicalized.
    pub fn act_on_signature(&self, sig: &SignSignature) -> Result<SignSignature, GroupError> {
        let n = self.check_n(sig.n())?;
        let mut plucker = Vec::with_capacity(n * (n - 1) / 2);
        for (i, j) in upper_pairs(n) {
            let (bi, bj) = (self.images[i], self.images[j]);
            let s = (bi.signum() * bj.signum()) as i8;
            plucker.push(
                s * sig.plucker_sign(
                    (bi.unsigned_abs() - 1) as usize,
                    (bj.unsigned_abs() - 1) as usize,
                ),
            );
        }
        let mut projection = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                let (bi, bj) = (self.images[i], self.images[j]);
                let s = (bi.signum() * bj.signum()) as i8;
                projection.push(
                    s * sig.projection_sign(
                        (bi.unsigned_abs() - 1) as usize,
                        (bj.unsigned_abs() - 1) as usize,
                    ),
                );
            }
        }
        Ok(SignSignature::from_raw(n, plucker, projection))
    }

    fn check_n(&self, object_n: usize) -> Result<usize, GroupError> {
        if self.n() != object_n {
            return Err(GroupError::DimensionMismatch {
                element_n: self.n(),
                object_n,
            });
        }
        Ok(object_n)
    }

    /// Cycle notation on {±1, …, ±n}, matching the convention that mirror
    /// cycles are written out, e.g. "(1,2)(-1,-2)". The identity is "()".
    pub fn to_cycle_string(&self) -> String {
        let n = self.n() as i32;
        let order: Vec<i32> = (1..=n).chain((1..=n).map(|i| -i)).collect();
        let mut visited: HashSet<i32> = HashSet::new();
        let mut out = String::new();
        for &start in &order {
            if visited.contains(&start) || self.map(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            visited.insert(start);
            let mut cur = self.map(start);
            while cur != start {
                visited.insert(cur);
                cycle.push(cur);
                cur = self.map(cur);
            }
            out.push('(');
            out.push_str(
                &cycle.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
            );
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl Serialize for SignedPermutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("SignedPermutation", 2)?;
        s.serialize_field("images", &self.images)?;
        s.serialize_field("cycles", &self.to_cycle_string())?;
        s.end()
    }
}

/// Iterator over all 2ⁿ·n! elements of Bₙ, identity first.
pub fn enumerate(n: usize) -> impl Iterator<Item = SignedPermutation> {
    Permutations::new(n).flat_map(move |perm| {
        (0..(1u32 << n)).map(move |mask| {
            let images = perm
                .iter()
                .enumerate()
                .map(|(i, &p)| if mask >> i & 1 == 1 { -p } else { p })
                .collect();
            SignedPermutation { images }
        })
    })
}

/// Lexicographic permutation generator over (1, …, n).
struct Permutations {
    state: Vec<i32>,
    done: bool,
}

impl Permutations {
    fn new(n: usize) -> Permutations {
        Permutations { state: (1..=n as i32).collect(), done: n == 0 }
    }
}

impl Iterator for Permutations {
    type Item = Vec<i32>;
    fn next(&mut self) -> Option<Vec<i32>> {
        if self.done {
            return None;
        }
        let current = self.state.clone();
        // Standard next-permutation step.
        let s = &mut self.state;
        let n = s.len();
        let mut i = n.wrapping_sub(1);
        while i > 0 && s[i - 1] >= s[i] {
            i -= 1;
        }
        if i == 0 {
            self.done = true;
        } else {
            let mut j = n - 1;
            while s[j] <= s[i - 1] {
                j -= 1;
            }
            s.swap(i - 1, j);
            s[i..].reverse();
        }
        Some(current)
    }
}

pub fn group_order(n: usize) -> u64 {
    (1..=n as u64).product::<u64>() << n
}

/// Orbit size, stabilizer order, and the stabilizer itself for a signature
/// under the full Bₙ action.
#[derive(Debug, Clone)]
pub struct GroupOrbitReport {
    pub orbit_size: u64,
    pub stabilizer_order: u64,
    pub stabilizer_elements: Vec<SignedPermutation>,
}

impl Serialize for GroupOrbitReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("GroupOrbitReport", 4)?;
        s.serialize_field("orbit_size", &self.orbit_size)?;
        s.serialize_field("stabilizer_order", &self.stabilizer_order)?;
        s.serialize_field("group_order", &(self.orbit_size * self.stabilizer_order))?;
        let cycles: Vec<String> =
            self.stabilizer_elements.iter().map(|b| b.to_cycle_string()).collect();
        s.serialize_field("stabilizer_elements", &cycles)?;
        s.end()
    }
}

/// Brute-force scan of Bₙ for all elements fixing `target` (compared in
/// `mode` after canonicalization). Orbit size follows by orbit–stabilizer.
pub fn stabilizer_of_signature(
    target: &SignSignature,
    mode: SignatureMode,
) -> Result<GroupOrbitReport, GroupError> {
    let n = target.n();
    if n > MAX_EXHAUSTIVE_N {
        return Err(GroupError::CapacityExceeded { n, max: MAX_EXHAUSTIVE_N });
    }
    let mut stabilizer_elements = Vec::new();
    for beta in enumerate(n) {
        let moved = beta.act_on_signature(target)?;
        if moved.eq_in_mode(target, mode) {
            stabilizer_elements.push(beta);
        }
    }
    let stabilizer_order = stabilizer_elements.len() as u64;
    Ok(GroupOrbitReport {
        orbit_size: group_order(n) / stabilizer_order,
        stabilizer_order,
        stabilizer_elements,
    })
}

/// Closed-form chamber count 2^{n−2} · (n−1)!; None once it overflows u128
/// (n ≥ 35).
pub fn count_chambers(n: usize) -> Option<u128> {
    if n < 3 {
        return None;
    }
    let mut fact: u128 = 1;
    for k in 1..n as u128 {
        fact = fact.checked_mul(k)?;
    }
    fact.checked_shl(n as u32 - 2)
}

/// Chamber count by brute force: the Bₙ-orbit size of the all-positive
/// chamber, via the stabilizer scan. Cross-check for [`count_chambers`].
pub fn count_chambers_exhaustive(n: usize) -> Result<u64, GroupError> {
    let report =
        stabilizer_of_signature(&SignSignature::positive_chamber(n), SignatureMode::Chamber)?;
    Ok(report.orbit_size)
}

/// Sign-cell count for n = 4, computed as |B₄| / |cell stabilizer| = 384/4.
pub fn count_cells_n4() -> Result<u64, GroupError> {
    let report =
        stabilizer_of_signature(&SignSignature::base_cell_n4(), SignatureMode::Cell)?;
    Ok(report.orbit_size)
}

/// BFS closure of `seed` under the Bₙ generators (adjacent transpositions
/// plus one sign flip), in the given comparison mode.
pub fn orbit_of_signature(
    seed: &SignSignature,
    mode: SignatureMode,
) -> Result<Vec<SignSignature>, GroupError> {
    let n = seed.n();
    if n > MAX_ORBIT_N {
        return Err(GroupError::CapacityExceeded { n, max: MAX_ORBIT_N });
    }
    let normalize = |sig: &SignSignature| match mode {
        SignatureMode::Chamber => sig.chamber_only(),
        SignatureMode::Cell => sig.clone(),
    };
    let mut generators: Vec<SignedPermutation> = (1..n)
        .map(|i| SignedPermutation::transposition(n, i, i + 1))
        .collect();
    generators.push(SignedPermutation::sign_flip(n, 1));

    let start = normalize(seed);
    let mut seen: HashSet<SignSignature> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut out = Vec::new();
    while let Some(sig) = queue.pop_front() {
        out.push(sig.clone());
        for g in &generators {
            let next = normalize(&g.act_on_signature(&sig)?);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(out)
}

/// All 24 unsigned permutations of S₄ embedded in B₄ (all signs +).
pub fn s4_unsigned() -> Vec<SignedPermutation> {
    Permutations::new(4).map(|images| SignedPermutation { images }).collect()
}

/// Class counts keyed by canonical signature; used by the cell-occupancy
/// experiments.
pub type SignatureCounts = HashMap<SignSignature, u64>;
