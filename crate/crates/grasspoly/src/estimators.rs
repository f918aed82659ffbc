//! Monte Carlo harness: named experiments with exact targets, standard
//! errors, z-scores, and a χ² uniformity test for cell occupancy.
//!
//! Estimation is a pure function of (experiment, n_samples, seed, stream,
//! workers): worker w draws from substream stream+w and partial results are
//! merged in worker order, so a run is bit-stable for a fixed worker count.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::collections::HashMap;
use thiserror::Error;

use crate::grassmann::SignSignature;
use crate::hyperoctahedral::orbit_of_signature;
use crate::grassmann::SignatureMode;
use crate::polygon::{classify_polygon, convex_fraction_exact, PolygonClass, PolygonShape};
use crate::sampling::SampleStream;
use crate::triangle::{classify_sides, TriangleClass, TriangleQuantities, TriangleShape};

/// Minimum sample budget for a registered experiment.
pub const MIN_SAMPLES: u64 = 1_000;
/// χ² tests demand at least this expected count per category.
pub const MIN_EXPECTED_COUNT: f64 = 20.0;

#[derive(Debug, Error)]
pub enum EstimateError {
    #[error("unknown experiment '{0}'")]
    UnknownExperiment(String),
    #[error("n_samples = {got} below the minimum {MIN_SAMPLES}")]
    TooFewSamples { got: u64 },
    #[error("insufficient samples: expected count per cell {expected:.1} < {MIN_EXPECTED_COUNT}")]
    InsufficientSamples { expected: f64 },
    #[error("domain error: {0}")]
    Domain(String),
}

/// The registered experiments, each tied to an exact answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentId {
    /// P(obtuse) = 3/2 − 3 ln 2 / π.
    Obtuse,
    /// Mean triangle area, exactly 1/(4π).
    Area,
    /// Mean circumcircle curvature, exactly π/2.
    Circumcurvature,
    /// P(convex n-gon) = 2/(n−1)!.
    ConvexFraction(usize),
    /// Convex/reflex/self-intersecting quadrilaterals, 1/3 each.
    QuadClasses,
    /// χ² uniformity over the 96 sign cells.
    CellOccupancy,
}

impl ExperimentId {
    /// Parses a CLI-style name; `n` feeds `convex-fraction` (default 4).
    pub fn parse(name: &str, n: Option<usize>) -> Result<ExperimentId, EstimateError> {
        match name {
            "obtuse" => Ok(ExperimentId::Obtuse),
            "area" => Ok(ExperimentId::Area),
            "circumcurvature" => Ok(ExperimentId::Circumcurvature),
            "convex-fraction" => Ok(ExperimentId::ConvexFraction(n.unwrap_or(4))),
            "quad-classes" => Ok(ExperimentId::QuadClasses),
            "cell-occupancy" => Ok(ExperimentId::CellOccupancy),
            other => Err(EstimateError::UnknownExperiment(other.to_string())),
        }
    }

    /// All experiment names with their exact targets, for help text.
    pub fn catalog() -> Vec<(&'static str, String)> {
        vec![
            (
                "obtuse",
                format!(
                    "P(obtuse triangle) = 3/2 - 3 ln2/pi = {:.10}",
                    crate::triangle::obtuse_probability_exact()
                ),
            ),
            ("area", format!("E[area] = 1/(4 pi) = {:.10}", 0.25 / std::f64::consts::PI)),
            (
                "circumcurvature",
                format!("E[circumcurvature] = pi/2 = {:.10}", std::f64::consts::FRAC_PI_2),
            ),
            (
                "convex-fraction",
                "P(convex n-gon) = 2/(n-1)!  (1/3 at n=4, 1/12 at n=5; set --n)".to_string(),
            ),
            (
                "quad-classes",
                "P(convex) = P(reflex) = P(self-intersecting) = 1/3 for quadrilaterals"
                    .to_string(),
            ),
            (
                "cell-occupancy",
                "chi-square uniformity over the 96 sign cells of G2(R4), 95 dof".to_string(),
            ),
        ]
    }
}

/// One estimate with its uncertainty and, when known, the exact answer.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateReport {
    pub schema: &'static str,
    pub name: String,
    pub n_samples: u64,
    pub estimate: f64,
    pub std_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_score: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_value: Option<f64>,
    /// Samples that landed on a classification boundary (measure zero;
    /// expected to stay 0 in double precision).
    pub degenerate_count: u64,
    pub seed: u64,
    pub stream_id: u64,
    pub workers: usize,
}

pub const SCHEMA: &str = "grasspoly/1";

impl EstimateReport {
    fn new(name: &str, n: u64, mean: f64, se: f64, exact: Option<f64>) -> EstimateReport {
        EstimateReport {
            schema: SCHEMA,
            name: name.to_string(),
            n_samples: n,
            estimate: mean,
            std_error: se,
            exact_value: exact,
            z_score: exact.map(|e| (mean - e) / se),
            p_value: None,
            degenerate_count: 0,
            seed: 0,
            stream_id: 0,
            workers: 1,
        }
    }

    /// |z| above this fails the run (CLI exit code 3).
    pub fn z_acceptable(&self) -> bool {
        self.z_score.map(|z| z.abs() < 4.0).unwrap_or(true)
    }
}

/// Compensated (Kahan) accumulator; each add loses at most 1 ulp.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }

    pub fn merge(&mut self, other: &KahanSum) {
        self.add(other.sum);
        self.add(-other.c);
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct MomentAccumulator {
    sum: KahanSum,
    sum_sq: KahanSum,
    n: u64,
    degenerate: u64,
}

impl MomentAccumulator {
    fn push(&mut self, x: f64) {
        self.sum.add(x);
        self.sum_sq.add(x * x);
        self.n += 1;
    }

    fn merge(&mut self, other: &MomentAccumulator) {
        self.sum.merge(&other.sum);
        self.sum_sq.merge(&other.sum_sq);
        self.n += other.n;
        self.degenerate += other.degenerate;
    }

    fn mean(&self) -> f64 {
        self.sum.value() / self.n as f64
    }

    /// Sample standard deviation over √n.
    fn std_error(&self) -> f64 {
        let n = self.n as f64;
        let mean = self.mean();
        let var = (self.sum_sq.value() - n * mean * mean) / (n - 1.0);
        (var.max(0.0) / n).sqrt()
    }
}

/// Splits `total` across `workers` with the remainder on the early workers.
fn share(total: u64, workers: usize, w: usize) -> u64 {
    let base = total / workers as u64;
    let extra = total % workers as u64;
    base + if (w as u64) < extra { 1 } else { 0 }
}

fn parallel_accumulate<A, F>(
    stream: &SampleStream,
    n_samples: u64,
    workers: usize,
    body: F,
) -> Vec<A>
where
    A: Default + Send,
    F: Fn(&mut SampleStream, u64, &mut A) + Sync,
{
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let quota = share(n_samples, workers, w);
                let mut sub = stream.substream(w as u64);
                let body = &body;
                scope.spawn(move || {
                    let mut acc = A::default();
                    body(&mut sub, quota, &mut acc);
                    acc
                })
            })
            .collect();
        // Join in worker order: the reduction order is part of the contract.
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn scalar_experiment<F>(
    name: &str,
    exact: Option<f64>,
    stream: &SampleStream,
    n_samples: u64,
    workers: usize,
    f: F,
) -> EstimateReport
where
    F: Fn(&mut SampleStream) -> (f64, bool) + Sync,
{
    let parts: Vec<MomentAccumulator> =
        parallel_accumulate(stream, n_samples, workers, |sub, quota, acc: &mut MomentAccumulator| {
            for _ in 0..quota {
                let (x, degenerate) = f(sub);
                acc.push(x);
                if degenerate {
                    acc.degenerate += 1;
                }
            }
        });
    let mut total = MomentAccumulator::default();
    for p in &parts {
        total.merge(p);
    }
    let mut report = EstimateReport::new(name, total.n, total.mean(), total.std_error(), exact);
    report.degenerate_count = total.degenerate;
    report.seed = stream.seed();
    report.stream_id = stream.stream_id();
    report.workers = workers;
    report
}

/// Runs a registered experiment. Multi-statistic experiments return one
/// report per statistic (quad-classes) or a χ² report (cell-occupancy).
pub fn estimate(
    id: ExperimentId,
    n_samples: u64,
    stream: &SampleStream,
    workers: usize,
) -> Result<Vec<EstimateReport>, EstimateError> {
    if n_samples < MIN_SAMPLES {
        return Err(EstimateError::TooFewSamples { got: n_samples });
    }
    if workers == 0 {
        return Err(EstimateError::Domain("workers must be at least 1".into()));
    }
    match id {
        ExperimentId::Obtuse => Ok(vec![scalar_experiment(
            "obtuse",
            Some(crate::triangle::obtuse_probability_exact()),
            stream,
            n_samples,
            workers,
            |s| {
                let t = TriangleShape::from_sphere(&s.sphere());
                // Tie rule: the measure-zero boundary (right and degenerate
                // shapes) counts as obtuse and is tallied separately.
                match classify_sides(t.a(), t.b(), t.c()) {
                    TriangleClass::Obtuse => (1.0, false),
                    TriangleClass::Acute => (0.0, false),
                    TriangleClass::Right | TriangleClass::Degenerate => (1.0, true),
                }
            },
        )]),
        ExperimentId::Area => Ok(vec![scalar_experiment(
            "area",
            Some(0.25 / std::f64::consts::PI),
            stream,
            n_samples,
            workers,
            |s| {
                let p = s.sphere();
                (TriangleQuantities::from_sphere(&p).area, false)
            },
        )]),
        ExperimentId::Circumcurvature => Ok(vec![scalar_experiment(
            "circumcurvature",
            Some(std::f64::consts::FRAC_PI_2),
            stream,
            n_samples,
            workers,
            |s| {
                let p = s.sphere();
                let q = TriangleQuantities::from_sphere(&p);
                match q.circumcurvature {
                    Some(k) => (k, false),
                    // Degenerate triangle: curvature 4·area/(abc) → 0/0; the
                    // limit along the sphere is 0 only off the corners, but
                    // the event has measure zero. Count it and emit 0.
                    None => (0.0, true),
                }
            },
        )]),
        ExperimentId::ConvexFraction(n) => {
            let exact = convex_fraction_exact(n)
                .map_err(|e| EstimateError::Domain(e.to_string()))?;
            Ok(vec![scalar_experiment(
                &format!("convex-fraction-n{n}"),
                Some(exact),
                stream,
                n_samples,
                workers,
                move |s| {
                    let poly = PolygonShape::from_frame(&s.frame(n));
                    match classify_polygon(&poly, 0.0) {
                        PolygonClass::Convex => (1.0, false),
                        PolygonClass::Degenerate => (0.0, true),
                        _ => (0.0, false),
                    }
                },
            )])
        }
        ExperimentId::QuadClasses => {
            #[derive(Default)]
            struct Counts {
                convex: u64,
                reflex: u64,
                selfx: u64,
                degenerate: u64,
                n: u64,
            }
            let parts: Vec<Counts> =
                parallel_accumulate(stream, n_samples, workers, |sub, quota, acc: &mut Counts| {
                    for _ in 0..quota {
                        let poly = PolygonShape::from_frame(&sub.frame(4));
                        match classify_polygon(&poly, 0.0) {
                            PolygonClass::Convex => acc.convex += 1,
                            PolygonClass::Reflex => acc.reflex += 1,
                            PolygonClass::SelfIntersecting => acc.selfx += 1,
                            PolygonClass::Degenerate => acc.degenerate += 1,
                        }
                        acc.n += 1;
                    }
                });
            let mut total = Counts::default();
            for p in &parts {
                total.convex += p.convex;
                total.reflex += p.reflex;
                total.selfx += p.selfx;
                total.degenerate += p.degenerate;
                total.n += p.n;
            }
            let third = 1.0 / 3.0;
            let make = |label: &str, count: u64| {
                let n = total.n as f64;
                let p_hat = count as f64 / n;
                let se = (p_hat * (1.0 - p_hat) / (n - 1.0)).sqrt().max(f64::MIN_POSITIVE);
                let mut r = EstimateReport::new(
                    &format!("quad-classes/{label}"),
                    total.n,
                    p_hat,
                    se,
                    Some(third),
                );
                r.degenerate_count = total.degenerate;
                r.seed = stream.seed();
                r.stream_id = stream.stream_id();
                r.workers = workers;
                r
            };
            Ok(vec![
                make("convex", total.convex),
                make("reflex", total.reflex),
                make("self_intersecting", total.selfx),
            ])
        }
        ExperimentId::CellOccupancy => {
            let cells =
                orbit_of_signature(&SignSignature::base_cell_n4(), SignatureMode::Cell)
                    .map_err(|e| EstimateError::Domain(e.to_string()))?;
            let index: HashMap<SignSignature, usize> =
                cells.iter().cloned().enumerate().map(|(k, sig)| (sig, k)).collect();
            #[derive(Default)]
            struct Occupancy {
                counts: Vec<u64>,
                degenerate: u64,
            }
            let parts: Vec<Occupancy> = parallel_accumulate(
                stream,
                n_samples,
                workers,
                |sub, quota, acc: &mut Occupancy| {
                    acc.counts.resize(index.len(), 0);
                    for _ in 0..quota {
                        let sig = SignSignature::of_frame(&sub.frame(4), 0.0);
                        match index.get(&sig) {
                            Some(&k) => acc.counts[k] += 1,
                            // A wall hit; representable but measure zero.
                            None => acc.degenerate += 1,
                        }
                    }
                },
            );
            let mut counts = vec![0u64; index.len()];
            let mut degenerate = 0;
            for p in &parts {
                for (c, pc) in counts.iter_mut().zip(&p.counts) {
                    *c += pc;
                }
                degenerate += p.degenerate;
            }
            let chi = chi_square_uniformity(&counts)?;
            let dof = chi.dof;
            let mut r = EstimateReport::new(
                "cell-occupancy",
                n_samples,
                chi.statistic,
                (2.0 * dof).sqrt(),
                Some(dof),
            );
            r.p_value = Some(chi.p_value);
            r.degenerate_count = degenerate;
            r.seed = stream.seed();
            r.stream_id = stream.stream_id();
            r.workers = workers;
            Ok(vec![r])
        }
    }
}

/// Pearson χ² against the uniform distribution over the given categories.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: f64,
    pub p_value: f64,
}

pub fn chi_square_uniformity(counts: &[u64]) -> Result<ChiSquareResult, EstimateError> {
    let k = counts.len();
    if k < 2 {
        return Err(EstimateError::Domain("need at least 2 categories".into()));
    }
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / k as f64;
    if expected < MIN_EXPECTED_COUNT {
        return Err(EstimateError::InsufficientSamples { expected });
    }
    let statistic: f64 = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    let dof = (k - 1) as f64;
    let dist = ChiSquared::new(dof).expect("dof >= 1");
    let p_value = dist.sf(statistic);
    Ok(ChiSquareResult { statistic, dof, p_value })
}

/// Circumcurvature estimate plus heavy-tail diagnostics for the circumradius,
/// whose mean diverges even though the curvature's is finite.
#[derive(Debug, Clone, Serialize)]
pub struct VarianceGuardReport {
    pub report: EstimateReport,
    pub max_circumradius: f64,
    /// Running maxima at sample-count checkpoints, nondecreasing.
    pub checkpoints: Vec<(u64, f64)>,
}

pub fn circumcurvature_variance_guard(
    n_samples: u64,
    stream: &SampleStream,
) -> Result<VarianceGuardReport, EstimateError> {
    if n_samples < MIN_SAMPLES {
        return Err(EstimateError::TooFewSamples { got: n_samples });
    }
    let mut s = stream.clone();
    let mut acc = MomentAccumulator::default();
    let mut max_radius: f64 = 0.0;
    let mut checkpoints = Vec::new();
    let mut next_checkpoint = 1_000u64;
    for k in 1..=n_samples {
        let p = s.sphere();
        let q = TriangleQuantities::from_sphere(&p);
        match q.circumcurvature {
            Some(curv) => {
                acc.push(curv);
                max_radius = max_radius.max(1.0 / curv);
            }
            None => {
                acc.push(0.0);
                acc.degenerate += 1;
            }
        }
        if k == next_checkpoint || k == n_samples {
            checkpoints.push((k, max_radius));
            next_checkpoint = next_checkpoint.saturating_mul(10);
        }
    }
    let mut report = EstimateReport::new(
        "circumcurvature",
        n_samples,
        acc.mean(),
        acc.std_error(),
        Some(std::f64::consts::FRAC_PI_2),
    );
    report.degenerate_count = acc.degenerate;
    report.seed = stream.seed();
    report.stream_id = stream.stream_id();
    Ok(VarianceGuardReport { report, max_circumradius: max_radius, checkpoints })
}
