//! Command-line entry point: reproducible sampling, the named Monte Carlo
//! experiments, orbit/stabilizer reports, cell tables, figure data, and the
//! acceptance verifier.
//!
//! Exit codes: 0 success, 2 validation error, 3 statistical acceptance
//! failure. Validation failures emit machine-readable JSON on stderr.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use grasspoly::estimators::{estimate, EstimateReport, ExperimentId, SCHEMA};
use grasspoly::grassmann::{PluckerMatrix, SignSignature, SignatureMode};
use grasspoly::hyperoctahedral::{orbit_of_signature, stabilizer_of_signature};
use grasspoly::polygon::PolygonShape;
use grasspoly::quadcells::{build_quad_cell_table, flag_mean};
use grasspoly::sampling::SampleStream;
use grasspoly::triangle::{
    rotation_orbit_trace, SpherePoint, TriangleQuantities, TriangleShape,
};
use grasspoly::verify::{run_suite, Suite};

const EXPERIMENT_HELP: &str = "\
Registered experiments and their exact targets:
  obtuse            P(obtuse triangle)        = 3/2 - 3 ln2/pi ~= 0.8380931995
  area              E[triangle area]          = 1/(4 pi)       ~= 0.0795774715
  circumcurvature   E[circumcircle curvature] = pi/2           ~= 1.5707963268
  convex-fraction   P(convex n-gon)           = 2/(n-1)!  (--n selects n; 1/3 at n=4, 1/12 at n=5)
  quad-classes      P(convex) = P(reflex) = P(self-intersecting) = 1/3 for quadrilaterals
  cell-occupancy    chi-square uniformity over the 96 sign cells (95 dof); reports the p-value

Runs are pure functions of (--seed, --stream, --samples, --workers); exit
code 3 flags any estimate with |z| > 4.";

#[derive(Parser)]
#[command(
    name = "grasspoly",
    about = "Planar polygons as 2-planes: samplers, exact answers, and Monte Carlo checks",
    version
)]
struct Cli {
    /// RNG seed; falls back to GRASSPOLY_SEED, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Chamber,
    Cell,
}

impl From<Mode> for SignatureMode {
    fn from(m: Mode) -> SignatureMode {
        match m {
            Mode::Chamber => SignatureMode::Chamber,
            Mode::Cell => SignatureMode::Cell,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Draw frames from the uniform measure and print them with provenance.
    Sample {
        /// Edge count of the sampled polygons.
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sample triangles: sphere point, sides, derived quantities, class.
    Triangle {
        #[arg(long, default_value_t = 10)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run a registered Monte Carlo experiment against its exact answer.
    #[command(after_help = EXPERIMENT_HELP)]
    Estimate {
        /// Experiment name (see below).
        #[arg(long)]
        name: String,
        /// Edge count for convex-fraction.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        /// Worker threads; results are bit-stable for a fixed count.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Trace the canonical triangles along a rotation orbit.
    Trace {
        /// Starting sphere point as "x,y,z" (default: the equilateral point).
        #[arg(long)]
        point: Option<String>,
        /// Rotation axis as "x,y,z", normalized internally.
        #[arg(long, default_value = "-1,1,-1.4142135623730951")]
        axis: String,
        #[arg(long, default_value_t = 16)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Build the 96-cell table of quadrilateral classes and the figure data.
    Cells {
        /// Base-cell samples feeding the flag-mean representative.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Enumerate the orbit of the reference signature (chambers or cells).
    Orbit {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Chamber)]
        mode: Mode,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Brute-force the stabilizer of the reference signature in Bn.
    Stabilizer {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Chamber)]
        mode: Mode,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Flag mean of rejection samples from the base sign cell.
    Flagmean {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Render a polygon (from JSON or freshly sampled) as SVG.
    Render {
        /// JSON file holding {"edges": [[ex, ey], ...]}; "-" for stdin.
        #[arg(long)]
        input: Option<String>,
        /// Edge count when sampling a polygon instead.
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the acceptance suites; one PASS/FAIL line per criterion.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Statistical(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

macro_rules! validation {
    ($($arg:tt)*) => { CliError::Validation(format!($($arg)*)) };
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = cli.seed.or_else(read_env_seed).unwrap_or(0);
    match run(cli.command, seed) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (kind, message, code) = match &err {
                CliError::Validation(m) => ("validation", m.clone(), 2),
                CliError::Statistical(m) => ("statistical-acceptance", m.clone(), 3),
                CliError::Io(e) => ("io", e.to_string(), 2),
            };
            let payload = json!({
                "schema": SCHEMA,
                "error": { "kind": kind, "message": message },
            });
            eprintln!("{payload}");
            ExitCode::from(code)
        }
    }
}

fn read_env_seed() -> Option<u64> {
    std::env::var("GRASSPOLY_SEED").ok()?.parse().ok()
}

fn emit(out: &OutputArgs, content: &str) -> Result<(), CliError> {
    match &out.output {
        Some(path) => std::fs::write(path, content)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            if !content.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable report")
}

fn parse_vec3(text: &str) -> Result<[f64; 3], CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(validation!("expected three comma-separated numbers, got '{text}'"));
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| validation!("cannot parse '{part}' as a number"))?;
    }
    Ok(out)
}

fn run(command: Command, seed: u64) -> Result<(), CliError> {
    match command {
        Command::Sample { n, samples, stream, out } => {
            if n < 3 {
                return Err(validation!("--n must be at least 3, got {n}"));
            }
            let mut s = SampleStream::new(seed, stream);
            let mut lines = String::new();
            for _ in 0..samples {
                let provenance = s.provenance();
                let frame = s.frame(n);
                let polygon = PolygonShape::from_frame(&frame);
                let record = json!({
                    "schema": SCHEMA,
                    "provenance": provenance,
                    "frame": frame,
                    "polygon": polygon,
                    "class": polygon.classify(0.0),
                });
                lines.push_str(&record.to_string());
                lines.push('\n');
            }
            emit(&out, &lines)
        }
        Command::Triangle { samples, stream, format, out } => {
            let mut s = SampleStream::new(seed, stream);
            let mut body = String::new();
            if format == Format::Csv {
                body.push_str("counter,x,y,z,a,b,c,area,inradius,circumcurvature,class\n");
            }
            for _ in 0..samples {
                let provenance = s.provenance();
                let p = s.sphere();
                let t = TriangleShape::from_sphere(&p);
                let q = TriangleQuantities::from_sphere(&p);
                match format {
                    Format::Csv => {
                        let curv = q
                            .circumcurvature
                            .map(|k| format!("{k:.17e}"))
                            .unwrap_or_default();
                        body.push_str(&format!(
                            "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{},{}\n",
                            provenance.counter,
                            p.x(), p.y(), p.z(),
                            t.a(), t.b(), t.c(),
                            q.area, q.inradius, curv, q.class.label()
                        ));
                    }
                    Format::Json => {
                        let record = json!({
                            "schema": SCHEMA,
                            "provenance": provenance,
                            "point": p,
                            "sides": t,
                            "quantities": q,
                        });
                        body.push_str(&record.to_string());
                        body.push('\n');
                    }
                    _ => return Err(validation!("triangle supports --format json|csv")),
                }
            }
            emit(&out, &body)
        }
        Command::Estimate { name, n, samples, stream, workers, format, out } => {
            let id = ExperimentId::parse(&name, n).map_err(|e| validation!("{e}"))?;
            let reports = estimate(id, samples, &SampleStream::new(seed, stream), workers)
                .map_err(|e| validation!("{e}"))?;
            let body = match format {
                Format::Json => {
                    let mut s = String::new();
                    for r in &reports {
                        s.push_str(&serde_json::to_string(r).expect("serializable"));
                        s.push('\n');
                    }
                    s
                }
                Format::Table | Format::Csv => render_table(&reports),
                Format::Svg => return Err(validation!("estimate supports --format json|table")),
            };
            emit(&out, &body)?;
            if let Some(bad) = reports.iter().find(|r| !r.z_acceptable()) {
                return Err(CliError::Statistical(format!(
                    "{}: |z| = {:.2} exceeds 4",
                    bad.name,
                    bad.z_score.unwrap_or(f64::NAN).abs()
                )));
            }
            Ok(())
        }
        Command::Trace { point, axis, steps, format, out } => {
            let p = match point {
                Some(text) => {
                    let [x, y, z] = parse_vec3(&text)?;
                    SpherePoint::new(x, y, z).map_err(|e| validation!("{e}"))?
                }
                None => {
                    let r = 1.0 / 3f64.sqrt();
                    SpherePoint::new(r, r, r).expect("unit")
                }
            };
            let raw_axis = parse_vec3(&axis)?;
            let norm =
                (raw_axis[0].powi(2) + raw_axis[1].powi(2) + raw_axis[2].powi(2)).sqrt();
            if norm < 1e-12 {
                return Err(validation!("axis must be nonzero"));
            }
            let axis = [raw_axis[0] / norm, raw_axis[1] / norm, raw_axis[2] / norm];
            let trace =
                rotation_orbit_trace(&p, axis, steps).map_err(|e| validation!("{e}"))?;
            let body = match format {
                Format::Csv => {
                    let mut s = String::from("theta,Ax,Ay,Bx,By,Cx,Cy,degenerate\n");
                    for sample in &trace {
                        match sample.vertices {
                            Some(v) => s.push_str(&format!(
                                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},0\n",
                                sample.theta,
                                v[0][0], v[0][1], v[1][0], v[1][1], v[2][0], v[2][1]
                            )),
                            None => s.push_str(&format!("{:.17e},,,,,,,1\n", sample.theta)),
                        }
                    }
                    s
                }
                Format::Json => {
                    let record = json!({
                        "schema": SCHEMA,
                        "point": p,
                        "axis": axis,
                        "steps": steps,
                        "trace": trace,
                    });
                    to_json(&record)
                }
                _ => return Err(validation!("trace supports --format csv|json")),
            };
            emit(&out, &body)
        }
        Command::Cells { samples, stream, format, out } => {
            let mut s = SampleStream::new(seed, stream);
            let table =
                build_quad_cell_table(&mut s, samples).map_err(|e| validation!("{e}"))?;
            let (convex, reflex, selfx) = table.class_counts();
            let body = match format {
                Format::Json => {
                    let record = json!({
                        "schema": SCHEMA,
                        "seed": seed,
                        "stream": stream,
                        "class_counts": {
                            "convex": convex,
                            "reflex": reflex,
                            "self_intersecting": selfx,
                        },
                        "table": table,
                    });
                    to_json(&record)
                }
                Format::Csv => {
                    let mut s = String::from(
                        "index,permutation,class,e1x,e1y,e2x,e2y,e3x,e3y,e4x,e4y\n",
                    );
                    for (k, quad) in table.orbit24.iter().enumerate() {
                        let e = quad.polygon.edges();
                        s.push_str(&format!(
                            "{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
                            k,
                            quad.permutation.to_cycle_string(),
                            quad.class.label(),
                            e[0][0], e[0][1], e[1][0], e[1][1],
                            e[2][0], e[2][1], e[3][0], e[3][1]
                        ));
                    }
                    s
                }
                Format::Svg => cells_svg(&table),
                Format::Table => return Err(validation!("cells supports json|csv|svg")),
            };
            emit(&out, &body)
        }
        Command::Orbit { n, mode, out } => {
            let (seed_sig, label) = reference_signature(n, mode)?;
            let sigs = orbit_of_signature(&seed_sig, mode.into())
                .map_err(|e| validation!("{e}"))?;
            let record = json!({
                "schema": SCHEMA,
                "n": n,
                "mode": label,
                "orbit_size": sigs.len(),
                "signatures": sigs,
            });
            emit(&out, &to_json(&record))
        }
        Command::Stabilizer { n, mode, out } => {
            let (seed_sig, label) = reference_signature(n, mode)?;
            let report = stabilizer_of_signature(&seed_sig, mode.into())
                .map_err(|e| validation!("{e}"))?;
            let record = json!({
                "schema": SCHEMA,
                "n": n,
                "mode": label,
                "report": report,
            });
            emit(&out, &to_json(&record))
        }
        Command::Flagmean { samples, stream, out } => {
            let mut s = SampleStream::new(seed, stream);
            let base = SignSignature::base_cell_n4();
            let mut frames = Vec::with_capacity(samples.max(1));
            for _ in 0..samples.max(1) {
                frames.push(
                    s.in_signature(4, &base, SignatureMode::Cell, 1_000_000)
                        .map_err(|e| validation!("{e}"))?,
                );
            }
            let mean = flag_mean(&frames).map_err(|e| validation!("{e}"))?;
            let polygon = PolygonShape::from_frame(&mean);
            let record = json!({
                "schema": SCHEMA,
                "seed": seed,
                "stream": stream,
                "samples": samples.max(1),
                "frame": mean,
                "polygon": polygon,
                "plucker": PluckerMatrix::from_frame(&mean),
                "class": polygon.classify(0.0),
            });
            emit(&out, &to_json(&record))
        }
        Command::Render { input, n, stream, out } => {
            let polygon = match input {
                Some(path) => {
                    let text = if path == "-" {
                        std::io::read_to_string(std::io::stdin())?
                    } else {
                        std::fs::read_to_string(&path)?
                    };
                    serde_json::from_str::<PolygonShape>(&text)
                        .map_err(|e| validation!("cannot parse polygon JSON: {e}"))?
                }
                None => {
                    if n < 3 {
                        return Err(validation!("--n must be at least 3, got {n}"));
                    }
                    PolygonShape::from_frame(&SampleStream::new(seed, stream).frame(n))
                }
            };
            emit(&out, &polygon.to_svg())
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse().map_err(|e: String| validation!("{e}"))?;
            let results = run_suite(suite, seed);
            let mut failed = 0;
            for r in &results {
                println!("{}", r.line());
                if !r.passed {
                    failed += 1;
                }
            }
            if failed > 0 {
                return Err(CliError::Statistical(format!(
                    "{failed} of {} criteria failed",
                    results.len()
                )));
            }
            Ok(())
        }
    }
}

fn reference_signature(n: usize, mode: Mode) -> Result<(SignSignature, &'static str), CliError> {
    match mode {
        Mode::Chamber => {
            if n < 3 {
                return Err(validation!("--n must be at least 3, got {n}"));
            }
            Ok((SignSignature::positive_chamber(n), "chamber"))
        }
        Mode::Cell => {
            if n != 4 {
                return Err(validation!("cell mode is specific to n = 4, got {n}"));
            }
            Ok((SignSignature::base_cell_n4(), "cell"))
        }
    }
}

fn render_table(reports: &[EstimateReport]) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "{:<32} {:>12} {:>14} {:>12} {:>14} {:>8}\n",
        "experiment", "samples", "estimate", "std_error", "exact", "z"
    ));
    for r in reports {
        s.push_str(&format!(
            "{:<32} {:>12} {:>14.8} {:>12.3e} {:>14} {:>8}\n",
            r.name,
            r.n_samples,
            r.estimate,
            r.std_error,
            r.exact_value.map(|e| format!("{e:.8}")).unwrap_or_else(|| "-".into()),
            r.z_score.map(|z| format!("{z:+.2}")).unwrap_or_else(|| "-".into()),
        ));
    }
    if let Some(p) = reports.iter().find_map(|r| r.p_value) {
        s.push_str(&format!("p-value: {p:.4}\n"));
    }
    s
}

/// 6×4 grid of the 24 orbit quadrilaterals, stroke-colored by class.
fn cells_svg(table: &grasspoly::quadcells::QuadCellTable) -> String {
    const CELL: f64 = 160.0;
    const COLS: usize = 6;
    let rows = table.orbit24.len().div_ceil(COLS);
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" \
         viewBox=\"0 0 {} {}\">\n",
        COLS as f64 * CELL,
        rows as f64 * CELL,
        COLS as f64 * CELL,
        rows as f64 * CELL
    );
    for (k, quad) in table.orbit24.iter().enumerate() {
        let (col, row) = (k % COLS, k / COLS);
        let verts = quad.polygon.vertices();
        let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in &verts {
            min_x = min_x.min(v[0]);
            max_x = max_x.max(v[0]);
            min_y = min_y.min(v[1]);
            max_y = max_y.max(v[1]);
        }
        let span = (max_x - min_x).max(max_y - min_y).max(1e-12);
        let scale = (CELL - 30.0) / span;
        let cx = (min_x + max_x) / 2.0;
        let cy = (min_y + max_y) / 2.0;
        let ox = col as f64 * CELL + CELL / 2.0;
        let oy = row as f64 * CELL + CELL / 2.0;
        let points: Vec<String> = verts
            .iter()
            .map(|v| {
                format!(
                    "{:.2},{:.2}",
                    ox + (v[0] - cx) * scale,
                    oy - (v[1] - cy) * scale
                )
            })
            .collect();
        let color = match quad.class {
            grasspoly::polygon::PolygonClass::Convex => "#2a7e43",
            grasspoly::polygon::PolygonClass::Reflex => "#2457a8",
            grasspoly::polygon::PolygonClass::SelfIntersecting => "#b03a3a",
            grasspoly::polygon::PolygonClass::Degenerate => "#888888",
        };
        svg.push_str(&format!(
            "  <polygon points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n",
            points.join(" "),
            color
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
