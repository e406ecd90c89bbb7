//! `khull`: hulls, Poisson simulations and limit experiments from the
//! command line.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use khull_core::empirical::{
    cones_experiment, inclusion_experiment, recession_experiment, so2_square_experiment, translation_box_experiment,
    ConesConfig, InclusionConfig, RecessionConfig, So2Config, TranslationBoxConfig,
};
use khull_core::hull::{compute_hull, generic_hull_membership, HullFamily, OracleAnswer, OracleBudget};
use khull_core::poisson::sample_pk;
use khull_core::report::{config_hash, ExperimentReport};
use khull_core::zero_cell::{base_dim, build_zero_cell, ConeSpec, TangentPoint};
use khull_core::ConvexBody;
use serde_json::{json, Value};

use output::{csv_bytes, emit, json_bytes, read_points, series_csv, sidecar_path, write_atomic};

/// Bad input: exit status 2.
#[derive(Debug)]
pub struct Validation(pub String);

impl std::fmt::Display for Validation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Validation {}

#[derive(Parser)]
#[command(name = "khull", version, about = "Generalised convex hulls, Poisson zero cells and limit experiments")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hull of a point set under a transformation family.
    Hull(HullArgs),
    /// Poisson simulations.
    #[command(subcommand)]
    Simulate(Simulate),
    /// Monte Carlo experiments.
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Args)]
struct BodyArg {
    /// Body JSON file, or one of: square, disc, ball3, half-disc, half-ball3.
    #[arg(long)]
    body: String,
}

#[derive(Args)]
struct HullArgs {
    #[command(flatten)]
    body: BodyArg,
    /// identity, k-hull, translations-scalings, full-affine, linear-ball, conic, spherical.
    #[arg(long)]
    family: String,
    /// CSV of points, one per row.
    #[arg(long)]
    points: PathBuf,
    /// CSV of query points; answered by the closed form when there is one
    /// and by the numerical oracle otherwise.
    #[arg(long)]
    query: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Simulate {
    /// Marks (t, η, u) of P_K with t ≤ t_max, as CSV.
    Pk {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long, alias = "tmax")]
        t_max: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One realisation of the limit cell within a window, restricted to a cone.
    Zerocell {
        #[command(flatten)]
        body: BodyArg,
        /// Cone preset, e.g. skew, translations, scalings, full.
        #[arg(long, default_value = "full")]
        cone: String,
        #[arg(long, default_value_t = 10.0)]
        window: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report JSON; per-replicate CSV sidecars are written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit with status 3 if any statistical check fails.
    #[arg(long)]
    check: bool,
}

#[derive(Subcommand)]
enum Experiment {
    /// Rotation segment of the square: limit law and finite-n extents.
    So2Square {
        #[arg(long, default_value_t = 2000)]
        n: usize,
        #[arg(long, default_value_t = 2000)]
        reps: usize,
        #[arg(long, default_value_t = 10_000)]
        limit_reps: usize,
        #[arg(long, default_value_t = 50.0)]
        window: f64,
        #[arg(long, default_value_t = 50.0)]
        s_max: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Translations-only limit cell of the square.
    TranslationBox {
        #[arg(long, default_value_t = 10_000)]
        reps: usize,
        #[arg(long, default_value_t = 5000)]
        n: usize,
        #[arg(long, default_value_t = 2000)]
        finite_reps: usize,
        #[arg(long, default_value_t = 50.0)]
        window: f64,
        #[arg(long, default_value_t = 50.0)]
        s_max: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Inclusion functional of a finite test set, finite n against the limit.
    Inclusion {
        /// CSV of tangent points (x, C row-major), one per row; defaults to
        /// the rotations c = 0.5 and c = 1.
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long, default_value_t = 2000)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        reps: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Recession cones, boundedness and feasibility of the scalar matrices.
    Recession {
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        reps: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Intensity exponent of the dual-cone process of the half-ball.
    Cones {
        #[arg(long, default_value_t = 100_000)]
        points: usize,
        #[arg(long, default_value_t = 20)]
        bins: usize,
        #[arg(long, default_value_t = 2.0)]
        decades: f64,
        #[command(flatten)]
        common: Common,
    },
}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    Validation(msg.into()).into()
}

fn load_body(arg: &str) -> Result<ConvexBody> {
    let builtin = match arg {
        "square" => Some(ConvexBody::square()),
        "disc" => Some(ConvexBody::ball(2, 1.0)),
        "ball3" => Some(ConvexBody::ball(3, 1.0)),
        "half-disc" => Some(ConvexBody::half_ball(2, 1.0)),
        "half-ball3" => Some(ConvexBody::half_ball(3, 1.0)),
        _ => None,
    };
    if let Some(b) = builtin {
        return Ok(b);
    }
    let text = std::fs::read_to_string(arg).with_context(|| format!("reading body file {arg}"))?;
    ConvexBody::from_json_str(&text).map_err(|e| invalid(format!("{arg}: {e}")))
}

fn body_json(b: &ConvexBody) -> Value {
    serde_json::to_value(b.to_json()).expect("bodies serialise")
}

fn with_hash(mut v: Value, hash: &str) -> Value {
    v.as_object_mut().expect("object").insert("config_hash".into(), json!(hash));
    v
}

fn run_hull(a: &HullArgs) -> Result<()> {
    let body = load_body(&a.body.body)?;
    let family = HullFamily::from_name(&a.family)?;
    let points = read_points(&a.points)?;
    let queries = a.query.as_deref().map(read_points).transpose()?.unwrap_or_default();
    let config = json!({
        "command": "hull",
        "body": body_json(&body),
        "family": a.family,
        "points": points,
        "queries": queries,
        "seed": a.seed,
    });
    let hash = config_hash(&config);
    let hull = match compute_hull(&body, &family, &points) {
        Ok(h) => Some(h),
        Err(khull_core::Error::Unsupported(_)) if !queries.is_empty() => None,
        Err(e) => return Err(e.into()),
    };
    let budget = OracleBudget {
        seed: a.seed,
        ..OracleBudget::default()
    };
    let mut answers = Vec::new();
    for z in &queries {
        let answer = match &hull {
            Some(h) => json!(if h.contains(z) { "inside" } else { "outside" }),
            None => match generic_hull_membership(&body, &family, &points, z, &budget)? {
                OracleAnswer::Inside => json!("inside"),
                OracleAnswer::Unknown => json!("unknown"),
                OracleAnswer::Outside(t) => json!({ "outside": t }),
            },
        };
        answers.push(json!({ "point": z, "answer": answer }));
    }
    let mut v = json!({
        "family": a.family,
        "hull": hull.as_ref().map(|h| h.to_json()),
    });
    if !answers.is_empty() {
        v["queries"] = json!(answers);
    }
    emit(a.out.as_deref(), &json_bytes(&with_hash(v, &hash)))
}

fn run_simulate(s: &Simulate) -> Result<()> {
    match s {
        Simulate::Pk { body, t_max, seed, out } => {
            let body = load_body(&body.body)?;
            let config = json!({"command": "simulate pk", "body": body_json(&body), "t_max": t_max, "seed": seed});
            let hash = config_hash(&config);
            let sample = sample_pk(&body, *t_max, *seed)?;
            let d = body.dim();
            let mut header = vec!["t".to_string()];
            header.extend((0..d).map(|i| format!("eta_{i}")));
            header.extend((0..d).map(|i| format!("u_{i}")));
            let rows = sample.marks.iter().map(|m| {
                let mut r = vec![m.t];
                r.extend(&m.eta);
                r.extend(&m.u);
                r
            });
            emit(out.as_deref(), &csv_bytes(&hash, &header, rows)?)
        }
        Simulate::Zerocell {
            body,
            cone,
            window,
            seed,
            out,
        } => {
            let body = load_body(&body.body)?;
            let d = body.dim();
            let spec = ConeSpec::preset(cone, d)?;
            let config = json!({
                "command": "simulate zerocell",
                "body": body_json(&body),
                "cone": cone,
                "window": window,
                "seed": seed,
            });
            let hash = config_hash(&config);
            let sys = build_zero_cell(&body, *window, *seed)?;
            let restricted = sys.restrict_to_cone(&spec)?;
            let extents: Vec<Value> = spec
                .basis()
                .iter()
                .enumerate()
                .map(|(k, b)| {
                    let ext = |sign: f64| -> Result<Value> {
                        let v: Vec<f64> = b.iter().map(|x| sign * x).collect();
                        let s = sys.support_extent(&v, &spec)?;
                        Ok(if s > *window { json!(null) } else { json!(s) })
                    };
                    Ok(json!({ "basis": k, "plus": ext(1.0)?, "minus": ext(-1.0)? }))
                })
                .collect::<Result<_>>()?;
            let cert = restricted.is_bounded();
            let constraints: Vec<Value> = sys
                .constraints
                .iter()
                .zip(&sys.marks)
                .map(|(c, m)| {
                    json!({
                        "normal": c.normal,
                        "offset": c.offset,
                        "mark": { "t": m.t, "eta": m.eta, "u": m.u },
                    })
                })
                .collect();
            let v = json!({
                "d": d,
                "cone": cone,
                "window": window,
                "t_max": sys.t_max,
                "marks": sys.len(),
                "basis": spec.basis(),
                "constraints": constraints,
                "restricted": { "normals": restricted.normals, "offsets": restricted.offsets },
                "extents_within_window": extents,
                "bounded": cert.bounded,
                "bounded_exact": cert.exact,
            });
            emit(out.as_deref(), &json_bytes(&with_hash(v, &hash)))
        }
    }
}

fn write_report(report: &ExperimentReport, common: &Common) -> Result<()> {
    let v = serde_json::to_value(report).expect("reports serialise");
    match &common.out {
        Some(out) => {
            for (group, s) in &report.series {
                write_atomic(&sidecar_path(out, group), &series_csv(&report.config_hash, s)?)?;
            }
            write_atomic(out, &json_bytes(&v))
        }
        None => emit(None, &json_bytes(&v)),
    }
}

fn read_tangent_points(path: &Path) -> Result<Vec<TangentPoint>> {
    read_points(path)?
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let d = base_dim(r.len())
                .filter(|&d| d == 2)
                .ok_or_else(|| invalid(format!("{}: row {} must have 6 entries (x, C)", path.display(), i + 1)))?;
            Ok(TangentPoint::from_flat(d, &r)?)
        })
        .collect()
}

/// Returns whether every check passed.
fn run_experiment(e: &Experiment) -> Result<(bool, bool)> {
    let (report, common) = match e {
        Experiment::So2Square {
            n,
            reps,
            limit_reps,
            window,
            s_max,
            common,
        } => {
            let cfg = So2Config {
                n: *n,
                finite_reps: *reps,
                limit_reps: *limit_reps,
                window: *window,
                s_max: *s_max,
                seed: common.seed,
            };
            (so2_square_experiment(&cfg)?, common)
        }
        Experiment::TranslationBox {
            reps,
            n,
            finite_reps,
            window,
            s_max,
            common,
        } => {
            let cfg = TranslationBoxConfig {
                reps: *reps,
                finite_n: *n,
                finite_reps: *finite_reps,
                window: *window,
                s_max: *s_max,
                seed: common.seed,
            };
            (translation_box_experiment(&cfg)?, common)
        }
        Experiment::Inclusion { points, n, reps, common } => {
            let mut cfg = InclusionConfig {
                n: *n,
                reps: *reps,
                seed: common.seed,
                ..InclusionConfig::default()
            };
            if let Some(p) = points {
                cfg.points = read_tangent_points(p)?;
            }
            (inclusion_experiment(&cfg)?, common)
        }
        Experiment::Recession { n, reps, common } => {
            let cfg = RecessionConfig {
                n: *n,
                reps: *reps,
                seed: common.seed,
            };
            (recession_experiment(&cfg)?, common)
        }
        Experiment::Cones {
            points,
            bins,
            decades,
            common,
        } => {
            let cfg = ConesConfig {
                points: *points,
                bins: *bins,
                decades: *decades,
                seed: common.seed,
                ..ConesConfig::default()
            };
            (cones_experiment(&cfg)?, common)
        }
    };
    write_report(&report, common)?;
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!("check failed: {} = {} (threshold {})", c.name, c.value, c.threshold);
    }
    Ok((report.passed(), common.check))
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(invalid("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    match &cli.command {
        Command::Hull(a) => run_hull(a)?,
        Command::Simulate(s) => run_simulate(s)?,
        Command::Experiment(e) => {
            let (passed, check) = run_experiment(e)?;
            if check && !passed {
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Validation>().is_some() || e.downcast_ref::<khull_core::Error>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
