//! Command-line front end.
//!
//! Every subcommand writes one primary artifact (JSON or CSV) to `--out` or
//! standard output; some also emit a CSV table to `--csv-out`. Exit status is
//! 0 on success, 1 on a failed certificate or a numeric error (reported as
//! `{"error": ...}`), and 2 on a usage error.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::curve::{self, CurvatureProfile, IntegratorConfig};
use crate::error::{Error, Result};
use crate::lattice::{self, QuadForm};
use crate::pleat::{self, CURVATURE_CONSTANT};
use crate::trig::{self, TubeQuery};
use crate::wallspace::{self, PairSeparation, WallSystem};

#[derive(Parser, Debug)]
#[command(name = "pleatlab", version, about = "Hyperbolic geometry certification workbench")]
pub struct Cli {
    /// Seed for every randomized choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads for sweeps.
    #[arg(long, global = true, env = "PLEATLAB_JOBS")]
    pub jobs: Option<usize>,

    /// Primary output file (standard output if absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Secondary CSV table, for subcommands that produce one.
    #[arg(long, global = true)]
    pub csv_out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form hyperbolic trigonometry.
    Trig(TrigArgs),
    /// Certify the curvature comparison bound for curves of curvature ≤ k.
    #[command(name = "verify-lemma47")]
    VerifyLemma47(ComparisonArgs),
    /// Smoothed wedge cross-section and its curvature profile.
    Smooth(SmoothArgs),
    /// Integral orthogonal group of x₀² + … − √d·x_n² and hyperplane angles.
    Lattice(LatticeArgs),
    /// Dual cube complex of a chord wall system.
    Cubulate(CubulateArgs),
    /// Separation of boundary points by a wall system.
    Separate(SeparateArgs),
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("quantity").required(true))]
pub struct TrigArgs {
    #[arg(long, group = "quantity", requires_all = ["theta", "eps"])]
    pub tangency: bool,
    #[arg(long, group = "quantity", requires_all = ["theta", "eps"])]
    pub hull: bool,
    #[arg(long, group = "quantity", requires = "x")]
    pub inversion: bool,
    #[arg(long, group = "quantity", requires_all = ["n", "rho"])]
    pub ball_volume: bool,
    #[arg(long, group = "quantity", requires_all = ["n", "area"])]
    pub tube_width: bool,
    /// Tangency radius against its Lambert-quadrilateral form on a grid of this size.
    #[arg(long, group = "quantity")]
    pub grid: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub rho: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub area: Option<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ProfileKind {
    Constant,
    Sinusoid,
    Alternating,
    /// Piecewise constant with seeded random values in `[−k, k]`.
    Random,
}

#[derive(Args, Debug)]
pub struct ComparisonArgs {
    /// Curvature bounds, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub k: Vec<f64>,
    /// Horizon.
    #[arg(long = "T", default_value_t = 5.0)]
    pub horizon: f64,
    /// Integration step.
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
    #[arg(long, value_enum, default_value_t = ProfileKind::Constant)]
    pub profile: ProfileKind,
    /// Block length of piecewise profiles.
    #[arg(long, default_value_t = 0.5)]
    pub block: f64,
}

#[derive(Args, Debug)]
pub struct SmoothArgs {
    #[arg(long)]
    pub theta: f64,
    #[arg(long)]
    pub r: f64,
    #[arg(long, default_value_t = pleat::DEFAULT_SAMPLES)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct LatticeArgs {
    #[arg(long, default_value_t = 2)]
    pub d: i64,
    /// Hyperbolic dimension; the form has n + 1 variables.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub height: i64,
    /// Target angle interval `a,b` for the hyperplane search.
    #[arg(long, value_delimiter = ',', num_args = 1, allow_negative_numbers = true)]
    pub angles_in: Option<Vec<f64>>,
    /// Height of the normals scanned by the angle search.
    #[arg(long, default_value_t = 1)]
    pub angle_height: i64,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("source").required(true))]
pub struct WallSource {
    /// JSON file `{"walls": [[a, b], ...], "symmetry_N": N}`.
    #[arg(long, group = "source")]
    pub input: Option<PathBuf>,
    /// Built-in system: `crossing:K`, `nested:K` or `diameters:K`.
    #[arg(long, group = "source")]
    pub fixture: Option<String>,
    /// K walls with seeded random endpoints.
    #[arg(long, group = "source")]
    pub random: Option<usize>,
}

#[derive(Args, Debug)]
pub struct CubulateArgs {
    #[command(flatten)]
    pub source: WallSource,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("query").required(true))]
pub struct SeparateArgs {
    #[command(flatten)]
    pub source: WallSource,
    #[arg(long, group = "query", requires = "b2", allow_negative_numbers = true)]
    pub b1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b2: Option<f64>,
    /// Check every pair of an evenly spaced grid of this many boundary points.
    #[arg(long, group = "query")]
    pub resolution: Option<usize>,
}

/// Artifacts produced by a subcommand.
struct Outcome {
    primary: String,
    csv: Option<String>,
    /// False when a certificate failed.
    ok: bool,
}

impl Outcome {
    fn json(v: Value, ok: bool) -> Self {
        Outcome {
            primary: to_json(&v),
            csv: None,
            ok,
        }
    }
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are serializable");
    s.push('\n');
    s
}

/// Float formatting for CSV: 17 significant digits, `.` decimal.
fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

/// Runs the command line and returns the process exit status.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> i32 {
    let outcome = match cli.jobs {
        Some(0) => Err(Error::Config("--jobs must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(e.to_string()))
            .and_then(|pool| pool.install(|| dispatch(cli))),
        None => dispatch(cli),
    };
    match outcome {
        Ok(o) => {
            if let Err(e) = emit(cli, &o) {
                eprintln!("{e}");
                return 1;
            }
            if o.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let body = to_json(&json!({ "error": e.to_string() }));
            match &cli.out {
                Some(p) => {
                    let _ = fs::write(p, &body);
                }
                None => {
                    let _ = std::io::stdout().write_all(body.as_bytes());
                }
            }
            1
        }
    }
}

fn emit(cli: &Cli, o: &Outcome) -> std::io::Result<()> {
    match &cli.out {
        Some(p) => fs::write(p, &o.primary)?,
        None => std::io::stdout().write_all(o.primary.as_bytes())?,
    }
    if let (Some(csv), Some(p)) = (&o.csv, &cli.csv_out) {
        fs::write(p, csv)?;
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Trig(a) => run_trig(a),
        Command::VerifyLemma47(a) => run_comparison(a, cli.seed),
        Command::Smooth(a) => run_smooth(a),
        Command::Lattice(a) => run_lattice(a),
        Command::Cubulate(a) => run_cubulate(a, cli.seed),
        Command::Separate(a) => run_separate(a, cli.seed),
    }
}

fn need(v: Option<f64>, name: &str) -> Result<f64> {
    v.ok_or_else(|| Error::InvalidInput(format!("--{name} is required")))
}

fn run_trig(a: &TrigArgs) -> Result<Outcome> {
    let v = if a.tangency {
        let (theta, eps) = (need(a.theta, "theta")?, need(a.eps, "eps")?);
        json!({ "theta": theta, "eps": eps, "r": trig::tangency_radius(theta, eps)? })
    } else if a.hull {
        let (theta, eps) = (need(a.theta, "theta")?, need(a.eps, "eps")?);
        json!({ "theta": theta, "eps": eps, "w": trig::hull_width(theta, eps)? })
    } else if a.inversion {
        let x = need(a.x, "x")?;
        json!({ "x": x, "r": trig::inversion_r(x)? })
    } else if a.ball_volume {
        let n = a.n.unwrap_or_default();
        let rho = need(a.rho, "rho")?;
        json!({ "n": n, "rho": rho, "volume": trig::ball_volume(n, rho)? })
    } else if a.tube_width {
        let n = a.n.unwrap_or_default();
        let area = need(a.area, "area")?;
        json!({ "n": n, "area": area, "width": trig::tube_width(TubeQuery::new(n, area)?)? })
    } else if let Some(size) = a.grid {
        return trig_grid(size);
    } else {
        unreachable!("clap requires one quantity")
    };
    Ok(Outcome::json(v, true))
}

fn trig_grid(size: usize) -> Result<Outcome> {
    if size < 2 {
        return Err(Error::Config("grid size must be at least 2".into()));
    }
    let (t0, t1) = (0.1, std::f64::consts::PI - 0.1);
    let (e0, e1) = (0.01, 1.0);
    let cells: Vec<(f64, f64)> = (0..size)
        .flat_map(|i| {
            (0..size).map(move |j| {
                (
                    t0 + (t1 - t0) * i as f64 / (size - 1) as f64,
                    e0 + (e1 - e0) * j as f64 / (size - 1) as f64,
                )
            })
        })
        .collect();
    let rows: Vec<(f64, f64, f64, f64)> = cells
        .par_iter()
        .map(|&(t, e)| Ok((t, e, trig::tangency_radius(t, e)?, trig::tangency_radius_lambert(t, e)?)))
        .collect::<Result<_>>()?;
    let mut csv = String::from("theta,eps,r,r_lambert,abs_diff\n");
    let mut worst = 0.0f64;
    for (t, e, r, l) in &rows {
        worst = worst.max((r - l).abs());
        let _ = writeln!(csv, "{},{},{},{},{}", fmt_f(*t), fmt_f(*e), fmt_f(*r), fmt_f(*l), fmt_f((r - l).abs()));
    }
    let ok = worst <= 1e-12;
    Ok(Outcome {
        primary: to_json(&json!({ "grid": size, "max_abs_diff": worst, "pass": ok })),
        csv: Some(csv),
        ok,
    })
}

fn random_profile(k: f64, block: f64, horizon: f64, rng: &mut ChaCha8Rng) -> Result<CurvatureProfile> {
    let blocks = (horizon / block).ceil() as usize + 1;
    let values: Vec<f64> = (0..blocks).map(|_| rng.gen_range(-k..=k)).collect();
    CurvatureProfile::new(
        move |t: f64| values[((t / block).floor().max(0.0) as usize).min(values.len() - 1)],
        k,
    )
}

fn run_comparison(a: &ComparisonArgs, seed: u64) -> Result<Outcome> {
    let cfg = IntegratorConfig::new(a.h)?;
    if !(a.block > 0.0) {
        return Err(Error::Config("--block must be positive".into()));
    }
    // draw every random profile up front so results do not depend on scheduling
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let profiles: Vec<(f64, CurvatureProfile)> = a
        .k
        .iter()
        .map(|&k| {
            if !(k > 0.0 && k < 1.0) {
                return Err(Error::InvalidInput(format!("k must lie in (0, 1), got {k}")));
            }
            let p = match a.profile {
                ProfileKind::Constant => CurvatureProfile::constant(k),
                ProfileKind::Sinusoid => CurvatureProfile::sinusoid(k),
                ProfileKind::Alternating => CurvatureProfile::alternating(k, a.block),
                ProfileKind::Random => random_profile(k, a.block, a.horizon, &mut rng)?,
            };
            Ok((k, p))
        })
        .collect::<Result<_>>()?;
    let reports: Vec<curve::ComparisonReport> = profiles
        .par_iter()
        .map(|(_, p)| curve::verify_comparison_with(p, a.horizon, &cfg))
        .collect::<Result<_>>()?;
    let profile_name = format!("{:?}", a.profile).to_lowercase();
    let mut csv = String::from("k,T,h,profile,max_ratio,worst_t,pass\n");
    for r in &reports {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            fmt_f(r.k),
            fmt_f(r.horizon),
            fmt_f(r.step),
            profile_name,
            fmt_f(r.max_ratio),
            fmt_f(r.worst_t),
            r.pass
        );
    }
    Ok(Outcome {
        primary: csv,
        csv: None,
        ok: reports.iter().all(|r| r.pass),
    })
}

fn run_smooth(a: &SmoothArgs) -> Result<Outcome> {
    let p = pleat::build_profile(a.theta, a.r)?.with_samples(a.samples);
    let report = pleat::curvature_profile(&p)?;
    let mut csv = String::from("s,kappa_g\n");
    for s in &report.samples {
        let _ = writeln!(csv, "{},{}", fmt_f(s.s), fmt_f(s.kappa));
    }
    let corner = 2.0 * a.r;
    let c_times_r = report.sup_curvature * p.radius;
    let ok = p.degenerate || c_times_r <= CURVATURE_CONSTANT;
    let v = json!({
        "theta": a.theta,
        "r": a.r,
        "R": if p.degenerate { Value::Null } else { json!(p.radius) },
        "sup_kappa": report.sup_curvature,
        "arc_len": report.arc_length,
        "corner_len": corner,
        "c_times_R": if p.degenerate { Value::Null } else { json!(c_times_r) },
    });
    Ok(Outcome {
        primary: to_json(&v),
        csv: Some(csv),
        ok,
    })
}

fn run_lattice(a: &LatticeArgs) -> Result<Outcome> {
    lattice::ring_basis(a.d)?;
    let f = QuadForm::standard(a.d, a.n + 1);
    let en = lattice::enumerate_elements(&f, a.height)?;
    let elements: Vec<Value> = en
        .elements
        .iter()
        .map(|t| {
            let rows = t.to_basis().expect("enumerated entries are integral");
            json!(rows
                .iter()
                .map(|row| row.iter().map(|&(x, y)| json!([x, y])).collect::<Vec<_>>())
                .collect::<Vec<_>>())
        })
        .collect();
    let mut v = json!({
        "d": a.d,
        "n": a.n,
        "height": a.height,
        "basis": lattice::ring_basis(a.d)?.to_string(),
        "count": en.elements.len(),
        "elements": elements,
        "closure_report": en.closure,
    });
    let mut csv = None;
    if let Some(iv) = &a.angles_in {
        let [lo, hi] = iv[..] else {
            return Err(Error::InvalidInput("--angles-in takes two values a,b".into()));
        };
        let search = lattice::angle_search(&f, a.angle_height, lo, hi)?;
        let width = std::f64::consts::PI / search.histogram.len() as f64;
        let mut table = String::from("bin_lo,bin_hi,count\n");
        for (i, c) in search.histogram.iter().enumerate() {
            let _ = writeln!(table, "{},{},{}", fmt_f(i as f64 * width), fmt_f((i + 1) as f64 * width), c);
        }
        v["angle_search"] = json!({
            "interval": [lo, hi],
            "normals": search.vectors,
            "pairs": search.pairs,
        });
        csv = Some(table);
    }
    Ok(Outcome {
        primary: to_json(&v),
        csv,
        ok: true,
    })
}

#[derive(Deserialize)]
struct WallFile {
    walls: Vec<[f64; 2]>,
    #[serde(rename = "symmetry_N", default = "one")]
    symmetry_n: u32,
}

fn one() -> u32 {
    1
}

fn load_walls(src: &WallSource, seed: u64) -> Result<WallSystem> {
    if let Some(path) = &src.input {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        let file: WallFile = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        let pairs: Vec<(f64, f64)> = file.walls.iter().map(|w| (w[0], w[1])).collect();
        return WallSystem::from_pairs(&pairs, file.symmetry_n);
    }
    if let Some(fixture) = &src.fixture {
        let (kind, count) = fixture
            .split_once(':')
            .ok_or_else(|| Error::InvalidInput(format!("fixture '{fixture}' is not KIND:COUNT")))?;
        let count: usize = count
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad fixture size '{count}'")))?;
        // cubulation enforces its own wall limit; separation queries scale to many walls
        if count == 0 {
            return Err(Error::Config("fixture size must be positive".into()));
        }
        return match kind {
            "crossing" => Ok(wallspace::crossing_fixture(count)),
            "nested" => Ok(wallspace::nested_fixture(count)),
            "diameters" => Ok(wallspace::diameter_fixture(count)),
            _ => Err(Error::InvalidInput(format!("unknown fixture '{kind}'"))),
        };
    }
    let count = src.random.expect("clap requires one source");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(f64, f64)> = (0..count)
        .map(|_| (rng.gen_range(0.0..std::f64::consts::TAU), rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect();
    WallSystem::from_pairs(&pairs, 1)
}

fn run_cubulate(a: &CubulateArgs, seed: u64) -> Result<Outcome> {
    let ws = load_walls(&a.source, seed)?;
    let c = wallspace::build_dual(&ws)?;
    let cat0 = wallspace::check_cat0(&c);
    let families = wallspace::hyperplane_families(&c, &ws)?;
    let dims = c.cubes_by_dim();
    let v = json!({
        "walls": ws.walls().iter().map(|w| { let (a, b) = w.endpoints(); [a, b] }).collect::<Vec<_>>(),
        "vertices": dims[0],
        "edges": dims[1],
        "cubes_by_dim": dims,
        "cat0": cat0,
        "families": families,
    });
    Ok(Outcome::json(v, cat0.passes()))
}

fn run_separate(a: &SeparateArgs, seed: u64) -> Result<Outcome> {
    let ws = load_walls(&a.source, seed)?;
    let v = if let Some(n) = a.resolution {
        json!(wallspace::filling_at_resolution(&ws, n)?)
    } else {
        let (b1, b2) = (need(a.b1, "b1")?, need(a.b2, "b2")?);
        match wallspace::separates_pair(&ws, b1, b2)? {
            PairSeparation::Separated(k) => json!({ "b1": b1, "b2": b2, "separated": true, "wall": k }),
            PairSeparation::NotSeparated => json!({ "b1": b1, "b2": b2, "separated": false, "wall": null }),
        }
    };
    Ok(Outcome::json(v, true))
}
