//! Command-line front end.
//!
//! Exit codes: 0 success, 1 computational or check failure, 2 usage or
//! configuration error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::Serialize;

use crate::capacity::{capacity_estimate_with, ring_capacity_exact, CondenserGrid, SolverConfig};
use crate::constants::{
    b_n, beta, c1_from_lambda, gamma1, gamma2, gamma3, gamma4, n_bound, theorem_constants, ConstantsContext, NBoundForm,
    TheoremKind,
};
use crate::envelopes::{scan, Fixture, Normalization, RateProfile, ScanOptions};
use crate::error::{Error, Result};
use crate::geometry::{random_unit, rng_from_seed, sample_cone_sphere, sample_region, Ball, ConeSpec, Point, TruncatedConeSpec};
use crate::maps::{boundary_scan, dilatation_estimate, scan_csv, ApproachCurve, CurveKind, MapSpec, DEFAULT_FD_STEP};
use crate::metrics::{
    j_cone_diameter_bound, j_dist, k_dist_estimate, rho, s_bound, set_diameter, Domain, MetricKind, DEFAULT_K_TOL,
};

#[derive(Debug, Parser)]
#[command(name = "qrbound", version, about = "Hyperbolic-type metrics, capacity and boundary-limit checks in the unit ball")]
struct Cli {
    /// Ambient dimension (default 2, or the config file's n).
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Constants file (`key = value` lines: n, K, lambda_K, c0, c2).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write outputs into this directory instead of stdout.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Distances between two points, or the j ≤ k ≤ ρ ≤ 2j chain on random pairs.
    Metrics(MetricsArgs),
    /// Run the invariant suite and write a JSON report.
    Verify(VerifyArgs),
    /// Scan a rate profile against a boundary theorem's hypothesis.
    Scan(ScanArgs),
    /// Print the constant ledger.
    Constants(ConstantsArgs),
    /// Lattice capacity of a ring or of a condenser grid file.
    Capacity(CapacityArgs),
    /// |f| along a curve approaching a boundary point, or a dilatation estimate.
    Boundary(BoundaryArgs),
    /// Write the six synthetic rate profiles (`<name>.csv`) into --out.
    Fixtures,
}

#[derive(Debug, Args)]
struct MetricsArgs {
    /// Hyperbolic distance; coordinates of x followed by those of y.
    #[arg(long, num_args = 4.., allow_negative_numbers = true, value_name = "COORD")]
    rho: Option<Vec<f64>>,
    /// Distance-ratio metric.
    #[arg(long, num_args = 4.., allow_negative_numbers = true, value_name = "COORD")]
    j: Option<Vec<f64>>,
    /// Quasihyperbolic distance (numerical estimate).
    #[arg(long, num_args = 4.., allow_negative_numbers = true, value_name = "COORD")]
    k: Option<Vec<f64>>,
    /// Use the upper half-space {x_n > 0} for j and k.
    #[arg(long)]
    half_space: bool,
    /// Emit j, k, rho, 2j for random pairs in the ball.
    #[arg(long)]
    chain: bool,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Tolerance of the k estimator.
    #[arg(long, default_value_t = DEFAULT_K_TOL)]
    tol: f64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Random pairs per dimension for the metric chain.
    #[arg(long, default_value_t = 10_000)]
    chain_samples: usize,
    /// Parameter triples (a, φ, r) for the cone j-diameter check.
    #[arg(long, default_value_t = 50)]
    triples: usize,
    /// Points sampled per cone.
    #[arg(long, default_value_t = 1000)]
    cone_samples: usize,
    /// (r, φ) pairs for the hyperbolic sandwich check.
    #[arg(long, default_value_t = 20)]
    sphere_pairs: usize,
    /// Ring capacity cell size is e / divisions.
    #[arg(long, default_value_t = 64)]
    divisions: usize,
    /// Random draws for the theorem-constant identities.
    #[arg(long, default_value_t = 20)]
    draws: usize,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    /// CSV with header r,delta,epsilon[,phi].
    #[arg(long, value_name = "PATH")]
    profile: PathBuf,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    phi: f64,
    #[arg(long, default_value_t = 5)]
    window: usize,
    #[arg(long, default_value_t = -1e3, allow_negative_numbers = true)]
    threshold: f64,
    #[arg(long, value_enum, default_value_t = NormArg::Theorem)]
    normalization: NormArg,
    #[arg(long, default_value_t = 1e-6)]
    delta_floor: f64,
}

#[derive(Debug, Args)]
struct ConstantsArgs {
    /// Also print the constants of one theorem.
    #[arg(long, value_enum)]
    theorem: Option<KindArg>,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    phi: f64,
    /// Radius for the Koebe constants.
    #[arg(long)]
    r: Option<f64>,
}

#[derive(Debug, Args)]
struct CapacityArgs {
    /// Ring {inner < |x| < outer} with exact reference value.
    #[arg(long, num_args = 2, value_names = ["INNER", "OUTER"])]
    ring: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0 / 16.0)]
    cell_size: f64,
    /// Condenser grid in the text format.
    #[arg(long, value_name = "PATH", conflicts_with = "ring")]
    grid: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[arg(long, default_value_t = 20_000)]
    max_sweeps: usize,
}

#[derive(Debug, Args)]
struct BoundaryArgs {
    #[arg(long, value_enum, default_value_t = MapArg::SingularInner)]
    map: MapArg,
    /// Möbius parameter a.
    #[arg(long, num_args = 2.., allow_negative_numbers = true, value_name = "COORD")]
    a: Option<Vec<f64>>,
    /// Stretch exponent.
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = CurveArg::Radial)]
    curve: CurveArg,
    /// Ray angle for --curve cone.
    #[arg(long, default_value_t = 0.5)]
    angle: f64,
    /// Parabola coefficient for --curve parabola.
    #[arg(long, default_value_t = 1.5)]
    kappa: f64,
    /// Boundary point b (default e1).
    #[arg(long, num_args = 2.., allow_negative_numbers = true, value_name = "COORD")]
    target: Option<Vec<f64>>,
    /// Radii 2^-1 .. 2^-levels.
    #[arg(long, default_value_t = 8)]
    levels: i32,
    /// Print the dilatation estimate at this point instead of scanning.
    #[arg(long, num_args = 2.., allow_negative_numbers = true, value_name = "COORD")]
    dilatation_at: Option<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Lindelof,
    Tangential,
    Koebe,
}

impl From<KindArg> for TheoremKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Lindelof => TheoremKind::Lindelof,
            KindArg::Tangential => TheoremKind::Tangential,
            KindArg::Koebe => TheoremKind::Koebe,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormArg {
    Theorem,
    Proof,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MapArg {
    SingularInner,
    Mobius,
    Stretch,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CurveArg {
    Radial,
    Cone,
    Parabola,
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config(_) | Error::Parse { .. } | Error::Io(_) => 2,
            _ => 1,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run(args: impl IntoIterator<Item = OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            f.code
        }
    }
}

fn dispatch(cli: &Cli) -> CmdResult {
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir).map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
    }
    match &cli.command {
        Command::Metrics(a) => cmd_metrics(cli, a),
        Command::Verify(a) => cmd_verify(cli, a),
        Command::Scan(a) => cmd_scan(cli, a),
        Command::Constants(a) => cmd_constants(cli, a),
        Command::Capacity(a) => cmd_capacity(cli, a),
        Command::Boundary(a) => cmd_boundary(cli, a),
        Command::Fixtures => cmd_fixtures(cli),
    }
}

fn context(cli: &Cli) -> std::result::Result<ConstantsContext, Failure> {
    let default_n = cli.n.unwrap_or(2);
    let ctx = match &cli.config {
        Some(p) => ConstantsContext::from_config_file(p, default_n).map_err(|e| match e {
            Error::Io(io) => usage(format!("cannot read {}: {io}", p.display())),
            other => usage(other.to_string()),
        })?,
        None => ConstantsContext::with_defaults(default_n).map_err(|e| usage(e.to_string()))?,
    };
    if let Some(n) = cli.n {
        if n != ctx.n() {
            return Err(usage(format!("--n {n} disagrees with n = {} in the config file", ctx.n())));
        }
    }
    Ok(ctx)
}

/// Writes `text` to `<out>/<name>`, or to stdout without --out.
fn emit(cli: &Cli, name: &str, text: &str) -> std::result::Result<(), Failure> {
    match &cli.out {
        Some(dir) => {
            let path = dir.join(name);
            fs::write(&path, text).map_err(|e| Failure { code: 1, msg: format!("cannot write {}: {e}", path.display()) })
        }
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).map_err(|e| Failure { code: 1, msg: e.to_string() })
        }
    }
}

fn split_pair(coords: &[f64], n: Option<usize>) -> std::result::Result<(Point, Point), Failure> {
    if coords.len() % 2 != 0 {
        return Err(usage(format!("expected the coordinates of two points, got {} numbers", coords.len())));
    }
    let d = coords.len() / 2;
    if let Some(n) = n {
        if n != d {
            return Err(usage(format!("--n {n} but the points have {d} coordinates")));
        }
    }
    let x = Point::new(coords[..d].to_vec()).map_err(|e| usage(e.to_string()))?;
    let y = Point::new(coords[d..].to_vec()).map_err(|e| usage(e.to_string()))?;
    Ok((x, y))
}

fn point_arg(coords: &[f64]) -> std::result::Result<Point, Failure> {
    Point::new(coords.to_vec()).map_err(|e| usage(e.to_string()))
}

fn cmd_metrics(cli: &Cli, a: &MetricsArgs) -> CmdResult {
    if a.chain {
        if a.rho.is_some() || a.j.is_some() || a.k.is_some() {
            return Err(usage("--chain does not take point arguments"));
        }
        let n = cli.n.unwrap_or(2);
        let text = chain_csv(n, a.samples, cli.seed, a.tol)?;
        emit(cli, "chain.csv", &text)?;
        return Ok(0);
    }
    let mut cols = Vec::new();
    if let Some(c) = &a.rho {
        if a.half_space {
            return Err(usage("--rho is only defined in the unit ball"));
        }
        let (x, y) = split_pair(c, cli.n)?;
        cols.push(("rho", rho(&x, &y)?));
    }
    for (name, c) in [("j", &a.j), ("k", &a.k)] {
        let Some(c) = c else { continue };
        let (x, y) = split_pair(c, cli.n)?;
        let dom = if a.half_space { Domain::upper_half_space(x.dim()) } else { Domain::unit_ball(x.dim()) };
        let v = if name == "j" { j_dist(&dom, &x, &y)? } else { k_dist_estimate(&dom, &x, &y, a.tol)? };
        cols.push((name, v));
    }
    let text = match cols.as_slice() {
        [] => return Err(usage("nothing to compute: give --rho, --j, --k or --chain")),
        [(_, v)] => format!("{v}\n"),
        _ => {
            let head: Vec<&str> = cols.iter().map(|c| c.0).collect();
            let row: Vec<String> = cols.iter().map(|c| c.1.to_string()).collect();
            format!("{}\n{}\n", head.join(","), row.join(","))
        }
    };
    emit(cli, "metrics.csv", &text)?;
    Ok(0)
}

fn chain_csv(n: usize, samples: usize, seed: u64, tol: f64) -> std::result::Result<String, Failure> {
    if samples == 0 {
        return Err(usage("--samples must be positive"));
    }
    let dom = Domain::unit_ball(n);
    let pts = sample_region(&Ball::unit(n), 2 * samples, seed)?;
    let mut out = format!("# n={n} samples={samples} seed={seed} tol={tol}\nj,k,rho,two_j\n");
    for pair in pts.chunks(2) {
        let j = j_dist(&dom, &pair[0], &pair[1])?;
        let k = k_dist_estimate(&dom, &pair[0], &pair[1], tol)?;
        let r = rho(&pair[0], &pair[1])?;
        out.push_str(&format!("{j},{k},{r},{}\n", 2.0 * j));
    }
    Ok(out)
}

/// One entry of the verify report.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub pass: bool,
    pub observed: f64,
    pub bound: f64,
    pub tolerance: f64,
}

impl CheckRecord {
    /// observed ≤ bound + tolerance.
    fn upper(name: impl Into<String>, observed: f64, bound: f64, tolerance: f64) -> Self {
        CheckRecord { name: name.into(), pass: observed <= bound + tolerance, observed, bound, tolerance }
    }

    /// |observed − bound| ≤ tolerance.
    fn within(name: impl Into<String>, observed: f64, bound: f64, tolerance: f64) -> Self {
        CheckRecord { name: name.into(), pass: (observed - bound).abs() <= tolerance, observed, bound, tolerance }
    }
}

/// Sample sizes of [`verify_suite`].
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub chain_samples: usize,
    pub triples: usize,
    pub cone_samples: usize,
    pub sphere_pairs: usize,
    pub divisions: usize,
    pub draws: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { chain_samples: 10_000, triples: 50, cone_samples: 1000, sphere_pairs: 20, divisions: 64, draws: 20, seed: 0 }
    }
}

/// Runs every invariant check; dimension-dependent checks use `ctx.n()`.
pub fn verify_suite(ctx: &ConstantsContext, opts: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let n = ctx.n();
    let mut rng = rng_from_seed(opts.seed);

    for dim in [2usize, 3] {
        let dom = Domain::unit_ball(dim);
        let pts = sample_region(&Ball::unit(dim), 2 * opts.chain_samples, opts.seed ^ dim as u64)?;
        let (mut jk, mut kr, mut rj) = (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in pts.chunks(2) {
            let j = j_dist(&dom, &p[0], &p[1])?;
            let k = k_dist_estimate(&dom, &p[0], &p[1], DEFAULT_K_TOL)?;
            let r = rho(&p[0], &p[1])?;
            jk = jk.max(j - k);
            kr = kr.max(k - r);
            rj = rj.max(r - 2.0 * j);
        }
        out.push(CheckRecord::upper(format!("chain_j_le_k_n{dim}"), jk, 0.0, 1e-3));
        out.push(CheckRecord::upper(format!("chain_k_le_rho_n{dim}"), kr, 0.0, 1e-3));
        out.push(CheckRecord::upper(format!("chain_rho_le_2j_n{dim}"), rj, 0.0, 1e-9));
    }

    let o = Point::origin(n);
    let half = Point::e1(n, 0.5);
    out.push(CheckRecord::within("radial_rho", rho(&o, &half)?, 3f64.ln(), 1e-12));
    out.push(CheckRecord::within(
        "radial_k",
        k_dist_estimate(&Domain::unit_ball(n), &o, &half, DEFAULT_K_TOL)?,
        2f64.ln(),
        1e-3,
    ));

    let mut worst = f64::NEG_INFINITY;
    for i in 0..opts.triples {
        let a = rng.random_range(0.05..0.95);
        let phi = rng.random_range(0.05..1.5);
        let r = rng.random_range(0.05..0.95) * f64::cos(phi);
        let b = Point::new(random_unit(&mut rng, n))?;
        let t = TruncatedConeSpec::with_ratio(ConeSpec::new(b, phi)?, r, a)?;
        let pts = sample_region(&t, opts.cone_samples, opts.seed.wrapping_add(1000 + i as u64))?;
        let d = set_diameter(&Domain::unit_ball(n), MetricKind::J, &pts)?;
        worst = worst.max(d - j_cone_diameter_bound(a, phi, r)?);
    }
    out.push(CheckRecord::upper("cone_j_diameter", worst, 0.0, 0.0));

    let (mut lower, mut upper, mut seg) = (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for i in 0..opts.sphere_pairs {
        let phi = rng.random_range(0.05..1.5);
        let r = rng.random_range(0.05..0.95) * f64::cos(phi);
        let b = Point::new(random_unit(&mut rng, n))?;
        let s = s_bound(r, phi)?;
        let foot = b.scale(1.0 - r);
        let r0 = rho(&o, &foot)?;
        let segment: Vec<Point> = (0..=10).map(|k| foot.scale(k as f64 / 10.0)).collect();
        let pts = sample_cone_sphere(&ConeSpec::new(b, phi)?, r, opts.cone_samples, opts.seed.wrapping_add(5000 + i as u64))?;
        for x in &pts {
            let rx = rho(&o, x)?;
            lower = lower.max(r0 - rx);
            upper = upper.max(rx - s);
            for p in &segment {
                seg = seg.max(rho(p, x)? - s);
            }
        }
    }
    out.push(CheckRecord::upper("sphere_rho_lower", lower, 0.0, 1e-12));
    out.push(CheckRecord::upper("sphere_rho_upper", upper, 0.0, 0.0));
    out.push(CheckRecord::upper("sphere_segment_within_s", seg, 0.0, 0.0));

    let e = std::f64::consts::E;
    let grid = CondenserGrid::ring(n, 1.0, e, e / opts.divisions as f64)?;
    let cap = capacity_estimate_with(&grid, &SolverConfig::default())?.capacity;
    let exact = ring_capacity_exact(n, 1.0, e)?;
    let tol = if n == 2 { 0.05 } else { 0.10 };
    out.push(CheckRecord::within("ring_capacity_rel_error", cap / exact - 1.0, 0.0, tol));

    out.push(CheckRecord::within("b2", b_n(2)?, 1.0 / (2.0 * std::f64::consts::PI), 1e-10));
    out.push(CheckRecord::within("c1", ctx.c1(), c1_from_lambda(ctx.lambda_k()), 1e-12 * ctx.c1()));
    out.push(CheckRecord::within("c3", ctx.c3(), 2f64.powi(n as i32) * ctx.b_n(), 1e-12 * ctx.c3()));
    let big_n = 10.0;
    let sat = ctx.saturation_delta(big_n);
    out.push(CheckRecord::within("beta_saturation", beta(sat, big_n, ctx)?, ctx.beta0(), 0.0));
    let mut drop = f64::NEG_INFINITY;
    let mut prev = f64::NEG_INFINITY;
    for i in 0..100 {
        let delta = sat * 10f64.powf(-4.0 + 5.0 * i as f64 / 99.0);
        let v = beta(delta, big_n, ctx)?;
        drop = drop.max(prev - v);
        prev = v;
    }
    out.push(CheckRecord::upper("beta_monotone", drop, 0.0, 0.0));

    let (mut e1, mut e2, mut e3, mut e4) = (0f64, 0f64, 0f64, 0f64);
    let rel = |x: f64, y: f64| ((x - y) / y).abs();
    for _ in 0..opts.draws {
        let phi = rng.random_range(0.05..1.5);
        let r = rng.random_range(0.05..0.95);
        e1 = e1.max(rel(n_bound(0.25, phi, NBoundForm::Angle, ctx)? / ctx.c0(), gamma1(phi, ctx)?));
        e2 = e2.max(rel(n_bound(0.5, phi, NBoundForm::Angle, ctx)? / ctx.c0(), gamma2(phi, ctx)?));
        e4 = e4.max(rel(n_bound(0.5, r, NBoundForm::Radius, ctx)? / ctx.c0(), gamma4(r, ctx)?));
        e3 = e3.max(rel(gamma2(phi, ctx)?.powf(1.0 / (1.0 - n as f64)), gamma3(phi, ctx)?));
    }
    out.push(CheckRecord::upper("gamma1_identity", e1, 0.0, 1e-12));
    out.push(CheckRecord::upper("gamma2_identity", e2, 0.0, 1e-12));
    out.push(CheckRecord::upper("gamma4_identity", e4, 0.0, 1e-12));
    out.push(CheckRecord::upper("gamma3_identity", e3, 0.0, 1e-12));

    for f in Fixture::ALL {
        let profile = f.generate(ctx)?;
        let v = scan(f.kind(), &profile, Fixture::PHI, ctx, &ScanOptions::default())?;
        let miss = if v.verdict == f.expected() { 0.0 } else { 1.0 };
        out.push(CheckRecord::upper(format!("fixture_{}", f.name()), miss, 0.0, 0.0));
    }

    let radii: Vec<f64> = (1..=8).map(|i| 0.5f64.powi(i)).collect();
    let b = Point::e1(2, 1.0);
    let radial = boundary_scan(&MapSpec::SingularInner, &ApproachCurve::radial(b.clone())?, &radii)?;
    out.push(CheckRecord::upper("singular_inner_radial", radial.last().map_or(f64::NAN, |s| s.1), 1e-6, 0.0));
    let parabola = ApproachCurve::new(CurveKind::TangentialParabola { kappa: 1.5 }, b)?;
    let tang = boundary_scan(&MapSpec::SingularInner, &parabola, &radii)?;
    out.push(CheckRecord::within("singular_inner_parabola", tang.last().map_or(f64::NAN, |s| s.1), (-2f64).exp(), 1e-3));

    let mut a = vec![0.0; n];
    a[0] = 0.3;
    a[1] = -0.2;
    let mut x = vec![0.0; n];
    x[0] = 0.1;
    x[1] = 0.4;
    let mob = MapSpec::mobius(Point::new(a)?)?;
    out.push(CheckRecord::within("mobius_dilatation", dilatation_estimate(&mob, &Point::new(x)?, DEFAULT_FD_STEP)?, 1.0, 1e-4));
    let stretch = MapSpec::radial_stretch(2.0)?;
    let y = Point::new(vec![0.3, 0.4])?;
    out.push(CheckRecord::within("stretch_dilatation", dilatation_estimate(&stretch, &y, DEFAULT_FD_STEP)?, 2.0, 1e-3));

    Ok(out)
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> CmdResult {
    let ctx = context(cli)?;
    let opts = VerifyOptions {
        chain_samples: a.chain_samples,
        triples: a.triples,
        cone_samples: a.cone_samples,
        sphere_pairs: a.sphere_pairs,
        divisions: a.divisions,
        draws: a.draws,
        seed: cli.seed,
    };
    if opts.chain_samples == 0 || opts.cone_samples < 2 || opts.divisions < 8 {
        return Err(usage("verify needs chain samples ≥ 1, cone samples ≥ 2 and divisions ≥ 8"));
    }
    let report = verify_suite(&ctx, &opts)?;
    let mut text = serde_json::to_string_pretty(&report).map_err(|e| Failure { code: 1, msg: e.to_string() })?;
    text.push('\n');
    emit(cli, "verify.json", &text)?;
    let failed: Vec<&str> = report.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(0)
    } else {
        eprintln!("failed checks: {}", failed.join(", "));
        Ok(1)
    }
}

fn load_profile(path: &Path) -> std::result::Result<RateProfile, Failure> {
    let file = fs::File::open(path).map_err(|e| usage(format!("cannot open {}: {e}", path.display())))?;
    RateProfile::read_csv(file).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn cmd_scan(cli: &Cli, a: &ScanArgs) -> CmdResult {
    let ctx = context(cli)?;
    let profile = load_profile(&a.profile)?;
    let opts = ScanOptions {
        window: a.window,
        threshold: a.threshold,
        normalization: match a.normalization {
            NormArg::Theorem => Normalization::Theorem,
            NormArg::Proof => Normalization::Proof,
        },
        delta_floor: a.delta_floor,
    };
    let v = scan(a.kind.into(), &profile, a.phi, &ctx, &opts).map_err(|e| match e {
        Error::Precondition(m) | Error::Argument(m) => usage(m),
        other => other.into(),
    })?;
    let verdict = format!("verdict={}\n", v.verdict);
    match &cli.out {
        Some(_) => {
            emit(cli, "scan.csv", &format!("{}{verdict}", v.stats_csv()))?;
            print!("{verdict}");
        }
        None => emit(cli, "", &format!("{}{verdict}", v.stats_csv()))?,
    }
    Ok(0)
}

fn cmd_constants(cli: &Cli, a: &ConstantsArgs) -> CmdResult {
    let ctx = context(cli)?;
    let mut text = String::from("name,value,provenance\n");
    for e in ctx.ledger() {
        text.push_str(&format!("{},{},{}\n", e.name, e.value, e.provenance));
    }
    if let Some(kind) = a.theorem {
        let tc = theorem_constants(kind.into(), a.phi, a.r, &ctx)?;
        for (name, v) in tc.named() {
            text.push_str(&format!("{name},{v},derived\n"));
        }
    }
    emit(cli, "constants.csv", &text)?;
    Ok(0)
}

fn cmd_capacity(cli: &Cli, a: &CapacityArgs) -> CmdResult {
    let cfg = SolverConfig { tol: a.tol, max_sweeps: a.max_sweeps, ..SolverConfig::default() };
    let (grid, exact) = match (&a.ring, &a.grid) {
        (Some(r), None) => {
            let n = cli.n.unwrap_or(2);
            (CondenserGrid::ring(n, r[0], r[1], a.cell_size)?, Some(ring_capacity_exact(n, r[0], r[1])?))
        }
        (None, Some(p)) => {
            let text = fs::read_to_string(p).map_err(|e| usage(format!("cannot read {}: {e}", p.display())))?;
            let g = CondenserGrid::from_text(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            if let Some(n) = cli.n {
                if n != g.dim() {
                    return Err(usage(format!("--n {n} but the grid has dimension {}", g.dim())));
                }
            }
            (g, None)
        }
        _ => return Err(usage("give exactly one of --ring or --grid")),
    };
    let sol = capacity_estimate_with(&grid, &cfg)?;
    let text = match exact {
        Some(x) => format!("capacity,sweeps,exact,rel_error\n{},{},{x},{}\n", sol.capacity, sol.sweeps, sol.capacity / x - 1.0),
        None => format!("capacity,sweeps\n{},{}\n", sol.capacity, sol.sweeps),
    };
    emit(cli, "capacity.csv", &text)?;
    Ok(0)
}

fn cmd_boundary(cli: &Cli, a: &BoundaryArgs) -> CmdResult {
    let map = match a.map {
        MapArg::SingularInner => MapSpec::SingularInner,
        MapArg::Mobius => {
            let c = a.a.as_ref().ok_or_else(|| usage("--map mobius needs --a"))?;
            MapSpec::mobius(point_arg(c)?).map_err(|e| usage(e.to_string()))?
        }
        MapArg::Stretch => MapSpec::radial_stretch(a.alpha).map_err(|e| usage(e.to_string()))?,
    };
    if let Some(c) = &a.dilatation_at {
        let k = dilatation_estimate(&map, &point_arg(c)?, DEFAULT_FD_STEP)?;
        emit(cli, "dilatation.csv", &format!("{k}\n"))?;
        return Ok(0);
    }
    let dim = match (&map, &a.target) {
        (_, Some(t)) => t.len(),
        (MapSpec::Mobius { a }, None) => a.dim(),
        _ => cli.n.unwrap_or(2),
    };
    let target = match &a.target {
        Some(t) => point_arg(t)?,
        None => Point::e1(dim, 1.0),
    };
    let kind = match a.curve {
        CurveArg::Radial => CurveKind::Radial,
        CurveArg::Cone => CurveKind::ConeRay { angle: a.angle },
        CurveArg::Parabola => CurveKind::TangentialParabola { kappa: a.kappa },
    };
    let curve = ApproachCurve::new(kind, target).map_err(|e| usage(e.to_string()))?;
    if a.levels < 1 {
        return Err(usage("--levels must be at least 1"));
    }
    let radii: Vec<f64> = (1..=a.levels).map(|i| 0.5f64.powi(i)).collect();
    let rows = boundary_scan(&map, &curve, &radii)?;
    emit(cli, "boundary.csv", &scan_csv(&map, &curve, &rows))?;
    Ok(0)
}

fn cmd_fixtures(cli: &Cli) -> CmdResult {
    if cli.out.is_none() {
        return Err(usage("fixtures needs --out"));
    }
    let ctx = context(cli)?;
    for f in Fixture::ALL {
        emit(cli, &format!("{}.csv", f.name()), &f.generate(&ctx)?.to_csv_string()?)?;
    }
    Ok(0)
}
