//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::f64::consts::{E, PI};
use std::fs::File;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use qrbound::capacity::{capacity_estimate_with, ring_capacity_exact, CondenserGrid, SolverConfig};
use qrbound::constants::{
    b_n, beta, c1_from_lambda, gamma1, gamma2, gamma3, gamma4, n_bound, ConstantsContext, NBoundForm,
};
use qrbound::envelopes::{scan, Fixture, RateProfile, ScanOptions};
use qrbound::geometry::{sample_cone_sphere, sample_region, Ball, ConeSpec, Point, TruncatedConeSpec};
use qrbound::maps::{boundary_scan, dilatation_estimate, ApproachCurve, CurveKind, MapSpec, DEFAULT_FD_STEP};
use qrbound::metrics::{
    j_cone_diameter_bound, j_dist, k_dist_estimate, rho, s_bound, set_diameter, Domain, MetricKind, DEFAULT_K_TOL,
};
use qrbound::quadrature::adaptive_simpson;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg)
    }
}

fn within_time(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:.1?}, limit {limit:?}"))?;
    Ok(t)
}

fn unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Point {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let l = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if l > 0.1 && l <= 1.0 {
            return Point::new(v.iter().map(|x| x / l).collect()).unwrap();
        }
    }
}

fn metric_chain() -> Outcome {
    let start = Instant::now();
    let mut worst = [f64::NEG_INFINITY; 3];
    for n in [2usize, 3] {
        let dom = Domain::unit_ball(n);
        let pts = sample_region(&Ball::unit(n), 20_000, 2024 + n as u64).map_err(|e| e.to_string())?;
        for p in pts.chunks(2) {
            let j = j_dist(&dom, &p[0], &p[1]).unwrap();
            let k = k_dist_estimate(&dom, &p[0], &p[1], DEFAULT_K_TOL).map_err(|e| e.to_string())?;
            let r = rho(&p[0], &p[1]).unwrap();
            worst[0] = worst[0].max(j - k);
            worst[1] = worst[1].max(k - r);
            worst[2] = worst[2].max(r - 2.0 * j);
        }
    }
    ensure(worst[0] <= 1e-3, format!("max j - k = {:e}", worst[0]))?;
    ensure(worst[1] <= 1e-3, format!("max k - rho = {:e}", worst[1]))?;
    ensure(worst[2] <= 1e-9, format!("max rho - 2j = {:e}", worst[2]))?;
    let t = within_time(start, Duration::from_secs(60))?;
    Ok(format!(
        "2x10^4 pairs, max j-k {:.2e}, k-rho {:.2e}, rho-2j {:.2e}, {t:.1?}",
        worst[0], worst[1], worst[2]
    ))
}

fn radial_closed_forms() -> Outcome {
    let mut notes = Vec::new();
    for n in [2usize, 3] {
        let o = Point::origin(n);
        let x = Point::e1(n, 0.5);
        let r = rho(&o, &x).unwrap();
        ensure((r - 3f64.ln()).abs() <= 1e-12, format!("n={n}: rho = {r}"))?;
        let oracle = adaptive_simpson(|t| 1.0 / (1.0 - t), 0.0, 0.5, 1e-14).unwrap();
        ensure((oracle - 2f64.ln()).abs() < 1e-12, format!("quadrature oracle {oracle}"))?;
        let k = k_dist_estimate(&Domain::unit_ball(n), &o, &x, DEFAULT_K_TOL).unwrap();
        ensure((k - oracle).abs() <= 1e-3, format!("n={n}: k = {k}, oracle {oracle}"))?;
        notes.push(format!("n={n} |k-log2| {:.1e}", (k - oracle).abs()));
    }
    Ok(notes.join(", "))
}

fn cone_j_dominance() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut violations = 0;
    let mut triples = 0;
    let mut tightest = f64::INFINITY;
    for n in [2usize, 3] {
        for a in [0.1, 0.3, 0.5, 0.7, 0.9] {
            for phi in [0.2, 0.5, 0.8, 1.1, 1.4] {
                for rf in [0.3, 0.9] {
                    let r = rf * f64::cos(phi);
                    let cone = ConeSpec::new(unit_vector(&mut rng, n), phi).unwrap();
                    let t = TruncatedConeSpec::with_ratio(cone, r, a).unwrap();
                    let pts = sample_region(&t, 1000, rng.random()).map_err(|e| e.to_string())?;
                    let d = set_diameter(&Domain::unit_ball(n), MetricKind::J, &pts).unwrap();
                    let bound = j_cone_diameter_bound(a, phi, r).unwrap();
                    if d > bound {
                        violations += 1;
                    }
                    tightest = tightest.min(bound - d);
                    triples += 1;
                }
            }
        }
    }
    ensure(violations == 0, format!("{violations} of {triples} triples violate the bound"))?;
    let t = within_time(start, Duration::from_secs(120))?;
    Ok(format!("{triples} triples x 10^3 samples, 0 violations, min slack {tightest:.3e}, {t:.1?}"))
}

fn sphere_sandwich() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut violations = 0usize;
    let mut pairs = 0;
    for n in [2usize, 3] {
        for _ in 0..10 {
            let phi: f64 = rng.random_range(0.1..1.45);
            let r = rng.random_range(0.05..0.95) * phi.cos();
            let b = unit_vector(&mut rng, n);
            let s = s_bound(r, phi).unwrap();
            let foot = b.scale(1.0 - r);
            let o = Point::origin(n);
            let low = rho(&o, &foot).unwrap();
            let segment: Vec<Point> = (0..=20).map(|k| foot.scale(k as f64 / 20.0)).collect();
            let pts = sample_cone_sphere(&ConeSpec::new(b, phi).unwrap(), r, 1000, rng.random()).map_err(|e| e.to_string())?;
            for x in &pts {
                let rx = rho(&o, x).unwrap();
                if rx < low - 1e-12 || rx > s {
                    violations += 1;
                }
                if segment.iter().any(|p| rho(p, x).unwrap() > s) {
                    violations += 1;
                }
            }
            pairs += 1;
        }
    }
    ensure(violations == 0, format!("{violations} violations"))?;
    Ok(format!("{pairs} (r, phi) pairs x 10^3 sphere samples, 0 violations"))
}

fn ring_capacity() -> Outcome {
    let mut notes = Vec::new();
    for (n, tol) in [(2usize, 0.05), (3, 0.10)] {
        let start = Instant::now();
        let grid = CondenserGrid::ring(n, 1.0, E, E / 64.0).unwrap();
        let sol = capacity_estimate_with(&grid, &SolverConfig::default()).map_err(|e| e.to_string())?;
        let exact = ring_capacity_exact(n, 1.0, E).unwrap();
        let want = if n == 2 { 2.0 * PI } else { 4.0 * PI };
        ensure((exact - want).abs() < 1e-12, format!("exact value {exact}"))?;
        let rel = sol.capacity / exact - 1.0;
        ensure(rel.abs() <= tol, format!("n={n}: relative error {rel:.4}"))?;
        let t = within_time(start, Duration::from_secs(300))?;
        notes.push(format!("n={n} rel {rel:+.4} ({t:.1?})"));
    }
    Ok(notes.join(", "))
}

fn ledger_anchors() -> Outcome {
    let b2 = b_n(2).unwrap();
    ensure((b2 - 1.0 / (2.0 * PI)).abs() <= 1e-10, format!("b_2 = {b2}"))?;
    for n in [2usize, 3, 4] {
        for lambda in [0.05, 0.25, 0.45] {
            let ctx = ConstantsContext::new(n, 1.0, lambda, 1.0, 1.0).unwrap();
            let c1 = 1.0 / (1.0 + lambda).ln();
            ensure((ctx.c1() - c1).abs() <= 1e-12 * c1, format!("c1 {}", ctx.c1()))?;
            ensure(ctx.c1() == c1_from_lambda(lambda), "c1 formula mismatch".into())?;
            let c3 = 2f64.powi(n as i32) * ctx.b_n();
            ensure((ctx.c3() - c3).abs() <= 1e-12 * c3, format!("c3 {}", ctx.c3()))?;
            let big_n = 7.5;
            let sat = ctx.c3() * big_n / (2.0 * ctx.c1());
            ensure(beta(sat, big_n, &ctx).unwrap() == ctx.beta0(), "beta not saturated at threshold".into())?;
            ensure(beta(sat * (1.0 - 1e-9), big_n, &ctx).unwrap() < ctx.beta0(), "beta saturates early".into())?;
            let scan: Vec<f64> = (0..100).map(|i| beta(sat * 10f64.powf(-6.0 + 7.0 * i as f64 / 99.0), big_n, &ctx).unwrap()).collect();
            ensure(scan.windows(2).all(|w| w[1] >= w[0]), "beta not monotone".into())?;
        }
    }
    Ok(format!("|b_2 - 1/2pi| {:.1e}; c1, c3, saturation and monotonicity over 9 contexts", (b2 - 1.0 / (2.0 * PI)).abs()))
}

fn theorem_constant_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    let rel = |x: f64, y: f64| ((x - y) / y).abs();
    let mut worst = 0f64;
    for _ in 0..20 {
        let n = rng.random_range(2..=5usize);
        let ctx = ConstantsContext::new(n, 1.0, rng.random_range(0.01..0.49), rng.random_range(0.5..3.0), 1.0).unwrap();
        let phi = rng.random_range(0.05..1.5);
        let r = rng.random_range(0.01..0.99);
        let c0 = ctx.c0();
        let errs = [
            rel(n_bound(0.25, phi, NBoundForm::Angle, &ctx).unwrap() / c0, gamma1(phi, &ctx).unwrap()),
            rel(n_bound(0.5, phi, NBoundForm::Angle, &ctx).unwrap() / c0, gamma2(phi, &ctx).unwrap()),
            rel(n_bound(0.5, r, NBoundForm::Radius, &ctx).unwrap() / c0, gamma4(r, &ctx).unwrap()),
            rel(gamma2(phi, &ctx).unwrap().powf(1.0 / (1.0 - n as f64)), gamma3(phi, &ctx).unwrap()),
        ];
        for e in errs {
            worst = worst.max(e);
        }
    }
    ensure(worst <= 1e-12, format!("max relative error {worst:e}"))?;
    Ok(format!("20 draws, max relative error {worst:.1e}"))
}

fn scanner_fixtures() -> Outcome {
    let ctx = ConstantsContext::with_defaults(2).unwrap();
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/profiles");
    let mut seen = Vec::new();
    for f in Fixture::ALL {
        let path = dir.join(format!("{}.csv", f.name()));
        let profile = RateProfile::read_csv(File::open(&path).map_err(|e| format!("{}: {e}", path.display()))?)
            .map_err(|e| format!("{}: {e}", path.display()))?;
        let first = scan(f.kind(), &profile, Fixture::PHI, &ctx, &ScanOptions::default()).unwrap().verdict;
        let again = scan(f.kind(), &profile, Fixture::PHI, &ctx, &ScanOptions::default()).unwrap().verdict;
        ensure(first == again, format!("{}: nondeterministic", f.name()))?;
        ensure(first == f.expected(), format!("{}: got {first}, want {}", f.name(), f.expected()))?;
        seen.push(format!("{}={first}", f.name()));
    }
    Ok(seen.join(" "))
}

fn lindelof_contrast() -> Outcome {
    let radii: Vec<f64> = (1..=8).map(|i| 0.5f64.powi(i)).collect();
    let b = Point::e1(2, 1.0);
    let radial = boundary_scan(&MapSpec::SingularInner, &ApproachCurve::radial(b.clone()).unwrap(), &radii).unwrap();
    let parabola = ApproachCurve::new(CurveKind::TangentialParabola { kappa: 1.5 }, b).unwrap();
    let tang = boundary_scan(&MapSpec::SingularInner, &parabola, &radii).unwrap();
    let (rl, tl) = (radial.last().unwrap().1, tang.last().unwrap().1);
    ensure(rl < 1e-6, format!("radial final {rl:e}"))?;
    ensure((tl - (-2f64).exp()).abs() <= 1e-3, format!("parabola final {tl}"))?;
    Ok(format!("radial {rl:.2e}, parabola {tl:.6} vs e^-2 = {:.6}", (-2f64).exp()))
}

fn dilatation_anchors() -> Outcome {
    let mut worst_m = 0f64;
    for (a, x) in [
        (vec![0.3, -0.2], vec![0.1, 0.4]),
        (vec![0.5, 0.5], vec![-0.6, 0.1]),
        (vec![0.2, 0.1, -0.4], vec![0.3, 0.3, 0.3]),
    ] {
        let m = MapSpec::mobius(Point::new(a).unwrap()).unwrap();
        let k = dilatation_estimate(&m, &Point::new(x).unwrap(), DEFAULT_FD_STEP).unwrap();
        worst_m = worst_m.max((k - 1.0).abs());
    }
    ensure(worst_m <= 1e-4, format!("Möbius |K - 1| = {worst_m:e}"))?;
    let s = MapSpec::radial_stretch(2.0).unwrap();
    let k = dilatation_estimate(&s, &Point::new(vec![0.3, 0.4]).unwrap(), DEFAULT_FD_STEP).unwrap();
    ensure((k - 2.0).abs() <= 1e-3, format!("stretch K = {k}"))?;
    Ok(format!("Möbius |K-1| {worst_m:.1e}, stretch K {k:.6}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 metric chain", metric_chain),
        ("2 radial closed forms", radial_closed_forms),
        ("3 cone j-diameter dominance", cone_j_dominance),
        ("4 hyperbolic sandwich on cone spheres", sphere_sandwich),
        ("5 ring capacity oracle", ring_capacity),
        ("6 constant ledger anchors", ledger_anchors),
        ("7 theorem-constant identities", theorem_constant_identities),
        ("8 scanner fixtures", scanner_fixtures),
        ("9 singular inner contrast", lindelof_contrast),
        ("10 dilatation anchors", dilatation_anchors),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(note) => println!("PASS {name}: {note}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
