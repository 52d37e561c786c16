//! Hyperbolic (ρ), distance-ratio (j) and quasihyperbolic (k) metrics, set
//! diameters, and closed-form diameter bounds for truncated cones.
//!
//! In the unit ball these satisfy j ≤ k ≤ ρ ≤ 2j. ρ and j have closed forms;
//! k is estimated by shortest-path refinement (see [`k_dist_estimate`]).

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use crate::error::{arg, Error, Result};
use crate::geometry::{dist, dot, Point};
use crate::quadrature::GAUSS_LEGENDRE_5;

/// Default tolerance of the k estimator.
pub const DEFAULT_K_TOL: f64 = 1e-3;

/// Distance-to-boundary evaluator of a general domain; must be positive
/// exactly on the domain.
pub type BoundaryDistance = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A proper subdomain G of ℝⁿ, described by its boundary distance d(z).
#[derive(Clone)]
pub enum Domain {
    UnitBall { dim: usize },
    General { dim: usize, boundary_distance: BoundaryDistance },
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::UnitBall { dim } => write!(f, "UnitBall({dim})"),
            Domain::General { dim, .. } => write!(f, "General({dim})"),
        }
    }
}

impl Domain {
    pub fn unit_ball(dim: usize) -> Self {
        Domain::UnitBall { dim }
    }

    pub fn general(dim: usize, boundary_distance: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Domain::General { dim, boundary_distance: Arc::new(boundary_distance) }
    }

    /// The upper half-space {x : xₙ > 0}.
    pub fn upper_half_space(dim: usize) -> Self {
        Domain::general(dim, move |x: &[f64]| x[dim - 1])
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::UnitBall { dim } | Domain::General { dim, .. } => *dim,
        }
    }

    /// d(x) = d(x, ∂G), without interior checks.
    pub fn boundary_distance(&self, x: &[f64]) -> f64 {
        match self {
            Domain::UnitBall { .. } => 1.0 - dot(x, x).sqrt(),
            Domain::General { boundary_distance, .. } => boundary_distance(x),
        }
    }

    /// d(x) for an interior point, or an argument error.
    pub fn interior_distance(&self, x: &Point) -> Result<f64> {
        x.check_dim(self.dim())?;
        let d = self.boundary_distance(x.coords());
        if !(d > 0.0) {
            return arg(format!("point {:?} is not interior to the domain", x.coords()));
        }
        Ok(d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricKind {
    Rho,
    J,
    K,
}

impl std::str::FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rho" => Ok(MetricKind::Rho),
            "j" => Ok(MetricKind::J),
            "k" => Ok(MetricKind::K),
            other => arg(format!("unknown metric '{other}'")),
        }
    }
}

fn check_in_ball(x: &Point) -> Result<f64> {
    let s = x.norm_sq();
    if !(s < 1.0) {
        return arg(format!("point {:?} is not inside the unit ball", x.coords()));
    }
    Ok(s)
}

/// Hyperbolic distance of the unit ball,
/// ρ(x, y) = 2 arsinh √(|x−y|² / ((1−|x|²)(1−|y|²))).
pub fn rho(x: &Point, y: &Point) -> Result<f64> {
    x.check_dim(y.dim())?;
    let sx = check_in_ball(x)?;
    let sy = check_in_ball(y)?;
    let d2 = {
        let d = x.dist(y);
        d * d
    };
    Ok(2.0 * (d2 / ((1.0 - sx) * (1.0 - sy))).sqrt().asinh())
}

/// ρ(s e₁, t e₁) = log((1+t)/(1−t) · (1−s)/(1+s)) for t ∈ (0,1), s ∈ (−1, t].
pub fn rho_radial(s: f64, t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return arg(format!("t must lie in (0, 1), got {t}"));
    }
    if !(s > -1.0 && s <= t) {
        return arg(format!("s must lie in (-1, t], got {s}"));
    }
    Ok(2.0 * (t.atanh() - s.atanh()))
}

/// Distance-ratio metric j_G(x, y) = log(1 + |x−y| / min{d(x), d(y)}).
pub fn j_dist(dom: &Domain, x: &Point, y: &Point) -> Result<f64> {
    let dx = dom.interior_distance(x)?;
    let dy = dom.interior_distance(y)?;
    Ok((x.dist(y) / dx.min(dy)).ln_1p())
}

/// Refinement parameters of the k estimator.
#[derive(Clone, Debug)]
pub struct KEstimatorConfig {
    /// Segments of the coarsest path.
    pub initial_segments: usize,
    /// Refinement stops with a convergence error beyond this many segments.
    pub max_segments: usize,
    /// Relative candidate spread at which the coarse-level search stops.
    pub min_step: f64,
}

impl Default for KEstimatorConfig {
    fn default() -> Self {
        KEstimatorConfig { initial_segments: 4, max_segments: 1024, min_step: 0.02 }
    }
}

/// Quasihyperbolic distance estimate with the default configuration.
pub fn k_dist_estimate(dom: &Domain, x: &Point, y: &Point, tol: f64) -> Result<f64> {
    k_dist_estimate_with(dom, x, y, tol, &KEstimatorConfig::default())
}

/// Estimates k_G(x, y) = inf ∫_γ ds / d(z) by shortest-path refinement.
///
/// A polyline from x to y is refined level by level; its length uses the
/// quasihyperbolic length of each straight segment (5-point Gauss–Legendre).
/// On the coarsest level a shortest-path search over a layered graph places
/// the path: every interior vertex offers five candidate points spread along
/// a normal of the path, edges join candidates of consecutive vertices, and
/// the spread halves until it falls below `min_step`. Each level then
/// polishes the vertex offsets with a damped Newton iteration, doubles the
/// segment count and redistributes the vertices at equal quasihyperbolic
/// spacing. Refinement stops when successive levels differ by less than
/// `tol` (and the level before by less than 4·tol). Every level is the
/// length of an actual curve, so the estimate is biased upward.
///
/// In the unit ball the geodesic lies in a 2-plane through 0, x and y, so the
/// search runs in that plane for every n.
pub fn k_dist_estimate_with(dom: &Domain, x: &Point, y: &Point, tol: f64, cfg: &KEstimatorConfig) -> Result<f64> {
    if !(tol > 0.0) {
        return arg(format!("tolerance must be positive, got {tol}"));
    }
    dom.interior_distance(x)?;
    dom.interior_distance(y)?;
    x.check_dim(y.dim())?;
    if x == y {
        return Ok(0.0);
    }
    match dom {
        Domain::UnitBall { .. } => {
            let (px, py) = planar_section(x.coords(), y.coords());
            let d = |z: &[f64]| 1.0 - (z[0] * z[0] + z[1] * z[1]).sqrt();
            refine_geodesic(2, &px, &py, &d, tol, cfg)
        }
        Domain::General { dim, boundary_distance } => {
            let d = |z: &[f64]| boundary_distance(z);
            refine_geodesic(*dim, x.coords(), y.coords(), &d, tol, cfg)
        }
    }
}

/// Coordinates of x and y in an orthonormal frame of a plane through the
/// origin containing both.
fn planar_section(x: &[f64], y: &[f64]) -> ([f64; 2], [f64; 2]) {
    let nx = dot(x, x).sqrt();
    if nx == 0.0 {
        return ([0.0, 0.0], [dot(y, y).sqrt(), 0.0]);
    }
    let e1: Vec<f64> = x.iter().map(|c| c / nx).collect();
    let along = dot(y, &e1);
    let perp: f64 = y.iter().zip(&e1).map(|(yi, ei)| (yi - along * ei).powi(2)).sum::<f64>().sqrt();
    ([nx, 0.0], [along, perp])
}

fn segment_weight<F: Fn(&[f64]) -> f64>(a: &[f64], b: &[f64], d: &F, buf: &mut [f64]) -> f64 {
    let len = dist(a, b);
    if len == 0.0 {
        return 0.0;
    }
    let mut acc = 0.0;
    for &(node, w) in GAUSS_LEGENDRE_5.iter() {
        let t = 0.5 * (node + 1.0);
        for ((zi, ai), bi) in buf.iter_mut().zip(a).zip(b) {
            *zi = ai + t * (bi - ai);
        }
        let dz = d(buf);
        if !(dz > 0.0) {
            return f64::INFINITY;
        }
        acc += w / dz;
    }
    0.5 * len * acc
}

struct Polyline {
    dim: usize,
    // (m + 1) * dim
    verts: Vec<f64>,
}

impl Polyline {
    fn segments(&self) -> usize {
        self.verts.len() / self.dim - 1
    }

    fn vertex(&self, i: usize) -> &[f64] {
        &self.verts[i * self.dim..(i + 1) * self.dim]
    }

    fn weights<F: Fn(&[f64]) -> f64>(&self, d: &F) -> Vec<f64> {
        let mut buf = vec![0.0; self.dim];
        (0..self.segments()).map(|i| segment_weight(self.vertex(i), self.vertex(i + 1), d, &mut buf)).collect()
    }

    /// Resamples to `m` segments of equal quasihyperbolic length.
    fn resample<F: Fn(&[f64]) -> f64>(&self, m: usize, d: &F) -> Polyline {
        let w = self.weights(d);
        let total: f64 = w.iter().sum();
        let dim = self.dim;
        let mut verts = Vec::with_capacity((m + 1) * dim);
        verts.extend_from_slice(self.vertex(0));
        let mut seg = 0;
        let mut acc = 0.0;
        for i in 1..m {
            let target = total * i as f64 / m as f64;
            while seg + 1 < w.len() && acc + w[seg] < target {
                acc += w[seg];
                seg += 1;
            }
            let frac = if w[seg] > 0.0 { ((target - acc) / w[seg]).clamp(0.0, 1.0) } else { 0.0 };
            let (a, b) = (self.vertex(seg), self.vertex(seg + 1));
            verts.extend(a.iter().zip(b).map(|(ai, bi)| ai + frac * (bi - ai)));
        }
        verts.extend_from_slice(self.vertex(self.segments()));
        Polyline { dim, verts }
    }
}

const STENCIL: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

/// Unit normals of `t` spanning its orthogonal complement.
fn normals(t: &[f64]) -> Vec<Vec<f64>> {
    let n = t.len();
    let tl = dot(t, t).sqrt();
    if n == 2 {
        if tl == 0.0 {
            return vec![vec![0.0, 1.0]];
        }
        return vec![vec![-t[1] / tl, t[0] / tl]];
    }
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    if tl > 0.0 {
        basis.push(t.iter().map(|c| c / tl).collect());
    }
    for axis in 0..n {
        let mut v = vec![0.0; n];
        v[axis] = 1.0;
        for b in &basis {
            let p = dot(&v, b);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= p * bi;
            }
        }
        let l = dot(&v, &v).sqrt();
        if l > 1e-8 {
            basis.push(v.into_iter().map(|c| c / l).collect());
        }
        if basis.len() == n {
            break;
        }
    }
    if tl > 0.0 {
        basis.remove(0);
    }
    basis
}

/// One layered-graph shortest-path pass along normal number `dir`; returns the
/// new path length.
fn trellis_pass<F: Fn(&[f64]) -> f64>(path: &mut Polyline, step: f64, dir: usize, d: &F) -> f64 {
    let dim = path.dim;
    let m = path.segments();
    let k = STENCIL.len();
    // candidate coordinates, layer-major
    let mut cand = vec![0.0; (m + 1) * k * dim];
    for i in 0..=m {
        let v = path.vertex(i);
        if i == 0 || i == m {
            for c in 0..k {
                cand[(i * k + c) * dim..(i * k + c + 1) * dim].copy_from_slice(v);
            }
            continue;
        }
        let (prev, next) = (path.vertex(i - 1), path.vertex(i + 1));
        let t: Vec<f64> = next.iter().zip(prev).map(|(a, b)| a - b).collect();
        let ns = normals(&t);
        let nrm = &ns[dir % ns.len()];
        let scale = step * 0.5 * (dist(v, prev) + dist(v, next));
        for (c, s) in STENCIL.iter().enumerate() {
            let dst = &mut cand[(i * k + c) * dim..(i * k + c + 1) * dim];
            for ((o, vi), ni) in dst.iter_mut().zip(v).zip(nrm) {
                *o = vi + s * scale * ni;
            }
        }
    }
    let mut buf = vec![0.0; dim];
    let mut cost = vec![f64::INFINITY; (m + 1) * k];
    let mut back = vec![0usize; (m + 1) * k];
    let centre = k / 2;
    cost[centre] = 0.0;
    for i in 1..=m {
        let from_range: Vec<usize> = if i == 1 { vec![centre] } else { (0..k).collect() };
        let to_range: Vec<usize> = if i == m { vec![centre] } else { (0..k).collect() };
        for &c in &to_range {
            let b = &cand[(i * k + c) * dim..(i * k + c + 1) * dim];
            if !(d(b) > 0.0) {
                continue;
            }
            let mut best = f64::INFINITY;
            let mut arg_best = centre;
            for &p in &from_range {
                let base = cost[(i - 1) * k + p];
                if !base.is_finite() {
                    continue;
                }
                let a = &cand[((i - 1) * k + p) * dim..((i - 1) * k + p + 1) * dim];
                let w = base + segment_weight(a, b, d, &mut buf);
                if w < best {
                    best = w;
                    arg_best = p;
                }
            }
            cost[i * k + c] = best;
            back[i * k + c] = arg_best;
        }
    }
    let total = cost[m * k + centre];
    if total.is_finite() {
        let mut c = centre;
        for i in (1..m).rev() {
            c = back[(i + 1) * k + c];
            let src = (i * k + c) * dim;
            path.verts[i * dim..(i + 1) * dim].copy_from_slice(&cand[src..src + dim]);
        }
    }
    total
}

fn trellis_search<F: Fn(&[f64]) -> f64>(path: &mut Polyline, mut step: f64, min_step: f64, d: &F) -> f64 {
    let directions = path.dim - 1;
    let mut length: f64 = path.weights(d).iter().sum();
    let mut dir = 0;
    let mut stale = 0;
    while step >= min_step {
        let new_len = trellis_pass(path, step, dir, d);
        dir += 1;
        if new_len < length * (1.0 - 1e-10) {
            length = new_len;
            stale = 0;
        } else {
            length = length.min(new_len);
            stale += 1;
            if stale >= directions {
                step *= 0.5;
                stale = 0;
            }
        }
    }
    length
}

const NEWTON_MAX_ITER: usize = 40;

/// Damped Newton iteration on the offsets of the interior vertices along
/// normal field number `dir`. The length is a sum of terms coupling adjacent
/// vertices only, so its Hessian is tridiagonal; derivatives are central
/// differences. Returns the new length.
fn newton_polish<F: Fn(&[f64]) -> f64>(path: &mut Polyline, dir: usize, d: &F) -> f64 {
    let dim = path.dim;
    let m = path.segments();
    let mut length: f64 = path.weights(d).iter().sum();
    if m < 2 || !length.is_finite() {
        return length;
    }
    let mut buf_a = vec![0.0; dim];
    let mut buf_b = vec![0.0; dim];
    let mut buf = vec![0.0; dim];
    let mut damping = 0.0;
    for _ in 0..NEWTON_MAX_ITER {
        let mut nrm = vec![0.0; (m + 1) * dim];
        let mut h = vec![0.0; m + 1];
        for i in 1..m {
            let (prev, v, next) = (path.vertex(i - 1), path.vertex(i), path.vertex(i + 1));
            let t: Vec<f64> = next.iter().zip(prev).map(|(a, b)| a - b).collect();
            let ns = normals(&t);
            nrm[i * dim..(i + 1) * dim].copy_from_slice(&ns[dir % ns.len()]);
            h[i] = 1e-4 * 0.5 * (dist(v, prev) + dist(v, next));
        }
        let mut g = vec![0.0; m + 1];
        let mut diag = vec![0.0; m + 1];
        let mut off = vec![0.0; m];
        for j in 0..m {
            let (a, b) = (path.vertex(j), path.vertex(j + 1));
            let (na, nb) = (&nrm[j * dim..(j + 1) * dim], &nrm[(j + 1) * dim..(j + 2) * dim]);
            let (ha, hb) = (h[j], h[j + 1]);
            let mut w = |sa: f64, sb: f64| {
                for k in 0..dim {
                    buf_a[k] = a[k] + sa * ha * na[k];
                    buf_b[k] = b[k] + sb * hb * nb[k];
                }
                segment_weight(&buf_a, &buf_b, d, &mut buf)
            };
            let w00 = w(0.0, 0.0);
            if j > 0 {
                let (wp, wm) = (w(1.0, 0.0), w(-1.0, 0.0));
                g[j] += (wp - wm) / (2.0 * ha);
                diag[j] += (wp - 2.0 * w00 + wm) / (ha * ha);
            }
            if j + 1 < m {
                let (wp, wm) = (w(0.0, 1.0), w(0.0, -1.0));
                g[j + 1] += (wp - wm) / (2.0 * hb);
                diag[j + 1] += (wp - 2.0 * w00 + wm) / (hb * hb);
            }
            if j > 0 && j + 1 < m {
                off[j] = (w(1.0, 1.0) - w(1.0, -1.0) - w(-1.0, 1.0) + w(-1.0, -1.0)) / (4.0 * ha * hb);
            }
        }
        if !g.iter().chain(&diag).chain(&off).all(|v| v.is_finite()) {
            break;
        }
        let scale = diag[1..m].iter().map(|v| v.abs()).sum::<f64>() / (m - 1) as f64;
        let mut improved = false;
        for _ in 0..12 {
            let Some(delta) = solve_tridiagonal(&diag, &off, &g, damping * scale, m) else {
                damping = (damping * 10.0).max(1e-3);
                continue;
            };
            let saved = path.verts.clone();
            for i in 1..m {
                for k in 0..dim {
                    path.verts[i * dim + k] += delta[i] * nrm[i * dim + k];
                }
            }
            let new_len: f64 = path.weights(d).iter().sum();
            if new_len < length {
                let gain = length - new_len;
                length = new_len;
                damping *= 0.1;
                if damping < 1e-8 {
                    damping = 0.0;
                }
                improved = gain > 1e-14 * length;
                break;
            }
            path.verts = saved;
            damping = (damping * 10.0).max(1e-3);
        }
        if !improved {
            break;
        }
    }
    length
}

/// Solves (T + μI)δ = −g on the interior indices 1..m−1 of a symmetric
/// tridiagonal T; `None` when a pivot is not positive.
fn solve_tridiagonal(diag: &[f64], off: &[f64], g: &[f64], mu: f64, m: usize) -> Option<Vec<f64>> {
    let mut c = vec![0.0; m + 1];
    let mut r = vec![0.0; m + 1];
    let mut prev_c = 0.0;
    let mut prev_r = 0.0;
    for i in 1..m {
        let sub = if i > 1 { off[i - 1] } else { 0.0 };
        let piv = diag[i] + mu - sub * prev_c;
        if !(piv > 0.0) {
            return None;
        }
        c[i] = if i + 1 < m { off[i] / piv } else { 0.0 };
        r[i] = (-g[i] - sub * prev_r) / piv;
        prev_c = c[i];
        prev_r = r[i];
    }
    let mut x = vec![0.0; m + 1];
    for i in (1..m).rev() {
        x[i] = r[i] - if i + 1 < m { c[i] * x[i + 1] } else { 0.0 };
    }
    Some(x)
}

fn polish<F: Fn(&[f64]) -> f64>(path: &mut Polyline, d: &F) -> f64 {
    let directions = path.dim - 1;
    let mut length = f64::INFINITY;
    loop {
        let before = length;
        for dir in 0..directions {
            length = newton_polish(path, dir, d);
        }
        if directions == 1 || !(length < before * (1.0 - 1e-12)) {
            return length;
        }
    }
}

fn refine_geodesic<F: Fn(&[f64]) -> f64>(dim: usize, x: &[f64], y: &[f64], d: &F, tol: f64, cfg: &KEstimatorConfig) -> Result<f64> {
    let mut verts = Vec::with_capacity(2 * dim);
    verts.extend_from_slice(x);
    verts.extend_from_slice(y);
    let straight = Polyline { dim, verts };
    let mut m = cfg.initial_segments.max(2);
    let mut path = straight.resample(m, d);
    trellis_search(&mut path, 1.0, cfg.min_step, d);
    let mut prev = polish(&mut path, d);
    let mut prev_diff = f64::INFINITY;
    loop {
        m *= 2;
        if m > cfg.max_segments {
            return Err(Error::Convergence { what: "quasihyperbolic estimate", last: prev, previous: f64::NAN });
        }
        path = path.resample(m, d);
        let cur = polish(&mut path, d);
        if !cur.is_finite() {
            return Err(Error::Convergence { what: "quasihyperbolic estimate", last: cur, previous: prev });
        }
        let diff = (cur - prev).abs();
        // two consecutive small differences guard against coarse levels
        // agreeing by accident
        if diff < tol && prev_diff < 4.0 * tol {
            return Ok(cur);
        }
        if m * 2 > cfg.max_segments {
            return Err(Error::Convergence { what: "quasihyperbolic estimate", last: cur, previous: prev });
        }
        prev = cur;
        prev_diff = diff;
    }
}

/// Distance under `kind`; `Rho` requires the unit ball.
pub fn distance(dom: &Domain, kind: MetricKind, x: &Point, y: &Point) -> Result<f64> {
    match kind {
        MetricKind::Rho => match dom {
            Domain::UnitBall { .. } => rho(x, y),
            Domain::General { .. } => arg("the hyperbolic metric is only available on the unit ball"),
        },
        MetricKind::J => j_dist(dom, x, y),
        MetricKind::K => k_dist_estimate(dom, x, y, DEFAULT_K_TOL),
    }
}

/// Finite-sample diameter sup_{x,y∈A} dist(x, y).
pub fn set_diameter(dom: &Domain, kind: MetricKind, points: &[Point]) -> Result<f64> {
    if points.is_empty() {
        return arg("set diameter of an empty point list");
    }
    for p in points {
        dom.interior_distance(p)?;
    }
    let mut best = 0.0f64;
    for (i, x) in points.iter().enumerate() {
        for y in &points[i + 1..] {
            best = best.max(distance(dom, kind, x, y)?);
        }
    }
    Ok(best)
}

fn check_cone_params(a: f64, phi: f64, r: f64) -> Result<()> {
    if !(a > 0.0 && a < 1.0) {
        return arg(format!("ratio a must lie in (0, 1), got {a}"));
    }
    if !(phi > 0.0 && phi < FRAC_PI_2) {
        return arg(format!("angle phi must lie in (0, pi/2), got {phi}"));
    }
    if !(r > 0.0 && r < phi.cos()) {
        return arg(format!("radius r must lie in (0, cos(phi) = {}), got {r}", phi.cos()));
    }
    Ok(())
}

/// u(a, φ) = √((1+a)² tan²φ + (1−a)²); r·u/2 is the radius of the smallest
/// ball containing R(b, φ, ar, r).
pub fn cone_enclosing_factor(a: f64, phi: f64) -> f64 {
    ((1.0 + a).powi(2) * phi.tan().powi(2) + (1.0 - a).powi(2)).sqrt()
}

/// Upper bound log(1 + (2+ar)u(a,φ) / (a(2cos φ − ar))) for the j-diameter of
/// R(b, φ, ar, r).
pub fn j_cone_diameter_bound(a: f64, phi: f64, r: f64) -> Result<f64> {
    check_cone_params(a, phi, r)?;
    let u = cone_enclosing_factor(a, phi);
    Ok(((2.0 + a * r) * u / (a * (2.0 * phi.cos() - a * r))).ln_1p())
}

/// Upper bound for the k-diameter of R(b, φ, ar, r): twice the j bound, or
/// with `r_free` the r-independent 2 log(1 + (2 + a cos φ)(1+a) / (a(2−a)cos²φ)).
pub fn k_cone_diameter_bound(a: f64, phi: f64, r: f64, r_free: bool) -> Result<f64> {
    check_cone_params(a, phi, r)?;
    if r_free {
        let c = phi.cos();
        return Ok(2.0 * ((2.0 + a * c) * (1.0 + a) / (a * (2.0 - a) * c * c)).ln_1p());
    }
    Ok(2.0 * j_cone_diameter_bound(a, phi, r)?)
}

/// s(r, φ) = log((2+r)² / (r(2cos φ − r))), the hyperbolic radius about a cone
/// point at distance r from the vertex that reaches the origin.
///
/// r = cos φ is accepted (up to rounding in cos φ).
pub fn s_bound(r: f64, phi: f64) -> Result<f64> {
    if !(phi > 0.0 && phi < FRAC_PI_2) {
        return arg(format!("angle phi must lie in (0, pi/2), got {phi}"));
    }
    if !(r > 0.0 && r <= phi.cos() * (1.0 + 1e-12)) {
        return arg(format!("radius r must lie in (0, cos(phi) = {}], got {r}", phi.cos()));
    }
    Ok(((2.0 + r).powi(2) / (r * (2.0 * phi.cos() - r))).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

    #[test]
    fn rho_anchors() {
        let o = Point::origin(2);
        assert!((rho(&o, &Point::e1(2, 0.5)).unwrap() - 3f64.ln()).abs() < 1e-12);
        assert!((rho(&Point::e1(2, -0.5), &Point::e1(2, 0.5)).unwrap() - 2.0 * 3f64.ln()).abs() < 1e-12);
        let x = Point::new(vec![0.3, -0.2, 0.1]).unwrap();
        assert_eq!(rho(&x, &x).unwrap(), 0.0);
        assert!(rho(&o, &Point::e1(2, 1.0)).is_err());
        assert!(rho(&o, &Point::e1(3, 0.1)).is_err());
    }

    #[test]
    fn rho_radial_anchors() {
        assert!((rho_radial(0.0, 0.5).unwrap() - 3f64.ln()).abs() < 1e-12);
        assert!((rho_radial(-0.5, 0.5).unwrap() - 2.0 * 3f64.ln()).abs() < 1e-12);
        assert!(rho_radial(0.5 - 1e-12, 0.5).unwrap() < 1e-11);
        assert_eq!(rho_radial(0.5, 0.5).unwrap(), 0.0);
        assert!(rho_radial(0.6, 0.5).is_err());
        assert!(rho_radial(-1.0, 0.5).is_err());
        assert!(rho_radial(0.0, 1.0).is_err());
    }

    #[test]
    fn j_anchor_and_errors() {
        let b = Domain::unit_ball(2);
        let v = j_dist(&b, &Point::origin(2), &Point::e1(2, 0.5)).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-15);
        assert!(j_dist(&b, &Point::origin(2), &Point::e1(2, 1.2)).is_err());
    }

    #[test]
    fn k_radial_matches_log() {
        let b = Domain::unit_ball(2);
        let k = k_dist_estimate(&b, &Point::origin(2), &Point::e1(2, 0.5), 1e-3).unwrap();
        assert!((k - 2f64.ln()).abs() < 1e-3, "{k}");
        let x = Point::e1(2, 0.3);
        assert_eq!(k_dist_estimate(&b, &x, &x, 1e-3).unwrap(), 0.0);
        assert!(k_dist_estimate(&b, &x, &x, 0.0).is_err());
    }

    #[test]
    fn k_half_plane_matches_hyperbolic_closed_form() {
        // density 1/x₂ on the upper half-plane is the hyperbolic metric
        let h = Domain::upper_half_space(2);
        for (x, y) in [([0.0, 1.0], [3.0, 1.0]), ([0.0, 0.1], [0.5, 2.0]), ([-1.0, 0.2], [1.0, 0.2])] {
            let px = Point::new(x.to_vec()).unwrap();
            let py = Point::new(y.to_vec()).unwrap();
            let exact = (1.0 + px.dist(&py).powi(2) / (2.0 * x[1] * y[1])).acosh();
            let k = k_dist_estimate(&h, &px, &py, 1e-4).unwrap();
            assert!(k >= exact - 1e-6 && k < exact + 1e-3, "k = {k}, exact = {exact}");
        }
    }

    #[test]
    fn k_half_space_3d() {
        let h = Domain::upper_half_space(3);
        let px = Point::new(vec![0.0, 0.0, 0.5]).unwrap();
        let py = Point::new(vec![1.0, 1.0, 0.5]).unwrap();
        let exact = (1.0 + 2.0 / (2.0 * 0.25f64)).acosh();
        let k = k_dist_estimate(&h, &px, &py, 1e-4).unwrap();
        assert!(k >= exact - 1e-6 && k < exact + 1e-3, "k = {k}, exact = {exact}");
    }

    #[test]
    fn convergence_error_carries_estimates() {
        let b = Domain::unit_ball(2);
        let cfg = KEstimatorConfig { initial_segments: 2, max_segments: 4, min_step: 0.1 };
        let x = Point::new(vec![0.95, 0.0]).unwrap();
        let y = Point::new(vec![-0.6, 0.75]).unwrap();
        match k_dist_estimate_with(&b, &x, &y, 1e-9, &cfg) {
            Err(Error::Convergence { last, .. }) => assert!(last.is_finite()),
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn diameters() {
        let b = Domain::unit_ball(2);
        let x = Point::e1(2, 0.2);
        assert_eq!(set_diameter(&b, MetricKind::J, &[x.clone()]).unwrap(), 0.0);
        let y = Point::new(vec![0.1, 0.4]).unwrap();
        let pair = [x.clone(), y.clone()];
        assert_eq!(set_diameter(&b, MetricKind::Rho, &pair).unwrap(), rho(&x, &y).unwrap());
        assert!(set_diameter(&b, MetricKind::J, &[]).is_err());
        assert!(set_diameter(&Domain::upper_half_space(2), MetricKind::Rho, &[Point::new(vec![0.0, 1.0]).unwrap()]).is_ok());
        assert!(set_diameter(
            &Domain::upper_half_space(2),
            MetricKind::Rho,
            &[Point::new(vec![0.0, 1.0]).unwrap(), Point::new(vec![0.0, 2.0]).unwrap()]
        )
        .is_err());
    }

    #[test]
    fn j_bound_anchor() {
        // u = √2.5, bound = log(1 + 2.25·u / (0.5(√2 − 0.25)))
        let v = j_cone_diameter_bound(0.5, FRAC_PI_4, 0.5).unwrap();
        let u = 2.5f64.sqrt();
        let expected = (1.0 + 2.25 * u / (0.5 * (2f64.sqrt() - 0.25))).ln();
        assert!((v - expected).abs() < 1e-12);
        assert!((v - 1.9617).abs() < 1e-4);
        assert!((cone_enclosing_factor(1.0, 0.7) - 2.0 * 0.7f64.tan()).abs() < 1e-12);
        assert!(j_cone_diameter_bound(0.5, FRAC_PI_4, 0.8).is_err());
        assert!(j_cone_diameter_bound(1.0, FRAC_PI_4, 0.5).is_err());
    }

    #[test]
    fn j_bound_decreases_in_a() {
        // monotone for a up to about 0.66 uniformly in (φ, r)
        for i in 1..60 {
            let phi = FRAC_PI_2 * i as f64 / 60.0;
            for k in 1..40 {
                let r = phi.cos() * k as f64 / 40.0;
                let vals: Vec<f64> = (1..=650).map(|j| j_cone_diameter_bound(j as f64 / 1000.0, phi, r).unwrap()).collect();
                assert!(vals.windows(2).all(|w| w[1] < w[0]), "phi {phi}, r {r}");
            }
        }
        // and over all of (0, 1) when r is small against cos φ
        for phi in [0.2f64, 0.7, 1.2] {
            let r = 0.1 * phi.cos();
            let vals: Vec<f64> = (1..1000).map(|j| j_cone_diameter_bound(j as f64 / 1000.0, phi, r).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[1] < w[0]), "phi {phi}");
        }
    }

    #[test]
    fn j_bound_not_monotone_near_a_one_for_large_r() {
        let phi = 0.7f64;
        let r = 0.99 * phi.cos();
        let lo = j_cone_diameter_bound(0.8, phi, r).unwrap();
        let hi = j_cone_diameter_bound(0.99, phi, r).unwrap();
        assert!(hi > lo);
    }

    #[test]
    fn k_bound_forms() {
        for (a, phi) in [(0.25, 0.4), (0.5, 1.0), (0.8, 1.4)] {
            let c = f64::cos(phi);
            let free = k_cone_diameter_bound(a, phi, 0.5 * c, true).unwrap();
            for i in 1..50 {
                let r = c * i as f64 / 50.0;
                let dep = k_cone_diameter_bound(a, phi, r, false).unwrap();
                assert_eq!(dep, 2.0 * j_cone_diameter_bound(a, phi, r).unwrap());
                assert!(free >= dep, "a {a}, phi {phi}, r {r}");
            }
        }
    }

    #[test]
    fn s_bound_anchor() {
        assert!((s_bound(0.5, FRAC_PI_3).unwrap() - 25f64.ln()).abs() < 1e-12);
        let mut prev = 0.0;
        for i in 1..40 {
            let s = s_bound(0.5f64.powi(i), FRAC_PI_3).unwrap();
            assert!(s > prev);
            prev = s;
        }
        assert!(prev > 25.0);
        assert!(s_bound(0.6, FRAC_PI_3).is_err());
        assert!(s_bound(0.0, FRAC_PI_3).is_err());
    }
}
