//! Points, balls and cones at boundary points of the unit ball, plus seeded
//! rejection samplers for these regions.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{arg, Error, Result};

/// Proposal budget of a single [`sample_region`] call.
pub const MAX_SAMPLING_ATTEMPTS: u64 = 10_000_000;

const UNIT_TOL: f64 = 1e-12;

/// A point of ℝⁿ, n ≥ 2, with finite coordinates.
#[derive(Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point{:?}", self.coords)
    }
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return arg(format!("dimension must be at least 2, got {}", coords.len()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return arg(format!("non-finite coordinate in {coords:?}"));
        }
        Ok(Point { coords })
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(coords.len() >= 2);
        Point { coords }
    }

    pub fn origin(n: usize) -> Self {
        Point::from_vec_unchecked(vec![0.0; n.max(2)])
    }

    /// The `axis`-th standard basis vector scaled by `t`.
    pub fn on_axis(n: usize, axis: usize, t: f64) -> Self {
        let mut p = Point::origin(n);
        p.coords[axis] = t;
        p
    }

    /// `t·e₁`.
    pub fn e1(n: usize, t: f64) -> Self {
        Point::on_axis(n, 0, t)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn dot(&self, other: &Point) -> f64 {
        dot(&self.coords, &other.coords)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn dist(&self, other: &Point) -> f64 {
        dist(&self.coords, &other.coords)
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::from_vec_unchecked(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::from_vec_unchecked(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, s: f64) -> Point {
        Point::from_vec_unchecked(self.coords.iter().map(|c| c * s).collect())
    }

    /// `self + s·dir`
    pub fn offset(&self, dir: &Point, s: f64) -> Point {
        Point::from_vec_unchecked(self.coords.iter().zip(&dir.coords).map(|(a, d)| a + s * d).collect())
    }

    pub(crate) fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return arg(format!("dimension mismatch: expected {n}, got {}", self.dim()));
        }
        Ok(())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// The open Euclidean ball B(center, radius).
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return arg(format!("ball radius must be positive, got {radius}"));
        }
        Ok(Ball { center, radius })
    }

    pub fn unit(n: usize) -> Self {
        Ball { center: Point::origin(n), radius: 1.0 }
    }
}

/// The open cone C(b, φ) at a boundary point `b`, truncated to the ball
/// B(b, cos φ).
#[derive(Clone, Debug, PartialEq)]
pub struct ConeSpec {
    vertex: Point,
    half_angle: f64,
}

impl ConeSpec {
    pub fn new(vertex: Point, half_angle: f64) -> Result<Self> {
        if (vertex.norm() - 1.0).abs() > UNIT_TOL {
            return arg(format!("cone vertex must lie on the unit sphere, |b| = {}", vertex.norm()));
        }
        if !(half_angle > 0.0 && half_angle < FRAC_PI_2) {
            return arg(format!("cone half-angle must lie in (0, pi/2), got {half_angle}"));
        }
        Ok(ConeSpec { vertex, half_angle })
    }

    pub fn vertex(&self) -> &Point {
        &self.vertex
    }

    pub fn half_angle(&self) -> f64 {
        self.half_angle
    }

    pub fn dim(&self) -> usize {
        self.vertex.dim()
    }

    /// Radius of the truncating ball, cos φ.
    pub fn reach(&self) -> f64 {
        self.half_angle.cos()
    }

    fn contains_unchecked(&self, x: &[f64]) -> bool {
        let b = self.vertex.coords();
        let mut along = 0.0;
        let mut len_sq = 0.0;
        for (bi, xi) in b.iter().zip(x) {
            let d = bi - xi;
            along += bi * d;
            len_sq += d * d;
        }
        let len = len_sq.sqrt();
        let c = self.reach();
        along > len * c && len < c
    }
}

/// The open truncated cone R(b, φ, r, s) = (B(b, r) \ B̄(b, s)) ∩ C(b, φ).
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedConeSpec {
    cone: ConeSpec,
    r_outer: f64,
    r_inner: f64,
}

impl TruncatedConeSpec {
    pub fn new(cone: ConeSpec, r_outer: f64, r_inner: f64) -> Result<Self> {
        if !(cone.reach() > r_outer && r_outer > r_inner && r_inner > 0.0) {
            return arg(format!(
                "truncated cone needs cos(phi) > r_outer > r_inner > 0, got {} > {r_outer} > {r_inner}",
                cone.reach()
            ));
        }
        Ok(TruncatedConeSpec { cone, r_outer, r_inner })
    }

    /// R(b, φ, r, a·r).
    pub fn with_ratio(cone: ConeSpec, r: f64, a: f64) -> Result<Self> {
        TruncatedConeSpec::new(cone, r, a * r)
    }

    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    pub fn r_outer(&self) -> f64 {
        self.r_outer
    }

    pub fn r_inner(&self) -> f64 {
        self.r_inner
    }

    fn contains_unchecked(&self, x: &[f64]) -> bool {
        let d = dist(x, self.cone.vertex.coords());
        d > self.r_inner && d < self.r_outer && self.cone.contains_unchecked(x)
    }
}

/// Tabulated opening-angle profile r ↦ φ(r) of a tangential approach region.
///
/// Values between nodes are linearly interpolated, which keeps a monotone
/// table monotone.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleProfile {
    // increasing r
    radii: Vec<f64>,
    angles: Vec<f64>,
}

impl AngleProfile {
    pub fn from_samples(mut samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return arg("angle profile needs at least two samples");
        }
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in samples.windows(2) {
            if w[1].0 <= w[0].0 {
                return arg(format!("duplicate radius {} in angle profile", w[0].0));
            }
            if w[1].1 > w[0].1 {
                return arg(format!(
                    "angle profile must decrease in r: phi({}) = {} < phi({}) = {}",
                    w[0].0, w[0].1, w[1].0, w[1].1
                ));
            }
        }
        for &(r, phi) in &samples {
            if !(r > 0.0 && r < 1.0) {
                return arg(format!("profile radius {r} outside (0, 1)"));
            }
            if !(phi > 0.0 && phi < FRAC_PI_2) {
                return arg(format!("profile angle {phi} outside (0, pi/2)"));
            }
            if r >= phi.cos() {
                return arg(format!("profile needs r < cos(phi(r)); fails at r = {r}, phi = {phi}"));
            }
        }
        let (radii, angles) = samples.into_iter().unzip();
        Ok(AngleProfile { radii, angles })
    }

    /// Tabulates `f` on the given radii.
    pub fn from_fn(radii: &[f64], f: impl Fn(f64) -> f64) -> Result<Self> {
        AngleProfile::from_samples(radii.iter().map(|&r| (r, f(r))).collect())
    }

    pub fn range(&self) -> (f64, f64) {
        (self.radii[0], *self.radii.last().unwrap())
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        let (lo, hi) = self.range();
        if !(r >= lo && r <= hi) {
            return arg(format!("radius {r} outside tabulated range [{lo}, {hi}]"));
        }
        let k = self.radii.partition_point(|&t| t <= r);
        if k == 0 {
            return Ok(self.angles[0]);
        }
        if k == self.radii.len() {
            return Ok(*self.angles.last().unwrap());
        }
        let (r0, r1) = (self.radii[k - 1], self.radii[k]);
        let w = (r - r0) / (r1 - r0);
        Ok(self.angles[k - 1] * (1.0 - w) + self.angles[k] * w)
    }
}

pub fn in_cone(x: &Point, c: &ConeSpec) -> Result<bool> {
    x.check_dim(c.dim())?;
    Ok(c.contains_unchecked(x.coords()))
}

pub fn in_truncated_cone(x: &Point, t: &TruncatedConeSpec) -> Result<bool> {
    x.check_dim(t.cone.dim())?;
    Ok(t.contains_unchecked(x.coords()))
}

/// Membership in the tangential set G_{b,φ}:
/// arccos(|⟨x,b⟩ − 1| / |x − b|) < φ(|x − b|).
pub fn in_tangential_set(x: &Point, b: &Point, profile: &AngleProfile) -> Result<bool> {
    x.check_dim(b.dim())?;
    if (b.norm() - 1.0).abs() > UNIT_TOL {
        return arg("tangential set base point must lie on the unit sphere");
    }
    let r = x.dist(b);
    if r == 0.0 {
        return arg("tangential set is undefined at the base point itself");
    }
    let phi = profile.eval(r)?;
    let ratio = ((x.dot(b) - 1.0).abs() / r).min(1.0);
    Ok(ratio.acos() < phi)
}

/// Rejection-sampling proposal: uniform in `ball`, optionally folded into the
/// half-space {x : ⟨n, x − p⟩ ≤ 0} by reflection.
#[derive(Clone, Debug)]
pub struct Proposal {
    pub ball: Ball,
    pub half_space: Option<(Point, Point)>,
}

/// A region with a membership predicate and a bounding proposal.
pub trait Region {
    fn dim(&self) -> usize;
    /// Membership of a point of matching dimension.
    fn contains(&self, x: &Point) -> bool;
    fn proposal(&self) -> Proposal;
    fn label(&self) -> String;
}

impl Region for Ball {
    fn dim(&self) -> usize {
        self.center.dim()
    }

    fn contains(&self, x: &Point) -> bool {
        x.dist(&self.center) < self.radius
    }

    fn proposal(&self) -> Proposal {
        Proposal { ball: self.clone(), half_space: None }
    }

    fn label(&self) -> String {
        format!("ball(center={:?}, radius={})", self.center.coords(), self.radius)
    }
}

impl Region for ConeSpec {
    fn dim(&self) -> usize {
        ConeSpec::dim(self)
    }

    fn contains(&self, x: &Point) -> bool {
        self.contains_unchecked(x.coords())
    }

    fn proposal(&self) -> Proposal {
        Proposal {
            ball: Ball { center: self.vertex.clone(), radius: self.reach() },
            half_space: Some((self.vertex.clone(), self.vertex.clone())),
        }
    }

    fn label(&self) -> String {
        format!("cone(b={:?}, phi={})", self.vertex.coords(), self.half_angle)
    }
}

impl Region for TruncatedConeSpec {
    fn dim(&self) -> usize {
        self.cone.dim()
    }

    fn contains(&self, x: &Point) -> bool {
        self.contains_unchecked(x.coords())
    }

    fn proposal(&self) -> Proposal {
        Proposal {
            ball: Ball { center: self.cone.vertex.clone(), radius: self.r_outer },
            half_space: Some((self.cone.vertex.clone(), self.cone.vertex.clone())),
        }
    }

    fn label(&self) -> String {
        format!(
            "truncated_cone(b={:?}, phi={}, r={}, s={})",
            self.cone.vertex.coords(),
            self.cone.half_angle,
            self.r_outer,
            self.r_inner
        )
    }
}

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction on S^{n−1}.
pub(crate) fn random_unit<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let len = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if len > 1e-12 {
            return v.into_iter().map(|c| c / len).collect();
        }
    }
}

/// Uniform point of the open ball B(center, radius).
pub(crate) fn random_in_ball<R: Rng + ?Sized>(rng: &mut R, center: &[f64], radius: f64) -> Vec<f64> {
    let n = center.len();
    let dir = random_unit(rng, n);
    let u: f64 = rng.random();
    let rad = radius * u.powf(1.0 / n as f64);
    center.iter().zip(dir).map(|(c, d)| c + rad * d).collect()
}

fn draw<R: Rng + ?Sized>(rng: &mut R, proposal: &Proposal) -> Point {
    let mut x = random_in_ball(rng, proposal.ball.center.coords(), proposal.ball.radius);
    if let Some((apex, normal)) = &proposal.half_space {
        let side: f64 = x.iter().zip(apex.coords()).zip(normal.coords()).map(|((xi, pi), ni)| (xi - pi) * ni).sum();
        if side > 0.0 {
            let nn = normal.norm_sq();
            for (xi, ni) in x.iter_mut().zip(normal.coords()) {
                *xi -= 2.0 * side / nn * ni;
            }
        }
    }
    Point::from_vec_unchecked(x)
}

/// Draws exactly `count` points of `region`, deterministically for a given
/// seed.
pub fn sample_region(region: &dyn Region, count: usize, seed: u64) -> Result<Vec<Point>> {
    if count == 0 {
        return arg("sample count must be at least 1");
    }
    let proposal = region.proposal();
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0u64;
    while out.len() < count {
        if attempts >= MAX_SAMPLING_ATTEMPTS {
            return Err(Error::Sampling { region: region.label(), attempts, accepted: out.len() });
        }
        attempts += 1;
        let x = draw(&mut rng, &proposal);
        if region.contains(&x) {
            out.push(x);
        }
    }
    Ok(out)
}

/// Points of C(b, φ) on the sphere |x − b| = r, uniformly distributed over
/// the spherical cap they form.
pub fn sample_cone_sphere(cone: &ConeSpec, r: f64, count: usize, seed: u64) -> Result<Vec<Point>> {
    if !(r > 0.0 && r < cone.reach()) {
        return arg(format!("sphere radius {r} must lie in (0, cos(phi) = {})", cone.reach()));
    }
    if count == 0 {
        return arg("sample count must be at least 1");
    }
    let b = cone.vertex().coords();
    let n = b.len();
    let cos_phi = cone.reach();
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0u64;
    while out.len() < count {
        if attempts >= MAX_SAMPLING_ATTEMPTS {
            return Err(Error::Sampling { region: format!("sphere section of {}", cone.label()), attempts, accepted: out.len() });
        }
        attempts += 1;
        let mut u = random_unit(&mut rng, n);
        // fold onto the inward hemisphere ⟨u, −b⟩ ≥ 0
        let along: f64 = -dot(&u, b);
        if along < 0.0 {
            for (ui, bi) in u.iter_mut().zip(b) {
                *ui -= 2.0 * along * (-bi);
            }
        }
        let x: Vec<f64> = b.iter().zip(&u).map(|(bi, ui)| bi + r * ui).collect();
        if cone.contains_unchecked(&x) && -dot(&u, b) > cos_phi {
            out.push(Point::from_vec_unchecked(x));
        }
    }
    Ok(out)
}
