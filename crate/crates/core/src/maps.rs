//! Example quasiregular maps of the unit ball, numerical dilatation, and
//! boundary-approach scans.

use std::fmt;

use crate::error::{arg, Error, Result};
use crate::geometry::{dot, Point};

/// Default finite-difference step of [`dilatation_estimate`].
pub const DEFAULT_FD_STEP: f64 = 1e-5;

#[derive(Clone, Debug, PartialEq)]
pub enum MapSpec {
    /// The ball automorphism sending `a` to 0.
    Mobius { a: Point },
    /// x ↦ |x|^{α−1} x.
    RadialStretch { alpha: f64 },
    /// z ↦ exp(−(1+z)/(1−z)) on the unit disk.
    SingularInner,
}

impl MapSpec {
    pub fn mobius(a: Point) -> Result<Self> {
        if !(a.norm() < 1.0) {
            return arg(format!("Möbius parameter must lie in the open ball, got |a| = {}", a.norm()));
        }
        Ok(MapSpec::Mobius { a })
    }

    pub fn radial_stretch(alpha: f64) -> Result<Self> {
        if !(alpha >= 1.0 && alpha.is_finite()) {
            return arg(format!("stretch exponent must be at least 1, got {alpha}"));
        }
        Ok(MapSpec::RadialStretch { alpha })
    }

    fn check_point(&self, x: &Point) -> Result<()> {
        if !(x.norm() < 1.0) {
            return arg(format!("point {:?} is not inside the unit ball", x.coords()));
        }
        match self {
            MapSpec::Mobius { a } => x.check_dim(a.dim()),
            MapSpec::SingularInner => x.check_dim(2),
            MapSpec::RadialStretch { .. } => Ok(()),
        }
    }

    fn eval_raw(&self, x: &[f64], out: &mut [f64]) {
        match self {
            MapSpec::Mobius { a } => {
                let a = a.coords();
                let aa = dot(a, a);
                let xx = dot(x, x);
                let xa = dot(x, a);
                let diff2 = xx - 2.0 * xa + aa;
                let den = 1.0 - 2.0 * xa + xx * aa;
                for k in 0..x.len() {
                    out[k] = ((1.0 - aa) * (x[k] - a[k]) - diff2 * a[k]) / den;
                }
            }
            MapSpec::RadialStretch { alpha } => {
                let r = dot(x, x).sqrt();
                let s = if r == 0.0 { 0.0 } else { r.powf(alpha - 1.0) };
                for k in 0..x.len() {
                    out[k] = s * x[k];
                }
            }
            MapSpec::SingularInner => {
                let (u, v) = (x[0], x[1]);
                let d = (1.0 - u).powi(2) + v * v;
                let re = (1.0 - u * u - v * v) / d;
                let im = 2.0 * v / d;
                let m = (-re).exp();
                out[0] = m * im.cos();
                out[1] = -m * im.sin();
            }
        }
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSpec::Mobius { a } => write!(f, "mobius(a={:?})", a.coords()),
            MapSpec::RadialStretch { alpha } => write!(f, "radial_stretch(alpha={alpha})"),
            MapSpec::SingularInner => f.write_str("singular_inner"),
        }
    }
}

pub fn eval_map(m: &MapSpec, x: &Point) -> Result<Point> {
    m.check_point(x)?;
    let mut out = vec![0.0; x.dim()];
    m.eval_raw(x.coords(), &mut out);
    Ok(Point::from_vec_unchecked(out))
}

/// Central-difference Jacobian, column k = ∂f/∂x_k.
pub fn jacobian(m: &MapSpec, x: &Point, h: f64) -> Result<Vec<Vec<f64>>> {
    if !(h > 0.0) {
        return arg(format!("step must be positive, got {h}"));
    }
    m.check_point(x)?;
    if !(x.norm() + h < 1.0) {
        return arg(format!("point {:?} is within the step of the boundary", x.coords()));
    }
    let n = x.dim();
    let mut jac = vec![vec![0.0; n]; n];
    let mut xp = x.coords().to_vec();
    let mut fp = vec![0.0; n];
    let mut fm = vec![0.0; n];
    for k in 0..n {
        xp[k] += h;
        m.eval_raw(&xp, &mut fp);
        xp[k] -= 2.0 * h;
        m.eval_raw(&xp, &mut fm);
        xp[k] += h;
        for i in 0..n {
            jac[i][k] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    Ok(jac)
}

fn det(j: &[Vec<f64>]) -> f64 {
    match j.len() {
        2 => j[0][0] * j[1][1] - j[0][1] * j[1][0],
        _ => {
            j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1]) - j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0])
                + j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0])
        }
    }
}

/// Eigenvalues (ascending extremes) of the symmetric JᵀJ.
fn gram_extremes(j: &[Vec<f64>]) -> (f64, f64) {
    let n = j.len();
    let mut g = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in 0..n {
            g[a][b] = (0..n).map(|i| j[i][a] * j[i][b]).sum();
        }
    }
    if n == 2 {
        let mean = 0.5 * (g[0][0] + g[1][1]);
        let rad = (0.25 * (g[0][0] - g[1][1]).powi(2) + g[0][1].powi(2)).sqrt();
        return ((mean - rad).max(0.0), mean + rad);
    }
    // closed-form eigenvalues of a symmetric 3×3 matrix
    let p1 = g[0][1].powi(2) + g[0][2].powi(2) + g[1][2].powi(2);
    let q = (g[0][0] + g[1][1] + g[2][2]) / 3.0;
    let p2 = (g[0][0] - q).powi(2) + (g[1][1] - q).powi(2) + (g[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return (q, q);
    }
    let mut bm = g.clone();
    for (i, row) in bm.iter_mut().enumerate() {
        for (k, v) in row.iter_mut().enumerate() {
            *v = (*v - if i == k { q } else { 0.0 }) / p;
        }
    }
    let r = (det(&bm) / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let hi = q + 2.0 * p * phi.cos();
    let lo = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    (lo.max(0.0), hi)
}

/// max(σ_maxⁿ/|det J|, |det J|/σ_minⁿ) from a central-difference Jacobian
/// with step h; n ∈ {2, 3}.
pub fn dilatation_estimate(m: &MapSpec, x: &Point, h: f64) -> Result<f64> {
    let n = x.dim();
    if n > 3 {
        return arg(format!("dilatation is implemented for n = 2, 3, got {n}"));
    }
    let j = jacobian(m, x, h)?;
    let d = det(&j).abs();
    if !(d >= 1e-14) {
        return Err(Error::DegeneratePoint(x.coords().to_vec()));
    }
    let (lo, hi) = gram_extremes(&j);
    let (smin, smax) = (lo.sqrt(), hi.sqrt());
    let nf = n as i32;
    let outer = smax.powi(nf) / d;
    let inner = if smin > 0.0 { d / smin.powi(nf) } else { f64::INFINITY };
    Ok(outer.max(inner))
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurveKind {
    /// x = (1 − r) b.
    Radial,
    /// The ray from b at angle θ to −b.
    ConeRay { angle: f64 },
    /// b − x = t·(κ t b − w), w ⊥ b a unit vector; in the plane,
    /// 1 − z = t(i + κt) for b = 1.
    TangentialParabola { kappa: f64 },
}

/// A curve ending at the boundary point b, parametrised by r = |x − b|.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproachCurve {
    kind: CurveKind,
    target: Point,
    side: Point,
}

impl ApproachCurve {
    pub fn new(kind: CurveKind, target: Point) -> Result<Self> {
        if (target.norm() - 1.0).abs() > 1e-12 {
            return arg(format!("target must lie on the unit sphere, got |b| = {}", target.norm()));
        }
        match kind {
            CurveKind::ConeRay { angle } if !(0.0..std::f64::consts::FRAC_PI_2).contains(&angle) => {
                return arg(format!("ray angle must lie in [0, pi/2), got {angle}"));
            }
            CurveKind::TangentialParabola { kappa } if !(kappa > 0.5 && kappa.is_finite()) => {
                return arg(format!("parabola needs kappa > 1/2 to stay inside the ball, got {kappa}"));
            }
            _ => {}
        }
        let side = orthogonal_unit(&target);
        Ok(ApproachCurve { kind, target, side })
    }

    pub fn radial(target: Point) -> Result<Self> {
        ApproachCurve::new(CurveKind::Radial, target)
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    pub fn target(&self) -> &Point {
        &self.target
    }

    /// The curve point at distance r from b.
    pub fn point_at(&self, r: f64) -> Result<Point> {
        if !(r > 0.0) {
            return arg(format!("radius must be positive, got {r}"));
        }
        let b = self.target.coords();
        let w = self.side.coords();
        let x: Vec<f64> = match self.kind {
            CurveKind::Radial => b.iter().map(|c| (1.0 - r) * c).collect(),
            CurveKind::ConeRay { angle } => {
                let (s, c) = angle.sin_cos();
                b.iter().zip(w).map(|(bi, wi)| bi + r * (-c * bi + s * wi)).collect()
            }
            CurveKind::TangentialParabola { kappa } => {
                let k2 = kappa * kappa;
                let t = (2.0 * r * r / ((1.0 + 4.0 * k2 * r * r).sqrt() + 1.0)).sqrt();
                b.iter().zip(w).map(|(bi, wi)| bi - kappa * t * t * bi - t * wi).collect()
            }
        };
        let p = Point::from_vec_unchecked(x);
        if !(p.norm() < 1.0) {
            return arg(format!("curve leaves the ball at r = {r}"));
        }
        Ok(p)
    }
}

impl fmt::Display for ApproachCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CurveKind::Radial => f.write_str("radial")?,
            CurveKind::ConeRay { angle } => write!(f, "cone_ray(angle={angle})")?,
            CurveKind::TangentialParabola { kappa } => write!(f, "tangential_parabola(kappa={kappa})")?,
        }
        write!(f, " to b={:?}", self.target.coords())
    }
}

/// A unit vector orthogonal to b; in the plane, the clockwise normal, so that
/// b = 1 gives w = i in `1 − z = t(i + κt)`.
fn orthogonal_unit(b: &Point) -> Point {
    let c = b.coords();
    let n = c.len();
    if n == 2 {
        return Point::from_vec_unchecked(vec![-c[1], c[0]]);
    }
    let axis = (0..n).min_by(|&i, &j| c[i].abs().total_cmp(&c[j].abs())).unwrap_or(0);
    let mut v = vec![0.0; n];
    v[axis] = 1.0;
    let p = c[axis];
    for k in 0..n {
        v[k] -= p * c[k];
    }
    let l = dot(&v, &v).sqrt();
    Point::from_vec_unchecked(v.into_iter().map(|x| x / l).collect())
}

/// (r, |f(x_r)|) along the curve.
pub fn boundary_scan(m: &MapSpec, curve: &ApproachCurve, radii: &[f64]) -> Result<Vec<(f64, f64)>> {
    radii
        .iter()
        .map(|&r| {
            let x = curve.point_at(r)?;
            Ok((r, eval_map(m, &x)?.norm()))
        })
        .collect()
}

/// Scan CSV: a comment naming map and curve, then `r,abs_f` rows.
pub fn scan_csv(m: &MapSpec, curve: &ApproachCurve, rows: &[(f64, f64)]) -> String {
    let mut out = format!("# map={m} curve={curve}\nr,abs_f\n");
    for (r, v) in rows {
        out.push_str(&format!("{r},{v:e}\n"));
    }
    out
}
