//! Constant ledger of the two-constants estimate and of the boundary
//! theorems built on it.
//!
//! λ_K, c₀ and c₂ are existential constants that depend only on n and K and
//! have no published numeric value. They are configuration fields with
//! defaults; every value in the ledger carries a [`Provenance`] flag so
//! reports never pass a default off as a known constant. The remaining
//! constants (c₁, bₙ, c₃, β₀) are recomputed from their formulas and are
//! never read from configuration.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::metrics::s_bound;
use crate::quadrature::adaptive_simpson;

pub const DEFAULT_LAMBDA_K: f64 = 0.25;
pub const DEFAULT_C0: f64 = 1.0;
pub const DEFAULT_C2: f64 = 1.0;

const BN_QUAD_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Recomputed from its formula.
    Computed,
    /// Placeholder default for an unpublished constant.
    ConfiguredDefault,
    /// Supplied by the user.
    Configured,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Computed => "computed",
            Provenance::ConfiguredDefault => "configured-default",
            Provenance::Configured => "configured",
        })
    }
}

/// One row of the constant ledger.
#[derive(Clone, Debug, Serialize)]
pub struct LedgerEntry {
    pub name: &'static str,
    pub value: f64,
    pub provenance: Provenance,
}

/// Configuration file schema. Derived constants are not accepted.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsConfig {
    pub n: Option<usize>,
    #[serde(rename = "K")]
    pub k: Option<f64>,
    #[serde(rename = "lambda_K")]
    pub lambda_k: Option<f64>,
    pub c0: Option<f64>,
    pub c2: Option<f64>,
}

/// Immutable constant ledger for dimension n and dilatation K.
#[derive(Clone, Debug)]
pub struct ConstantsContext {
    n: usize,
    k: f64,
    lambda_k: f64,
    c0: f64,
    c2: f64,
    c1: f64,
    b_n: f64,
    c3: f64,
    beta0: f64,
    user_set: [bool; 5],
}

impl ConstantsContext {
    /// Context with every configurable constant supplied explicitly.
    pub fn new(n: usize, k: f64, lambda_k: f64, c0: f64, c2: f64) -> Result<Self> {
        Self::build(n, k, lambda_k, c0, c2, [true; 5])
    }

    /// Context for dimension `n`, K = 1 and the documented defaults.
    pub fn with_defaults(n: usize) -> Result<Self> {
        Self::build(n, 1.0, DEFAULT_LAMBDA_K, DEFAULT_C0, DEFAULT_C2, [false; 5])
    }

    pub fn from_config(cfg: &ConstantsConfig, default_n: usize) -> Result<Self> {
        Self::build(
            cfg.n.unwrap_or(default_n),
            cfg.k.unwrap_or(1.0),
            cfg.lambda_k.unwrap_or(DEFAULT_LAMBDA_K),
            cfg.c0.unwrap_or(DEFAULT_C0),
            cfg.c2.unwrap_or(DEFAULT_C2),
            [cfg.n.is_some(), cfg.k.is_some(), cfg.lambda_k.is_some(), cfg.c0.is_some(), cfg.c2.is_some()],
        )
    }

    /// Parses the `key = value` configuration text. Unknown keys are rejected.
    pub fn from_config_str(text: &str, default_n: usize) -> Result<Self> {
        let cfg: ConstantsConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_config(&cfg, default_n)
    }

    pub fn from_config_file(path: &Path, default_n: usize) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_config_str(&text, default_n)
    }

    fn build(n: usize, k: f64, lambda_k: f64, c0: f64, c2: f64, user_set: [bool; 5]) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config(format!("dimension n must be at least 2, got {n}")));
        }
        if !(k >= 1.0 && k.is_finite()) {
            return Err(Error::Config(format!("K must satisfy 1 <= K < inf, got {k}")));
        }
        if !(lambda_k > 0.0 && lambda_k < 0.5) {
            return Err(Error::Config(format!("lambda_K must lie in (0, 1/2), got {lambda_k}")));
        }
        if !(c0 > 0.0 && c0.is_finite()) {
            return Err(Error::Config(format!("c0 must be positive, got {c0}")));
        }
        if !(c2 > 0.0 && c2.is_finite()) {
            return Err(Error::Config(format!("c2 must be positive, got {c2}")));
        }
        let c1 = c1_from_lambda(lambda_k);
        let b_n = b_n(n)?;
        let c3 = 2f64.powi(n as i32) * b_n;
        let beta0 = c2 * (c3 / (2.0 * c1)).powf(1.0 / (n as f64 - 1.0));
        Ok(ConstantsContext { n, k, lambda_k, c0, c2, c1, b_n, c3, beta0, user_set })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn lambda_k(&self) -> f64 {
        self.lambda_k
    }
    pub fn c0(&self) -> f64 {
        self.c0
    }
    pub fn c1(&self) -> f64 {
        self.c1
    }
    pub fn c2(&self) -> f64 {
        self.c2
    }
    pub fn c3(&self) -> f64 {
        self.c3
    }
    pub fn b_n(&self) -> f64 {
        self.b_n
    }
    pub fn beta0(&self) -> f64 {
        self.beta0
    }

    /// Saturation level of δ: β(δ, N) = β₀ iff δ ≥ c₃N / (2c₁).
    pub fn saturation_delta(&self, big_n: f64) -> f64 {
        self.c3 * big_n / (2.0 * self.c1)
    }

    pub fn ledger(&self) -> Vec<LedgerEntry> {
        let cfg = |set: bool| if set { Provenance::Configured } else { Provenance::ConfiguredDefault };
        let computed = Provenance::Computed;
        vec![
            LedgerEntry { name: "n", value: self.n as f64, provenance: cfg(self.user_set[0]) },
            LedgerEntry { name: "K", value: self.k, provenance: cfg(self.user_set[1]) },
            LedgerEntry { name: "lambda_K", value: self.lambda_k, provenance: cfg(self.user_set[2]) },
            LedgerEntry { name: "c0", value: self.c0, provenance: cfg(self.user_set[3]) },
            LedgerEntry { name: "c2", value: self.c2, provenance: cfg(self.user_set[4]) },
            LedgerEntry { name: "c1", value: self.c1, provenance: computed },
            LedgerEntry { name: "b_n", value: self.b_n, provenance: computed },
            LedgerEntry { name: "c3", value: self.c3, provenance: computed },
            LedgerEntry { name: "beta0", value: self.beta0, provenance: computed },
        ]
    }
}

/// c₁ = 1 / log(1 + λ_K).
pub fn c1_from_lambda(lambda_k: f64) -> f64 {
    1.0 / lambda_k.ln_1p()
}

/// Γ(x) for x a positive integer or half-integer.
fn gamma_half_integer(x: f64) -> f64 {
    let twice = (2.0 * x).round();
    debug_assert!((2.0 * x - twice).abs() < 1e-12 && twice >= 1.0);
    let (mut acc, mut y) = if twice as u64 % 2 == 0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    while y < x - 0.25 {
        acc *= y;
        y += 1.0;
    }
    acc
}

/// Ωₙ, the volume of the unit ball of ℝⁿ.
pub fn unit_ball_volume(n: usize) -> f64 {
    PI.powf(n as f64 / 2.0) / gamma_half_integer(1.0 + n as f64 / 2.0)
}

/// ω_m, the surface area of the unit sphere S^m ⊂ ℝ^{m+1}; ω_{n−1} = nΩₙ.
pub fn unit_sphere_area(m: usize) -> f64 {
    (m + 1) as f64 * unit_ball_volume(m + 1)
}

/// ∫₀^{π/2} sin^{(2−n)/(n−1)} t dt.
///
/// The substitution t = u^{n−1} removes the endpoint singularity; the
/// transformed integrand tends to n − 1 at u = 0.
pub fn spherical_cap_integral(n: usize) -> Result<f64> {
    if n < 2 {
        return arg(format!("n must be at least 2, got {n}"));
    }
    let m = n as f64 - 1.0;
    let p = (2.0 - n as f64) / m;
    let upper = FRAC_PI_2.powf(1.0 / m);
    let integrand = |u: f64| {
        if u <= 0.0 {
            return m;
        }
        let t = u.powf(m);
        m * u.powf(m - 1.0) * t.sin().powf(p)
    };
    adaptive_simpson(integrand, 0.0, upper, BN_QUAD_TOL)
}

/// bₙ = 2^{1−2n} ω_{n−2} (∫₀^{π/2} sin^{(2−n)/(n−1)} t dt)^{1−n}.
pub fn b_n(n: usize) -> Result<f64> {
    if n < 2 {
        return arg(format!("n must be at least 2, got {n}"));
    }
    let integral = spherical_cap_integral(n)?;
    let nf = n as f64;
    Ok(2f64.powf(1.0 - 2.0 * nf) * unit_sphere_area(n - 2) * integral.powf(1.0 - nf))
}

/// β(δ, n, K) = c₂ min{(δ/N)^{1/(n−1)}, (c₃/(2c₁))^{1/(n−1)}}.
pub fn beta(delta: f64, big_n: f64, ctx: &ConstantsContext) -> Result<f64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return arg(format!("delta must be positive, got {delta}"));
    }
    if !(big_n > 0.0 && big_n.is_finite()) {
        return arg(format!("N must be positive, got {big_n}"));
    }
    if delta >= ctx.saturation_delta(big_n) {
        return Ok(ctx.beta0);
    }
    let e = 1.0 / (ctx.n as f64 - 1.0);
    Ok((ctx.c2 * (delta / big_n).powf(e)).min(ctx.beta0))
}

/// Which upper bound of N(r) to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NBoundForm {
    /// γ(a, φ, λ, n), independent of r.
    Angle,
    /// γ̃(a, r, λ, n).
    Radius,
}

fn check_ratio(a: f64) -> Result<()> {
    if !(a > 0.0 && a < 1.0) {
        return arg(format!("ratio a must lie in (0, 1), got {a}"));
    }
    Ok(())
}

pub(crate) fn check_angle(phi: f64) -> Result<()> {
    if !(phi > 0.0 && phi < FRAC_PI_2) {
        return arg(format!("angle phi must lie in (0, pi/2), got {phi}"));
    }
    Ok(())
}

/// γ(a, φ, λ, n) = (2 + (2 + a cos φ)(1 + a) / (a(2 − a) cos²φ λ))ⁿ.
pub fn gamma_angle(a: f64, phi: f64, lambda: f64, n: usize) -> Result<f64> {
    check_ratio(a)?;
    check_angle(phi)?;
    let c = phi.cos();
    let inner = 2.0 + (2.0 + a * c) * (1.0 + a) / (a * (2.0 - a) * c * c * lambda);
    Ok(inner.powi(n as i32))
}

/// γ̃(a, r, λ, n) = (2 + (2 + ar)(1 + a) / (a(2 − a) r² λ))ⁿ.
pub fn gamma_radius(a: f64, r: f64, lambda: f64, n: usize) -> Result<f64> {
    check_ratio(a)?;
    if !(r > 0.0 && r < 1.0) {
        return arg(format!("radius r must lie in (0, 1), got {r}"));
    }
    let inner = 2.0 + (2.0 + a * r) * (1.0 + a) / (a * (2.0 - a) * r * r * lambda);
    Ok(inner.powi(n as i32))
}

/// Upper bound c₀γ or c₀γ̃ for N(r) with F = R(b, φ, ar, r).
pub fn n_bound(a: f64, phi_or_r: f64, form: NBoundForm, ctx: &ConstantsContext) -> Result<f64> {
    let g = match form {
        NBoundForm::Angle => gamma_angle(a, phi_or_r, ctx.lambda_k, ctx.n)?,
        NBoundForm::Radius => gamma_radius(a, phi_or_r, ctx.lambda_k, ctx.n)?,
    };
    Ok(ctx.c0 * g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremKind {
    Lindelof,
    Tangential,
    Koebe,
}

impl std::str::FromStr for TheoremKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lindelof" => Ok(TheoremKind::Lindelof),
            "tangential" => Ok(TheoremKind::Tangential),
            "koebe" => Ok(TheoremKind::Koebe),
            other => arg(format!("unknown theorem kind '{other}'")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TheoremConstants {
    Lindelof { alpha1: f64, gamma1: f64 },
    Tangential { alpha2: f64, gamma2: f64, gamma3: f64 },
    Koebe { alpha3: f64, gamma4: f64 },
}

impl TheoremConstants {
    pub fn named(&self) -> Vec<(&'static str, f64)> {
        match *self {
            TheoremConstants::Lindelof { alpha1, gamma1 } => vec![("alpha1", alpha1), ("gamma1", gamma1)],
            TheoremConstants::Tangential { alpha2, gamma2, gamma3 } => {
                vec![("alpha2", alpha2), ("gamma2", gamma2), ("gamma3", gamma3)]
            }
            TheoremConstants::Koebe { alpha3, gamma4 } => vec![("alpha3", alpha3), ("gamma4", gamma4)],
        }
    }
}

/// α₁ = (24c₁/cos φ + 1)/(n − 1).
pub fn alpha1(phi: f64, ctx: &ConstantsContext) -> Result<f64> {
    check_angle(phi)?;
    Ok((24.0 * ctx.c1 / phi.cos() + 1.0) / (ctx.n as f64 - 1.0))
}

/// γ₁ = ((14λcos²φ + 5cos φ + 40) / (7λcos²φ))ⁿ.
pub fn gamma1(phi: f64, ctx: &ConstantsContext) -> Result<f64> {
    check_angle(phi)?;
    let c = phi.cos();
    let l = ctx.lambda_k;
    Ok(((14.0 * l * c * c + 5.0 * c + 40.0) / (7.0 * l * c * c)).powi(ctx.n as i32))
}

/// α₂ = 2c₁ log(1 + (4 + cos φ)/cos²φ) + 1.
pub fn alpha2(phi: f64, ctx: &ConstantsContext) -> Result<f64> {
    check_angle(phi)?;
    let c = phi.cos();
    Ok(2.0 * ctx.c1 * ((4.0 + c) / (c * c)).ln_1p() + 1.0)
}

fn gamma2_inner(phi: f64, ctx: &ConstantsContext) -> f64 {
    let c = phi.cos();
    let l = ctx.lambda_k;
    (2.0 * l * c * c + c + 4.0) / (l * c * c)
}

/// γ₂ = ((2λcos²φ + cos φ + 4) / (λcos²φ))ⁿ.
pub fn gamma2(phi: f64, ctx: &ConstantsContext) -> Result<f64> {
    check_angle(phi)?;
    Ok(gamma2_inner(phi, ctx).powi(ctx.n as i32))
}

/// γ₃ = ((2λcos²φ + cos φ + 4) / (λcos²φ))^{n/(1−n)}.
pub fn gamma3(phi: f64, ctx: &ConstantsContext) -> Result<f64> {
    check_angle(phi)?;
    let n = ctx.n as f64;
    Ok(gamma2_inner(phi, ctx).powf(n / (1.0 - n)))
}

/// ln γ₃, finite even where γ₃ itself underflows.
pub fn ln_gamma3(phi: f64, ctx: &ConstantsContext) -> Result<f64> {
    check_angle(phi)?;
    let n = ctx.n as f64;
    Ok(n / (1.0 - n) * gamma2_inner(phi, ctx).ln())
}

fn check_koebe_radius(r: f64, phi: f64) -> Result<()> {
    if !(r > 0.0 && r < phi.cos()) {
        return arg(format!("radius r must lie in (0, cos(phi) = {}), got {r}", phi.cos()));
    }
    Ok(())
}

/// α₃ = (c₁ s(r, φ) + 1)/(n − 1).
pub fn alpha3(r: f64, phi: f64, ctx: &ConstantsContext) -> Result<f64> {
    check_angle(phi)?;
    check_koebe_radius(r, phi)?;
    Ok((ctx.c1 * s_bound(r, phi)? + 1.0) / (ctx.n as f64 - 1.0))
}

/// γ₄ = ((2λr² + r + 4) / (λr²))ⁿ.
pub fn gamma4(r: f64, ctx: &ConstantsContext) -> Result<f64> {
    Ok(ln_gamma4(r, ctx)?.exp())
}

pub fn ln_gamma4(r: f64, ctx: &ConstantsContext) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return arg(format!("radius r must lie in (0, 1), got {r}"));
    }
    let l = ctx.lambda_k;
    Ok(ctx.n as f64 * ((2.0 * l * r * r + r + 4.0) / (l * r * r)).ln())
}

pub fn theorem_constants(which: TheoremKind, phi: f64, r: Option<f64>, ctx: &ConstantsContext) -> Result<TheoremConstants> {
    match which {
        TheoremKind::Lindelof => Ok(TheoremConstants::Lindelof { alpha1: alpha1(phi, ctx)?, gamma1: gamma1(phi, ctx)? }),
        TheoremKind::Tangential => Ok(TheoremConstants::Tangential {
            alpha2: alpha2(phi, ctx)?,
            gamma2: gamma2(phi, ctx)?,
            gamma3: gamma3(phi, ctx)?,
        }),
        TheoremKind::Koebe => {
            let r = r.ok_or_else(|| Error::Argument("koebe constants need a radius r".into()))?;
            Ok(TheoremConstants::Koebe { alpha3: alpha3(r, phi, ctx)?, gamma4: gamma4(r, ctx)? })
        }
    }
}
