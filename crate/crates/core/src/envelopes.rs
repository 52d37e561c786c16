//! Decay envelopes ε^(β^α) and divergence scanners over sampled rate data.
//!
//! The hypotheses being scanned read T(r) → −∞ with T = P(r)·log ε(r) and a
//! positive power P. Useful profiles make ε(r) doubly or triply exponentially
//! small, so ε is stored as ln(−ln ε) and T as ln|T| (T is always negative).

use std::f64::consts::{FRAC_PI_2, LN_10};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use crate::constants::{
    alpha1, alpha2, alpha3, gamma1, ln_gamma3, ln_gamma4, n_bound, ConstantsContext, NBoundForm, TheoremKind,
};
use crate::error::{arg, Error, Result};

/// A value ε ∈ (0, 1), held as ln(−ln ε) next to −ln ε and ε where those
/// are representable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Epsilon {
    value: f64,
    neg_ln: f64,
    lnln: f64,
}

impl Epsilon {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return arg(format!("epsilon must lie in (0, 1), got {eps}"));
        }
        let neg_ln = -eps.ln();
        Ok(Epsilon { value: eps, neg_ln, lnln: neg_ln.ln() })
    }

    /// ε = exp(−x), x > 0.
    pub fn from_neg_ln(x: f64) -> Result<Self> {
        if !(x > 0.0 && x.is_finite()) {
            return arg(format!("exp(-x) needs finite x > 0, got {x}"));
        }
        Ok(Epsilon { value: (-x).exp(), neg_ln: x, lnln: x.ln() })
    }

    /// ε = exp(−exp(y)).
    pub fn from_ln_neg_ln(y: f64) -> Result<Self> {
        if !y.is_finite() {
            return arg(format!("exp(-exp(y)) needs finite y, got {y}"));
        }
        let neg_ln = y.exp();
        Ok(Epsilon { value: (-neg_ln).exp(), neg_ln, lnln: y })
    }

    /// ln(−ln ε).
    pub fn ln_neg_ln(&self) -> f64 {
        self.lnln
    }

    /// ln ε; −∞ once it overflows.
    pub fn ln(&self) -> f64 {
        -self.neg_ln
    }

    /// ε itself; 0 once it underflows.
    pub fn value(&self) -> f64 {
        self.value
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.neg_ln;
        if (1e-8..=700.0).contains(&x) {
            write!(f, "{}", self.value)
        } else if x.is_finite() {
            write!(f, "exp(-{x})")
        } else {
            write!(f, "exp(-exp({}))", self.lnln)
        }
    }
}

impl FromStr for Epsilon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Argument(format!("cannot read epsilon '{t}'"));
        if let Some(inner) = t.strip_prefix("exp(-exp(").and_then(|r| r.strip_suffix("))")) {
            return Epsilon::from_ln_neg_ln(inner.trim().parse().map_err(|_| bad())?);
        }
        if let Some(inner) = t.strip_prefix("exp(-").and_then(|r| r.strip_suffix(')')) {
            return Epsilon::from_neg_ln(inner.trim().parse().map_err(|_| bad())?);
        }
        Epsilon::new(t.parse().map_err(|_| bad())?)
    }
}

/// ε^(β^exponent) for ε ∈ (0, 1), β ∈ (0, 1], exponent ≥ 0.
pub fn envelope(epsilon: f64, beta: f64, exponent: f64) -> Result<f64> {
    let eps = Epsilon::new(epsilon)?;
    Ok(ln_envelope(eps, beta, exponent)?.exp())
}

/// ln(ε^(β^exponent)) = β^exponent · ln ε.
pub fn ln_envelope(epsilon: Epsilon, beta: f64, exponent: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return arg(format!("beta must lie in (0, 1], got {beta}"));
    }
    if !(exponent >= 0.0 && exponent.is_finite()) {
        return arg(format!("exponent must be finite and nonnegative, got {exponent}"));
    }
    Ok(-(exponent * beta.ln() + epsilon.ln_neg_ln()).exp())
}

/// One row of a rate profile.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateSample {
    pub r: f64,
    pub delta: f64,
    pub epsilon: Epsilon,
    pub phi: Option<f64>,
}

/// Samples (r, δ(r), ε(r)[, φ(r)]) with r strictly decreasing toward 0.
#[derive(Clone, Debug, PartialEq)]
pub struct RateProfile {
    samples: Vec<RateSample>,
}

impl RateProfile {
    pub fn new(samples: Vec<RateSample>) -> Result<Self> {
        if samples.is_empty() {
            return arg("rate profile has no samples");
        }
        let with_phi = samples[0].phi.is_some();
        for (i, s) in samples.iter().enumerate() {
            if !(s.r > 0.0 && s.r < 1.0) {
                return arg(format!("sample {i}: r must lie in (0, 1), got {}", s.r));
            }
            if !(s.delta > 0.0 && s.delta.is_finite()) {
                return arg(format!("sample {i}: delta must be positive and finite, got {}", s.delta));
            }
            if s.phi.is_some() != with_phi {
                return arg("phi must be given for all samples or for none");
            }
            if let Some(phi) = s.phi {
                if !(phi > 0.0 && phi < FRAC_PI_2) {
                    return arg(format!("sample {i}: phi must lie in (0, pi/2), got {phi}"));
                }
                if !(s.r < phi.cos()) {
                    return arg(format!("sample {i}: r = {} is not below cos(phi) = {}", s.r, phi.cos()));
                }
            }
            if i > 0 {
                let p = &samples[i - 1];
                if !(s.r < p.r) {
                    return arg(format!("sample {i}: radii must be strictly decreasing"));
                }
                if let (Some(a), Some(b)) = (p.phi, s.phi) {
                    if b < a {
                        return arg(format!("sample {i}: phi must not decrease as r decreases"));
                    }
                }
            }
        }
        Ok(RateProfile { samples })
    }

    pub fn samples(&self) -> &[RateSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn has_phi(&self) -> bool {
        self.samples[0].phi.is_some()
    }

    /// Reads CSV with header `r,delta,epsilon[,phi]`. The epsilon field is a
    /// decimal in (0, 1), `exp(-X)` or `exp(-exp(X))`.
    pub fn read_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?
            .iter()
            .map(str::to_string)
            .collect();
        let with_phi = match header.iter().map(String::as_str).collect::<Vec<_>>()[..] {
            ["r", "delta", "epsilon"] => false,
            ["r", "delta", "epsilon", "phi"] => true,
            _ => {
                return Err(Error::Parse { line: 1, msg: format!("expected header r,delta,epsilon[,phi], got {}", header.join(",")) })
            }
        };
        let mut samples = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let line = i + 2;
            let rec = rec.map_err(|e| Error::Parse { line, msg: e.to_string() })?;
            let field = |k: usize| rec.get(k).ok_or_else(|| Error::Parse { line, msg: format!("missing column {}", k + 1) });
            let num = |k: usize| -> Result<f64> {
                let f = field(k)?;
                f.parse().map_err(|_| Error::Parse { line, msg: format!("bad number '{f}'") })
            };
            let epsilon: Epsilon = field(2)?.parse().map_err(|e: Error| Error::Parse { line, msg: e.to_string() })?;
            samples.push(RateSample { r: num(0)?, delta: num(1)?, epsilon, phi: if with_phi { Some(num(3)?) } else { None } });
        }
        RateProfile::new(samples)
    }

    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
        if self.has_phi() {
            w.write_record(["r", "delta", "epsilon", "phi"]).map_err(csv_err)?;
        } else {
            w.write_record(["r", "delta", "epsilon"]).map_err(csv_err)?;
        }
        for s in &self.samples {
            let mut rec = vec![s.r.to_string(), s.delta.to_string(), s.epsilon.to_string()];
            if let Some(phi) = s.phi {
                rec.push(phi.to_string());
            }
            w.write_record(&rec).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(std::io::Error::other(e)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    I0,
    I1,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::I0 => "I0",
            Case::I1 => "I1",
        })
    }
}

/// I0 iff δ ≥ c₃N(r)/(2c₁) with N(r) from [`n_bound`]; `phi_or_r` is φ for
/// the angle form and r for the radius form.
pub fn case_split(delta: f64, a: f64, phi_or_r: f64, form: NBoundForm, ctx: &ConstantsContext) -> Result<Case> {
    if !(delta > 0.0) {
        return arg(format!("delta must be positive, got {delta}"));
    }
    let big_n = n_bound(a, phi_or_r, form, ctx)?;
    Ok(if delta >= ctx.saturation_delta(big_n) { Case::I0 } else { Case::I1 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Diverges,
    Fails,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Diverges => "diverges",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Which denominator normalises δ in the Lindelöf and Koebe statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Normalization {
    /// δ/γ, as the hypotheses are stated.
    #[default]
    Theorem,
    /// δ/(c₀γ), as the bound on N(r) enters the estimate.
    Proof,
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem" => Ok(Normalization::Theorem),
            "proof" => Ok(Normalization::Proof),
            other => arg(format!("unknown normalization '{other}'")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    /// Trailing samples that must decrease strictly.
    pub window: usize,
    /// T(last) must lie below this (negative) value.
    pub threshold: f64,
    pub normalization: Normalization,
    /// Lower bound the tangential scan demands of every δ.
    pub delta_floor: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { window: 5, threshold: -1e3, normalization: Normalization::Theorem, delta_floor: 1e-6 }
    }
}

/// T at one radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Statistic {
    pub r: f64,
    /// ln|T|; T itself is −exp(ln_abs_t).
    pub ln_abs_t: f64,
    pub case: Case,
}

impl Statistic {
    /// T as an f64 (±0 or −∞ outside the representable range).
    pub fn t(&self) -> f64 {
        -self.ln_abs_t.exp()
    }

    /// T printed as `-m.mmmmmme±X` without overflow.
    pub fn t_display(&self) -> String {
        format_negative_exp(self.ln_abs_t)
    }
}

fn format_negative_exp(ln_abs: f64) -> String {
    if !ln_abs.is_finite() {
        return if ln_abs > 0.0 { "-inf".into() } else { "-0".into() };
    }
    let dec = ln_abs / LN_10;
    let mut e = dec.floor();
    let mut m = 10f64.powf(dec - e);
    if m >= 9.9999995 {
        m = 1.0;
        e += 1.0;
    }
    format!("-{m:.6}e{}", e as i64)
}

/// Outcome of a scan with the full statistic series.
#[derive(Clone, Debug)]
pub struct ScanVerdict {
    pub kind: TheoremKind,
    pub verdict: Verdict,
    pub stats: Vec<Statistic>,
    /// Least-squares slope of ln|T| against ln(1/r) over the trailing window.
    pub slope: f64,
    pub window: usize,
    pub threshold: f64,
    pub normalization: Normalization,
    /// Tangential scans: ln(γ₃^{α₂}) per sample and whether it decreases
    /// over the trailing window.
    pub sanity: Option<(Vec<f64>, bool)>,
}

impl ScanVerdict {
    pub fn conclusion(&self) -> Option<&'static str> {
        (self.kind == TheoremKind::Koebe && self.verdict == Verdict::Diverges).then_some("f-must-be-constant")
    }

    /// Flat `key=value` report.
    pub fn report(&self) -> String {
        let kind = match self.kind {
            TheoremKind::Lindelof => "lindelof",
            TheoremKind::Tangential => "tangential",
            TheoremKind::Koebe => "koebe",
        };
        let last = self.stats.last().expect("scans have samples");
        let mut out = format!(
            "kind={kind}\nverdict={}\nsamples={}\nwindow={}\nthreshold={}\nnormalization={}\nslope={}\nT_last={}\n",
            self.verdict,
            self.stats.len(),
            self.window,
            self.threshold,
            match self.normalization {
                Normalization::Theorem => "theorem",
                Normalization::Proof => "proof",
            },
            self.slope,
            last.t_display(),
        );
        if let Some((_, dec)) = &self.sanity {
            out.push_str(&format!("gamma3_pow_alpha2_decreasing={dec}\n"));
        }
        if let Some(c) = self.conclusion() {
            out.push_str(&format!("conclusion={c}\n"));
        }
        out
    }

    /// Per-sample CSV `r,T,case`.
    pub fn stats_csv(&self) -> String {
        let mut out = String::from("r,T,case\n");
        for s in &self.stats {
            out.push_str(&format!("{},{},{}\n", s.r, s.t_display(), s.case));
        }
        out
    }
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0] + 1e-12 * w[0].abs().max(1.0))
}

fn check_options(profile: &RateProfile, opts: &ScanOptions) -> Result<()> {
    if opts.window < 3 {
        return arg(format!("window must be at least 3, got {}", opts.window));
    }
    if opts.window > profile.len() {
        return arg(format!("window {} exceeds the {} samples", opts.window, profile.len()));
    }
    if !(opts.threshold < 0.0) {
        return arg(format!("threshold must be negative, got {}", opts.threshold));
    }
    Ok(())
}

fn finish(
    kind: TheoremKind,
    stats: Vec<Statistic>,
    opts: &ScanOptions,
    sanity: Option<(Vec<f64>, bool)>,
) -> ScanVerdict {
    let tail = &stats[stats.len() - opts.window..];
    let ln_abs: Vec<f64> = tail.iter().map(|s| s.ln_abs_t).collect();
    // T decreasing ⇔ |T| increasing
    let decreasing = strictly_increasing(&ln_abs);
    let last = *ln_abs.last().expect("window is nonempty");
    let below = last > (-opts.threshold).ln();
    let verdict = match (decreasing, below) {
        (true, true) => Verdict::Diverges,
        (true, false) => Verdict::Inconclusive,
        _ => Verdict::Fails,
    };
    let xs: Vec<f64> = tail.iter().map(|s| -s.r.ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ln_abs.iter().sum::<f64>() / ln_abs.len() as f64;
    let sxy: f64 = xs.iter().zip(&ln_abs).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    ScanVerdict {
        kind,
        verdict,
        stats,
        slope: sxy / sxx,
        window: opts.window,
        threshold: opts.threshold,
        normalization: opts.normalization,
        sanity,
    }
}

fn ln_norm(ctx: &ConstantsContext, opts: &ScanOptions) -> f64 {
    match opts.normalization {
        Normalization::Theorem => 0.0,
        Normalization::Proof => ctx.c0().ln(),
    }
}

/// T(r) = (δ/γ₁)^{α₁} log ε at the fixed angle φ; cases with a = 1/4.
pub fn scan_lindelof(profile: &RateProfile, phi: f64, ctx: &ConstantsContext, opts: &ScanOptions) -> Result<ScanVerdict> {
    check_options(profile, opts)?;
    if profile.has_phi() {
        return arg("the Lindelöf scan takes a fixed angle, not a phi column");
    }
    let a1 = alpha1(phi, ctx)?;
    let ln_g1 = gamma1(phi, ctx)?.ln() + ln_norm(ctx, opts);
    let stats = profile
        .samples()
        .iter()
        .map(|s| {
            Ok(Statistic {
                r: s.r,
                ln_abs_t: a1 * (s.delta.ln() - ln_g1) + s.epsilon.ln_neg_ln(),
                case: case_split(s.delta, 0.25, phi, NBoundForm::Angle, ctx)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish(TheoremKind::Lindelof, stats, opts, None))
}

/// T(r) = γ₃(φ(r))^{α₂(φ(r))} log ε(r) along the profile's angles; cases
/// with a = 1/2. Every δ must reach `opts.delta_floor` and φ must increase
/// strictly as r decreases.
pub fn scan_tangential(profile: &RateProfile, ctx: &ConstantsContext, opts: &ScanOptions) -> Result<ScanVerdict> {
    check_options(profile, opts)?;
    if !profile.has_phi() {
        return arg("the tangential scan needs a phi column");
    }
    let samples = profile.samples();
    for (i, s) in samples.iter().enumerate() {
        if s.delta < opts.delta_floor {
            return Err(Error::Precondition(format!(
                "sample {i}: delta = {} is below the floor {}",
                s.delta, opts.delta_floor
            )));
        }
        if i > 0 && !(s.phi > samples[i - 1].phi) {
            return Err(Error::Precondition(format!("sample {i}: phi must increase toward pi/2 as r decreases")));
        }
    }
    let mut stats = Vec::with_capacity(samples.len());
    let mut powers = Vec::with_capacity(samples.len());
    for s in samples {
        let phi = s.phi.expect("checked above");
        let p = alpha2(phi, ctx)? * ln_gamma3(phi, ctx)?;
        powers.push(p);
        stats.push(Statistic {
            r: s.r,
            ln_abs_t: p + s.epsilon.ln_neg_ln(),
            case: case_split(s.delta, 0.5, phi, NBoundForm::Angle, ctx)?,
        });
    }
    let tail: Vec<f64> = powers[powers.len() - opts.window..].iter().map(|p| -p).collect();
    let dec = strictly_increasing(&tail);
    Ok(finish(TheoremKind::Tangential, stats, opts, Some((powers, dec))))
}

/// T(r) = (δ/γ₄(r))^{α₃(r, φ)} log ε; cases with a = 1/2 and the radius form.
pub fn scan_koebe(profile: &RateProfile, phi: f64, ctx: &ConstantsContext, opts: &ScanOptions) -> Result<ScanVerdict> {
    check_options(profile, opts)?;
    if profile.has_phi() {
        return arg("the Koebe scan takes a fixed angle, not a phi column");
    }
    let norm = ln_norm(ctx, opts);
    let stats = profile
        .samples()
        .iter()
        .map(|s| {
            if !(s.r < phi.cos()) {
                return arg(format!("r = {} is not below cos(phi) = {}", s.r, phi.cos()));
            }
            let a3 = alpha3(s.r, phi, ctx)?;
            Ok(Statistic {
                r: s.r,
                ln_abs_t: a3 * (s.delta.ln() - ln_gamma4(s.r, ctx)? - norm) + s.epsilon.ln_neg_ln(),
                case: case_split(s.delta, 0.5, s.r, NBoundForm::Radius, ctx)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish(TheoremKind::Koebe, stats, opts, None))
}

/// Dispatches on `kind`; `phi` is ignored by the tangential scan.
pub fn scan(kind: TheoremKind, profile: &RateProfile, phi: f64, ctx: &ConstantsContext, opts: &ScanOptions) -> Result<ScanVerdict> {
    match kind {
        TheoremKind::Lindelof => scan_lindelof(profile, phi, ctx, opts),
        TheoremKind::Tangential => scan_tangential(profile, ctx, opts),
        TheoremKind::Koebe => scan_koebe(profile, phi, ctx, opts),
    }
}

/// Dyadic radii r₀·2^{−i} for i in `first..=last`.
pub fn dyadic_radii(r0: f64, first: i32, last: i32) -> Vec<f64> {
    (first..=last).map(|i| r0 * 0.5f64.powi(i)).collect()
}

/// The bundled synthetic profiles, one diverging and one failing per scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fixture {
    LindelofDiverges,
    LindelofFails,
    TangentialDiverges,
    TangentialFails,
    KoebeDiverges,
    KoebeFails,
}

impl Fixture {
    pub const ALL: [Fixture; 6] = [
        Fixture::LindelofDiverges,
        Fixture::LindelofFails,
        Fixture::TangentialDiverges,
        Fixture::TangentialFails,
        Fixture::KoebeDiverges,
        Fixture::KoebeFails,
    ];

    /// Fixed angle used by the Lindelöf and Koebe fixtures.
    pub const PHI: f64 = std::f64::consts::FRAC_PI_4;

    pub fn name(self) -> &'static str {
        match self {
            Fixture::LindelofDiverges => "lindelof_diverges",
            Fixture::LindelofFails => "lindelof_fails",
            Fixture::TangentialDiverges => "tangential_diverges",
            Fixture::TangentialFails => "tangential_fails",
            Fixture::KoebeDiverges => "koebe_diverges",
            Fixture::KoebeFails => "koebe_fails",
        }
    }

    pub fn kind(self) -> TheoremKind {
        match self {
            Fixture::LindelofDiverges | Fixture::LindelofFails => TheoremKind::Lindelof,
            Fixture::TangentialDiverges | Fixture::TangentialFails => TheoremKind::Tangential,
            Fixture::KoebeDiverges | Fixture::KoebeFails => TheoremKind::Koebe,
        }
    }

    pub fn expected(self) -> Verdict {
        match self {
            Fixture::LindelofDiverges | Fixture::TangentialDiverges | Fixture::KoebeDiverges => Verdict::Diverges,
            _ => Verdict::Fails,
        }
    }

    /// Generates the profile; Koebe deltas depend on `ctx` through γ₄.
    ///
    /// - Lindelöf: rᵢ = 2^{−i}, i = 2..20; δ = 1/log(1/r) with
    ///   ε = exp(−exp(1/r)), or δ = ε = r.
    /// - tangential: same radii, φ(r) = arccos √r, δ = 1/2; ε = exp(−exp(1/r))
    ///   or ε = r.
    /// - Koebe: i = 2..9; δ = γ₄/2 with ε = exp(−exp(exp(1/r))), or δ = γ₄
    ///   with ε = e^{−1}.
    pub fn generate(self, ctx: &ConstantsContext) -> Result<RateProfile> {
        let long = dyadic_radii(1.0, 2, 20);
        let short = dyadic_radii(1.0, 2, 9);
        let samples = match self {
            Fixture::LindelofDiverges => long
                .iter()
                .map(|&r| Ok(RateSample { r, delta: 1.0 / (1.0 / r).ln(), epsilon: Epsilon::from_ln_neg_ln(1.0 / r)?, phi: None }))
                .collect::<Result<Vec<_>>>()?,
            Fixture::LindelofFails => long
                .iter()
                .map(|&r| Ok(RateSample { r, delta: r, epsilon: Epsilon::new(r)?, phi: None }))
                .collect::<Result<Vec<_>>>()?,
            Fixture::TangentialDiverges | Fixture::TangentialFails => long
                .iter()
                .map(|&r| {
                    let epsilon =
                        if self == Fixture::TangentialDiverges { Epsilon::from_ln_neg_ln(1.0 / r)? } else { Epsilon::new(r)? };
                    Ok(RateSample { r, delta: 0.5, epsilon, phi: Some(r.sqrt().acos()) })
                })
                .collect::<Result<Vec<_>>>()?,
            Fixture::KoebeDiverges => short
                .iter()
                .map(|&r| {
                    let delta = 0.5 * ln_gamma4(r, ctx)?.exp();
                    Ok(RateSample { r, delta, epsilon: Epsilon::from_ln_neg_ln((1.0 / r).exp())?, phi: None })
                })
                .collect::<Result<Vec<_>>>()?,
            Fixture::KoebeFails => short
                .iter()
                .map(|&r| {
                    let delta = ln_gamma4(r, ctx)?.exp();
                    Ok(RateSample { r, delta, epsilon: Epsilon::from_neg_ln(1.0)?, phi: None })
                })
                .collect::<Result<Vec<_>>>()?,
        };
        RateProfile::new(samples)
    }
}
