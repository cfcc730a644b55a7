//! Curves `F_{p;K,L}`, slack records for L_p Brunn-Minkowski inequalities and
//! the equality-case probes built on them.
//!
//! Every check evaluates all bodies it compares in one joint call, so Monte
//! Carlo functionals see common random numbers and the slack's standard
//! error comes from the joint covariance.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::functionals::{isotropic_constant, IsotropicOptions};
use crate::functionals::{Estimate, EvalContext, FunctionalDescriptor, JointEstimate};
use crate::geometry::spec_file::ser_p;
use crate::geometry::compare::{is_dilate_pair, is_homothetic_pair, Tolerances};
use crate::geometry::measure::{grid_volume_excess, volume};
use crate::geometry::{lp_combine, lp_mix, ConvexBody, DirectionSet};
use crate::grassmann::{strict_projection_fraction, ProjectionFraction};

/// Hausdorff separation (relative to scale) above which strictness is asserted.
pub const SEPARATION_FOR_STRICTNESS: f64 = 0.05;

fn ser_ps<S: Serializer>(ps: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(ps.len()))?;
    for p in ps {
        if p.is_infinite() {
            seq.serialize_element("inf")?;
        } else {
            seq.serialize_element(p)?;
        }
    }
    seq.end()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    HoldsWithinNoise,
    Violated,
    /// The check could not be carried out (an optimizer did not converge).
    Inconclusive,
}

/// `F_{p;K,L}(alpha)` on a grid of `alpha`.
#[derive(Debug, Clone, Serialize)]
pub struct CurveSample {
    pub functional: String,
    #[serde(serialize_with = "ser_p")]
    pub p: f64,
    pub alphas: Vec<f64>,
    pub values: Vec<f64>,
    pub stderr: Vec<f64>,
    pub approximate: bool,
    #[serde(skip)]
    pub covariance: Option<nalgebra::DMatrix<f64>>,
}

impl CurveSample {
    /// Standard error of `sum_i c_i values[i]`.
    pub fn combination_stderr(&self, coef: &[(usize, f64)]) -> f64 {
        match &self.covariance {
            Some(c) => {
                let mut s = 0.0;
                for &(i, a) in coef {
                    for &(j, b) in coef {
                        s += a * b * c[(i, j)];
                    }
                }
                s.max(0.0).sqrt()
            }
            None => coef.iter().map(|&(i, a)| a.abs() * self.stderr[i]).sum(),
        }
    }

    pub fn scale(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Result of one inequality evaluation `lhs >= rhs`.
#[derive(Debug, Clone, Serialize)]
pub struct SlackRecord {
    pub id: String,
    pub functional: String,
    #[serde(serialize_with = "ser_p")]
    pub p: f64,
    pub alpha: Option<f64>,
    pub lhs: Estimate,
    pub rhs: Estimate,
    pub slack: f64,
    pub slack_stderr: f64,
    /// Allowance below zero before the verdict becomes `violated`.
    pub noise: f64,
    pub verdict: Verdict,
    pub equality_expected: bool,
    pub equality_tolerance: f64,
    /// Whether `|slack|` fell inside the equality tolerance, when equality is
    /// expected.
    pub equality_holds: Option<bool>,
    pub inputs_digest: String,
    pub seed: u64,
    pub stream: u64,
}

impl SlackRecord {
    /// Neither violated nor a missed expected equality.
    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Violated && self.equality_holds != Some(false)
    }

    pub fn relative_slack(&self) -> f64 {
        self.slack / self.rhs.value.abs().max(f64::MIN_POSITIVE)
    }
}

/// Standard alpha grid: `count` equispaced points in `[0, 1]`.
pub fn alpha_grid(count: usize) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(Error::InvalidArgument(format!("alpha grid needs at least 2 points, got {count}")));
    }
    Ok((0..count).map(|i| i as f64 / (count - 1) as f64).collect())
}

fn check_p(p: f64, allow_inf: bool) -> Result<()> {
    if p >= 1.0 && (p.is_finite() || allow_inf) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("exponent p must satisfy p >= 1, got {p}")))
    }
}

fn digest_grid(n: usize) -> Result<DirectionSet> {
    match n {
        2 => DirectionSet::circle(64),
        3 => DirectionSet::icosphere(1),
        _ => {
            let mut dirs = Vec::new();
            for i in 0..n {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                dirs.push(e.clone());
                e[i] = -1.0;
                dirs.push(e);
            }
            DirectionSet::from_directions(n, &dirs)
        }
    }
}

/// SHA-256 over the functional name, the exponent and the bodies' support
/// values on a fixed grid.
pub fn inputs_digest(functional: &str, p: f64, bodies: &[&ConvexBody]) -> Result<String> {
    let mut h = Sha256::new();
    h.update(functional.as_bytes());
    h.update(p.to_bits().to_le_bytes());
    for b in bodies {
        h.update((b.dim() as u64).to_le_bytes());
        h.update(b.kind().as_bytes());
        for u in digest_grid(b.dim())?.iter() {
            h.update(b.h(u).to_bits().to_le_bytes());
        }
    }
    Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

/// `values^(p/degree)` with the Jacobian diagonal.
fn powered(joint: &JointEstimate, e: f64) -> (Vec<f64>, Vec<f64>) {
    let t = joint.values.iter().map(|v| v.powf(e)).collect();
    let g = joint.values.iter().map(|v| e * v.powf(e - 1.0)).collect();
    (t, g)
}

struct SlackParts {
    lhs: Estimate,
    rhs: Estimate,
    slack: f64,
    slack_stderr: f64,
    approximate: bool,
}

/// `t[lhs] - sum w t[r]` for `t = values^(p/degree)`.
fn slack_parts(joint: &JointEstimate, e: f64, lhs: usize, rhs: &[(usize, f64)]) -> SlackParts {
    let (t, g) = powered(joint, e);
    let m = joint.len();
    let mut gl = vec![0.0; m];
    gl[lhs] = g[lhs];
    let mut gr = vec![0.0; m];
    for &(i, w) in rhs {
        gr[i] += w * g[i];
    }
    let gs: Vec<f64> = gl.iter().zip(&gr).map(|(a, b)| a - b).collect();
    let rv: f64 = rhs.iter().map(|&(i, w)| w * t[i]).sum();
    let approximate = joint.approximate[lhs] || rhs.iter().any(|&(i, _)| joint.approximate[i]);
    SlackParts {
        lhs: Estimate { value: t[lhs], stderr: joint.delta_stderr(&gl), approximate: joint.approximate[lhs] },
        rhs: Estimate {
            value: rv,
            stderr: joint.delta_stderr(&gr),
            approximate: rhs.iter().any(|&(i, _)| joint.approximate[i]),
        },
        slack: t[lhs] - rv,
        slack_stderr: joint.delta_stderr(&gs),
        approximate,
    }
}

fn noise_allowance(parts: &SlackParts, tol: &Tolerances) -> f64 {
    let r = parts.rhs.value.abs().max(parts.lhs.value.abs());
    let grid = if parts.approximate { tol.grid_tol * r } else { 0.0 };
    tol.mc_sigma * parts.slack_stderr + tol.rel_tol * r + grid
}

fn verdict_for(slack: f64, noise: f64) -> Verdict {
    if slack >= 0.0 {
        Verdict::Holds
    } else if slack >= -noise {
        Verdict::HoldsWithinNoise
    } else {
        Verdict::Violated
    }
}

fn equality_tolerance(parts: &SlackParts, tol: &Tolerances) -> f64 {
    tol.eq_tol * parts.rhs.value.abs().max(parts.lhs.value.abs()) + tol.mc_sigma * parts.slack_stderr
}

#[allow(clippy::too_many_arguments)]
fn make_record(
    id: &str,
    f: &FunctionalDescriptor,
    p: f64,
    alpha: Option<f64>,
    parts: SlackParts,
    equality_expected: bool,
    digest: String,
    ctx: &EvalContext,
    tol: &Tolerances,
) -> SlackRecord {
    let noise = noise_allowance(&parts, tol);
    let eq_tol = equality_tolerance(&parts, tol);
    SlackRecord {
        id: id.to_string(),
        functional: f.name.clone(),
        p,
        alpha,
        verdict: verdict_for(parts.slack, noise),
        equality_expected,
        equality_tolerance: eq_tol,
        equality_holds: equality_expected.then(|| parts.slack.abs() <= eq_tol),
        lhs: parts.lhs,
        rhs: parts.rhs,
        slack: parts.slack,
        slack_stderr: parts.slack_stderr,
        noise,
        inputs_digest: digest,
        seed: ctx.rng.seed,
        stream: ctx.rng.counter,
    }
}

/// Whether equality is expected in the `p`-inequality for `(K, L)`: dilates
/// always, homothetic pairs too when `p = 1` and `F` is translation invariant.
pub fn equality_expected(f: &FunctionalDescriptor, p: f64, k: &ConvexBody, l: &ConvexBody, tol: &Tolerances) -> Result<bool> {
    if is_dilate_pair(k, l, tol)?.is_yes() {
        return Ok(true);
    }
    if p == 1.0 && f.translation_invariant {
        return Ok(is_homothetic_pair(k, l, tol)?.is_yes());
    }
    Ok(false)
}

/// Samples `alpha -> F((1 - alpha) ._p K +_p alpha ._p L)^p` with
/// `F = Phi^(1/degree)`. All points share one random stream.
pub fn sample_curve(
    f: &FunctionalDescriptor,
    p: f64,
    k: &ConvexBody,
    l: &ConvexBody,
    alphas: &[f64],
    ctx: &EvalContext,
) -> Result<CurveSample> {
    check_p(p, false)?;
    if alphas.is_empty() {
        return Err(Error::InvalidArgument("empty alpha grid".into()));
    }
    let bodies: Vec<ConvexBody> = alphas.iter().map(|&a| lp_mix(p, a, k, l)).collect::<Result<_>>()?;
    let joint = f.evaluate_joint(&bodies, ctx)?;
    let (values, g) = powered(&joint, p / f.degree);
    let m = values.len();
    let mut cov = joint.covariance.clone();
    for i in 0..m {
        for j in 0..m {
            cov[(i, j)] *= g[i] * g[j];
        }
    }
    Ok(CurveSample {
        functional: f.name.clone(),
        p,
        alphas: alphas.to_vec(),
        stderr: (0..m).map(|i| cov[(i, i)].max(0.0).sqrt()).collect(),
        values,
        approximate: joint.any_approximate(),
        covariance: Some(cov),
    })
}

/// Concavity margin at one interior point: value minus the chord through
/// two other points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChordMargin {
    pub left: usize,
    pub mid: usize,
    pub right: usize,
    pub margin: f64,
    pub allowance: f64,
}

impl ChordMargin {
    pub fn ok(&self) -> bool {
        self.margin >= -self.allowance
    }
}

fn chord_margin(c: &CurveSample, i: usize, m: usize, k: usize, tol: &Tolerances) -> ChordMargin {
    let a = &c.alphas;
    let lam = (a[m] - a[i]) / (a[k] - a[i]);
    let chord = (1.0 - lam) * c.values[i] + lam * c.values[k];
    let se = c.combination_stderr(&[(m, 1.0), (i, -(1.0 - lam)), (k, -lam)]);
    let scale = c.scale();
    let h = (a[m] - a[i]) * (a[k] - a[m]);
    let grid = if c.approximate { tol.grid_tol * scale * h } else { 0.0 };
    ChordMargin {
        left: i,
        mid: m,
        right: k,
        margin: c.values[m] - chord,
        allowance: tol.rel_tol * scale + tol.mc_sigma * se + grid,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConcavityVerdict {
    pub concave: bool,
    /// Smallest `margin / scale` over consecutive triples.
    pub min_margin: f64,
    pub worst: usize,
    pub margins: Vec<ChordMargin>,
}

/// Second-difference concavity test on consecutive triples.
pub fn check_concavity(c: &CurveSample, tol: &Tolerances) -> Result<ConcavityVerdict> {
    if c.alphas.len() < 3 {
        return Err(Error::InvalidArgument("concavity needs at least 3 alphas".into()));
    }
    let margins: Vec<ChordMargin> = (1..c.alphas.len() - 1).map(|m| chord_margin(c, m - 1, m, m + 1, tol)).collect();
    let scale = c.scale().max(f64::MIN_POSITIVE);
    let (worst, min_margin) = margins
        .iter()
        .map(|m| (m.mid, m.margin / scale))
        .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    Ok(ConcavityVerdict { concave: margins.iter().all(ChordMargin::ok), min_margin, worst, margins })
}

/// A direct p-concavity test on bodies `M_1, M_2` of the curve against the
/// chord test on the curve itself.
#[derive(Debug, Clone, Serialize)]
pub struct MidpointCheck {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub direct_margin: f64,
    pub direct_allowance: f64,
    pub direct_ok: bool,
    pub curve_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma21Report {
    pub curve_concave: bool,
    pub checks: Vec<MidpointCheck>,
    /// Every direct test matches the curve's chord test, and a concave curve
    /// comes with passing direct tests.
    pub agree: bool,
}

/// Compares the curve's concavity verdict with direct tests of
/// `F((1-l) ._p M_1 +_p l ._p M_2)^p >= (1-l) F(M_1)^p + l F(M_2)^p` for
/// `M_1, M_2` on the curve, at `count` random grid triples.
#[allow(clippy::too_many_arguments)]
pub fn cross_check_midpoints(
    f: &FunctionalDescriptor,
    p: f64,
    k: &ConvexBody,
    l: &ConvexBody,
    curve: &CurveSample,
    count: usize,
    ctx: &EvalContext,
    tol: &Tolerances,
) -> Result<Lemma21Report> {
    let na = curve.alphas.len();
    if na < 3 {
        return Err(Error::InvalidArgument("cross-check needs at least 3 alphas".into()));
    }
    let verdict = check_concavity(curve, tol)?;
    let mut rng = ctx.rng.fork(0x4c32_31).rng();
    let mut checks = Vec::with_capacity(count);
    for t in 0..count {
        let i = rng.random_range(0..na - 2);
        let kk = rng.random_range(i + 2..na);
        let m = rng.random_range(i + 1..kk);
        let (a, b) = (curve.alphas[i], curve.alphas[kk]);
        let lam = (curve.alphas[m] - a) / (b - a);
        let m1 = lp_mix(p, a, k, l)?;
        let m2 = lp_mix(p, b, k, l)?;
        let mid = lp_mix(p, lam, &m1, &m2)?;
        let sub = EvalContext { rng: ctx.rng.fork(t as u64 + 1), budget: ctx.budget };
        let joint = f.evaluate_joint(&[m1, m2, mid], &sub)?;
        let parts = slack_parts(&joint, p / f.degree, 2, &[(0, 1.0 - lam), (1, lam)]);
        let scale = parts.lhs.value.abs().max(parts.rhs.value.abs());
        let h = lam * (1.0 - lam) * (b - a) * (b - a);
        let grid = if parts.approximate { tol.grid_tol * scale * h } else { 0.0 };
        let allowance = tol.rel_tol * scale + tol.mc_sigma * parts.slack_stderr + grid;
        let cm = chord_margin(curve, i, m, kk, tol);
        checks.push(MidpointCheck {
            alpha: a,
            beta: b,
            lambda: lam,
            direct_margin: parts.slack,
            direct_allowance: allowance,
            direct_ok: parts.slack >= -allowance,
            curve_ok: cm.ok(),
        });
    }
    let agree = checks.iter().all(|c| c.direct_ok == c.curve_ok) && (!verdict.concave || checks.iter().all(|c| c.direct_ok));
    Ok(Lemma21Report { curve_concave: verdict.concave, checks, agree })
}

/// `F(K +_p L)^p >= F(K)^p + F(L)^p`.
pub fn check_lp_bm(
    f: &FunctionalDescriptor,
    p: f64,
    k: &ConvexBody,
    l: &ConvexBody,
    ctx: &EvalContext,
    tol: &Tolerances,
) -> Result<SlackRecord> {
    check_p(p, false)?;
    let sum = lp_combine(p, 1.0, k, 1.0, l)?;
    let joint = f.evaluate_joint(&[k.clone(), l.clone(), sum], ctx)?;
    let parts = slack_parts(&joint, p / f.degree, 2, &[(0, 1.0), (1, 1.0)]);
    let eq = equality_expected(f, p, k, l, tol)?;
    let digest = inputs_digest(&f.name, p, &[k, l])?;
    Ok(make_record("lp_bm", f, p, None, parts, eq, digest, ctx, tol))
}

/// `F((1-a) ._p K +_p a ._p L)^p >= (1-a) F(K)^p + a F(L)^p`.
pub fn check_lp_bm_weighted(
    f: &FunctionalDescriptor,
    p: f64,
    alpha: f64,
    k: &ConvexBody,
    l: &ConvexBody,
    ctx: &EvalContext,
    tol: &Tolerances,
) -> Result<SlackRecord> {
    check_p(p, false)?;
    let mix = lp_mix(p, alpha, k, l)?;
    let joint = f.evaluate_joint(&[k.clone(), l.clone(), mix], ctx)?;
    let parts = slack_parts(&joint, p / f.degree, 2, &[(0, 1.0 - alpha), (1, alpha)]);
    let eq = equality_expected(f, p, k, l, tol)?;
    let digest = inputs_digest(&f.name, p, &[k, l])?;
    Ok(make_record("lp_bm_weighted", f, p, Some(alpha), parts, eq, digest, ctx, tol))
}

/// The weighted inequality at every alpha of a sampled curve, read off the
/// curve against its chord.
pub fn curve_slacks(
    f: &FunctionalDescriptor,
    curve: &CurveSample,
    k: &ConvexBody,
    l: &ConvexBody,
    ctx: &EvalContext,
    tol: &Tolerances,
) -> Result<Vec<SlackRecord>> {
    let m = curve.alphas.len();
    if curve.alphas[0] != 0.0 || curve.alphas[m - 1] != 1.0 {
        return Err(Error::InvalidArgument("curve must include alpha = 0 and alpha = 1".into()));
    }
    let eq = equality_expected(f, curve.p, k, l, tol)?;
    let digest = inputs_digest(&f.name, curve.p, &[k, l])?;
    let mut out = Vec::with_capacity(m);
    for (i, &a) in curve.alphas.iter().enumerate() {
        let rhs = (1.0 - a) * curve.values[0] + a * curve.values[m - 1];
        let parts = SlackParts {
            lhs: Estimate { value: curve.values[i], stderr: curve.stderr[i], approximate: curve.approximate },
            rhs: Estimate {
                value: rhs,
                stderr: curve.combination_stderr(&[(0, 1.0 - a), (m - 1, a)]),
                approximate: curve.approximate,
            },
            slack: curve.values[i] - rhs,
            slack_stderr: curve.combination_stderr(&[(i, 1.0), (0, -(1.0 - a)), (m - 1, -a)]),
            approximate: curve.approximate,
        };
        out.push(make_record("lp_bm_curve", f, curve.p, Some(a), parts, eq, digest.clone(), ctx, tol));
    }
    Ok(out)
}

/// Smallest `max_u |h_L(u) - lambda h_K(u)| / scale(L)` over `lambda > 0`:
/// how far `L` is from every dilate of `K`.
pub fn dilate_separation(k: &ConvexBody, l: &ConvexBody) -> Result<f64> {
    if k.dim() != l.dim() {
        return Err(Error::DimensionMismatch { expected: k.dim(), got: l.dim() });
    }
    let grid = DirectionSet::default_for(k.dim())?;
    let hk: Vec<f64> = grid.iter().map(|u| k.h(u)).collect();
    let hl: Vec<f64> = grid.iter().map(|u| l.h(u)).collect();
    let scale = l.scale().max(f64::MIN_POSITIVE);
    let cost = |lam: f64| hk.iter().zip(&hl).map(|(a, b)| (b - lam * a).abs()).fold(0.0, f64::max) / scale;
    let ratios: Vec<f64> = hk.iter().zip(&hl).filter(|(a, _)| **a > 0.0).map(|(a, b)| b / a).collect();
    if ratios.is_empty() {
        return Ok(cost(1.0));
    }
    let (mut lo, mut hi) = ratios.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| (a.min(*r), b.max(*r)));
    lo = lo.max(0.0);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if cost(x1) <= cost(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    Ok(cost(0.5 * (lo + hi)))
}

/// Relative slack a non-dilate pair must exceed to count as strict,
/// calibrated from the dilate pair `(K, 2K)`.
#[derive(Debug, Clone, Serialize)]
pub struct StrictnessFloor {
    pub functional: String,
    #[serde(serialize_with = "ser_p")]
    pub p: f64,
    pub relative: f64,
    pub baseline_slack: f64,
    pub baseline_stderr: f64,
}

impl StrictnessFloor {
    pub fn threshold(&self, rhs: f64) -> f64 {
        self.relative * rhs.abs()
    }

    /// Slack beyond its noise band and above the floor.
    pub fn is_strict(&self, r: &SlackRecord, tol: &Tolerances) -> bool {
        r.slack - tol.mc_sigma * r.slack_stderr > self.threshold(r.rhs.value)
    }
}

pub fn calibrate_floor(
    f: &FunctionalDescriptor,
    p: f64,
    k: &ConvexBody,
    ctx: &EvalContext,
    tol: &Tolerances,
) -> Result<StrictnessFloor> {
    let r = check_lp_bm(f, p, k, &k.scaled(2.0)?, ctx, tol)?;
    let rhs = r.rhs.value.abs().max(f64::MIN_POSITIVE);
    let mut relative = (r.slack.abs() + tol.mc_sigma * r.slack_stderr) / rhs + 10.0 * tol.rel_tol;
    if r.lhs.approximate || r.rhs.approximate {
        // grid bias of a non-dilate sum is not cancelled as it is for (K, 2K)
        relative += 2.0 * (p / f.degree) * grid_volume_excess(k.dim())?;
    }
    Ok(StrictnessFloor {
        functional: f.name.clone(),
        p,
        relative,
        baseline_slack: r.slack,
        baseline_stderr: r.slack_stderr,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PairOutcome {
    pub record: SlackRecord,
    pub dilate: bool,
    pub separation: f64,
    /// Set when strictness was asserted (non-dilate, separated pair).
    pub strict: Option<bool>,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomothetyProbe {
    pub translation: Vec<f64>,
    /// The `p > 1` test on `(K, K + x)`; expected strict.
    pub lp: SlackRecord,
    pub lp_strict: bool,
    /// The `p = 1` test on the same pair; expected equality.
    pub minkowski: SlackRecord,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EqualityReport {
    pub functional: String,
    #[serde(serialize_with = "ser_p")]
    pub p: f64,
    pub floor: StrictnessFloor,
    pub pairs: Vec<PairOutcome>,
    pub homothety: Option<HomothetyProbe>,
    pub ok: bool,
}

/// Dilate pairs must give equality and separated non-dilate pairs strict
/// inequality. For translation-invariant `F` the pair `(K, K + x)` must be
/// strict for `p > 1` and an equality for `p = 1`.
pub fn check_equality_characterization(
    f: &FunctionalDescriptor,
    pairs: &[(ConvexBody, ConvexBody)],
    p: f64,
    ctx: &EvalContext,
    tol: &Tolerances,
) -> Result<EqualityReport> {
    if pairs.is_empty() {
        return Err(Error::InvalidArgument("no pairs given".into()));
    }
    if p <= 1.0 {
        return Err(Error::InvalidArgument("the characterization concerns p > 1".into()));
    }
    let floor = calibrate_floor(f, p, &pairs[0].0, &sub_ctx(ctx, 0), tol)?;
    let mut outcomes = Vec::with_capacity(pairs.len());
    for (idx, (k, l)) in pairs.iter().enumerate() {
        let record = check_lp_bm(f, p, k, l, &sub_ctx(ctx, idx as u64 + 1), tol)?;
        let dilate = record.equality_expected;
        let separation = dilate_separation(k, l)?;
        let (strict, ok) = if dilate {
            (None, record.equality_holds == Some(true))
        } else if separation >= SEPARATION_FOR_STRICTNESS {
            let s = floor.is_strict(&record, tol);
            (Some(s), s && record.passed())
        } else {
            (None, record.passed())
        };
        outcomes.push(PairOutcome { record, dilate, separation, strict, ok });
    }
    let homothety = if f.translation_invariant {
        let k = &pairs[0].0;
        let n = k.dim();
        let step = (0.5 * k.origin_margin()).min(0.2 * k.scale());
        let mut x = vec![0.0; n];
        x[0] = step;
        let kx = k.translated(&x)?;
        if step >= SEPARATION_FOR_STRICTNESS * k.scale() {
            let base = sub_ctx(ctx, pairs.len() as u64 + 1);
            let lp = check_lp_bm(f, p, k, &kx, &base, tol)?;
            let minkowski = check_lp_bm(f, 1.0, k, &kx, &base, tol)?;
            let lp_strict = floor.is_strict(&lp, tol);
            let ok = lp_strict && lp.passed() && minkowski.equality_holds == Some(true);
            Some(HomothetyProbe { translation: x, lp, lp_strict, minkowski, ok })
        } else {
            None
        }
    } else {
        None
    };
    let ok = outcomes.iter().all(|o| o.ok) && homothety.as_ref().is_none_or(|h| h.ok);
    Ok(EqualityReport { functional: f.name.clone(), p, floor, pairs: outcomes, homothety, ok })
}

fn sub_ctx(ctx: &EvalContext, label: u64) -> EvalContext {
    EvalContext { rng: ctx.rng.fork(label), budget: ctx.budget }
}

#[derive(Debug, Clone, Serialize)]
pub struct PinftyReport {
    pub functional: String,
    #[serde(serialize_with = "ser_ps")]
    pub ps: Vec<f64>,
    /// Normalized `F(K +_p L)` along `ps`.
    pub values: Vec<Estimate>,
    pub limit: Estimate,
    pub f_k: Estimate,
    pub f_l: Estimate,
    pub monotone: bool,
    pub above_limit: bool,
    pub max_bound: bool,
    /// `F(K +_inf L) = F(L)`, checked when `K` is contained in `L`.
    pub inclusion_equality: Option<bool>,
    pub ok: bool,
}

/// `F(K +_p L)` decreases along increasing `ps` toward `F(K +_inf L)`, which
/// is at least `max(F(K), F(L))`.
pub fn check_pinfty_limit(
    f: &FunctionalDescriptor,
    k: &ConvexBody,
    l: &ConvexBody,
    ps: &[f64],
    ctx: &EvalContext,
    tol: &Tolerances,
) -> Result<PinftyReport> {
    if ps.is_empty() || ps.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("p sequence must be nonempty and increasing".into()));
    }
    for &p in ps {
        check_p(p, false)?;
    }
    let mut bodies = vec![k.clone(), l.clone()];
    for &p in ps {
        bodies.push(lp_combine(p, 1.0, k, 1.0, l)?);
    }
    bodies.push(lp_combine(f64::INFINITY, 1.0, k, 1.0, l)?);
    let joint = f.evaluate_joint(&bodies, ctx)?;
    let e = 1.0 / f.degree;
    let (t, g) = powered(&joint, e);
    let m = t.len();
    let est = |i: usize| {
        let mut gr = vec![0.0; m];
        gr[i] = g[i];
        Estimate { value: t[i], stderr: joint.delta_stderr(&gr), approximate: joint.approximate[i] }
    };
    // allowance for `t[a] >= t[b]`
    let allow = |a: usize, b: usize| {
        let mut gr = vec![0.0; m];
        gr[a] += g[a];
        gr[b] -= g[b];
        let s = t[a].abs().max(t[b].abs());
        let grid = if joint.approximate[a] || joint.approximate[b] { tol.grid_tol * s } else { 0.0 };
        tol.mc_sigma * joint.delta_stderr(&gr) + tol.rel_tol * s + grid
    };
    let lim = m - 1;
    let monotone = (2..lim - 1).all(|i| t[i] >= t[i + 1] - allow(i, i + 1));
    let above_limit = t[lim - 1] >= t[lim] - allow(lim - 1, lim);
    let max_bound = t[lim] >= t[0] - allow(lim, 0) && t[lim] >= t[1] - allow(lim, 1);
    let grid = DirectionSet::default_for(k.dim())?;
    let s = k.scale().max(l.scale());
    let contained = grid.iter().all(|u| k.h(u) <= l.h(u) + 1e-12 * s);
    let inclusion_equality = contained.then(|| {
        let eq = tol.eq_tol * t[1].abs() + allow(lim, 1) - tol.rel_tol * t[1].abs();
        (t[lim] - t[1]).abs() <= eq
    });
    let ok = monotone && above_limit && max_bound && inclusion_equality != Some(false);
    Ok(PinftyReport {
        functional: f.name.clone(),
        ps: ps.to_vec(),
        values: (2..lim).map(est).collect(),
        limit: est(lim),
        f_k: est(0),
        f_l: est(1),
        monotone,
        above_limit,
        max_bound,
        inclusion_equality,
        ok,
    })
}

/// `V(K_0 +_p K_1)^{p/n} L^{2p/(n+2)} >= sum over i of V(K_i)^{p/n} L_{K_i}^{2p/(n+2)}`
/// for origin-symmetric bodies. A non-converged optimizer makes the verdict
/// inconclusive.
pub fn check_corollary_isotropic(
    k0: &ConvexBody,
    k1: &ConvexBody,
    p: f64,
    ctx: &EvalContext,
    tol: &Tolerances,
) -> Result<SlackRecord> {
    check_p(p, false)?;
    let n = k0.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::Unsupported(format!("isotropic constants in dimension {n}")));
    }
    let sum = lp_combine(p, 1.0, k0, 1.0, k1)?;
    let opts = IsotropicOptions::default();
    let nf = n as f64;
    let mut terms = Vec::with_capacity(3);
    let mut converged = true;
    let mut approximate = [false; 3];
    for (i, b) in [&sum, k0, k1].into_iter().enumerate() {
        let r = isotropic_constant(b, &opts)?;
        let v = volume(b)?;
        converged &= r.converged;
        approximate[i] = v.approximate || r.approximate;
        terms.push(v.value.powf(p / nf) * r.l_k.powf(2.0 * p / (nf + 2.0)));
    }
    let joint = JointEstimate::deterministic(terms, approximate.to_vec());
    let parts = slack_parts(&joint, 1.0, 0, &[(1, 1.0), (2, 1.0)]);
    let desc = FunctionalDescriptor::parse("isotropic", n)?;
    let eq = is_dilate_pair(k0, k1, tol)?.is_yes();
    let digest = inputs_digest("isotropic_corollary", p, &[k0, k1])?;
    let mut rec = make_record("isotropic_corollary", &desc, p, None, parts, eq, digest, ctx, tol);
    rec.functional = "isotropic_corollary".into();
    if !converged {
        rec.verdict = Verdict::Inconclusive;
        rec.equality_holds = None;
    }
    Ok(rec)
}

#[derive(Debug, Clone, Serialize)]
pub struct InclusionReport {
    #[serde(serialize_with = "ser_p")]
    pub p: f64,
    pub alpha: f64,
    /// Smallest `h_p(u) - h_1(u)` over the grid.
    pub min_gap: f64,
    pub max_gap: f64,
    pub holds: bool,
    pub equal_everywhere: bool,
    /// `h_K = h_L` on the grid.
    pub supports_equal: bool,
}

impl InclusionReport {
    /// Inclusion holds and equality occurs exactly for equal supports.
    pub fn consistent(&self) -> bool {
        self.holds && self.equal_everywhere == self.supports_equal
    }
}

/// `(1-a) ._p K +_p a ._p L` contains `(1-a) K + a L`, with equal supports at
/// every direction exactly when `K = L`.
pub fn check_lp_inclusion(
    k: &ConvexBody,
    l: &ConvexBody,
    p: f64,
    alpha: f64,
    grid: &DirectionSet,
) -> Result<InclusionReport> {
    check_p(p, true)?;
    let hp = lp_mix(p, alpha, k, l)?;
    let h1 = lp_mix(1.0, alpha, k, l)?;
    let mut min_gap = f64::INFINITY;
    let mut max_gap = f64::NEG_INFINITY;
    let mut holds = true;
    let mut equal = true;
    let mut same = true;
    for u in grid.iter() {
        let (a, b) = (k.h(u), l.h(u));
        let eps = 1e-12 * (a.abs() + b.abs()).max(1.0);
        let gap = hp.h(u) - h1.h(u);
        min_gap = min_gap.min(gap);
        max_gap = max_gap.max(gap);
        holds &= gap >= -eps;
        equal &= gap.abs() <= eps;
        same &= (a - b).abs() <= eps;
    }
    Ok(InclusionReport { p, alpha, min_gap, max_gap, holds, equal_everywhere: equal, supports_equal: same })
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectionStrictness {
    pub j: usize,
    pub fraction: ProjectionFraction,
    pub w_k: Estimate,
    pub w_l: Estimate,
    pub difference_stderr: f64,
    pub ok: bool,
}

/// For `K` strictly inside `L`: a positive share of `j`-subspaces sees a
/// strictly smaller shadow (99% lower bound) and `W_{n-j}(K) < W_{n-j}(L)`
/// beyond noise.
pub fn check_projection_strictness(
    k: &ConvexBody,
    l: &ConvexBody,
    j: usize,
    samples: usize,
    ctx: &EvalContext,
    tol: &Tolerances,
) -> Result<ProjectionStrictness> {
    let n = k.dim();
    if j == 0 || j >= n {
        return Err(Error::InvalidArgument(format!("projection dimension must lie in 1..{n}")));
    }
    let fraction = strict_projection_fraction(k, l, j, samples, ctx.rng.fork(0x4c32_33))?;
    let f = FunctionalDescriptor::parse(&format!("quermass:{}", n - j), n)?;
    let joint = f.evaluate_joint(&[k.clone(), l.clone()], ctx)?;
    let se = joint.delta_stderr(&[-1.0, 1.0]);
    let diff = joint.values[1] - joint.values[0];
    let ok = fraction.lower_99 > 0.0 && diff > tol.mc_sigma * se + tol.rel_tol * joint.values[1].abs();
    Ok(ProjectionStrictness { j, fraction, w_k: joint.get(0), w_l: joint.get(1), difference_stderr: se, ok })
}

/// One audited property of a functional.
#[derive(Debug, Clone, Serialize)]
pub struct Audit {
    pub functional: String,
    pub property: String,
    pub passed: bool,
    /// Worst observed deviation and its allowance, per probe.
    pub details: BTreeMap<String, (f64, f64)>,
}

fn exact_allowance(tol: &Tolerances, scale: f64) -> f64 {
    1e-9_f64.max(tol.rel_tol) * scale
}

/// `Phi(lambda K) = lambda^degree Phi(K)`.
pub fn audit_homogeneity(
    f: &FunctionalDescriptor,
    k: &ConvexBody,
    lambdas: &[f64],
    ctx: &EvalContext,
    tol: &Tolerances,
) -> Result<Audit> {
    let mut bodies = vec![k.clone()];
    for &l in lambdas {
        bodies.push(k.scaled(l)?);
    }
    let joint = f.evaluate_joint(&bodies, ctx)?;
    let mut details = BTreeMap::new();
    let mut passed = true;
    for (i, &l) in lambdas.iter().enumerate() {
        let c = l.powf(f.degree);
        let dev = joint.values[i + 1] - c * joint.values[0];
        let mut g = vec![0.0; bodies.len()];
        g[i + 1] = 1.0;
        g[0] = -c;
        let allow = tol.mc_sigma * joint.delta_stderr(&g) + exact_allowance(tol, joint.values[i + 1].abs());
        passed &= dev.abs() <= allow;
        details.insert(format!("lambda={l}"), (dev, allow));
    }
    Ok(Audit { functional: f.name.clone(), property: "homogeneity".into(), passed, details })
}

/// `Phi(K + x) = Phi(K)`.
pub fn audit_translation(
    f: &FunctionalDescriptor,
    k: &ConvexBody,
    shifts: &[Vec<f64>],
    ctx: &EvalContext,
    tol: &Tolerances,
) -> Result<Audit> {
    let mut bodies = vec![k.clone()];
    for x in shifts {
        bodies.push(k.translated(x)?);
    }
    let joint = f.evaluate_joint(&bodies, ctx)?;
    let mut details = BTreeMap::new();
    let mut passed = true;
    for i in 0..shifts.len() {
        let dev = joint.values[i + 1] - joint.values[0];
        let mut g = vec![0.0; bodies.len()];
        g[i + 1] = 1.0;
        g[0] = -1.0;
        let s = joint.values[0].abs();
        let grid = if joint.approximate[i + 1] || joint.approximate[0] { tol.grid_tol * s } else { 0.0 };
        let allow = tol.mc_sigma * joint.delta_stderr(&g) + exact_allowance(tol, s) + grid;
        passed &= dev.abs() <= allow;
        details.insert(format!("shift#{i}"), (dev, allow));
    }
    Ok(Audit { functional: f.name.clone(), property: "translation".into(), passed, details })
}

/// For `K` inside `L`: `Phi(K) <= Phi(L)`, and strictly (by the reported
/// margin) when `L` is separated from `K`.
pub fn audit_monotonicity(
    f: &FunctionalDescriptor,
    k: &ConvexBody,
    l: &ConvexBody,
    ctx: &EvalContext,
    tol: &Tolerances,
) -> Result<Audit> {
    let grid = DirectionSet::default_for(k.dim())?;
    let s = k.scale().max(l.scale());
    if grid.iter().any(|u| k.h(u) > l.h(u) + 1e-12 * s) {
        return Err(Error::InvalidArgument("K is not contained in L".into()));
    }
    let gap = grid.iter().map(|u| l.h(u) - k.h(u)).fold(0.0, f64::max) / s;
    let joint = f.evaluate_joint(&[k.clone(), l.clone()], ctx)?;
    let diff = joint.values[1] - joint.values[0];
    let se = joint.delta_stderr(&[-1.0, 1.0]);
    let scale = joint.values[1].abs();
    let grid_allow = if joint.any_approximate() { tol.grid_tol * scale } else { 0.0 };
    let allow = tol.mc_sigma * se + exact_allowance(tol, scale) + grid_allow;
    let mut details = BTreeMap::new();
    details.insert("weak".to_string(), (diff, -allow));
    let mut passed = diff >= -allow;
    if f.monotone == crate::functionals::Monotonicity::StrictOnKno && gap >= SEPARATION_FOR_STRICTNESS {
        let strict_allow = tol.mc_sigma * se + exact_allowance(tol, scale);
        details.insert("strict".to_string(), (diff, strict_allow));
        passed &= diff > strict_allow;
    }
    Ok(Audit { functional: f.name.clone(), property: "monotonicity".into(), passed, details })
}
