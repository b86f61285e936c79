//! Coarse-grained Fock-laser birth–death model.
//!
//! Photon `m` is created at rate `A_m = m R_m` from level `m−1` and level `m`
//! decays at `C_{m−1} = κ_m`. The steady state obeys `A_m ρ_{m−1} = C_{m−1} ρ_m`.

use serde::{Deserialize, Serialize};

use crate::distribution::PhotonDistribution;
use crate::emission::GainParams;
use crate::error::{invalid, Error, Result};
use crate::spectrum::{self, Quadrature, RabiParams, SpinBranch};

/// Largest probability tolerated on the last retained level.
pub const TAIL_LIMIT: f64 = 1e-8;
/// Upper bound for automatic truncation growth.
pub const MAX_AUTO_N: usize = 1 << 20;
/// Truncation cap used by [`regime_map`]; points needing more are unresolved.
pub const REGIME_MAX_N: usize = 1 << 15;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum LossModel {
    /// `κ_n = κ n`.
    #[default]
    Harmonic,
    /// `κ_n = κ |⟨n−1,σ|(a+a†)|n,σ⟩|²` from the first-order eigenstates.
    MatrixElement,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RateOptions {
    pub loss: LossModel,
}

/// `Δ_1..=Δ_{n_max}` with index 0 unused.
fn detunings(n_max: usize, p: &RabiParams, gp: &GainParams) -> Result<Vec<f64>> {
    let s = spectrum::branch_splittings(n_max, p)?;
    let mut out = vec![0.0; n_max + 1];
    for m in 1..=n_max {
        out[m] = 0.5 * p.omega * (gp.delta - 0.5 * (s[m - 1] - s[m]));
    }
    Ok(out)
}

/// `F(n) = 4nε² + 4Δ_n²`; at δ = 0 the second term is `¼ω²(s_n − s_{n−1})²`.
pub fn nonlinearity_f(n: usize, p: &RabiParams, gp: &GainParams) -> Result<f64> {
    if n < 1 {
        return Err(invalid("n", "F(n) is defined for n >= 1"));
    }
    let d = crate::emission::detuning(n, p, gp)?;
    Ok(4.0 * n as f64 * gp.epsilon * gp.epsilon + 4.0 * d * d)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GainLossCurves {
    /// Photon numbers `1..=n_max`.
    pub n: Vec<usize>,
    /// Per-photon stimulated-emission coefficient `R_n = 2rε²/(Γ² + F(n))`.
    pub gain: Vec<f64>,
    /// Total loss rate out of level `n`.
    pub loss: Vec<f64>,
    pub f: Vec<f64>,
    /// `F(n)/Γ²`.
    pub g_ratio: Vec<f64>,
}

impl GainLossCurves {
    /// `A_n = n R_n`.
    pub fn birth(&self) -> Vec<f64> {
        self.n.iter().zip(&self.gain).map(|(&n, r)| n as f64 * r).collect()
    }
}

fn loss_rate(n: usize, p: &RabiParams, gp: &GainParams, model: LossModel) -> Result<f64> {
    Ok(match model {
        LossModel::Harmonic => gp.kappa * n as f64,
        LossModel::MatrixElement => {
            let x = spectrum::matrix_element_x(n - 1, SpinBranch::Minus, n, SpinBranch::Minus, p, Quadrature::Bare)?;
            gp.kappa * x * x
        }
    })
}

pub fn gain_loss_with(p: &RabiParams, gp: &GainParams, n_max: usize, opts: &RateOptions) -> Result<GainLossCurves> {
    if n_max < 1 {
        return Err(invalid("n_max", "must be >= 1"));
    }
    p.validated()?;
    gp.validated(p)?;
    let det = detunings(n_max, p, gp)?;
    let e2 = gp.epsilon * gp.epsilon;
    let g2 = gp.gamma * gp.gamma;
    let mut curves = GainLossCurves {
        n: Vec::with_capacity(n_max),
        gain: Vec::with_capacity(n_max),
        loss: Vec::with_capacity(n_max),
        f: Vec::with_capacity(n_max),
        g_ratio: Vec::with_capacity(n_max),
    };
    for n in 1..=n_max {
        let f = 4.0 * n as f64 * e2 + 4.0 * det[n] * det[n];
        let denom = g2 + f;
        curves.n.push(n);
        curves.gain.push(if denom > 0.0 { 2.0 * gp.r * e2 / denom } else { 0.0 });
        curves.loss.push(loss_rate(n, p, gp, opts.loss)?);
        curves.f.push(f);
        curves.g_ratio.push(f / g2);
    }
    Ok(curves)
}

pub fn gain_loss(p: &RabiParams, gp: &GainParams, n_max: usize) -> Result<GainLossCurves> {
    gain_loss_with(p, gp, n_max, &RateOptions::default())
}

/// Stationary law of a birth–death chain on `0..=n_max`.
///
/// `birth[k]` is the rate `k → k+1` and `death[k]` the rate `k+1 → k`. Each
/// ratio `ρ_{k+1}/ρ_k` is applied in linear space, so it carries a couple of
/// roundings at most; a power-of-two exponent per level keeps the running
/// product in range without touching those ratios. A zero birth rate cuts the
/// chain.
pub fn birth_death_stationary(birth: &[f64], death: &[f64]) -> Result<PhotonDistribution> {
    if birth.len() != death.len() {
        return Err(invalid("death", "birth and death rates must have equal length"));
    }
    const BOUND: i32 = 500;
    let mut mant = Vec::with_capacity(birth.len() + 1);
    let mut exps = Vec::with_capacity(birth.len() + 1);
    let (mut w, mut e) = (1.0_f64, 0_i32);
    mant.push(w);
    exps.push(e);
    for (k, (&a, &c)) in birth.iter().zip(death).enumerate() {
        if !(a >= 0.0 && c >= 0.0) {
            return Err(invalid("rates", format!("negative or NaN rate at level {k}")));
        }
        if a == 0.0 {
            w = 0.0;
        } else if c == 0.0 {
            return Err(invalid("kappa", format!("no loss out of level {} but gain into it", k + 1)));
        } else if w != 0.0 {
            w *= a / c;
            if !w.is_finite() {
                return Err(invalid("rates", format!("ratio overflow at level {}", k + 1)));
            }
            let s = w.log2().floor() as i32;
            if s.abs() > BOUND {
                w *= pow2(-s);
                e += s;
            }
        }
        mant.push(w);
        exps.push(e);
    }
    let top = mant.iter().zip(&exps).filter(|(w, _)| **w != 0.0).map(|(_, e)| *e).max().unwrap_or(0);
    let weights = mant.iter().zip(&exps).map(|(w, e)| if *w == 0.0 { 0.0 } else { w * pow2(e - top) }).collect();
    PhotonDistribution::from_weights(weights)
}

/// `2^k` for any `k`; saturates to 0 or ∞ outside the double range.
fn pow2(k: i32) -> f64 {
    let half = k / 2;
    2f64.powi(half) * 2f64.powi(k - half)
}

/// Largest `|A_n ρ_{n−1} − C_{n−1} ρ_n|` relative to the larger of the two fluxes.
///
/// Levels whose probability is subnormal carry no relative precision and are
/// skipped.
pub fn detailed_balance_residual(dist: &PhotonDistribution, birth: &[f64], death: &[f64]) -> f64 {
    let mut worst = 0.0_f64;
    for k in 0..birth.len().min(dist.probs.len() - 1) {
        if dist.probs[k..=k + 1].iter().any(|q| *q != 0.0 && !q.is_normal()) {
            continue;
        }
        let up = birth[k] * dist.probs[k];
        let down = death[k] * dist.probs[k + 1];
        let scale = up.max(down);
        if scale > 0.0 {
            worst = worst.max((up - down).abs() / scale);
        }
    }
    worst
}

fn check_tail(dist: &PhotonDistribution) -> Result<()> {
    let mass = *dist.probs.last().unwrap_or(&0.0);
    if mass > TAIL_LIMIT {
        return Err(Error::TailMass { n_max: dist.n_max(), mass });
    }
    Ok(())
}

/// Rates `(A, C)` feeding [`birth_death_stationary`].
pub fn rates(p: &RabiParams, gp: &GainParams, n_max: usize, opts: &RateOptions) -> Result<(Vec<f64>, Vec<f64>)> {
    let c = gain_loss_with(p, gp, n_max, opts)?;
    Ok((c.birth(), c.loss))
}

pub fn steady_state_with(p: &RabiParams, gp: &GainParams, n_max: usize, opts: &RateOptions) -> Result<PhotonDistribution> {
    let (a, c) = rates(p, gp, n_max, opts)?;
    let dist = birth_death_stationary(&a, &c)?;
    check_tail(&dist)?;
    Ok(dist)
}

pub fn steady_state(p: &RabiParams, gp: &GainParams, n_max: usize) -> Result<PhotonDistribution> {
    steady_state_with(p, gp, n_max, &RateOptions::default())
}

/// `n_c + max(50, 10√n_c)`, or 64 when no critical number exists.
pub fn default_n_max(p: &RabiParams) -> usize {
    match spectrum::critical_photon_number(p) {
        Ok(nc) => nc + 50usize.max((10.0 * (nc as f64).sqrt()).ceil() as usize),
        Err(_) => 64,
    }
}

/// Steady state on a truncation that starts at [`default_n_max`] and doubles
/// until the tail test passes.
pub fn steady_state_auto(p: &RabiParams, gp: &GainParams, opts: &RateOptions) -> Result<PhotonDistribution> {
    grow(default_n_max(p), MAX_AUTO_N, |n| steady_state_with(p, gp, n, opts))
}

pub(crate) fn grow<F>(start: usize, cap: usize, mut solve: F) -> Result<PhotonDistribution>
where
    F: FnMut(usize) -> Result<PhotonDistribution>,
{
    let mut n = start.clamp(1, cap);
    loop {
        match solve(n) {
            Err(Error::TailMass { .. }) if n < cap => n = (2 * n).min(cap),
            other => return other,
        }
    }
}

/// Tolerances for [`transient`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-10, atol: 1e-14, max_steps: 10_000_000 }
    }
}

fn master_rhs(birth: &[f64], death: &[f64], rho: &[f64], out: &mut [f64]) {
    let n = rho.len();
    for k in 0..n {
        let mut d = 0.0;
        if k > 0 {
            d += birth[k - 1] * rho[k - 1] - death[k - 1] * rho[k];
        }
        if k + 1 < n {
            d += death[k] * rho[k + 1] - birth[k] * rho[k];
        }
        out[k] = d;
    }
}

/// Integrates the master equation from `rho0` to `t_final` with an adaptive
/// Dormand–Prince 5(4) scheme.
pub fn transient(
    rho0: &PhotonDistribution,
    p: &RabiParams,
    gp: &GainParams,
    t_final: f64,
    n_max: usize,
) -> Result<PhotonDistribution> {
    transient_with(rho0, p, gp, t_final, n_max, &RateOptions::default(), &OdeOptions::default())
}

pub fn transient_with(
    rho0: &PhotonDistribution,
    p: &RabiParams,
    gp: &GainParams,
    t_final: f64,
    n_max: usize,
    opts: &RateOptions,
    ode: &OdeOptions,
) -> Result<PhotonDistribution> {
    if !(t_final.is_finite() && t_final >= 0.0) {
        return Err(invalid("t_final", "must be finite and >= 0"));
    }
    let norm0: f64 = rho0.probs.iter().sum();
    if (norm0 - 1.0).abs() > 1e-12 {
        return Err(invalid("rho0", "initial distribution is not normalized"));
    }
    let (birth, death) = rates(p, gp, n_max, opts)?;
    let mut y = vec![0.0; n_max + 1];
    for (i, &v) in rho0.probs.iter().enumerate() {
        if i > n_max {
            if v > 0.0 {
                return Err(invalid("rho0", "support exceeds n_max"));
            }
        } else {
            y[i] = v;
        }
    }
    let f = |y: &[f64], out: &mut [f64]| master_rhs(&birth, &death, y, out);
    let y = dopri5(f, y, t_final, ode)?;
    PhotonDistribution::from_weights(y)
}

// Dormand–Prince tableau; the right-hand side is autonomous, so the nodes
// c_i never appear.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Autonomous probability flow; the state is clipped at zero and renormalized
/// after every accepted step, and drift beyond 1e-9 is an error.
fn dopri5<F>(f: F, mut y: Vec<f64>, t_final: f64, ode: &OdeOptions) -> Result<Vec<f64>>
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = y.len();
    if t_final == 0.0 {
        return Ok(y);
    }
    let mut k: Vec<Vec<f64>> = (0..7).map(|_| vec![0.0; n]).collect();
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    let mut t = 0.0;
    f(&y, &mut k[0]);
    let rate = k[0].iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut h = if rate > 0.0 { (1e-3 / rate).min(t_final) } else { t_final };
    let stage = |y: &[f64], k: &[Vec<f64>], coeffs: &[f64], h: f64, out: &mut [f64]| {
        for i in 0..y.len() {
            let mut acc = 0.0;
            for (j, c) in coeffs.iter().enumerate() {
                acc += c * k[j][i];
            }
            out[i] = y[i] + h * acc;
        }
    };
    let mut steps = 0usize;
    while t < t_final {
        if steps >= ode.max_steps {
            return Err(Error::StepSize { t });
        }
        steps += 1;
        h = h.min(t_final - t);
        stage(&y, &k, &[A21], h, &mut tmp);
        f(&tmp, &mut k[1]);
        stage(&y, &k, &[A31, A32], h, &mut tmp);
        f(&tmp, &mut k[2]);
        stage(&y, &k, &[A41, A42, A43], h, &mut tmp);
        f(&tmp, &mut k[3]);
        stage(&y, &k, &[A51, A52, A53, A54], h, &mut tmp);
        f(&tmp, &mut k[4]);
        stage(&y, &k, &[A61, A62, A63, A64, A65], h, &mut tmp);
        f(&tmp, &mut k[5]);
        stage(&y, &k, &[B1, 0.0, B3, B4, B5, B6], h, &mut y_new);
        f(&y_new, &mut k[6]);
        let mut err = 0.0_f64;
        for i in 0..n {
            let e = h * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i] + E7 * k[6][i]);
            let sc = ode.atol + ode.rtol * y[i].abs().max(y_new[i].abs());
            err = err.max((e / sc).abs());
        }
        if err <= 1.0 {
            t += h;
            let mut total = 0.0;
            for v in y_new.iter_mut() {
                if *v < 0.0 {
                    *v = 0.0;
                }
                total += *v;
            }
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::StepSize { t });
            }
            for (yi, &v) in y.iter_mut().zip(&y_new) {
                *yi = v / total;
            }
            // First-same-as-last: k7 of this step is k1 of the next.
            let last = k.pop().expect("seven stages");
            k.insert(0, last);
            f(&y, &mut k[0]);
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < 1e-14 * t.max(1.0) {
            return Err(Error::StepSize { t });
        }
    }
    Ok(y)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub r: f64,
    pub mean: f64,
    pub std_dev: f64,
    pub fano: f64,
    pub distribution: PhotonDistribution,
}

impl SweepPoint {
    pub fn from_distribution(r: f64, distribution: PhotonDistribution) -> Self {
        SweepPoint { r, mean: distribution.mean, std_dev: distribution.std_dev(), fano: distribution.fano, distribution }
    }
}

fn check_ascending(values: &[f64], name: &'static str) -> Result<()> {
    if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(invalid(name, "values must be finite and positive"));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid(name, "values must be strictly ascending"));
    }
    Ok(())
}

/// One steady state per pump rate, each on an automatically sized truncation.
pub fn pump_sweep(p: &RabiParams, gp: &GainParams, r_values: &[f64]) -> Result<Vec<SweepPoint>> {
    check_ascending(r_values, "r_values")?;
    r_values.iter().map(|&r| pump_point(p, gp, r)).collect()
}

/// A single entry of [`pump_sweep`].
pub fn pump_point(p: &RabiParams, gp: &GainParams, r: f64) -> Result<SweepPoint> {
    let gp = GainParams { r, ..*gp };
    Ok(SweepPoint::from_distribution(r, steady_state_auto(p, &gp, &RateOptions::default())?))
}

/// Pump rate maximizing `d log⟨n⟩ / d log r` (central differences).
pub fn s_curve_knee(points: &[SweepPoint]) -> Option<f64> {
    let mut best: Option<(f64, f64)> = None;
    for w in points.windows(3) {
        let (a, c) = (&w[0], &w[2]);
        if !(a.mean > 0.0 && c.mean > 0.0) {
            continue;
        }
        let slope = (c.mean.ln() - a.mean.ln()) / (c.r.ln() - a.r.ln());
        if best.is_none_or(|(s, _)| slope > s) {
            best = Some((slope, w[1].r));
        }
    }
    best.map(|(_, r)| r)
}

/// `r_th = κΓ²/(2ε²)`.
pub fn threshold_pump(gp: &GainParams) -> f64 {
    gp.kappa * gp.gamma * gp.gamma / (2.0 * gp.epsilon * gp.epsilon)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Thermal,
    CoherentLike,
    UniformCutoff,
    BimodalTunneling,
    FockLike,
    /// The truncation could not hold the distribution.
    Unresolved,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeThresholds {
    /// Local maxima below this fraction of the global maximum are ignored.
    pub peak_height: f64,
    /// Two maxima are distinct only if the valley between them falls below
    /// this fraction of the smaller one.
    pub valley_depth: f64,
    /// Largest max/min ratio over `[2, n_c − 5]` for a uniform state.
    pub flatness: f64,
    /// Largest `ρ_{n_c+5}/ρ_{n_c−5}` for a sharp cutoff.
    pub cutoff: f64,
    /// Fano factor below which a single-peaked state is Fock-like.
    pub fock_fano: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        RegimeThresholds { peak_height: 1e-3, valley_depth: 0.5, flatness: 10.0, cutoff: 1e-3, fock_fano: 0.5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimePoint {
    pub r: f64,
    pub gamma: f64,
    pub regime: Regime,
    pub mean: f64,
    pub fano: f64,
    pub modes: Vec<usize>,
    /// Max/min over `[2, n_c − 5]`, when defined.
    pub flatness: Option<f64>,
    /// `ρ_{n_c+5}/ρ_{n_c−5}`, when defined.
    pub cutoff: Option<f64>,
}

/// Local maxima of `dist` after merging those not separated by a real valley.
pub fn modes(dist: &PhotonDistribution, th: &RegimeThresholds) -> Vec<usize> {
    let p = &dist.probs;
    let mut merged: Vec<usize> = Vec::new();
    for j in dist.local_maxima(th.peak_height) {
        if let Some(&k) = merged.last() {
            let valley = p[k..=j].iter().copied().fold(f64::INFINITY, f64::min);
            if valley > th.valley_depth * p[k].min(p[j]) {
                if p[j] > p[k] {
                    *merged.last_mut().expect("non-empty") = j;
                }
                continue;
            }
        }
        merged.push(j);
    }
    merged
}

/// Shape tests in order: bimodal, uniform with cutoff, thermal (peak at 0),
/// Fock-like (Fano below threshold), otherwise coherent-like.
pub fn classify(dist: &PhotonDistribution, n_c: Option<usize>, th: &RegimeThresholds) -> (Regime, Vec<usize>, Option<f64>, Option<f64>) {
    let p = &dist.probs;
    let peaks = modes(dist, th);
    let (mut flat, mut cut) = (None, None);
    if let Some(nc) = n_c {
        if nc >= 8 && nc + 5 < p.len() {
            let seg = &p[2..=nc - 5];
            let hi = seg.iter().copied().fold(0.0, f64::max);
            let lo = seg.iter().copied().fold(f64::INFINITY, f64::min);
            flat = Some(if lo > 0.0 { hi / lo } else { f64::INFINITY });
            cut = Some(if p[nc - 5] > 0.0 { p[nc + 5] / p[nc - 5] } else { f64::INFINITY });
        }
    }
    let regime = if peaks.len() >= 2 {
        Regime::BimodalTunneling
    } else if matches!((flat, cut), (Some(f), Some(c)) if f < th.flatness && c < th.cutoff) {
        Regime::UniformCutoff
    } else if peaks.first() == Some(&0) {
        Regime::Thermal
    } else if dist.fano < th.fock_fano {
        Regime::FockLike
    } else {
        Regime::CoherentLike
    };
    (regime, peaks, flat, cut)
}

/// Classifies the steady state at every `(r, Γ)` pair.
pub fn regime_map(p: &RabiParams, gp: &GainParams, grid: &[(f64, f64)], th: &RegimeThresholds) -> Result<Vec<RegimePoint>> {
    let n_c = spectrum::critical_photon_number(p).ok();
    grid.iter().map(|&(r, gamma)| regime_point(p, gp, r, gamma, n_c, th)).collect()
}

/// A single entry of [`regime_map`].
pub fn regime_point(
    p: &RabiParams,
    gp: &GainParams,
    r: f64,
    gamma: f64,
    n_c: Option<usize>,
    th: &RegimeThresholds,
) -> Result<RegimePoint> {
    let gp = GainParams { r, gamma, ..*gp };
    let start = n_c.map_or(64, |nc| nc + 50usize.max((10.0 * (nc as f64).sqrt()).ceil() as usize));
    match grow(start, REGIME_MAX_N, |n| steady_state_with(p, &gp, n, &RateOptions::default())) {
        Ok(dist) => {
            let (regime, modes, flatness, cutoff) = classify(&dist, n_c, th);
            Ok(RegimePoint { r, gamma, regime, mean: dist.mean, fano: dist.fano, modes, flatness, cutoff })
        }
        Err(Error::TailMass { .. }) => Ok(RegimePoint {
            r,
            gamma,
            regime: Regime::Unresolved,
            mean: f64::NAN,
            fano: f64::NAN,
            modes: Vec::new(),
            flatness: None,
            cutoff: None,
        }),
        Err(e) => Err(e),
    }
}
